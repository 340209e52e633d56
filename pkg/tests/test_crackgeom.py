from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cracktip.crackgeom import (
    CrackCurve,
    arclength,
    crack_angle,
    crack_sup,
    curvature,
    frames,
    open_crack,
    opened_profile,
    opened_sup,
    polar_about_tip,
    read_crack_csv,
    rescale_crack,
    sgn_gamma,
    write_crack_csv,
)
from cracktip.errors import InvalidArgument, OnCrack, OutOfDomain
from cracktip.exponents import find_exponent

BETA1 = find_exponent(1).beta
PARABOLA = CrackCurve.power(1.0, 2.0)


def test_curvature_examples():
    assert abs(curvature(PARABOLA, 1e-8) - 2.0) < 1e-6
    assert curvature(CrackCurve.straight(), 0.3) == 0.0
    C, t = 0.1, 0.01
    crack = CrackCurve.power(C, BETA1)
    expected = C * BETA1 * (BETA1 - 1) * t ** (BETA1 - 2) / (1 + (C * BETA1 * t ** (BETA1 - 1)) ** 2) ** 1.5
    assert math.isclose(curvature(crack, t), expected, rel_tol=1e-13)
    # finite-difference oracle on f itself
    h = 1e-6
    f = lambda s: C * s ** BETA1
    d1 = (f(t + h) - f(t - h)) / (2 * h)
    d2 = (f(t + h) - 2 * f(t) + f(t - h)) / h ** 2
    assert math.isclose(curvature(crack, t), d2 / (1 + d1 * d1) ** 1.5, rel_tol=1e-3)


def test_curvature_domain():
    with pytest.raises(OutOfDomain):
        curvature(PARABOLA, 0.0)
    with pytest.raises(OutOfDomain):
        curvature(PARABOLA, 1.0)


def test_frames_examples():
    fr = frames(CrackCurve.straight(), 0.4)
    np.testing.assert_allclose(fr.tau, [-1.0, 0.0])
    np.testing.assert_allclose(fr.nu, [0.0, 1.0])
    fr = frames(PARABOLA, 0.5)  # f'(0.5) = 1
    np.testing.assert_allclose(fr.tau, np.array([-1.0, 1.0]) / math.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(fr.nu, np.array([1.0, 1.0]) / math.sqrt(2), atol=1e-15)


@given(st.floats(-3.0, 3.0), st.floats(1.05, 4.0), st.floats(1e-6, 0.99))
def test_frames_orthonormal(C, beta, t):
    fr = frames(CrackCurve.power(C, beta), t)
    assert abs(np.linalg.norm(fr.tau) - 1) < 1e-12
    assert abs(np.linalg.norm(fr.nu) - 1) < 1e-12
    assert abs(fr.tau @ fr.nu) < 1e-12


def test_sgn_gamma_examples():
    assert sgn_gamma(CrackCurve.straight(), 1.0, 0.5) == 1
    assert sgn_gamma(PARABOLA, -0.5, 0.3) == 1
    assert sgn_gamma(PARABOLA, -0.5, 0.2) == -1
    with pytest.raises(OnCrack):
        sgn_gamma(PARABOLA, -0.5, 0.25)
    with pytest.raises(OnCrack):
        sgn_gamma(PARABOLA, 0.3, 0.0)


@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95), st.floats(-1e-9, 1e-9), st.floats(-1e-9, 1e-9))
def test_sgn_gamma_locally_constant(x, y, dx, dy):
    height = PARABOLA.f(-x) if x < 0 else 0.0
    if abs(y - float(height)) < 1e-6 or abs(x) < 1e-6:
        return
    assert sgn_gamma(PARABOLA, x, y) == sgn_gamma(PARABOLA, x + dx, y + dy)


def test_polar_examples():
    s = CrackCurve.straight()
    assert polar_about_tip(s, 1.0, 0.0) == (1.0, 0.0)
    r, phi = polar_about_tip(s, 0.0, 1.0)
    assert r == 1.0 and math.isclose(phi, math.pi / 2)
    with pytest.raises(OnCrack):
        polar_about_tip(s, -0.5, 0.0)


def test_polar_path_tracing():
    # walk clockwise around the tip from just above the parabola to just
    # below it; the accumulated winding must match phi at every step
    r = 0.5
    top = float(crack_angle(PARABOLA, r)[0])
    eps = 1e-7
    angles = np.linspace(top - eps, top - 2 * math.pi + eps, 721)
    x, y = r * np.cos(angles), r * np.sin(angles)
    _, phi = polar_about_tip(PARABOLA, x, y)
    theta = np.arctan2(y, x)
    traced = phi[0] + np.concatenate([[0.0], np.cumsum(np.angle(np.exp(1j * np.diff(theta))))])
    np.testing.assert_allclose(phi, traced, atol=1e-12)
    assert phi[0] < top and abs(phi[0] - top) < 1e-6
    assert math.isclose(phi[0] - phi[-1], 2 * math.pi, abs_tol=1e-6)


def test_open_crack_examples():
    s = CrackCurve.straight()
    assert open_crack(s, 1.0, 0.0) == (1.0, 0.0)
    X, Y = open_crack(s, 0.0, 1.0)
    assert math.isclose(X, 1 / math.sqrt(2)) and math.isclose(Y, 1 / math.sqrt(2))
    X, Y = open_crack(s, -1.0, 2e-14)
    assert abs(X) < 1e-13 and math.isclose(Y, 1.0)


def test_opening_squares_back(rng):
    crack = CrackCurve.power(0.3, BETA1)
    r = np.sqrt(rng.uniform(0, 1, 1000))
    th = rng.uniform(-math.pi, math.pi, 1000)
    x, y = r * np.cos(th), r * np.sin(th)
    X, Y = open_crack(crack, x, y)
    z = (X + 1j * Y) ** 2
    assert np.max(np.abs(z - (x + 1j * y))) <= 1e-12


def test_opened_profile():
    F, tau = opened_profile(CrackCurve.straight(), 0.25)
    assert F == 0.0 and math.isclose(tau, 0.5)
    t = 0.1
    F, tau = opened_profile(PARABOLA, t)
    f = t * t
    rr = math.hypot(t, f)
    assert math.isclose(F, math.sqrt(rr - t) / math.sqrt(2), rel_tol=1e-9)
    assert math.isclose(tau, math.sqrt(rr + t) / math.sqrt(2), rel_tol=1e-14)
    assert math.isclose(F * F + tau * tau, rr, rel_tol=1e-14)
    # the two sides of a crack point open onto w and -w
    # (above: (F, tau); below: (-F, -tau))
    X, Y = open_crack(PARABOLA, -t, f + 1e-12)
    assert math.isclose(X, F, abs_tol=1e-9) and math.isclose(Y, tau, abs_tol=1e-9)
    X, Y = open_crack(PARABOLA, -t, f - 1e-12)
    assert math.isclose(X, -F, abs_tol=1e-9) and math.isclose(Y, -tau, abs_tol=1e-9)


@pytest.mark.parametrize("C, rho", [(0.01, 0.1), (0.1, 0.03), (0.1, 0.01), (1.0, 0.01), (-0.5, 0.01)])
def test_opened_sup_half_of_sigma(C, rho):
    crack = CrackCurve.power(C, BETA1)
    s2 = crack_sup(crack, rho * rho)
    assert s2 <= 1e-3
    assert 0.49 <= opened_sup(crack, rho) / s2 <= 0.51


def test_rescale_examples():
    scaled = rescale_crack(PARABOLA, 0.1)
    assert math.isclose(float(scaled.f(0.7)), 0.1 * 0.49, rel_tol=1e-14)
    assert rescale_crack(PARABOLA, 1.0) is PARABOLA
    C, rho = -0.4, 0.05
    crack = CrackCurve.power(C, BETA1)
    t = np.linspace(0, 1, 10_001)
    grid_sup = np.max(np.abs(rescale_crack(crack, rho).f(t)))
    assert math.isclose(grid_sup, abs(C) * rho ** (BETA1 - 1), rel_tol=1e-12)
    with pytest.raises(InvalidArgument):
        rescale_crack(crack, 0.0)
    with pytest.raises(InvalidArgument):
        rescale_crack(crack, 1.5)


def test_crack_sup():
    crack = CrackCurve.power(1.0, BETA1)
    for rho in (0.5, 0.1, 0.01):
        t = np.linspace(0, rho, 10_001)
        assert math.isclose(crack_sup(crack, rho), np.max(np.abs(crack.f(t))) / rho, rel_tol=1e-10)
    assert crack_sup(CrackCurve.straight(), 0.3) == 0.0
    rhos = np.geomspace(1e-3, 1, 20)
    sig = [crack_sup(crack, r) for r in rhos]
    assert all(a <= b for a, b in zip(sig, sig[1:]))
    # sampled curve goes through the grid-and-polish path
    t = np.linspace(0, 1, 200)
    sampled = CrackCurve.sampled(t, 0.2 * t ** 2.5)
    assert math.isclose(crack_sup(sampled, 0.5), 0.2 * 0.5 ** 1.5, rel_tol=1e-6)


def test_sampled_spline_and_csv(tmp_path):
    t = np.linspace(0, 0.9, 60)
    f = 0.05 * t ** 2
    path = tmp_path / "crack.csv"
    write_crack_csv(path, t, f)
    crack = read_crack_csv(path)
    assert crack.kind == "sampled"
    assert abs(float(crack.f(0.0))) < 1e-8 and abs(float(crack.df(0.0))) < 1e-8
    assert math.isclose(float(crack.f(0.5)), 0.05 * 0.25, rel_tol=1e-6)
    assert crack.t_nodes == tuple(float(v) for v in t)
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n0,0\n")
    with pytest.raises(InvalidArgument):
        read_crack_csv(bad)


def test_sampled_validation():
    with pytest.raises(InvalidArgument):
        CrackCurve.sampled([0.1, 0.2], [0, 0])
    with pytest.raises(InvalidArgument):
        CrackCurve.sampled([0.0, 0.2, 0.2, 0.5], [0, 0, 0, 0])
    with pytest.raises(InvalidArgument):
        CrackCurve.power(1.0, 1.0)


def test_arclength():
    assert arclength(CrackCurve.straight()) == 1.0
    # y = t^2 on [0, 1]: (2 sqrt5 + asinh 2) / 4
    assert math.isclose(arclength(PARABOLA), (2 * math.sqrt(5) + math.asinh(2)) / 4, rel_tol=1e-10)


def test_crack_angle_both_sides():
    up = float(crack_angle(CrackCurve.power(0.5, 2.0), 0.5)[0])
    down = float(crack_angle(CrackCurve.power(-0.5, 2.0), 0.5)[0])
    assert math.pi / 2 < up < math.pi < down < 1.5 * math.pi
    assert math.isclose(up + down, 2 * math.pi, rel_tol=1e-12)
