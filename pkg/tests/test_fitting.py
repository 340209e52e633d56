from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cracktip.blowup import circle_samples
from cracktip.errors import (
    DegenerateRange,
    IllConditioned,
    InsufficientSamples,
    InvalidArgument,
    ResidualTooLarge,
    SignChange,
)
from cracktip.exponents import find_exponent
from cracktip.fields import ExpansionField
from cracktip.fitting import (
    fit_circle_modes,
    fit_crack_exponent,
    fit_tip_coefficient,
    lstsq_scaled,
    muntz_fit,
)
from cracktip.slit_solver import muntz_grid

A1, A2, A3 = (find_exponent(k).alpha for k in (1, 2, 3))
B1 = A1 + 0.5
R = muntz_grid()


def samples(fn):
    return list(zip(R, fn(R)))


def test_muntz_single():
    fit = muntz_fit(samples(lambda r: 2 * r ** A1), [A1])
    assert math.isclose(fit.coeffs[0], 2.0, rel_tol=1e-12)
    assert fit.residual_sup <= 1e-10


def test_muntz_two_modes():
    fit = muntz_fit(samples(lambda r: 2 * r ** A1 + 0.5 * r ** A2), [A1, A2])
    np.testing.assert_allclose(fit.coeffs, [2.0, 0.5], atol=1e-8)


def test_muntz_noise(rng):
    noise = rng.uniform(-1e-6, 1e-6, R.size)
    data = list(zip(R, 2 * R ** A1 + 0.5 * R ** A2 + noise))
    fit = muntz_fit(data, [A1, A2])
    np.testing.assert_allclose(fit.coeffs, [2.0, 0.5], atol=1e-4)


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_muntz_round_trip(coeffs):
    exps = [A1, A2, A3]
    fit = muntz_fit(samples(lambda r: sum(c * r ** e for c, e in zip(coeffs, exps))), exps)
    np.testing.assert_allclose(fit.coeffs, coeffs, atol=1e-8)


def test_muntz_constant_and_errors():
    fit = muntz_fit(samples(lambda r: 0.7 + r ** A1), [A1], include_constant=True)
    assert math.isclose(fit.constant, 0.7, rel_tol=1e-10)
    with pytest.raises(InsufficientSamples):
        muntz_fit([(0.5, 1.0)], [A1])
    with pytest.raises(InvalidArgument):
        muntz_fit(samples(lambda r: r), [])
    # nearly identical exponents collapse onto one direction
    with pytest.raises(IllConditioned):
        muntz_fit(samples(lambda r: r ** A1), [A1, A1 + 1e-15], allow_truncation=False)


def test_lstsq_reports_truncation():
    mat = np.column_stack([np.ones(10), np.ones(10)])
    _, cond, dropped = lstsq_scaled(mat, np.ones(10))
    assert dropped == 1 and cond > 1e13


def test_crack_exponent_examples():
    t = np.geomspace(1e-4, 1e-1, 31)
    fit = fit_crack_exponent(np.column_stack([t, t ** 1.7739]))
    assert abs(fit.beta - B1) <= 0.01 * B1
    fit = fit_crack_exponent(np.column_stack([t, t ** 2]))
    assert abs(fit.beta - 2.0) <= 1e-10
    beta, C_f, half = fit_crack_exponent(np.column_stack([t, -3 * t ** 2]))
    assert math.isclose(C_f, -3.0, rel_tol=1e-10) and half >= 0


def test_crack_exponent_bias_shrinks():
    def bias(t_max):
        t = np.geomspace(t_max / 1000, t_max, 31)
        return fit_crack_exponent(np.column_stack([t, t ** 1.7739 * (1 + 0.2 * np.sqrt(t))])).beta - 1.7739

    coarse, fine = bias(1e-1), bias(2.5e-2)
    assert coarse > fine > 0


@given(st.floats(1e-3, 1e3))
def test_crack_exponent_scale_equivariant(s):
    t = np.geomspace(1e-4, 1e-1, 20)
    f = t ** B1 * (1 + 0.3 * t)
    a = fit_crack_exponent(np.column_stack([t, f]))
    b = fit_crack_exponent(np.column_stack([t, s * f]))
    assert abs(a.beta - b.beta) <= 1e-12
    assert math.isclose(b.C_f, s * a.C_f, rel_tol=1e-12)


def test_crack_exponent_errors():
    t = np.geomspace(1e-2, 1e-1, 10)
    with pytest.raises(DegenerateRange):
        fit_crack_exponent(np.column_stack([t, t ** 2]))
    t = np.geomspace(1e-4, 1e-1, 10)
    with pytest.raises(SignChange):
        fit_crack_exponent(np.column_stack([t, np.sin(100 * t)]))
    with pytest.raises(DegenerateRange):
        fit_crack_exponent([(0.1, 1.0), (0.2, 2.0)])


def _circle(u, r0):
    return circle_samples(u, u.crack, r0)


def test_tip_coefficient_exact():
    u = ExpansionField.build(1.0, 1, C=0.1)
    phi, vals = _circle(u, 0.05)
    C = fit_tip_coefficient(phi, vals, 0.05, 1.0, 1, A1, sine_coeffs=())
    assert abs(C - 0.1) <= 1e-3
    # joint fit without known companions
    assert abs(fit_tip_coefficient(phi, vals, 0.05, 1.0, 1, A1) - 0.1) <= 1e-3


def test_tip_coefficient_zero():
    u = ExpansionField.build(1.0, 1, C=0.0)
    phi, vals = _circle(u, 0.05)
    assert abs(fit_tip_coefficient(phi, vals, 0.05, 1.0, 1, A1, sine_coeffs=())) <= 1e-8


def test_tip_coefficient_linear():
    est = []
    for C in (0.05, 0.1, 0.2):
        u = ExpansionField.build(1.0, 1, C=C, remainder=((0.1 * C, B1),))
        phi, vals = _circle(u, 0.05)
        est.append(fit_tip_coefficient(phi, vals, 0.05, 1.0, 1, A1, ()))
    assert abs(est[1] / est[0] - 2) <= 0.02 and abs(est[2] / est[0] - 4) <= 0.04


def test_tip_coefficient_bias_decreases_with_radius():
    u = ExpansionField.build(1.0, 1, C=0.1, remainder=((0.01, B1),))
    errs = []
    for r0 in (0.05, 0.025):
        phi, vals = _circle(u, r0)
        errs.append(abs(fit_tip_coefficient(phi, vals, r0, 1.0, 1, A1, ()) - 0.1))
    assert errs[1] < errs[0]
    # leading bias scales like sqrt(r0)
    assert math.isclose(errs[0] / errs[1], math.sqrt(2), rel_tol=1e-6)


def test_tip_coefficient_with_sines_level2():
    u = ExpansionField.build(1.0, 2, C=0.05, sine_coeffs=(0.2,))
    phi, vals = _circle(u, 0.05)
    assert abs(fit_tip_coefficient(phi, vals, 0.05, 1.0, 2, A2, (0.2,)) - 0.05) <= 1e-10
    fit = fit_circle_modes(phi, vals, 0.05, 1.0, 2, A2)
    assert abs(fit.C - 0.05) < 1e-8 and abs(fit.sine_coeffs[0] - 0.2) < 1e-8


def test_wrong_level_is_flagged():
    # a level-2 field read at level 1 leaves the r^{3/2} sine unexplained
    u = ExpansionField.build(1.0, 2, C=0.05, sine_coeffs=(0.2,))
    phi, vals = _circle(u, 0.05)
    with pytest.raises(ResidualTooLarge):
        fit_tip_coefficient(phi, vals, 0.05, 1.0, 1, A1, ())


def test_tip_input_validation():
    phi = np.linspace(-3, 3, 10)
    with pytest.raises(InsufficientSamples):
        fit_tip_coefficient(phi, phi, 0.05, 1.0, 1, A1)
    phi = np.linspace(-3, 3, 40)
    with pytest.raises(InvalidArgument):
        fit_tip_coefficient(phi, phi, 0.5, 1.0, 1, A1)


def test_report_shape():
    t = np.geomspace(1e-4, 1e-1, 10)
    d = fit_crack_exponent(np.column_stack([t, t ** 2])).to_dict()
    assert set(d) == {"exponents", "coeffs", "residual_sup", "halfwidth"}
    d = muntz_fit(samples(lambda r: r ** A1), [A1]).to_dict()
    assert set(d) == {"exponents", "coeffs", "residual_sup", "halfwidth"}
