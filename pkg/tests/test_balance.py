from __future__ import annotations

import math

import numpy as np
import pytest

from cracktip.balance import (
    FunctionalParams,
    balance_residual,
    balance_sweep,
    energy,
    gradient_jump,
    rescaled_balance_residual,
)
from cracktip.blowup import synthetic_pair
from cracktip.crackgeom import CrackCurve
from cracktip.errors import InvalidArgument, QuadratureFailure
from cracktip.exponents import find_exponent
from cracktip.fields import ExpansionField
from cracktip.slit_solver import HALF_SINE, HarmonicSolution, Mode, SlitBasis

STRAIGHT = CrackCurve.straight()
P1 = FunctionalParams(1.0)
ALPHA1 = find_exponent(1).alpha


def test_params_validation():
    with pytest.raises(InvalidArgument):
        FunctionalParams(0.0)
    with pytest.raises(InvalidArgument):
        FunctionalParams(float("inf"))


def test_pure_mode_energy():
    e = energy(ExpansionField.build(1.0, 1), STRAIGHT, P1)
    assert math.isclose(e.dirichlet, math.pi / 2, rel_tol=1e-6)
    assert math.isclose(e.length_term, math.sqrt(math.pi / 2), rel_tol=1e-12)
    assert math.isclose(e.total, math.pi / 2 + math.sqrt(math.pi / 2), rel_tol=1e-6)


def test_energy_homogeneity():
    u = ExpansionField.build(1.0, 2, C=0.1, sine_coeffs=(0.3,))
    d1 = energy(u, STRAIGHT, P1).dirichlet
    d2 = energy(u.scaled(1.7), STRAIGHT, P1).dirichlet
    assert math.isclose(d2, 1.7 ** 2 * d1, rel_tol=1e-9)


def test_energy_curved_crack_differs():
    u = ExpansionField.build(1.0, 1)
    bent = CrackCurve.power(0.05, 2.0)
    e0 = energy(u, STRAIGHT, P1)
    e1 = energy(u.with_crack(bent), bent, P1)
    assert all(math.isfinite(v) for v in (*e0, *e1))
    assert e0.total != e1.total
    assert e1.length_term > e0.length_term


def test_orthogonal_modes_add():
    # r^{3/2} sin(3 phi / 2) has density (9/4) r, so its Dirichlet part is 3 pi / 2
    higher = HarmonicSolution(SlitBasis((Mode(HALF_SINE, 1),)), np.array([1.0]), 0.0)
    both = HarmonicSolution(SlitBasis((Mode(HALF_SINE, 0), Mode(HALF_SINE, 1))),
                            np.array([1.0, 1.0]), 0.0)
    d_hi = energy(higher, STRAIGHT, P1).dirichlet
    d_both = energy(both, STRAIGHT, P1).dirichlet
    assert math.isclose(d_hi, 1.5 * math.pi, rel_tol=1e-9)
    assert math.isclose(d_both, math.pi / 2 + d_hi, rel_tol=1e-6)


def test_quadrature_failure_is_reported():
    class Rough:
        principal_coeff = 0.0

        def gradient(self, x, y, crack=None):
            # oscillation far beyond the angular resolution
            g = np.cos(4000.0 * np.asarray(y))
            return np.stack([g, np.zeros_like(g)], axis=-1)

    with pytest.raises(QuadratureFailure):
        energy(Rough(), STRAIGHT, P1)


def test_pure_mode_balance():
    u = ExpansionField.build(1.0, 1)
    for t in np.arange(1, 10) / 10:
        assert gradient_jump(u, STRAIGHT, t) == pytest.approx(0.0, abs=1e-10)
        assert abs(balance_residual(u, STRAIGHT, P1, t)) <= 1e-10


def test_odd_perturbation_has_no_jump():
    u = ExpansionField.build(1.0, 3, sine_coeffs=(0.4, -0.2))
    for t in (0.1, 0.5):
        assert abs(gradient_jump(u, STRAIGHT, t)) <= 1e-8


def test_jump_antisymmetric_in_C():
    for t in (0.1, 0.3):
        a = gradient_jump(ExpansionField.build(1.0, 1, C=0.1), STRAIGHT, t)
        b = gradient_jump(ExpansionField.build(1.0, 1, C=-0.1), STRAIGHT, t)
        assert abs(a + b) <= 1e-8 and abs(a) > 1e-3


def test_reflection_antisymmetry():
    up_u, up_c = synthetic_pair(1, 0.1, 1.3)
    dn_u, dn_c = synthetic_pair(1, -0.1, 1.3)
    p = FunctionalParams(1.3)
    for t in (0.05, 0.2, 0.6):
        a = balance_residual(up_u, up_c, p, t)
        b = balance_residual(dn_u, dn_c, p, t)
        assert abs(a + b) <= 1e-8


def _normalized(u, crack, p, alpha):
    return [t ** (1.5 - alpha) * abs(balance_residual(u, crack, p, t)) for t in (0.2, 0.1, 0.05)]


def test_synthetic_pair_balances_at_leading_order():
    u, crack = synthetic_pair(1, 0.1, 1.0)
    n = _normalized(u, crack, P1, ALPHA1)
    assert n[0] > n[1] > n[2]


def test_mismatched_exponent_does_not_balance():
    u, _ = synthetic_pair(1, 0.1, 1.0)
    wrong = CrackCurve.power(0.1, ALPHA1 + 0.5 - 0.3)
    n = _normalized(u.with_crack(wrong), wrong, P1, ALPHA1)
    assert not n[0] > n[1] > n[2]


def test_rescaled_identity():
    u, crack = synthetic_pair(1, 0.1, 1.0, o_term=0.01)
    for rho in (1.0, 0.5, 0.1):
        for t in (0.2, 0.7):
            direct = rho ** 2 * balance_residual(u, crack, P1, rho * t)
            assert math.isclose(rescaled_balance_residual(u, crack, P1, rho, t), direct, rel_tol=1e-6)
    assert rescaled_balance_residual(u, crack, P1, 1.0, 0.4) == balance_residual(u, crack, P1, 0.4)
    pure = ExpansionField.build(1.0, 1)
    assert abs(rescaled_balance_residual(pure, STRAIGHT, P1, 0.05, 0.5)) <= 1e-10
    with pytest.raises(InvalidArgument):
        rescaled_balance_residual(u, crack, P1, 0.0, 0.5)
    with pytest.raises(InvalidArgument):
        rescaled_balance_residual(u, crack, P1, 0.5, 1.0)


def test_sweep_rows():
    u, crack = synthetic_pair(1, 0.1, 1.0)
    rows = balance_sweep(u, crack, P1, [0.1, 0.5])
    assert [r.t for r in rows] == [0.1, 0.5]
    for r in rows:
        assert math.isclose(r.residual, P1.lam ** 2 * r.curvature - math.sqrt(math.pi / 2) * r.jump)
