"""Numerical laboratory for cracktip asymptotics of Mumford-Shah minimisers."""

from __future__ import annotations

from .balance import FunctionalParams, balance_residual, energy, rescaled_balance_residual
from .blowup import (
    BlowupTrace,
    analyze_tip,
    check_limit_equations,
    classify_tip,
    decompose_parity,
    g_profile,
    rescale_field,
    sup_ladder,
    synthetic_pair,
)
from .crackgeom import CrackCurve, curvature, open_crack, polar_about_tip, sgn_gamma
from .errors import ConvergenceError, CracktipError, InvalidInput, InvariantViolation
from .exponents import ExponentRoot, characteristic_residual, exponent_table, find_exponent
from .fields import ExpansionField, eval_expansion, grad_principal_mode, one_sided_gradient
from .fitting import fit_crack_exponent, fit_tip_coefficient, muntz_fit
from .slit_solver import BoundaryData, solve_coupled_muntz, solve_dirichlet_straight

__version__ = "0.1.0"
