"""Inverse problems: Muntz expansions, crack exponents, tip coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import (
    DegenerateRange,
    IllConditioned,
    InsufficientSamples,
    InvalidArgument,
    ResidualTooLarge,
    SignChange,
)
from .exponents import mode_constants, mode_sign

TRUNCATION_RTOL = 1e-13
RESIDUAL_RATIO_LIMIT = 0.25


def lstsq_scaled(mat: np.ndarray, rhs: np.ndarray, rtol: float = TRUNCATION_RTOL):
    """Least squares with unit-norm columns and SVD truncation.

    Returns ``(coeffs, cond, n_truncated)``; ``cond`` is the condition number
    of the column-scaled matrix before truncation.
    """
    mat = np.asarray(mat, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    norms = np.linalg.norm(mat, axis=0)
    norms[norms == 0.0] = 1.0
    scaled = mat / norms
    u, s, vt = np.linalg.svd(scaled, full_matrices=False)
    keep = s > rtol * s[0]
    cond = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    inv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    x = vt.T @ (inv * (u.T @ rhs))
    return x / norms, cond, int(np.count_nonzero(~keep))


@dataclass(frozen=True)
class MuntzFit:
    exponents: tuple[float, ...]
    coeffs: tuple[float, ...]
    window: tuple[float, float]
    residual_sup: float
    truncated_modes: int
    constant: float = 0.0
    halfwidth: float = float("nan")

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.full(r.shape, self.constant)
        for c, e in zip(self.coeffs, self.exponents):
            out = out + c * np.power(r, e)
        return out

    def to_dict(self) -> dict:
        return {"exponents": list(self.exponents), "coeffs": list(self.coeffs),
                "residual_sup": self.residual_sup, "halfwidth": self.halfwidth}


def muntz_fit(samples: Sequence[tuple[float, float]], exponents: Sequence[float],
              include_constant: bool = False, allow_truncation: bool = True) -> MuntzFit:
    """Fit ``sum c_j r^{e_j}`` (plus an optional constant) to ``(r, value)`` samples."""
    data = np.asarray(samples, dtype=float).reshape(-1, 2)
    r, vals = data[:, 0], data[:, 1]
    exps = [float(e) for e in exponents]
    n_cols = len(exps) + int(include_constant)
    if n_cols == 0:
        raise InvalidArgument("no exponents given")
    if r.size < 2 * n_cols:
        raise InsufficientSamples(f"need >= {2 * n_cols} samples, got {r.size}")
    if np.any(r <= 0.0) or np.any(r > 1.0):
        raise InvalidArgument("sample radii must lie in (0, 1]")
    cols = [np.power(r, e) for e in exps]
    if include_constant:
        cols.append(np.ones_like(r))
    mat = np.column_stack(cols)
    coeffs, _, truncated = lstsq_scaled(mat, vals)
    if truncated and not allow_truncation:
        raise IllConditioned(f"{truncated} Muntz directions below the {TRUNCATION_RTOL:.0e} cut")
    if truncated == n_cols:
        raise IllConditioned("every Muntz direction was truncated")
    resid = float(np.max(np.abs(mat @ coeffs - vals)))
    const = float(coeffs[-1]) if include_constant else 0.0
    main = coeffs[:-1] if include_constant else coeffs
    return MuntzFit(tuple(exps), tuple(float(c) for c in main),
                    (float(r.min()), float(r.max())), resid, truncated, const)


@dataclass(frozen=True)
class ExponentFit:
    beta: float
    C_f: float
    halfwidth: float

    def __iter__(self):
        return iter((self.beta, self.C_f, self.halfwidth))

    def to_dict(self) -> dict:
        return {"exponents": [self.beta], "coeffs": [self.C_f], "residual_sup": None,
                "halfwidth": self.halfwidth}


def fit_crack_exponent(f_samples: Sequence[tuple[float, float]]) -> ExponentFit:
    """Log-log regression ``log|f| = log|C_f| + beta log t``.

    ``halfwidth`` is twice the standard error of the slope.
    """
    data = np.asarray(f_samples, dtype=float).reshape(-1, 2)
    t, f = data[:, 0], data[:, 1]
    if t.size < 3:
        raise DegenerateRange("need at least 3 samples")
    if np.any(t <= 0.0):
        raise DegenerateRange("t values must be positive")
    if t.max() / t.min() < 16.0:
        raise DegenerateRange(f"t range ratio {t.max() / t.min():.3g} is below 16")
    if np.any(f == 0.0) or not (np.all(f > 0.0) or np.all(f < 0.0)):
        raise SignChange("f changes sign (or vanishes) on the sampled range")
    reg = stats.linregress(np.log(t), np.log(np.abs(f)))
    sign = 1.0 if f[0] > 0 else -1.0
    return ExponentFit(float(reg.slope), sign * math.exp(reg.intercept), 2.0 * float(reg.stderr))


@dataclass(frozen=True)
class CircleFit:
    C: float
    principal: float
    sine_coeffs: tuple[float, ...]
    tip_amplitude: float
    remainder_ratio: float


def _tip_design(phi, r0, lam, k, alpha, sine_coeffs):
    cols, names = [], []
    if sine_coeffs is None:
        cols.append(math.sqrt(r0) * np.sin(0.5 * phi))
        names.append("principal")
        for j in range(1, k):
            a = (2 * j + 1) / 2.0
            cols.append(r0 ** a * np.sin(a * phi))
            names.append(f"sine{j}")
    cols.append(np.cos(alpha * phi))
    names.append("tip")
    return np.column_stack(cols), names


def fit_circle_modes(phi, values, r0: float, lam: float, k: int, alpha: float,
                     sine_coeffs: Sequence[float] | None = None,
                     check_residual: bool = True) -> CircleFit:
    """Tip coefficient from samples ``u(r0, phi)``, with the fitted companions."""
    phi = np.asarray(phi, dtype=float)
    vals = np.asarray(values, dtype=float)
    if phi.shape != vals.shape or phi.ndim != 1:
        raise InvalidArgument("phi and values must be matching 1-d arrays")
    if phi.size < 32:
        raise InsufficientSamples(f"need >= 32 angles, got {phi.size}")
    if not 0.0 < r0 <= 0.1:
        raise InvalidArgument(f"r0 must lie in (0, 0.1], got {r0}")
    if not lam > 0.0:
        raise InvalidArgument("lambda must be positive")
    _, b_mag = mode_constants(alpha)
    b = mode_sign(alpha) * b_mag
    rem = vals.copy()
    if sine_coeffs is not None:
        if len(sine_coeffs) > k - 1:
            raise InvalidArgument(f"at most {k - 1} sine coefficients at level {k}")
        rem = rem - lam * math.sqrt(r0) * np.sin(0.5 * phi)
        for j, c in enumerate(sine_coeffs, start=1):
            a = (2 * j + 1) / 2.0
            rem = rem - c * r0 ** a * np.sin(a * phi)
        mode = np.cos(alpha * phi)
        amp = float(rem @ mode) / float(mode @ mode)
        principal = lam
        sines = tuple(float(c) for c in sine_coeffs)
        resid = rem - amp * mode
    else:
        mat, names = _tip_design(phi, r0, lam, k, alpha, None)
        coeffs, _, _ = lstsq_scaled(mat, rem)
        amp = float(coeffs[-1])
        principal = float(coeffs[0])
        sines = tuple(float(c) for c in coeffs[1:-1])
        mode = mat[:, -1]
        resid = rem - mat @ coeffs
    projected = float(np.linalg.norm(amp * mode))
    excess = float(np.linalg.norm(resid))
    floor = 1e-12 * max(float(np.linalg.norm(vals)), 1e-300)
    ratio = excess / projected if projected > 0 else (0.0 if excess <= floor else math.inf)
    if check_residual and excess > floor and excess > RESIDUAL_RATIO_LIMIT * projected:
        raise ResidualTooLarge(
            f"remainder {excess:.3e} exceeds {RESIDUAL_RATIO_LIMIT:.0%} of the projected part "
            f"{projected:.3e}; the expansion level k={k} looks wrong"
        )
    C = amp / (lam * b * r0 ** alpha)
    return CircleFit(C=C, principal=principal, sine_coeffs=sines, tip_amplitude=amp,
                     remainder_ratio=ratio)


def fit_tip_coefficient(phi, values, r0: float, lam: float, k: int, alpha: float,
                        sine_coeffs: Sequence[float] | None = None) -> float:
    """``C`` from the projection of ``u(r0, .)`` on ``cos(alpha phi)``.

    With ``sine_coeffs`` given, the principal mode and ``Sigma_k`` are
    subtracted first; otherwise they are fitted jointly with the tip mode.
    """
    return fit_circle_modes(phi, values, r0, lam, k, alpha, sine_coeffs).C
