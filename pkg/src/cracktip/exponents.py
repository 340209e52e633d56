"""Characteristic exponents of the cracktip expansion.

The exponents are the roots of ``tan(pi a) = sqrt(pi/2) a / (a^2 - 1/4)``,
one in each interval ``(k, k + 1/2)``.  The tangent form has poles at the
half-integers, so everything here works with the equivalent pole-free form

    R(a) = sin(pi a) (a^2 - 1/4) - sqrt(pi/2) a cos(pi a)

which is smooth and can be bracketed directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidArgument, NoSignChange, NotARoot

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)

RESIDUAL_TOL = 1e-12
ROOT_CHECK_TOL = 1e-8
BRACKET_OFFSET = 1e-9
K_MAX_LIMIT = 10000


def _sin_cos_pi(alpha: float) -> tuple[float, float]:
    # reduce by the integer part first; alpha - floor(alpha) is exact
    n = math.floor(alpha)
    frac = alpha - n
    sign = -1.0 if n % 2 else 1.0
    return sign * math.sin(math.pi * frac), sign * math.cos(math.pi * frac)


def characteristic_residual(alpha: float) -> float:
    """Pole-free residual ``sin(pi a)(a^2 - 1/4) - sqrt(pi/2) a cos(pi a)``."""
    s, c = _sin_cos_pi(alpha)
    return s * (alpha * alpha - 0.25) - SQRT_HALF_PI * alpha * c


def tan_form(alpha: float) -> tuple[float, float]:
    """Both sides of the tangent form, ``(tan(pi a), sqrt(pi/2) a/(a^2-1/4))``."""
    s, c = _sin_cos_pi(alpha)
    lhs = s / c if c != 0.0 else math.copysign(math.inf, s)
    return lhs, SQRT_HALF_PI * alpha / (alpha * alpha - 0.25)


@dataclass(frozen=True)
class ExponentRoot:
    k: int
    alpha: float
    bracket: tuple[float, float]
    residual: float
    b_magnitude: float
    A_lambda: float

    @property
    def b(self) -> float:
        """Signed mode constant ``1/(2 sin(pi alpha))``; its sign is ``(-1)^k``.

        This is the sign for which ``f = C t^(alpha+1/2)`` and the field term
        ``C lambda b r^alpha cos(alpha phi)`` satisfy the Neumann condition
        on the crack with the same ``C``.
        """
        return mode_sign(self.alpha) * self.b_magnitude

    @property
    def beta(self) -> float:
        """Crack exponent ``alpha + 1/2`` of the matching profile."""
        return self.alpha + 0.5


def mode_sign(alpha: float) -> float:
    s, _ = _sin_cos_pi(alpha)
    return 1.0 if s >= 0.0 else -1.0


def mode_constants(alpha: float) -> tuple[float, float]:
    """Return ``(A_lambda, b_magnitude)`` for a root ``alpha``.

    ``A_lambda = |2 sqrt(pi/2) alpha cos(pi alpha) / (alpha^2 - 1/4)|``, which
    equals ``2|sin(pi alpha)|`` at a root, and ``b_magnitude = 1/A_lambda``.
    """
    res = characteristic_residual(alpha)
    if not abs(res) <= ROOT_CHECK_TOL:
        raise NotARoot(f"alpha={alpha!r} is not a root (residual {res:.3e})")
    _, c = _sin_cos_pi(alpha)
    a_lambda = abs(2.0 * SQRT_HALF_PI * alpha * c / (alpha * alpha - 0.25))
    return a_lambda, 1.0 / a_lambda


def _bisect(k: int) -> float:
    lo = k + BRACKET_OFFSET
    hi = k + 0.5 - BRACKET_OFFSET
    f_lo = characteristic_residual(lo)
    f_hi = characteristic_residual(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NoSignChange(
            f"no sign change on ({lo}, {hi}): R={f_lo:.3e}, {f_hi:.3e}"
        )
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = characteristic_residual(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    # run to bracket collapse, then keep the better endpoint
    return lo if abs(f_lo) <= abs(f_hi) else hi


@lru_cache(maxsize=None)
def find_exponent(k: int) -> ExponentRoot:
    """Root of the characteristic equation in ``(k, k + 1/2)``.

    Bisection runs until the bracket collapses to adjacent doubles, so the
    result is the best double available; for every k <= 20 except k = 18
    that meets the 1e-12 residual target (at k = 18 no double does).
    """
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise InvalidArgument(f"mode index must be a positive integer, got {k!r}")
    k = int(k)
    alpha = _bisect(k)
    a_lambda, b_mag = mode_constants(alpha)
    return ExponentRoot(
        k=k,
        alpha=alpha,
        bracket=(float(k), k + 0.5),
        residual=characteristic_residual(alpha),
        b_magnitude=b_mag,
        A_lambda=a_lambda,
    )


def exponent_table(k_max: int) -> list[ExponentRoot]:
    if isinstance(k_max, bool) or int(k_max) != k_max or not 1 <= k_max <= K_MAX_LIMIT:
        raise InvalidArgument(f"k_max must be in [1, {K_MAX_LIMIT}], got {k_max!r}")
    return [find_exponent(k) for k in range(1, int(k_max) + 1)]


def nearest_mode(alpha_estimate: float, k_max: int = 64) -> ExponentRoot:
    """Root closest to an estimated exponent (used to name a fitted branch)."""
    k_guess = max(1, min(k_max, int(math.floor(alpha_estimate))))
    candidates = [find_exponent(j) for j in range(max(1, k_guess - 1), k_guess + 2)]
    return min(candidates, key=lambda root: abs(root.alpha - alpha_estimate))
