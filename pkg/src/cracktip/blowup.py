"""Blow-ups at the tip: sup-norm ladders, parity split, limit equations.

A field ``u`` is rescaled as
``v_rho(x) = (u(rho x) - lam Im sqrt(rho z) - Sigma_k(rho x)) / S_rho`` with
``S_rho`` the sup of the numerator over ``B_rho``, and the crack as
``f_rho(t) = f(rho t) / rho`` with ``sigma_rho = sup |f_rho|``.  The ratio
``sigma_rho / (rho^{-1/2} S_rho)`` decides whether the even (crack-coupled)
or the odd part of the limit is active at the current level.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize
from scipy.interpolate import CubicSpline

from .balance import FunctionalParams
from .crackgeom import CrackCurve, crack_angle, crack_sup, polar_about_tip, rescale_crack
from .errors import (
    DegenerateField,
    DegenerateRange,
    GridNotSymmetric,
    InvalidArgument,
    SignChange,
)
from .exponents import SQRT_HALF_PI, find_exponent, mode_constants, nearest_mode
from .fields import COSINE, SINE, evaluate_terms, half_sine_exponent
from .fitting import fit_circle_modes, fit_crack_exponent, lstsq_scaled

N_ANGLES = 64
N_RADII = 48
DEGENERATE_RTOL = 1e-15
CONVERGENCE_RTOL = 0.05
MAX_LEVELS = 8
FLAT_PROBES = (1, 2, 4, 6)
DECAY_SLOPE = 0.25
TIP_RADII = (0.04, 0.01)


def default_ladder(n: int = 12, rho0: float = 0.2) -> list[float]:
    return [rho0 * 2.0 ** (-i) for i in range(n)]


def grid_angles(n: int = N_ANGLES) -> np.ndarray:
    """Midpoint angles on ``(-pi, pi)``, symmetric under ``psi -> -psi``."""
    return -math.pi + (np.arange(n) + 0.5) * (2.0 * math.pi / n)


def grid_radii(n: int = N_RADII) -> np.ndarray:
    """Quadratically graded radii ``(i/n)^2``, ending at 1."""
    return (np.arange(1, n + 1) / n) ** 2


def _threads() -> int | None:
    raw = os.environ.get("CRACKTIP_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidArgument(f"CRACKTIP_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise InvalidArgument("CRACKTIP_THREADS must be >= 0")
    return None if n == 0 else n


@dataclass(frozen=True)
class SampledField:
    """Field samples on the polar grid ``radii x angles``.

    ``angles`` are offsets from the crack direction, so on the straight
    slit they are the usual polar angles; ``phi`` holds the branch angle of
    every sample.
    """

    radii: np.ndarray
    angles: np.ndarray
    values: np.ndarray
    phi: np.ndarray
    rho: float = 1.0
    S: float = 1.0
    k_level: int = 1

    @classmethod
    def from_function(cls, func: Callable, radii=None, angles=None) -> "SampledField":
        """Samples of ``func(r, phi)`` on the straight-slit grid."""
        radii = grid_radii() if radii is None else np.asarray(radii, dtype=float)
        angles = grid_angles() if angles is None else np.asarray(angles, dtype=float)
        rr, pp = np.meshgrid(radii, angles, indexing="ij")
        return cls(radii, angles, np.asarray(func(rr, pp), dtype=float), pp)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class ParityDecomposition:
    W1: np.ndarray
    W2: np.ndarray
    radii: np.ndarray
    angles: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.W1 + self.W2


@dataclass(frozen=True)
class LimitProfile:
    """Normalised crack blow-up ``g0`` on ``(0, 1]``.

    Either a pure power ``coeff * r^exponent`` or a spline through samples.
    """

    coeff: float
    exponent: float
    provenance: str = "synthetic"
    spline: CubicSpline | None = None

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.spline is not None:
            return self.spline(r)
        return self.coeff * np.power(r, self.exponent)

    def d1(self, r):
        r = np.asarray(r, dtype=float)
        if self.spline is not None:
            return self.spline(r, 1)
        e = self.exponent
        return self.coeff * e * np.power(r, e - 1.0)

    def d2(self, r):
        r = np.asarray(r, dtype=float)
        if self.spline is not None:
            return self.spline(r, 2)
        e = self.exponent
        return self.coeff * e * (e - 1.0) * np.power(r, e - 2.0)

    @classmethod
    def zero(cls) -> "LimitProfile":
        return cls(0.0, 1.0, "synthetic")


def g_profile(alpha: float, sign: float = 1.0) -> LimitProfile:
    """``g0(r) = sign * r^{alpha + 1/2}``, normalised so that ``sup g0 = 1``."""
    mode_constants(alpha)
    if sign not in (1, -1, 1.0, -1.0):
        raise InvalidArgument(f"sign must be +1 or -1, got {sign}")
    return LimitProfile(float(sign), alpha + 0.5, "synthetic")


def crack_limit_profile(crack: CrackCurve, rho: float, n: int = 400) -> LimitProfile:
    """``g_rho = f_rho / sigma_rho`` sampled on ``(0, 1]`` and splined."""
    sigma = crack_sup(crack, rho)
    if sigma == 0.0:
        return LimitProfile.zero()
    if crack.kind == "power":
        return LimitProfile(math.copysign(1.0, crack.C_f), crack.beta, "computed")
    scaled = rescale_crack(crack, rho)
    t = np.linspace(0.0, min(1.0, scaled.domain_end), n)
    g = scaled.f(t) / sigma
    return LimitProfile(1.0, float("nan"), "computed",
                        CubicSpline(t, g, bc_type=((1, 0.0), "not-a-knot")))


@dataclass
class BlowupTrace:
    rhos: list[float]
    S: list[float]
    sigma: list[float]
    ratio: list[float]
    A_estimate: float
    k_level: int
    converged: bool
    last_field: SampledField | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        r = np.asarray(self.rhos)
        if r.size > 1 and np.any(np.diff(r) >= 0):
            raise InvalidArgument("rhos must be strictly decreasing")
        if any(s < 0 for s in self.S) or any(s < 0 for s in self.sigma):
            raise InvalidArgument("sup norms must be non-negative")

    def decay_slope(self, n_last: int = 4) -> float:
        """Log-log slope of the ratio against rho over the last entries."""
        rat = np.asarray(self.ratio[-n_last:], dtype=float)
        rh = np.asarray(self.rhos[-n_last:], dtype=float)
        if np.any(rat <= 0.0):
            return math.inf
        if rat.size < 2:
            return 0.0
        return float(np.polyfit(np.log(rh), np.log(rat), 1)[0])

    def S_slope(self, n_last: int = 4) -> float:
        """Log-log slope of ``S_rho``; approximates the leading exponent."""
        s = np.asarray(self.S[-n_last:], dtype=float)
        rh = np.asarray(self.rhos[-n_last:], dtype=float)
        return float(np.polyfit(np.log(rh), np.log(s), 1)[0])

    def to_dict(self) -> dict:
        return {"rhos": list(self.rhos), "S": list(self.S), "sigma": list(self.sigma),
                "ratio": list(self.ratio), "A_estimate": self.A_estimate,
                "k_level": self.k_level, "converged": self.converged}

    @classmethod
    def from_dict(cls, data: dict) -> "BlowupTrace":
        try:
            return cls([float(v) for v in data["rhos"]], [float(v) for v in data["S"]],
                       [float(v) for v in data["sigma"]], [float(v) for v in data["ratio"]],
                       float(data["A_estimate"]), int(data["k_level"]), bool(data["converged"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"malformed blow-up trace: {exc}") from exc


def _subtracted_terms(lam: float, sine_coeffs: Sequence[float]):
    terms = [(lam, SINE, 0.5)]
    terms += [(c, SINE, half_sine_exponent(j)) for j, c in enumerate(sine_coeffs, start=1)]
    return terms


def _difference(u, crack: CrackCurve, terms, X, Y):
    return np.asarray(u.evaluate(X, Y, crack), dtype=float) - evaluate_terms(terms, crack, X, Y)


def _check_level(k_level: int, sine_coeffs: Sequence[float]) -> None:
    if int(k_level) != k_level or k_level < 1:
        raise InvalidArgument(f"k_level must be a positive integer, got {k_level}")
    if len(sine_coeffs) > k_level - 1:
        raise InvalidArgument(f"level {k_level} subtracts at most {k_level - 1} sine terms")


def rescale_field(u, crack: CrackCurve, params: FunctionalParams, rho: float,
                  k_level: int = 1, sine_coeffs: Sequence[float] = ()) -> SampledField:
    """Samples of ``v_rho`` on the fixed polar grid of ``B_1`` minus ``Gamma_rho``.

    ``u`` is anything with ``evaluate(x, y, crack)``.  ``S_rho`` is the grid
    maximum, polished by bounded golden-section searches in radius and then
    in angle around the maximising node.
    """
    if not 0.0 < rho <= 1.0:
        raise InvalidArgument(f"rho must lie in (0, 1], got {rho}")
    _check_level(k_level, sine_coeffs)
    lam = params.lam
    terms = _subtracted_terms(lam, sine_coeffs)
    radii, angles = grid_radii(), grid_angles()
    shift = crack_angle(crack, rho * radii) - math.pi
    phys = shift[:, None] + angles[None, :]
    X = rho * radii[:, None] * np.cos(phys)
    Y = rho * radii[:, None] * np.sin(phys)
    diff = _difference(u, crack, terms, X, Y)
    _, phi = polar_about_tip(crack, X, Y)

    absd = np.abs(diff)
    i, j = np.unravel_index(int(np.argmax(absd)), absd.shape)
    S = float(absd[i, j])

    def h(r, psi):
        a = float(crack_angle(crack, rho * r)[0]) - math.pi + psi
        return abs(float(_difference(u, crack, terms, rho * r * math.cos(a), rho * r * math.sin(a))))

    if S > DEGENERATE_RTOL * lam:
        lo = radii[i - 1] if i > 0 else 0.5 * radii[0]
        hi = radii[i + 1] if i + 1 < radii.size else 1.0
        r_best = radii[i]
        if hi > lo:
            res = optimize.minimize_scalar(lambda r: -h(r, angles[j]), bounds=(lo, hi),
                                           method="bounded", options={"xatol": 1e-12})
            if -res.fun > S:
                S, r_best = float(-res.fun), float(res.x)
        da = angles[1] - angles[0]
        lo_a = max(angles[j] - da, -math.pi + 1e-9)
        hi_a = min(angles[j] + da, math.pi - 1e-9)
        res = optimize.minimize_scalar(lambda p: -h(r_best, p), bounds=(lo_a, hi_a),
                                       method="bounded", options={"xatol": 1e-12})
        S = max(S, float(-res.fun))
    if S <= DEGENERATE_RTOL * lam:
        raise DegenerateField(
            f"u matches the level-{k_level} expansion at rho={rho} (S_rho={S:.3e})"
        )
    return SampledField(radii, angles, diff / S, phi, float(rho), S, int(k_level))


def sup_ladder(u, crack: CrackCurve, params: FunctionalParams,
               rho_ladder: Sequence[float] | None = None, k_level: int = 1,
               sine_coeffs: Sequence[float] = ()) -> BlowupTrace:
    """``S_rho``, ``sigma_rho`` and their ratio along a geometric ladder."""
    rhos = [float(r) for r in (rho_ladder if rho_ladder is not None else default_ladder())]
    if len(rhos) < 2:
        raise InvalidArgument("the ladder needs at least two radii")
    if any(b >= a for a, b in zip(rhos, rhos[1:])):
        raise InvalidArgument("rho ladder must be strictly decreasing")
    _check_level(k_level, sine_coeffs)

    def one(rho):
        return rescale_field(u, crack, params, rho, k_level, sine_coeffs)

    workers = _threads()
    if workers == 1:
        fields = [one(r) for r in rhos]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fields = list(pool.map(one, rhos))
    S = [fld.S for fld in fields]
    sigma = [crack_sup(crack, r) for r in rhos]
    ratio = [sg * math.sqrt(r) / s for sg, r, s in zip(sigma, rhos, S)]
    last, prev = ratio[-1], ratio[-2]
    converged = abs(last - prev) <= CONVERGENCE_RTOL * max(abs(last), 1e-300) and last > 0.0
    return BlowupTrace(rhos, S, sigma, ratio, last, int(k_level), bool(converged), fields[-1])


def decompose_parity(v0: SampledField) -> ParityDecomposition:
    """Odd and even parts in ``y`` via the grid reflection ``psi -> -psi``."""
    a = np.asarray(v0.angles, dtype=float)
    if not np.allclose(a, -a[::-1], rtol=0.0, atol=1e-13):
        raise GridNotSymmetric("angle grid is not symmetric under reflection")
    vals = np.asarray(v0.values, dtype=float)
    mirror = vals[:, ::-1]
    return ParityDecomposition(0.5 * (vals - mirror), 0.5 * (vals + mirror),
                               np.asarray(v0.radii), a)


def _as_polar(W2) -> Callable:
    if hasattr(W2, "eval_polar"):
        return W2.eval_polar
    if callable(W2):
        return W2
    raise InvalidArgument("W2 must be callable as W2(r, phi) or provide eval_polar")


# one-sided fourth-order first derivative weights (nodes 0..4)
_ONE_SIDED = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def _limit_parts(W, g0: LimitProfile, A_lambda: float, s: np.ndarray, h: float):
    """Left and right sides of the Neumann and tangential limit relations."""
    # d/dphi at phi = pi from below, with d_y = -(1/r) d_phi there
    dphi = sum(w * W(s, math.pi - m * h) for m, w in enumerate(_ONE_SIDED)) / (-h)
    dy = -dphi / s
    dr = sum(w * W(s + (m - 2) * h, math.pi) for m, w in enumerate(_CENTRAL)) / h
    dx = -dr
    neu_lhs = 2.0 * dy
    neu_rhs = -A_lambda / (2.0 * np.sqrt(s)) * (-2.0 * g0.d1(s) + g0(s) / s)
    tan_lhs = A_lambda * g0.d2(s)
    tan_rhs = -2.0 * SQRT_HALF_PI * dx / np.sqrt(s)
    return neu_lhs, neu_rhs, tan_lhs, tan_rhs


def check_limit_equations(W2, g0: LimitProfile, A_lambda: float, n_x: int = 81,
                          h: float = 1e-3) -> tuple[float, float, int]:
    """Residuals of the Neumann and tangential relations on ``x in [-0.9, -0.1]``.

    Both signs of ``W2`` are tried; returns ``(res_neumann, res_tangential,
    sign)`` for the sign with the smaller worst residual.
    """
    if not A_lambda >= 0.0:
        raise InvalidArgument("A_lambda must be non-negative")
    base = _as_polar(W2)
    s = np.linspace(0.1, 0.9, n_x)
    best = None
    for sign in (1, -1):
        def W(r, phi, sign=sign):
            return sign * np.asarray(base(r, phi), dtype=float)

        nl, nr, tl, tr = _limit_parts(W, g0, A_lambda, s, h)
        res = (float(np.max(np.abs(nl - nr))), float(np.max(np.abs(tl - tr))), sign)
        if best is None or max(res[:2]) < max(best[:2]):
            best = res
    return best


def classify_tip(beta_estimate: float, C_estimate: float, tol: float, *,
                 levels_exhausted: bool = False, rhos: Sequence[float] | None = None,
                 sigma: Sequence[float] | None = None,
                 probes: Sequence[int] = FLAT_PROBES) -> str:
    """Curvature at the tip: infinite, vanishing, flatter than all powers, or undetermined."""
    if math.isfinite(C_estimate) and abs(C_estimate) > tol and math.isfinite(beta_estimate):
        if beta_estimate < 2.0:
            return "infinite_curvature"
        if beta_estimate > 2.0:
            return "vanishing_curvature"
        return "undetermined"
    small_C = not math.isfinite(C_estimate) or abs(C_estimate) <= tol
    if levels_exhausted and small_C and rhos is not None and sigma is not None:
        rh = np.asarray(rhos, dtype=float)
        sg = np.asarray(sigma, dtype=float)
        if rh.size and all(np.all(sg <= rh ** m) for m in probes):
            return "flat_beyond_all_orders"
    return "undetermined"


def fit_next_sine(v: SampledField, level: int) -> float:
    """Coefficient ``c_level`` of ``r^{level+1/2} sin((level+1/2) phi)`` in ``u``.

    Fits the blow-up samples with the two leading half-sines above the level
    and the cosine modes of this and the next level, then undoes the scaling.
    """
    a0 = half_sine_exponent(level)
    terms = [(SINE, a0), (SINE, a0 + 1.0),
             (COSINE, find_exponent(level).alpha), (COSINE, find_exponent(level + 1).alpha)]
    r = np.broadcast_to(v.radii[:, None], v.values.shape).ravel()
    phi = np.asarray(v.phi).ravel()
    cols = []
    for kind, a in terms:
        ang = np.sin(a * phi) if kind == SINE else np.cos(a * phi)
        cols.append(np.power(r, a) * ang)
    coeffs, _, _ = lstsq_scaled(np.column_stack(cols), v.values.ravel())
    return float(coeffs[0]) * v.S / v.rho ** a0


def fit_even_part(parity: ParityDecomposition, alphas: Sequence[float]) -> Callable:
    """Cosine-mode expansion of ``W2`` as a callable ``(r, phi)``."""
    r = np.broadcast_to(parity.radii[:, None], parity.W2.shape).ravel()
    phi = np.broadcast_to(parity.angles[None, :], parity.W2.shape).ravel()
    cols = [np.power(r, a) * np.cos(a * phi) for a in alphas]
    coeffs, _, _ = lstsq_scaled(np.column_stack(cols), parity.W2.ravel())
    pairs = [(float(c), float(a)) for c, a in zip(coeffs, alphas)]

    def W2(rr, pp):
        rr = np.asarray(rr, dtype=float)
        return sum(c * np.power(rr, a) * np.cos(a * np.asarray(pp)) for c, a in pairs)

    return W2


def circle_samples(u, crack: CrackCurve, r0: float, n: int = N_ANGLES):
    """``(phi, u)`` at ``n`` angles on the circle ``r = r0`` off the crack."""
    shift = float(crack_angle(crack, r0)[0]) - math.pi
    psi = grid_angles(n)
    x = r0 * np.cos(shift + psi)
    y = r0 * np.sin(shift + psi)
    _, phi = polar_about_tip(crack, x, y)
    return np.asarray(phi), np.asarray(u.evaluate(x, y, crack), dtype=float)


def estimate_tip_coefficient(u, crack: CrackCurve, lam: float, k: int,
                             sine_coeffs: Sequence[float] = (),
                             radii: Sequence[float] = TIP_RADII) -> tuple[float, list[float]]:
    """``C`` from circle projections at ``r0`` and ``r0/4``.

    The leading correction to the projection scales like ``sqrt(r0)``; one
    Richardson step ``2 C(r0/4) - C(r0)`` removes it.
    """
    alpha = find_exponent(k).alpha
    raw = []
    for r0 in radii:
        phi, vals = circle_samples(u, crack, r0)
        raw.append(fit_circle_modes(phi, vals, r0, lam, k, alpha, tuple(sine_coeffs)).C)
    if len(raw) == 2 and abs(radii[0] - 4.0 * radii[1]) < 1e-12:
        return 2.0 * raw[1] - raw[0], raw
    return raw[-1], raw


def crack_samples(crack: CrackCurve, t_min: float = 1e-4, t_max: float = 1e-1, n: int = 31):
    t = np.geomspace(t_min, t_max, n)
    return np.column_stack([t, crack.f(t)])


@dataclass
class LevelRecord:
    k_level: int
    trace: BlowupTrace
    decay_slope: float
    branch: str
    sine_coeff: float | None = None
    w2_max: float = float("nan")

    def to_dict(self) -> dict:
        out = {"k_level": self.k_level, "branch": self.branch, "decay_slope": self.decay_slope,
               "w2_max": self.w2_max, "trace": self.trace.to_dict()}
        if self.sine_coeff is not None:
            out["sine_coeff"] = self.sine_coeff
        return out


@dataclass
class TipAnalysis:
    levels: list[LevelRecord]
    sine_coeffs: list[float]
    k: int | None
    alpha: float
    alpha_from_ladder: float
    beta: float
    beta_halfwidth: float
    C_f: float
    k_from_beta: int | None
    C_estimate: float
    C_raw: list[float]
    A_estimate: float
    limit_residuals: tuple[float, float] | None
    levels_exhausted: bool
    classification: str

    @property
    def active_trace(self) -> BlowupTrace | None:
        return self.levels[-1].trace if self.levels else None

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "k": self.k, "alpha": self.alpha, "alpha_from_ladder": self.alpha_from_ladder,
            "beta_estimate": self.beta, "beta_halfwidth": self.beta_halfwidth, "C_f": self.C_f,
            "k_from_beta": self.k_from_beta,
            "C_estimate": self.C_estimate, "C_raw": list(self.C_raw),
            "A_estimate": self.A_estimate,
            "limit_residuals": list(self.limit_residuals) if self.limit_residuals else None,
            "sine_coeffs": list(self.sine_coeffs),
            "levels_exhausted": self.levels_exhausted,
            "levels": [lv.to_dict() for lv in self.levels],
        }


def analyze_tip(u, crack: CrackCurve, params: FunctionalParams,
                rho_ladder: Sequence[float] | None = None, max_levels: int = MAX_LEVELS,
                tol: float = 1e-6) -> TipAnalysis:
    """Walk the levels ``k = 1, 2, ...`` until the even branch is active.

    At each level the ladder ratio either settles at a positive value (the
    crack-coupled cosine mode leads) or decays; in the second case the
    leading half-sine coefficient is read off the last blow-up, added to
    ``Sigma`` and the next level is tried.
    """
    if max_levels < 1:
        raise InvalidArgument("max_levels must be >= 1")
    rhos = list(rho_ladder) if rho_ladder is not None else default_ladder()
    sines: list[float] = []
    levels: list[LevelRecord] = []
    active = None
    exhausted = False
    for level in range(1, max_levels + 1):
        try:
            trace = sup_ladder(u, crack, params, rhos, level, sines)
        except DegenerateField:
            exhausted = True
            break
        slope = trace.decay_slope()
        parity = decompose_parity(trace.last_field)
        rec = LevelRecord(level, trace, slope, "even", w2_max=float(np.max(np.abs(parity.W2))))
        levels.append(rec)
        if slope < DECAY_SLOPE:
            active = level
            break
        rec.branch = "odd"
        rec.sine_coeff = fit_next_sine(trace.last_field, level)
        sines.append(rec.sine_coeff)
    else:
        exhausted = True

    try:
        fit = fit_crack_exponent(crack_samples(crack))
        beta, halfwidth, C_f = fit.beta, fit.halfwidth, fit.C_f
        k_beta = nearest_mode(beta - 0.5).k
    except (SignChange, DegenerateRange):
        beta, halfwidth, C_f, k_beta = math.nan, math.nan, 0.0, None

    if active is None:
        sigma_all = levels[-1].trace.sigma if levels else [crack_sup(crack, r) for r in rhos]
        cls = classify_tip(beta, 0.0, tol, levels_exhausted=exhausted, rhos=rhos, sigma=sigma_all)
        return TipAnalysis(levels, sines, None, math.nan, math.nan, beta, halfwidth, C_f,
                           k_beta, 0.0, [], 0.0, None, exhausted, cls)

    trace = levels[-1].trace
    root = find_exponent(active)
    C_est, C_raw = estimate_tip_coefficient(u, crack, params.lam, active, sines[:active - 1])
    A_est = trace.A_estimate
    parity = decompose_parity(trace.last_field)
    W2 = fit_even_part(parity, [root.alpha, find_exponent(active + 1).alpha])
    g0 = crack_limit_profile(crack, trace.rhos[-1])
    res = check_limit_equations(W2, g0, params.lam * A_est)
    cls = classify_tip(beta, C_est, tol)
    return TipAnalysis(levels, sines, active, root.alpha, trace.S_slope(), beta, halfwidth,
                       C_f, k_beta, C_est, C_raw, A_est, (res[0], res[1]), False, cls)


def synthetic_pair(k: int, C: float, lam: float = 1.0, sine_coeffs: Sequence[float] = (),
                   o_term: float = 0.0):
    """Field and crack of the leading-order expansion at level ``k``.

    The crack is ``f = C t^{alpha_k + 1/2}``; ``o_term`` plants
    ``o_term * r^{alpha_k + 1/2} cos((alpha_k + 1/2) phi)`` in the field.
    """
    from .fields import ExpansionField

    root = find_exponent(k)
    crack = CrackCurve.power(C, root.beta) if C != 0.0 else CrackCurve.straight()
    rem = ((o_term, root.alpha + 0.5),) if o_term else ()
    u = ExpansionField.build(lam, k, C, tuple(sine_coeffs), crack, rem)
    return u, crack
