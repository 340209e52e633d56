"""Crack curve geometry near the tip.

The crack is the graph ``{(-t, f(t))}`` with the tip at the origin and
``f(0) = f'(0) = 0``.  Points of the plane are classified by the side of
the crack they lie on, and polar angles are measured with the branch cut
running along the crack, so every field built on these angles is
continuous off the crack and jumps across it.

All point functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicSpline

from .errors import InvalidArgument, OnCrack, OutOfDomain

ON_CRACK_TOL = 1e-14
TIP_EPS = 1e-8
MIN_NODES = 4


def _scalar_or_array(value, was_scalar: bool):
    return float(value) if was_scalar else value


@dataclass(frozen=True)
class CrackCurve:
    """Crack profile ``f`` on ``[0, domain_end]``.

    ``kind == "power"`` means ``f(t) = C_f t**beta`` with ``beta > 1``;
    ``kind == "sampled"`` interpolates nodes with a cubic spline clamped to
    ``f'(0) = 0`` at the tip and natural at the far end.
    """

    kind: str
    C_f: float = 0.0
    beta: float = 2.0
    t_nodes: tuple[float, ...] = ()
    f_nodes: tuple[float, ...] = ()
    domain_end: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.domain_end <= 1.0:
            raise InvalidArgument(f"domain_end must lie in (0, 1], got {self.domain_end}")
        if self.kind == "power":
            if not self.beta > 1.0:
                raise InvalidArgument(f"power crack needs beta > 1, got {self.beta}")
            if not math.isfinite(self.C_f):
                raise InvalidArgument("C_f must be finite")
        elif self.kind == "sampled":
            t = np.asarray(self.t_nodes, dtype=float)
            f = np.asarray(self.f_nodes, dtype=float)
            if t.shape != f.shape or t.ndim != 1:
                raise InvalidArgument("t and f node arrays must match")
            if t.size < MIN_NODES:
                raise InvalidArgument(f"sampled crack needs >= {MIN_NODES} nodes")
            if not np.all(np.diff(t) > 0.0):
                raise InvalidArgument("t nodes must be strictly increasing")
            if t[0] != 0.0:
                raise InvalidArgument("sampled crack must start at t = 0")
            if not np.all(np.isfinite(f)):
                raise InvalidArgument("f values must be finite")
            if abs(self._spline(0.0)) > 1e-8:
                raise InvalidArgument("sampled crack must satisfy f(0) = 0")
        else:
            raise InvalidArgument(f"unknown crack kind {self.kind!r}")

    # constructors

    @classmethod
    def straight(cls) -> "CrackCurve":
        return cls(kind="power", C_f=0.0, beta=2.0)

    @classmethod
    def power(cls, C_f: float, beta: float, domain_end: float = 1.0) -> "CrackCurve":
        return cls(kind="power", C_f=float(C_f), beta=float(beta), domain_end=float(domain_end))

    @classmethod
    def sampled(cls, t: Sequence[float], f: Sequence[float]) -> "CrackCurve":
        t = [float(v) for v in t]
        f = [float(v) for v in f]
        if t and t[0] > 0.0:
            t = [0.0] + t
            f = [0.0] + f
        end = t[-1] if t else 1.0
        if end > 1.0:
            raise InvalidArgument("sampled crack t values must lie in [0, 1]")
        return cls(kind="sampled", t_nodes=tuple(t), f_nodes=tuple(f), domain_end=end)

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(
            np.asarray(self.t_nodes), np.asarray(self.f_nodes), bc_type=((1, 0.0), (2, 0.0))
        )

    @property
    def is_straight(self) -> bool:
        return self.kind == "power" and self.C_f == 0.0

    # profile and derivatives; defined for t >= 0, extrapolated past domain_end

    def f(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return self.C_f * np.power(np.maximum(t, 0.0), self.beta)
        return self._spline(t)

    def df(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return self.C_f * self.beta * np.power(np.maximum(t, 0.0), self.beta - 1.0)
        return self._spline(t, 1)

    def d2f(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            with np.errstate(divide="ignore"):
                return self.C_f * self.beta * (self.beta - 1.0) * np.power(t, self.beta - 2.0)
        return self._spline(t, 2)

    def to_dict(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "C_f": self.C_f, "beta": self.beta,
                    "domain_end": self.domain_end}
        return {"kind": "sampled", "t": list(self.t_nodes), "f": list(self.f_nodes)}

    @classmethod
    def from_dict(cls, data: dict) -> "CrackCurve":
        kind = data.get("kind", "power")
        if kind == "power":
            return cls.power(data.get("C_f", 0.0), data.get("beta", 2.0),
                             data.get("domain_end", 1.0))
        if kind == "sampled":
            return cls.sampled(data["t"], data["f"])
        raise InvalidArgument(f"unknown crack kind {kind!r}")


@dataclass(frozen=True)
class Frame:
    tau: np.ndarray
    nu: np.ndarray


def _check_t(crack: CrackCurve, t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < TIP_EPS) or np.any(arr >= crack.domain_end):
        raise OutOfDomain(f"t must lie in [{TIP_EPS}, {crack.domain_end}), got {t!r}")
    return arr


def curvature(crack: CrackCurve, t):
    """Signed curvature ``f'' / (1 + f'^2)^{3/2}`` at ``(-t, f(t))``."""
    arr = _check_t(crack, t)
    d1 = crack.df(arr)
    d2 = crack.d2f(arr)
    return _scalar_or_array(d2 / (1.0 + d1 * d1) ** 1.5, np.ndim(t) == 0)


def frame_vectors(crack: CrackCurve, t) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised frames: arrays ``tau, nu`` of shape ``(..., 2)``."""
    arr = _check_t(crack, t)
    d1 = crack.df(arr)
    norm = 1.0 / np.sqrt(1.0 + d1 * d1)
    tau = np.stack([-norm, d1 * norm], axis=-1)
    nu = np.stack([d1 * norm, norm], axis=-1)
    return tau, nu


def frames(crack: CrackCurve, t: float) -> Frame:
    tau, nu = frame_vectors(crack, float(t))
    return Frame(tau=tau, nu=nu)


def _side(crack: CrackCurve, x: np.ndarray, y: np.ndarray, strict_axis: bool) -> np.ndarray:
    """+1 above the crack (or y > 0 for x >= 0), -1 below.

    With ``strict_axis`` the positive x-axis raises OnCrack (sign undefined);
    otherwise it is reported as +1, which is harmless for continuous fields.
    """
    left = x < 0.0
    height = np.where(left, crack.f(np.where(left, -x, 0.0)), 0.0)
    if np.any(left & (np.abs(y - height) < ON_CRACK_TOL)):
        raise OnCrack("point lies on the crack")
    if strict_axis and np.any(~left & (y == 0.0)):
        raise OnCrack("sign is undefined on the ray y = 0, x >= 0")
    ref = np.where(left, height, 0.0)
    return np.where(y > ref, 1, np.where(y < ref, -1, 1))


def sgn_gamma(crack: CrackCurve, x, y):
    """Side of the crack: +1 above, -1 below."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    xa, ya = np.broadcast_arrays(xa, ya)
    s = _side(crack, xa, ya, strict_axis=True)
    return int(s) if np.ndim(x) == 0 and np.ndim(y) == 0 else s


def polar_about_tip(crack: CrackCurve, x, y):
    """Polar coordinates with the branch cut along the crack.

    ``phi`` equals ``atan2(y, x)`` except between the crack and the negative
    x-axis, where it is shifted by 2*pi so that it stays continuous off the
    crack.  On the straight slit the range is ``(-pi, pi)``.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    xa, ya = np.broadcast_arrays(xa, ya)
    r = np.hypot(xa, ya)
    theta = np.arctan2(ya, xa)
    side = _side(crack, xa, ya, strict_axis=False)
    left = xa < 0.0
    phi = np.where(left & (side > 0) & (theta < 0.0), theta + 2.0 * math.pi, theta)
    phi = np.where(left & (side < 0) & (theta > 0.0), phi - 2.0 * math.pi, phi)
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(r), float(phi)
    return r, phi


def open_crack(crack: CrackCurve, x, y):
    """Square-root opening map ``z -> sqrt(z)`` on the branch cut along the crack.

    The image satisfies ``(X + iY)^2 = x + iy``; the crack opens onto the
    curve ``Sigma`` and the straight slit onto the segment ``X = 0``.
    """
    r, phi = polar_about_tip(crack, x, y)
    sr = np.sqrt(r)
    X = sr * np.cos(0.5 * np.asarray(phi))
    Y = sr * np.sin(0.5 * np.asarray(phi))
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(X), float(Y)
    return X, Y


def opened_profile(crack: CrackCurve, t):
    """Opened crack boundary ``(F, tau)`` for the crack point at parameter t.

    ``F = sqrt(sqrt(t^2+f^2) - t)/sqrt(2)``, ``tau = sqrt(sqrt(t^2+f^2) + t)/sqrt(2)``;
    F is evaluated as ``|f| / sqrt(2 (r + t))`` to avoid cancellation.
    """
    arr = _check_t(crack, t)
    fv = crack.f(arr)
    r = np.hypot(arr, fv)
    F = np.abs(fv) / np.sqrt(2.0 * (r + arr))
    tau = np.sqrt(0.5 * (r + arr))
    scalar = np.ndim(t) == 0
    return _scalar_or_array(F, scalar), _scalar_or_array(tau, scalar)


def opened_sup(crack: CrackCurve, rho: float, n_grid: int = 4000) -> float:
    """``sup_{tau in (0, rho)} |F(tau)| / rho`` on the opened crack."""
    if not 0.0 < rho <= 1.0:
        raise InvalidArgument(f"rho must lie in (0, 1], got {rho}")

    def tau_of(t):
        fv = crack.f(t)
        return math.sqrt(0.5 * (math.hypot(t, float(fv)) + t))

    t_hi = min(crack.domain_end * (1 - 1e-12), 2.0 * rho * rho)
    if tau_of(t_hi) <= rho:
        t_star = t_hi
    else:
        t_star = optimize.brentq(lambda t: tau_of(t) - rho, 0.0, t_hi, xtol=1e-16, rtol=1e-15)
    ts = np.geomspace(max(TIP_EPS, t_star * 1e-10), t_star, n_grid)
    fv = crack.f(ts)
    vals = np.abs(fv) / np.sqrt(2.0 * (np.hypot(ts, fv) + ts)) / rho
    i = int(np.argmax(vals))
    best = float(vals[i])
    if 0 < i < n_grid - 1:
        res = optimize.minimize_scalar(
            lambda t: -abs(float(crack.f(t))) / math.sqrt(2.0 * (math.hypot(t, float(crack.f(t))) + t)) / rho,
            bounds=(ts[i - 1], ts[i + 1]), method="bounded", options={"xatol": 1e-14},
        )
        best = max(best, -float(res.fun))
    return best


def rescale_crack(crack: CrackCurve, rho: float) -> CrackCurve:
    """Blow-up of the crack, ``f_rho(t) = f(rho t) / rho``."""
    if not 0.0 < rho <= 1.0:
        raise InvalidArgument(f"rho must lie in (0, 1], got {rho}")
    if rho == 1.0:
        return crack
    if crack.kind == "power":
        return CrackCurve.power(crack.C_f * rho ** (crack.beta - 1.0), crack.beta, crack.domain_end)
    end = min(1.0, crack.domain_end / rho)
    n = max(len(crack.t_nodes), 64)
    s = np.linspace(0.0, end, n)
    return CrackCurve.sampled(s, crack.f(rho * s) / rho)


def crack_sup(crack: CrackCurve, rho: float, n_grid: int = 4096) -> float:
    """``sigma_rho = sup_{t in (0, rho)} |f(t)| / rho``."""
    if not 0.0 < rho <= crack.domain_end:
        raise InvalidArgument(f"rho must lie in (0, {crack.domain_end}], got {rho}")
    if crack.kind == "power":
        # |f| is increasing in t for beta > 1
        return abs(crack.C_f) * rho ** (crack.beta - 1.0)
    ts = np.linspace(0.0, rho, n_grid)
    vals = np.abs(crack.f(ts))
    i = int(np.argmax(vals))
    best = float(vals[i])
    if 0 < i < n_grid - 1:
        res = optimize.minimize_scalar(
            lambda t: -abs(float(crack.f(t))), bounds=(ts[i - 1], ts[i + 1]),
            method="bounded", options={"xatol": 1e-14},
        )
        best = max(best, -float(res.fun))
    return best / rho


def arclength(crack: CrackCurve, t_end: float | None = None) -> float:
    end = crack.domain_end if t_end is None else t_end
    if crack.is_straight:
        return end
    val, _ = integrate.quad(
        lambda t: math.sqrt(1.0 + float(crack.df(t)) ** 2), 0.0, end,
        epsabs=1e-12, epsrel=1e-10, limit=200,
    )
    return val


def crack_angle(crack: CrackCurve, r):
    """Polar angle in ``(0, 2 pi)`` of the crack point at distance ``r`` from the tip."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if crack.is_straight:
        return np.full_like(r, math.pi)
    out = np.empty_like(r)
    for i, rv in enumerate(r):
        t = optimize.brentq(lambda s: math.hypot(s, float(crack.f(s))) - rv, 0.0, rv,
                            xtol=1e-15, rtol=1e-14)
        # keep the angle on the branch that contains pi
        out[i] = math.atan2(float(crack.f(t)), -t) % (2.0 * math.pi)
    return out


def read_crack_csv(path: str | Path) -> CrackCurve:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["t", "f"]:
            raise InvalidArgument(f"{path}: expected header 't,f', got {','.join(header)!r}")
        t, f = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                t.append(float(row[0]))
                f.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise InvalidArgument(f"{path}:{lineno}: bad row {row!r}") from exc
    return CrackCurve.sampled(t, f)


def write_crack_csv(path: str | Path, t: Sequence[float], f: Sequence[float]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,f\n")
        for tv, fv in zip(t, f):
            fh.write(f"{float(tv):.17g},{float(fv):.17g}\n")
