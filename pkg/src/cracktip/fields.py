"""Asymptotic expansion of the minimiser near the tip.

A field is a finite sum of branch power modes ``r^a sin(a phi)`` and
``r^a cos(a phi)`` with ``phi`` cut along the crack.  Each mode is the
imaginary or real part of ``z^a`` on that branch, which gives the gradients
in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .crackgeom import CrackCurve, _side, frame_vectors, polar_about_tip
from .errors import InvalidArgument, NoConvergence, OnCrack
from .exponents import ROOT_CHECK_TOL, characteristic_residual, find_exponent, mode_sign

SINE = "sin"
COSINE = "cos"

TRACE_OFFSETS = (1e-4, 5e-5, 2.5e-5)
TRACE_RTOL = 1e-6


def mode_value(kind: str, a: float, r, phi):
    ra = np.power(r, a)
    if kind == SINE:
        return ra * np.sin(a * phi)
    return ra * np.cos(a * phi)


def mode_gradient(kind: str, a: float, r, phi) -> np.ndarray:
    """Cartesian gradient of a branch power mode, shape ``(..., 2)``."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if a == 0.0:
        return np.zeros(r.shape + (2,))
    # d/dz z^a = a r^(a-1) e^{i (a-1) phi}
    mag = a * np.power(r, a - 1.0)
    re = mag * np.cos((a - 1.0) * phi)
    im = mag * np.sin((a - 1.0) * phi)
    if kind == SINE:
        return np.stack([im, re], axis=-1)
    return np.stack([re, -im], axis=-1)


def evaluate_terms(terms: Iterable[tuple[float, str, float]], crack: CrackCurve, x, y):
    r, phi = polar_about_tip(crack, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.zeros(np.shape(r))
    for coef, kind, a in terms:
        if coef != 0.0:
            out = out + coef * mode_value(kind, a, r, phi)
    return out


def gradient_terms(terms: Iterable[tuple[float, str, float]], crack: CrackCurve, x, y) -> np.ndarray:
    r, phi = polar_about_tip(crack, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.zeros(np.shape(r) + (2,))
    for coef, kind, a in terms:
        if coef != 0.0:
            out = out + coef * mode_gradient(kind, a, r, phi)
    return out


def half_sine_exponent(j: int) -> float:
    return (2 * j + 1) / 2.0


@dataclass(frozen=True)
class ExpansionField:
    """``lam*Im sqrt(z) + Sigma_k + C*lam*b_k*r^alpha*cos(alpha*phi)``.

    ``sine_coeffs[j-1]`` multiplies ``r^{(2j+1)/2} sin((2j+1) phi / 2)``.
    ``remainder`` holds optional ``(coef, exponent)`` pairs of extra cosine
    terms ``coef * r^e cos(e phi)``, used to plant higher-order corrections
    in synthetic data; it is empty for the pure expansion.
    """

    lam: float
    k: int
    alpha: float
    C: float = 0.0
    sine_coeffs: tuple[float, ...] = ()
    crack: CrackCurve = dc_field(default_factory=CrackCurve.straight)
    remainder: tuple[tuple[float, float], ...] = ()
    b_magnitude: float = float("nan")

    def __post_init__(self):
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise InvalidArgument(f"lambda must be positive and finite, got {self.lam}")
        if int(self.k) != self.k or self.k < 1:
            raise InvalidArgument(f"k must be a positive integer, got {self.k}")
        if not self.k < self.alpha < self.k + 0.5:
            raise InvalidArgument(f"alpha={self.alpha} outside ({self.k}, {self.k + 0.5})")
        if abs(characteristic_residual(self.alpha)) > ROOT_CHECK_TOL:
            raise InvalidArgument(f"alpha={self.alpha} is not a characteristic root")
        if len(self.sine_coeffs) > self.k - 1:
            raise InvalidArgument(f"Sigma_{self.k} has at most {self.k - 1} coefficients")
        object.__setattr__(self, "sine_coeffs", tuple(float(c) for c in self.sine_coeffs))
        object.__setattr__(self, "remainder", tuple((float(c), float(e)) for c, e in self.remainder))
        if math.isnan(self.b_magnitude):
            object.__setattr__(self, "b_magnitude", find_exponent(int(self.k)).b_magnitude)

    @classmethod
    def build(cls, lam: float, k: int, C: float = 0.0, sine_coeffs: Sequence[float] = (),
              crack: CrackCurve | None = None,
              remainder: Sequence[tuple[float, float]] = ()) -> "ExpansionField":
        root = find_exponent(k)
        return cls(lam=float(lam), k=int(k), alpha=root.alpha, C=float(C),
                   sine_coeffs=tuple(sine_coeffs), crack=crack or CrackCurve.straight(),
                   remainder=tuple(remainder), b_magnitude=root.b_magnitude)

    @property
    def b(self) -> float:
        return mode_sign(self.alpha) * self.b_magnitude

    @property
    def tip_amplitude(self) -> float:
        """Coefficient ``C lam b_k`` of ``r^alpha cos(alpha phi)``."""
        return self.C * self.lam * self.b

    @property
    def principal_coeff(self) -> float:
        return self.lam

    def terms(self) -> list[tuple[float, str, float]]:
        out = [(self.lam, SINE, 0.5)]
        out += [(c, SINE, half_sine_exponent(j)) for j, c in enumerate(self.sine_coeffs, start=1)]
        out.append((self.tip_amplitude, COSINE, self.alpha))
        out += [(c, COSINE, e) for c, e in self.remainder]
        return out

    def evaluate(self, x, y, crack: CrackCurve | None = None):
        val = evaluate_terms(self.terms(), crack or self.crack, x, y)
        return float(val) if np.ndim(val) == 0 else val

    def gradient(self, x, y, crack: CrackCurve | None = None) -> np.ndarray:
        return gradient_terms(self.terms(), crack or self.crack, x, y)

    def scaled(self, s: float) -> "ExpansionField":
        """The field multiplied by ``s > 0``."""
        return ExpansionField(lam=self.lam * s, k=self.k, alpha=self.alpha, C=self.C,
                              sine_coeffs=tuple(c * s for c in self.sine_coeffs),
                              crack=self.crack,
                              remainder=tuple((c * s, e) for c, e in self.remainder),
                              b_magnitude=self.b_magnitude)

    def with_crack(self, crack: CrackCurve) -> "ExpansionField":
        return ExpansionField(lam=self.lam, k=self.k, alpha=self.alpha, C=self.C,
                              sine_coeffs=self.sine_coeffs, crack=crack,
                              remainder=self.remainder, b_magnitude=self.b_magnitude)

    def to_dict(self) -> dict:
        out = {"lambda": self.lam, "k": self.k, "alpha": self.alpha, "C": self.C,
               "sine_coeffs": list(self.sine_coeffs)}
        if self.remainder:
            out["remainder"] = [[c, e] for c, e in self.remainder]
        return out

    @classmethod
    def from_dict(cls, data: dict, crack: CrackCurve | None = None) -> "ExpansionField":
        try:
            lam = float(data["lambda"])
            k = int(data["k"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"field descriptor needs 'lambda' and 'k': {exc}") from exc
        alpha = float(data.get("alpha", find_exponent(k).alpha))
        return cls(lam=lam, k=k, alpha=alpha, C=float(data.get("C", 0.0)),
                   sine_coeffs=tuple(data.get("sine_coeffs", ())),
                   crack=crack or CrackCurve.straight(),
                   remainder=tuple(tuple(p) for p in data.get("remainder", ())))


def eval_expansion(field: ExpansionField, x, y):
    return field.evaluate(x, y)


def grad_principal_mode(crack: CrackCurve, x, y) -> np.ndarray:
    """Closed-form gradient of ``r^{1/2} sin(phi/2)`` with the cut along the crack.

    The textbook expression divides by ``|y|``; it is rearranged here so the
    two half-planes ``x > 0`` and ``x <= 0`` each avoid the cancellation in
    ``-1 + x/r``.  On ``y = 0, x > 0`` it returns the limit ``(0, 1/(2 sqrt x))``.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    xa, ya = np.broadcast_arrays(xa, ya)
    r = np.hypot(xa, ya)
    if np.any(r == 0.0):
        raise OnCrack("gradient is singular at the tip")
    s = _side(crack, xa, ya, strict_axis=False).astype(float)
    k = 2.0 * math.sqrt(2.0) * r
    with np.errstate(divide="ignore", invalid="ignore"):
        right = xa > 0.0
        sp = np.sqrt(r + xa)
        sm = np.sqrt(r - xa)
        gx = np.where(right, -ya / (k * sp), -s * sm / k)
        gy = np.where(right, sp / k, s * ya / (k * sm))
    out = np.stack([gx, gy], axis=-1)
    return out


def _side_sign(side) -> float:
    if side in ("+", 1, 1.0, "plus", "upper"):
        return 1.0
    if side in ("-", -1, -1.0, "minus", "lower"):
        return -1.0
    raise InvalidArgument(f"side must be '+' or '-', got {side!r}")


def one_sided_gradient(field, t: float, side, crack: CrackCurve | None = None,
                       rtol: float = TRACE_RTOL) -> np.ndarray:
    """Trace of the gradient on the crack at ``(-t, f(t))`` from one side.

    Samples the gradient at normal offsets ``h in (1e-4, 5e-5, 2.5e-5) * t``
    and extrapolates to ``h = 0`` with two Richardson steps.  ``field`` is any
    object with a ``gradient(x, y, crack)`` method.
    """
    crack = crack or field.crack
    sgn = _side_sign(side)
    t = float(t)
    tau, nu = frame_vectors(crack, t)
    base = np.array([-t, float(crack.f(t))])
    hs = np.asarray(TRACE_OFFSETS) * t
    pts = base[None, :] + sgn * hs[:, None] * nu[None, :]
    g = np.asarray(field.gradient(pts[:, 0], pts[:, 1], crack))
    r1 = 2.0 * g[1] - g[0]
    r1b = 2.0 * g[2] - g[1]
    r2 = (4.0 * r1b - r1) / 3.0
    scale = max(float(np.linalg.norm(r2)), float(np.linalg.norm(g[2])), 1e-300)
    if float(np.linalg.norm(r2 - r1b)) > rtol * scale:
        raise NoConvergence(
            f"one-sided trace at t={t} did not settle "
            f"({float(np.linalg.norm(r2 - r1b)) / scale:.2e} relative)"
        )
    return r2
