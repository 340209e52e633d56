"""Harmonic problems on the slit unit disk by mode collocation.

Fields are expanded in the branch power modes that are harmonic off the
slit:

* ``half_sine j``:   ``r^{(2j+1)/2} sin((2j+1) phi / 2)``
* ``int_cosine m``:  ``r^m cos(m phi)``
* ``muntz_cosine j``: ``r^{alpha_j} cos(alpha_j phi)``

The first two families have zero normal derivative on the straight slit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .crackgeom import CrackCurve, frame_vectors
from .errors import BadProfile, IllConditioned, InsufficientSamples, InvalidArgument
from .exponents import find_exponent
from .fields import COSINE, SINE, evaluate_terms, gradient_terms, one_sided_gradient
from .fitting import MuntzFit, lstsq_scaled, muntz_fit

HALF_SINE = "half_sine"
INT_COSINE = "int_cosine"
MUNTZ_COSINE = "muntz_cosine"

COND_LIMIT = 1e12
N_VALIDATION = 2001
MUNTZ_DELTA = 1e-4
MUNTZ_GRADING = 1.2
TIP_DECAY_MIN = 0.05


@dataclass(frozen=True)
class Mode:
    family: str
    index: int

    @property
    def exponent(self) -> float:
        if self.family == HALF_SINE:
            return (2 * self.index + 1) / 2.0
        if self.family == INT_COSINE:
            return float(self.index)
        if self.family == MUNTZ_COSINE:
            return find_exponent(self.index).alpha
        raise InvalidArgument(f"unknown mode family {self.family!r}")

    @property
    def kind(self) -> str:
        return SINE if self.family == HALF_SINE else COSINE

    def tag(self) -> dict:
        return {"family": self.family, "index": self.index}

    def trace(self, phi) -> np.ndarray:
        """Boundary values on the unit circle."""
        a = self.exponent
        return np.sin(a * phi) if self.kind == SINE else np.cos(a * phi)


@dataclass(frozen=True)
class SlitBasis:
    modes: tuple[Mode, ...]

    @classmethod
    def dirichlet(cls, n_modes: int) -> "SlitBasis":
        return cls(tuple(Mode(HALF_SINE, j) for j in range(n_modes))
                   + tuple(Mode(INT_COSINE, m) for m in range(n_modes)))

    @classmethod
    def muntz(cls, n_modes: int) -> "SlitBasis":
        return cls(tuple(Mode(MUNTZ_COSINE, j) for j in range(1, n_modes + 1)))

    def __len__(self) -> int:
        return len(self.modes)

    def trace_matrix(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        return np.column_stack([m.trace(phi) for m in self.modes])


@dataclass(frozen=True)
class HarmonicSolution:
    basis: SlitBasis
    coeffs: np.ndarray
    fit_residual: float
    constant: float = 0.0
    truncated_modes: int = 0
    check_phi: np.ndarray = dc_field(default=None, repr=False, compare=False)

    def terms(self) -> list[tuple[float, str, float]]:
        out = [(float(c), m.kind, m.exponent) for m, c in zip(self.basis.modes, self.coeffs)]
        if self.constant:
            out.append((self.constant, COSINE, 0.0))
        return out

    @property
    def principal_coeff(self) -> float:
        for m, c in zip(self.basis.modes, self.coeffs):
            if m.family == HALF_SINE and m.index == 0:
                return float(c)
        return 0.0

    def coeff(self, family: str, index: int) -> float:
        for m, c in zip(self.basis.modes, self.coeffs):
            if m.family == family and m.index == index:
                return float(c)
        raise KeyError((family, index))

    def evaluate(self, x, y, crack: CrackCurve | None = None):
        val = evaluate_terms(self.terms(), crack or CrackCurve.straight(), x, y)
        return float(val) if np.ndim(val) == 0 else val

    def gradient(self, x, y, crack: CrackCurve | None = None) -> np.ndarray:
        return gradient_terms(self.terms(), crack or CrackCurve.straight(), x, y)

    def eval_polar(self, r, phi):
        """Values at straight-slit polar coordinates ``(r, phi)``, ``|phi| <= pi``."""
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(np.broadcast(r, phi).shape)
        for c, kind, a in self.terms():
            ra = np.power(r, a)
            out = out + c * ra * (np.sin(a * phi) if kind == SINE else np.cos(a * phi))
        return out

    def boundary_trace(self, phi) -> np.ndarray:
        return self.basis.trace_matrix(phi) @ self.coeffs + self.constant

    def to_dict(self) -> dict:
        return {"basis": [m.tag() for m in self.basis.modes],
                "coeffs": [float(c) for c in self.coeffs],
                "fit_residual": float(self.fit_residual)}

    @classmethod
    def from_dict(cls, data: dict) -> "HarmonicSolution":
        modes = tuple(Mode(d["family"], int(d["index"])) for d in data["basis"])
        return cls(SlitBasis(modes), np.asarray(data["coeffs"], dtype=float),
                   float(data.get("fit_residual", 0.0)))


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet data on the unit circle.

    Either ``samples`` (strictly increasing ``phi`` in ``(-pi, pi]``), or a
    closed form: ``principal`` is ``lam sin(phi/2)``; ``perturbed`` adds
    ``eps * h(phi)``.
    """

    samples: tuple[tuple[float, float], ...] = ()
    form: str | None = None
    lam: float = 1.0
    eps: float = 0.0
    h: Callable | None = None

    def __post_init__(self):
        if self.form is None:
            if not self.samples:
                raise InvalidArgument("boundary data needs samples or a closed form")
            phi = np.array([p for p, _ in self.samples])
            if np.any(phi <= -math.pi) or np.any(phi > math.pi):
                raise InvalidArgument("sample angles must lie in (-pi, pi]")
            if not np.all(np.diff(phi) > 0):
                raise InvalidArgument("sample angles must be strictly increasing")
        elif self.form == "perturbed":
            if self.h is None:
                raise InvalidArgument("perturbed boundary data needs h")
        elif self.form != "principal":
            raise InvalidArgument(f"unknown closed form {self.form!r}")

    @classmethod
    def from_function(cls, func: Callable, lam: float = 1.0) -> "BoundaryData":
        """Closed form ``func(phi)`` (stored as a zero-principal perturbation)."""
        return cls(form="perturbed", lam=0.0, eps=1.0, h=func)

    @property
    def is_sampled(self) -> bool:
        return self.form is None

    def __call__(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        if self.form is None:
            raise InvalidArgument("sampled boundary data has no closed form")
        out = self.lam * np.sin(0.5 * phi)
        if self.form == "perturbed":
            out = out + self.eps * np.asarray(self.h(phi), dtype=float)
        return out


def chebyshev_angles(n: int) -> np.ndarray:
    """Chebyshev points of the first kind mapped to ``(-pi, pi)``, increasing."""
    i = np.arange(n)
    return -math.pi * np.cos((2 * i + 1) * math.pi / (2 * n))


def solve_dirichlet_straight(g: BoundaryData, n_modes: int) -> HarmonicSolution:
    """Least-squares collocation in the Neumann-exact basis on the straight slit."""
    if int(n_modes) != n_modes or n_modes < 2:
        raise InvalidArgument(f"n_modes must be an integer >= 2, got {n_modes}")
    basis = SlitBasis.dirichlet(int(n_modes))
    if g.is_sampled:
        phi = np.array([p for p, _ in g.samples])
        vals = np.array([v for _, v in g.samples])
        if phi.size < 4 * n_modes:
            raise InsufficientSamples(f"need >= {4 * n_modes} samples, got {phi.size}")
        check_phi = phi
        check_vals = vals
    else:
        phi = chebyshev_angles(4 * int(n_modes))
        vals = g(phi)
        mid = np.linspace(-math.pi, math.pi, N_VALIDATION + 2)[1:-1]
        check_phi = np.concatenate([phi, mid])
        check_vals = g(check_phi)
    mat = basis.trace_matrix(phi)
    coeffs, cond, truncated = lstsq_scaled(mat, vals)
    if cond ** 2 > COND_LIMIT:
        raise IllConditioned(f"normal-equation condition {cond ** 2:.3e} exceeds {COND_LIMIT:.0e}")
    misfit = float(np.max(np.abs(basis.trace_matrix(check_phi) @ coeffs - check_vals)))
    return HarmonicSolution(basis, coeffs, misfit, truncated_modes=truncated, check_phi=check_phi)


def muntz_grid(delta: float = MUNTZ_DELTA, ratio: float = MUNTZ_GRADING, n_uniform: int = 200) -> np.ndarray:
    """Sample radii on ``[delta, 1]``: geometric (ratio 1.2) toward 0, uniform near 1."""
    n_geo = int(math.ceil(math.log(1.0 / delta) / math.log(ratio)))
    geo = delta * ratio ** np.arange(n_geo + 1)
    geo = geo[geo < 1.0]
    uni = np.linspace(delta, 1.0, n_uniform)
    return np.unique(np.concatenate([geo, uni, [1.0]]))


@dataclass(frozen=True)
class RadialProfile:
    """Profile ``g0`` on ``[0, 1]``: a power sum or samples of ``g0'``."""

    powers: tuple[tuple[float, float], ...] = ()
    r_samples: tuple[float, ...] = ()
    d1_samples: tuple[float, ...] = ()

    @classmethod
    def power_sum(cls, terms: Sequence[tuple[float, float]]) -> "RadialProfile":
        """``g0 = sum c r^e`` from ``(c, e)`` pairs."""
        return cls(powers=tuple((float(c), float(e)) for c, e in terms))

    @classmethod
    def from_derivative_samples(cls, r, d1) -> "RadialProfile":
        return cls(r_samples=tuple(float(v) for v in r), d1_samples=tuple(float(v) for v in d1))

    def derivative(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.powers:
            out = np.zeros_like(r)
            for c, e in self.powers:
                out = out + c * e * np.power(r, e - 1.0)
            return out
        return np.interp(r, self.r_samples, self.d1_samples)

    def check_tip(self, tol: float = 1e-8) -> None:
        if self.powers:
            for c, e in self.powers:
                if c != 0.0 and e <= 1.0:
                    raise BadProfile(f"g0' does not vanish at 0 (term {c} r^{e})")
        elif self.r_samples:
            r = np.asarray(self.r_samples)
            d = np.abs(np.asarray(self.d1_samples))
            if r[0] == 0.0:
                if d[0] > tol:
                    raise BadProfile(f"g0'(0) = {d[0]:.3e} does not vanish")
                return
            # samples start at r > 0: g0' must at least decay like a positive power
            head = slice(0, min(6, r.size))
            if np.all(d[head] <= tol):
                return
            if np.any(d[head] == 0.0) or r.size < 2:
                raise BadProfile("cannot judge g0' near 0 from the leading samples")
            p = np.polyfit(np.log(r[head]), np.log(d[head]), 1)[0]
            if p < TIP_DECAY_MIN:
                raise BadProfile(f"g0' does not decay toward 0 (log-log slope {p:.3g})")


def solve_coupled_muntz(g0: RadialProfile, n_modes: int, A_lambda: float,
                        system: str = "lemma", anchor: tuple[float, float, float] | None = None,
                        allow_truncation: bool = True) -> HarmonicSolution:
    """Even field ``w = a0 + sum a_j r^{alpha_j} cos(alpha_j phi)`` from the crack profile.

    ``system="lemma"`` expands ``g0'`` in ``{r^(alpha_j - 1)}`` and sets
    ``a_j = coef_j / alpha_j``.  ``system="coupled"`` uses the exponents
    ``alpha_j - 1/2`` that the single-mode Neumann relation actually pairs
    with ``r^alpha_j cos(alpha_j phi)``: a profile term
    ``gamma_j r^(alpha_j + 1/2)`` maps to ``a_j = A_lambda gamma_j / (2 sin(pi alpha_j))``.
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise InvalidArgument(f"n_modes must be a positive integer, got {n_modes}")
    if not A_lambda > 0.0:
        raise InvalidArgument(f"A_lambda must be positive, got {A_lambda}")
    if system not in ("lemma", "coupled"):
        raise InvalidArgument(f"unknown system {system!r}")
    g0.check_tip()
    roots = [find_exponent(j) for j in range(1, int(n_modes) + 1)]
    shift = 1.0 if system == "lemma" else 0.5
    exps = [root.alpha - shift for root in roots]
    r = muntz_grid()
    d1 = g0.derivative(r)
    fit: MuntzFit = muntz_fit(list(zip(r, d1)), exps, include_constant=False,
                              allow_truncation=allow_truncation)
    if system == "lemma":
        a = np.array([c / root.alpha for c, root in zip(fit.coeffs, roots)])
    else:
        # coef of r^(alpha-1/2) in g0' is gamma (alpha + 1/2)
        gamma = np.array([c / (root.alpha + 0.5) for c, root in zip(fit.coeffs, roots)])
        a = np.array([A_lambda * gj / (2.0 * math.sin(math.pi * root.alpha))
                      for gj, root in zip(gamma, roots)])
    basis = SlitBasis.muntz(int(n_modes))
    a0 = 0.0
    sol = HarmonicSolution(basis, a, fit.residual_sup, truncated_modes=fit.truncated_modes)
    if anchor is not None:
        ax, ay, av = anchor
        a0 = float(av) - float(sol.evaluate(ax, ay))
        sol = HarmonicSolution(basis, a, fit.residual_sup, constant=a0,
                               truncated_modes=fit.truncated_modes)
    return sol


def neumann_trace_profile(sol, crack: CrackCurve, n_samples: int,
                          t_range: tuple[float, float] = (1e-2, 0.9)) -> tuple[np.ndarray, np.ndarray]:
    """Per-point mean of ``|nu . grad|`` over the two sides, on graded ``t``."""
    if int(n_samples) != n_samples or n_samples < 1:
        raise InvalidArgument(f"n_samples must be a positive integer, got {n_samples}")
    t_lo, t_hi = t_range
    t_hi = min(t_hi, 0.9 * crack.domain_end)
    ts = np.geomspace(t_lo, t_hi, int(n_samples)) if n_samples > 1 else np.array([t_hi])
    vals = np.empty_like(ts)
    for i, t in enumerate(ts):
        _, nu = frame_vectors(crack, float(t))
        up = float(one_sided_gradient(sol, t, "+", crack) @ nu)
        down = float(one_sided_gradient(sol, t, "-", crack) @ nu)
        vals[i] = 0.5 * (abs(up) + abs(down))
    return ts, vals


def neumann_residual(sol, crack: CrackCurve, n_samples: int,
                     t_range: tuple[float, float] = (1e-2, 0.9)) -> float:
    """Max over graded crack points of the two-sided mean ``|d_nu sol|``."""
    _, vals = neumann_trace_profile(sol, crack, n_samples, t_range)
    return float(np.max(vals))


def read_boundary_csv(path: str | Path) -> BoundaryData:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["phi", "value"]:
            raise InvalidArgument(f"{path}: expected header 'phi,value', got {','.join(header)!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError) as exc:
                raise InvalidArgument(f"{path}:{lineno}: bad row {row!r}") from exc
    return BoundaryData(samples=tuple(rows))
