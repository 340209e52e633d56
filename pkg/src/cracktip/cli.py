"""Command-line front end.

Every command writes ``report.json`` into the output directory, plus CSV plot
data and a PNG figure where one makes sense.  Exit codes: 0 success,
1 invalid input, 2 numerical non-convergence, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import plotting
from .balance import FunctionalParams, balance_sweep, energy
from .blowup import (
    BlowupTrace,
    MAX_LEVELS,
    analyze_tip,
    default_ladder,
    sup_ladder,
    synthetic_pair,
)
from .crackgeom import CrackCurve, read_crack_csv
from .errors import CracktipError, InvalidArgument, KindMismatch
from .exponents import K_MAX_LIMIT, exponent_table, tan_form
from .fields import ExpansionField
from .fitting import fit_circle_modes, fit_crack_exponent
from .slit_solver import (
    BoundaryData,
    HarmonicSolution,
    chebyshev_angles,
    neumann_residual,
    read_boundary_csv,
    solve_dirichlet_straight,
)

COMMANDS = ("roots", "solve", "balance", "blowup", "fit", "energy", "pipeline")

DEFAULTS: dict[str, Any] = {
    "out": "cracktip-out",
    "k_max": 5,
    "n_modes": 16,
    "n_t": 9,
    "rho0": 0.2,
    "n_rho": 12,
    "k_level": 1,
    "max_levels": MAX_LEVELS,
    "tol": 1e-6,
    "sine_coeffs": None,
    "lam": None,
    "r0": 0.05,
    "k": 1,
    "plots": True,
}

TAN_RANGE = (0.6, 5.4)
TAN_STEP = 1e-3
POLE_MASK = 5e-3


# ---------------------------------------------------------------- output


def _fmt(x: float) -> str:
    return "%.17g" % x


def _to_json(obj: Any, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj)) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in seq):
            return "[" + ", ".join(_to_json(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _to_json(v, indent + 1) for v in seq) + "\n" + end + "]"
    raise InvalidArgument(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """JSON with every float printed to 17 significant digits."""
    return _to_json(obj) + "\n"


def write_csv(path: Path, header: Sequence[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(v)) for v in row) + "\n")
    return path


def tan_curve_rows():
    n = int(round((TAN_RANGE[1] - TAN_RANGE[0]) / TAN_STEP)) + 1
    rows = []
    for i in range(n):
        a = round(TAN_RANGE[0] + i * TAN_STEP, 10)
        lhs, rhs = tan_form(a)
        near_pole = abs(a - math.floor(a) - 0.5) < POLE_MASK
        rows.append((a, math.nan if near_pole else lhs, rhs))
    return rows


def _ladder_of(report: dict) -> dict | None:
    if "trace" in report:
        return report["trace"]
    levels = report.get("levels")
    if levels:
        return levels[-1]["trace"]
    return None


def emit_plot_data(report: dict, kind: str, path: str | Path) -> Path:
    """CSV plot data of the requested kind; the report must match it."""
    path = Path(path)
    rkind = report.get("report")
    if kind == "tan_curve":
        if rkind != "roots":
            raise KindMismatch(f"tan_curve needs a roots report, got {rkind!r}")
        return write_csv(path, ("alpha", "lhs", "rhs"), tan_curve_rows())
    if kind == "ladder":
        trace = _ladder_of(report) if rkind in ("blowup", "pipeline") else None
        if trace is None:
            raise KindMismatch(f"ladder needs a blowup or pipeline report, got {rkind!r}")
        return write_csv(path, ("rho", "S", "sigma", "ratio"),
                         zip(trace["rhos"], trace["S"], trace["sigma"], trace["ratio"]))
    if kind == "residuals":
        if rkind != "balance":
            raise KindMismatch(f"residuals needs a balance report, got {rkind!r}")
        rows = report["rows"]
        return write_csv(path, ("t", "curvature", "jump", "residual"),
                         ((r["t"], r["curvature"], r["jump"], r["residual"]) for r in rows))
    raise KindMismatch(f"unknown plot-data kind {kind!r}")


# ---------------------------------------------------------------- config


@dataclass
class RunConfig:
    command: str
    out: Path
    inputs: dict[str, Path] = dc_field(default_factory=dict)
    options: dict[str, Any] = dc_field(default_factory=dict)

    def get(self, key: str):
        return self.options.get(key, DEFAULTS.get(key))


INPUT_KEYS = ("field", "crack", "boundary", "circle")


def _float_list(text) -> list[float]:
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidArgument(f"expected comma-separated numbers, got {text!r}") from exc


def _parse_synthetic(tokens) -> dict:
    out = {"k": 1, "C": 0.1, "lambda": 1.0, "o": 0.0, "sine_coeffs": []}
    if isinstance(tokens, dict):
        tokens = [f"{k}={v}" for k, v in tokens.items()]
    sines = {}
    for tok in tokens:
        key, sep, val = str(tok).partition("=")
        if not sep:
            raise InvalidArgument(f"synthetic parameters look like key=value, got {tok!r}")
        key = key.strip()
        try:
            if key == "k":
                out["k"] = int(val)
            elif key in ("C", "lambda", "o"):
                out[key] = float(val)
            elif key.startswith("c") and key[1:].isdigit():
                sines[int(key[1:])] = float(val)
            else:
                raise InvalidArgument(f"unknown synthetic parameter {key!r}")
        except ValueError as exc:
            raise InvalidArgument(f"bad value in {tok!r}") from exc
    if sines:
        n = max(sines)
        out["sine_coeffs"] = [sines.get(j, 0.0) for j in range(1, n + 1)]
    return out


def _check_ranges(cfg: RunConfig) -> None:
    limits = {"k_max": (1, K_MAX_LIMIT), "n_modes": (1, 200), "n_t": (1, 10000),
              "n_rho": (2, 60), "k_level": (1, 64), "max_levels": (1, 64), "k": (1, 64)}
    for key, (lo, hi) in limits.items():
        val = cfg.get(key)
        if val is None or isinstance(val, bool) or int(val) != val or not lo <= val <= hi:
            raise InvalidArgument(f"{key.replace('_', '-')} must be an integer in [{lo}, {hi}], got {val!r}")
    for key, lo, hi in (("rho0", 0.0, 1.0), ("r0", 0.0, 0.1)):
        val = float(cfg.get(key))
        if not lo < val <= hi:
            raise InvalidArgument(f"{key} must lie in ({lo}, {hi}], got {val}")
    if not float(cfg.get("tol")) > 0.0:
        raise InvalidArgument("tol must be positive")
    lam = cfg.get("lam")
    if lam is not None and not float(lam) > 0.0:
        raise InvalidArgument("lambda must be positive")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cracktip", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file of option defaults (flags take precedence)")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    S = argparse.SUPPRESS

    def common(sp):
        sp.add_argument("-o", "--out", default=S, help="output directory")
        sp.add_argument("--no-plots", dest="plots", action="store_false", default=S,
                        help="skip the PNG figures")

    def ladder_opts(sp):
        sp.add_argument("--rho0", type=float, default=S, help="first ladder radius (default 0.2)")
        sp.add_argument("--n-rho", type=int, default=S, help="ladder length, rho0 * 2^-i")

    sp = sub.add_parser("roots", help="characteristic exponents alpha_k")
    sp.add_argument("--k-max", type=int, default=S)
    common(sp)

    sp = sub.add_parser("solve", help="harmonic field on the slit disk from Dirichlet data")
    sp.add_argument("--boundary", default=S, help="CSV with header phi,value")
    sp.add_argument("--sine-coeffs", default=S,
                    help="closed-form data: coefficients of sin((2j+1) phi / 2), j = 0, 1, ...")
    sp.add_argument("--n-modes", type=int, default=S)
    common(sp)

    sp = sub.add_parser("balance", help="curvature balance along the crack")
    sp.add_argument("--field", default=S, help="field descriptor JSON")
    sp.add_argument("--crack", default=S, help="crack CSV with header t,f (default straight)")
    sp.add_argument("--lambda", dest="lam", type=float, default=S)
    sp.add_argument("--n-t", type=int, default=S, help="sweep t = 0.1, ..., 0.9 (n points)")
    common(sp)

    sp = sub.add_parser("blowup", help="sup-norm ladder at one expansion level")
    sp.add_argument("--field", default=S)
    sp.add_argument("--crack", default=S)
    sp.add_argument("--lambda", dest="lam", type=float, default=S)
    sp.add_argument("--k-level", type=int, default=S)
    sp.add_argument("--sine-coeffs", default=S, help="c_1, ..., c_{k-1} to subtract")
    ladder_opts(sp)
    common(sp)

    sp = sub.add_parser("fit", help="crack exponent and tip coefficient from samples")
    sp.add_argument("--crack", default=S)
    sp.add_argument("--circle", default=S, help="CSV phi,value of u on the circle r = r0")
    sp.add_argument("--r0", type=float, default=S)
    sp.add_argument("--lambda", dest="lam", type=float, default=S)
    sp.add_argument("--k", type=int, default=S)
    sp.add_argument("--sine-coeffs", default=S)
    common(sp)

    sp = sub.add_parser("energy", help="Dirichlet plus length energy")
    sp.add_argument("--field", default=S)
    sp.add_argument("--crack", default=S)
    sp.add_argument("--lambda", dest="lam", type=float, default=S)
    common(sp)

    sp = sub.add_parser("pipeline", help="level iteration, fits and classification")
    sp.add_argument("--synthetic", nargs="+", default=S, metavar="KEY=VALUE",
                    help="k, C, lambda, o (planted remainder), c1, c2, ...")
    sp.add_argument("--field", default=S)
    sp.add_argument("--crack", default=S)
    sp.add_argument("--lambda", dest="lam", type=float, default=S)
    sp.add_argument("--max-levels", type=int, default=S)
    sp.add_argument("--tol", type=float, default=S)
    ladder_opts(sp)
    common(sp)
    return p


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    cfg_path = args.pop("config", None)
    options: dict[str, Any] = {}
    if cfg_path:
        try:
            with open(cfg_path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidArgument(f"cannot read config {cfg_path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise InvalidArgument("config file must hold a JSON object")
        options.update({k.replace("-", "_"): v for k, v in loaded.items()})
    options.update(args)
    if "lambda" in options and "lam" not in args:
        options["lam"] = options.pop("lambda")
    base = Path(cfg_path).parent if cfg_path and "out" not in args else Path(".")
    inputs = {}
    for key in INPUT_KEYS:
        val = options.pop(key, None)
        if val is None:
            continue
        path = Path(val)
        if key not in args and not path.is_absolute():
            path = base / path
        if not path.is_file():
            raise InvalidArgument(f"--{key}: no such file {str(path)!r}")
        inputs[key] = path
    out = Path(options.pop("out", DEFAULTS["out"]))
    cfg = RunConfig(command, out, inputs, options)
    _check_ranges(cfg)
    return cfg


# ---------------------------------------------------------------- commands


def _load_crack(cfg: RunConfig, field_data: dict | None = None) -> CrackCurve:
    if "crack" in cfg.inputs:
        return read_crack_csv(cfg.inputs["crack"])
    if field_data and "crack" in field_data:
        return CrackCurve.from_dict(field_data["crack"])
    return CrackCurve.straight()


def _load_field(cfg: RunConfig):
    if "field" not in cfg.inputs:
        raise InvalidArgument(f"{cfg.command} needs --field")
    try:
        with open(cfg.inputs["field"]) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{cfg.inputs['field']}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidArgument("field descriptor must be a JSON object")
    crack = _load_crack(cfg, data)
    if cfg.get("lam") is not None:
        data = dict(data, **{"lambda": float(cfg.get("lam"))})
    try:
        if "basis" in data:
            field = HarmonicSolution.from_dict(data)
            lam = float(data.get("lambda", field.principal_coeff))
        else:
            field = ExpansionField.from_dict(data, crack)
            lam = field.lam
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CracktipError):
            raise
        raise InvalidArgument(f"malformed field descriptor: {exc}") from exc
    return field, crack, FunctionalParams(lam)


def _ladder(cfg: RunConfig) -> list[float]:
    return default_ladder(int(cfg.get("n_rho")), float(cfg.get("rho0")))


def cmd_roots(cfg: RunConfig) -> dict:
    table = exponent_table(int(cfg.get("k_max")))
    roots = [{"k": r.k, "alpha": r.alpha, "bracket": list(r.bracket), "residual": r.residual,
              "b": r.b, "b_magnitude": r.b_magnitude, "A_lambda": r.A_lambda} for r in table]
    report = {"report": "roots", "k_max": len(table), "roots": roots}
    csv_path = emit_plot_data(report, "tan_curve", cfg.out / "tan_curve.csv")
    if cfg.get("plots"):
        rows = np.array(tan_curve_rows())
        plotting.plot_tan_curve(rows[:, 0], rows[:, 1], rows[:, 2], [r.alpha for r in table],
                                cfg.out / "tan_curve.png")
    report["plot_data"] = [csv_path.name]
    return report


def cmd_solve(cfg: RunConfig) -> dict:
    n = int(cfg.get("n_modes"))
    if "boundary" in cfg.inputs:
        g = read_boundary_csv(cfg.inputs["boundary"])
    else:
        coeffs = _float_list(cfg.get("sine_coeffs")) or [1.0]

        def h(phi):
            return sum(c * np.sin((2 * j + 1) * 0.5 * phi) for j, c in enumerate(coeffs))

        g = BoundaryData.from_function(h)
    sol = solve_dirichlet_straight(g, n)
    residual = neumann_residual(sol, CrackCurve.straight(), 64)
    report = {"report": "solve", "n_modes": n, "solution": sol.to_dict(),
              "principal_coeff": sol.principal_coeff, "fit_residual": sol.fit_residual,
              "neumann_residual": residual}
    if cfg.get("plots"):
        if g.is_sampled:
            phi = np.array([p for p, _ in g.samples])
            data = np.array([v for _, v in g.samples])
        else:
            phi = chebyshev_angles(400)
            data = g(phi)
        plotting.plot_boundary_fit(phi, data, sol.boundary_trace(phi), cfg.out / "boundary_fit.png")
    return report


def cmd_balance(cfg: RunConfig) -> dict:
    field, crack, params = _load_field(cfg)
    n = int(cfg.get("n_t"))
    ts = np.linspace(0.1, 0.9, n) if n > 1 else np.array([0.5])
    rows = balance_sweep(field, crack, params, ts)
    report = {"report": "balance", "lambda": params.lam,
              "rows": [{"t": r.t, "curvature": r.curvature, "jump": r.jump,
                        "residual": r.residual} for r in rows],
              "max_abs_residual": max(abs(r.residual) for r in rows)}
    emit_plot_data(report, "residuals", cfg.out / "residuals.csv")
    if cfg.get("plots"):
        plotting.plot_residuals([r.t for r in rows], [r.curvature for r in rows],
                                [r.jump for r in rows], [r.residual for r in rows],
                                cfg.out / "residuals.png")
    report["plot_data"] = ["residuals.csv"]
    return report


def _ladder_figure(cfg: RunConfig, trace: dict, title: str) -> None:
    if cfg.get("plots"):
        plotting.plot_ladder(trace["rhos"], trace["S"], trace["sigma"], trace["ratio"],
                             cfg.out / "ladder.png", title)


def cmd_blowup(cfg: RunConfig) -> dict:
    field, crack, params = _load_field(cfg)
    k_level = int(cfg.get("k_level"))
    sines = _float_list(cfg.get("sine_coeffs"))
    trace: BlowupTrace = sup_ladder(field, crack, params, _ladder(cfg), k_level, sines)
    report = {"report": "blowup", "trace": trace.to_dict(), "decay_slope": trace.decay_slope(),
              "S_slope": trace.S_slope()}
    emit_plot_data(report, "ladder", cfg.out / "ladder.csv")
    _ladder_figure(cfg, report["trace"], f"level {k_level}")
    report["plot_data"] = ["ladder.csv"]
    return report


def cmd_fit(cfg: RunConfig) -> dict:
    if not ("crack" in cfg.inputs or "circle" in cfg.inputs):
        raise InvalidArgument("fit needs --crack and/or --circle")
    report: dict[str, Any] = {"report": "fit"}
    if "crack" in cfg.inputs:
        crack = read_crack_csv(cfg.inputs["crack"])
        t = np.asarray(crack.t_nodes)
        f = np.asarray(crack.f_nodes)
        keep = t > 0.0
        fit = fit_crack_exponent(np.column_stack([t[keep], f[keep]]))
        report["crack_fit"] = fit.to_dict()
        report["beta"] = fit.beta
    if "circle" in cfg.inputs:
        g = read_boundary_csv(cfg.inputs["circle"])
        phi = np.array([p for p, _ in g.samples])
        vals = np.array([v for _, v in g.samples])
        k = int(cfg.get("k"))
        lam = float(cfg.get("lam") if cfg.get("lam") is not None else 1.0)
        from .exponents import find_exponent

        sines = cfg.get("sine_coeffs")
        sines = None if sines is None else _float_list(sines)
        circ = fit_circle_modes(phi, vals, float(cfg.get("r0")), lam, k,
                                find_exponent(k).alpha, sines)
        report["tip_fit"] = {"C": circ.C, "principal": circ.principal,
                             "sine_coeffs": list(circ.sine_coeffs),
                             "remainder_ratio": circ.remainder_ratio}
    return report


def cmd_energy(cfg: RunConfig) -> dict:
    field, crack, params = _load_field(cfg)
    e = energy(field, crack, params)
    return {"report": "energy", "lambda": params.lam, **e.to_dict()}


def cmd_pipeline(cfg: RunConfig) -> dict:
    syn = cfg.get("synthetic")
    if syn is not None:
        syn_args = _parse_synthetic(syn)
        if cfg.get("lam") is not None:
            syn_args["lambda"] = float(cfg.get("lam"))
        u, crack = synthetic_pair(syn_args["k"], syn_args["C"], syn_args["lambda"], syn_args["sine_coeffs"],
                                  syn_args["o"])
        params = FunctionalParams(syn_args["lambda"])
        source = {"synthetic": syn_args}
    else:
        u, crack, params = _load_field(cfg)
        source = {"field": cfg.inputs["field"].name}
    result = analyze_tip(u, crack, params, _ladder(cfg), int(cfg.get("max_levels")),
                         float(cfg.get("tol")))
    report = {"report": "pipeline", "source": source, "lambda": params.lam, **result.to_dict()}
    if report["levels"]:
        emit_plot_data(report, "ladder", cfg.out / "ladder.csv")
        trace = report["levels"][-1]["trace"]
        _ladder_figure(cfg, trace, f"level {trace['k_level']}")
        report["plot_data"] = ["ladder.csv"]
    return report


HANDLERS = {"roots": cmd_roots, "solve": cmd_solve, "balance": cmd_balance,
            "blowup": cmd_blowup, "fit": cmd_fit, "energy": cmd_energy,
            "pipeline": cmd_pipeline}


def run(config: RunConfig) -> int:
    try:
        config.out.mkdir(parents=True, exist_ok=True)
        report = HANDLERS[config.command](config)
        (config.out / "report.json").write_text(dumps(report))
    except CracktipError as exc:
        print(f"cracktip {config.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"cracktip {config.command}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except CracktipError as exc:
        print(f"cracktip: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
