"""Config files, single runs, parameter sweeps, and file outputs.

Config format: INI/TOML-style sections with key = value pairs, one section
per field group ([law], [damping], [initial], [grid], [solver],
[diagnostics], [output]).  Omitted keys take the documented defaults, which
target the damped small-data regime: logarithmic law with K1 = 1, mu = 3,
lambda = 1, epsilon = 0.05, R = 1, m = 3, grid of 2000 nodes on [-60, 60].

Exit-code contract: 0 completed, 2 blowup detected, 1 error.
"""

from __future__ import annotations

import configparser
import csv
import itertools
import json
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .diagnostics import Thresholds
from .dynamics import (
    FORMULATIONS,
    STATUS_BLOWUP,
    STATUS_COMPLETED,
    STATUS_ERROR,
    SYMMETRIC,
    DampingLaw,
    RunResult,
    SolverConfig,
    run,
)
from .eos import CHAPLYGIN, KINDS, LOGARITHMIC, POLYTROPIC, PressureLaw
from .errors import ParseError, ValidationError
from .grid import CUSTOM, Grid1D, InitialData, PROFILES, load_profile_table, make_initial, profile_values
from .transform import TransformParams

log = logging.getLogger("dampedeuler")

OUTDIR_ENV = "DAMPEDEULER_OUTDIR"

CSV_COLUMNS = [
    "t",
    "e_inst",
    "ell_inst",
    "E_m",
    "L_m",
    "ratio",
    "max_abs_vx",
    "max_abs_ux",
    "support_radius_v",
    "support_radius_u",
    "c_max",
    "dt",
]

SWEEP_COLUMNS = [
    "mu",
    "lambda",
    "epsilon",
    "law",
    "status",
    "blowup_time",
    "final_ratio",
    "fps_margin",
    "error",
]

SWEEP_KEYS = ("mu", "lambda", "epsilon", "law")

_DEFAULT_A = {LOGARITHMIC: -1.0, POLYTROPIC: 2.0, CHAPLYGIN: -2.0}


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "."
    csv: bool = True
    svg: bool = False


@dataclass(frozen=True)
class RunConfig:
    law: PressureLaw
    damping: DampingLaw
    initial: InitialData
    grid: Grid1D
    solver: SolverConfig
    formulation: str = SYMMETRIC
    m: int = 3
    thresholds: Thresholds = Thresholds()
    output: OutputConfig = OutputConfig()
    profile_path: str | None = None

    def echo(self) -> dict:
        return {
            "law": {
                "kind": self.law.kind,
                "A": self.law.A,
                "K1": self.law.K1,
                "K": self.law.K,
            },
            "damping": {"mu": self.damping.mu, "lambda": self.damping.lam},
            "initial": {
                "epsilon": self.initial.epsilon,
                "R": self.initial.R,
                "profile": self.profile_path or self.initial.profile,
            },
            "grid": {"x_min": self.grid.x_min, "x_max": self.grid.x_max, "n": self.grid.n},
            "solver": {
                "cfl": self.solver.cfl,
                "t_end": self.solver.t_end,
                "snapshot_stride": self.solver.snapshot_stride,
                "limiter": self.solver.limiter,
                "formulation": self.formulation,
            },
            "diagnostics": {
                "m": self.m,
                "grad_threshold": self.thresholds.gradient,
                "vacuum_threshold": self.thresholds.vacuum,
                "support_tol": self.thresholds.support_tol,
            },
            "output": {
                "directory": self.output.directory,
                "csv": self.output.csv,
                "svg": self.output.svg,
            },
        }


_SCHEMA = {
    "law": {"kind": str, "A": float, "gamma": float, "K1": float, "K": float},
    "damping": {"mu": float, "lambda": float},
    "initial": {"epsilon": float, "R": float, "profile": str, "rho_bar": float},
    "grid": {"x_min": float, "x_max": float, "n": int},
    "solver": {
        "cfl": float,
        "t_end": float,
        "snapshot_stride": int,
        "limiter": str,
        "formulation": str,
    },
    "diagnostics": {
        "m": int,
        "grad_threshold": float,
        "vacuum_threshold": float,
        "support_tol": float,
    },
    "output": {"directory": str, "csv": bool, "svg": bool},
}

_BOOL = {"true": True, "yes": True, "on": True, "1": True,
         "false": False, "no": False, "off": False, "0": False}


def _coerce(section, key, raw, target):
    text = raw.strip().strip('"').strip("'")
    try:
        if target is bool:
            if text.lower() not in _BOOL:
                raise ValueError
            return _BOOL[text.lower()]
        if target is int:
            return int(text)
        if target is float:
            return float(text)
        return text
    except ValueError:
        raise ValidationError(
            f"[{section}] {key} = {raw!r} is not a valid {target.__name__}"
        ) from None


def _parse_file(path) -> dict:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys like R, K1, A are case-sensitive
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ParseError(f"cannot parse config {path}: {exc}") from exc
    values: dict = {}
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ValidationError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            target = _SCHEMA[section].get(key)
            if target is None:
                raise ValidationError(f"unknown key {key!r} in [{section}]")
            values.setdefault(section, {})[key] = _coerce(section, key, raw, target)
    return values


def _build_law(law_cfg: dict) -> PressureLaw:
    kind = law_cfg.get("kind", LOGARITHMIC).lower()
    if kind not in KINDS:
        raise ValidationError(f"[law] kind must be one of {KINDS}, got {kind!r}")
    k1 = law_cfg.get("K1", 1.0)
    k = law_cfg.get("K", 0.0)
    a = law_cfg.get("A")
    gamma = law_cfg.get("gamma")
    if gamma is not None:
        if kind == POLYTROPIC:
            a_from_gamma = gamma - 1.0
        elif kind == CHAPLYGIN:
            a_from_gamma = -gamma - 1.0
        else:
            raise ValidationError("[law] gamma is not meaningful for the logarithmic law")
        if a is not None and a != a_from_gamma:
            raise ValidationError(f"[law] A={a} contradicts gamma={gamma}")
        a = a_from_gamma
    if a is None:
        a = _DEFAULT_A[kind]
    try:
        return PressureLaw(kind, a, k1, k)
    except ValueError as exc:
        raise ValidationError(f"[law] {exc}") from exc


def _from_values(values: dict) -> RunConfig:
    law = _build_law(values.get("law", {}))

    damp_cfg = values.get("damping", {})
    try:
        damping = DampingLaw(damp_cfg.get("mu", 3.0), damp_cfg.get("lambda", 1.0))
    except ValueError as exc:
        raise ValidationError(f"[damping] {exc}") from exc

    init_cfg = values.get("initial", {})
    profile = init_cfg.get("profile", "bump")
    profile_path = None
    table = None
    if profile == CUSTOM:
        raise ValidationError("[initial] profile should name the table file directly")
    if profile not in PROFILES:
        # any value that is not a built-in profile name is read as a table path
        profile_path = profile
        table = load_profile_table(profile_path)
        profile = CUSTOM
    try:
        initial = InitialData(
            epsilon=init_cfg.get("epsilon", 0.05),
            R=init_cfg.get("R", 1.0),
            profile=profile,
            rho_bar=init_cfg.get("rho_bar", 1.0),
            table=table,
        )
    except ValueError as exc:
        raise ValidationError(f"[initial] {exc}") from exc

    grid_cfg = values.get("grid", {})
    try:
        grid = Grid1D(grid_cfg.get("x_min", -60.0), grid_cfg.get("x_max", 60.0), grid_cfg.get("n", 2000))
    except ValueError as exc:
        raise ValidationError(f"[grid] {exc}") from exc

    solver_cfg = values.get("solver", {})
    formulation = solver_cfg.get("formulation", SYMMETRIC).lower()
    if formulation not in FORMULATIONS:
        raise ValidationError(f"[solver] formulation must be one of {FORMULATIONS}")
    try:
        solver = SolverConfig(
            cfl=solver_cfg.get("cfl", 0.4),
            t_end=solver_cfg.get("t_end", 50.0),
            snapshot_stride=solver_cfg.get("snapshot_stride", 10),
            limiter=solver_cfg.get("limiter", "minmod").lower(),
        )
    except ValueError as exc:
        raise ValidationError(f"[solver] {exc}") from exc

    diag_cfg = values.get("diagnostics", {})
    m = diag_cfg.get("m", 3)
    if m < 1:
        raise ValidationError("[diagnostics] m must be >= 1")
    try:
        thresholds = Thresholds(
            gradient=diag_cfg.get("grad_threshold", 1e6),
            vacuum=diag_cfg.get("vacuum_threshold", 1e-8),
            support_tol=diag_cfg.get("support_tol", 1e-12),
        )
    except ValueError as exc:
        raise ValidationError(f"[diagnostics] {exc}") from exc

    out_cfg = values.get("output", {})
    output = OutputConfig(
        directory=out_cfg.get("directory", "."),
        csv=out_cfg.get("csv", True),
        svg=out_cfg.get("svg", False),
    )

    rc = RunConfig(
        law=law,
        damping=damping,
        initial=initial,
        grid=grid,
        solver=solver,
        formulation=formulation,
        m=m,
        thresholds=thresholds,
        output=output,
        profile_path=profile_path,
    )
    _validate(rc)
    return rc


def _validate(rc: RunConfig) -> None:
    """Cross-field checks done at load time, before any stepping."""
    import numpy as np

    if not (rc.grid.x_min < -rc.initial.R and rc.grid.x_max > rc.initial.R):
        raise ValidationError(
            f"grid [{rc.grid.x_min}, {rc.grid.x_max}] must strictly contain "
            f"[-{rc.initial.R}, {rc.initial.R}]"
        )
    base = profile_values(rc.initial, rc.grid.nodes())
    rho_min = rc.initial.rho_bar + rc.initial.epsilon * float(np.min(base))
    if rho_min <= 0.0:
        raise ValidationError(
            f"NonPositiveDensity: epsilon={rc.initial.epsilon} drives the density "
            f"to {rho_min} at its minimum"
        )
    if rc.m < 3:
        log.warning("m=%d is below 3; the energy bound is tracked at reduced order", rc.m)
    if rc.damping.mu <= 2.0 and rc.damping.lam == 1.0:
        log.warning(
            "mu=%g with lambda=1 is outside the damped global-existence regime (mu > 2); "
            "the run is exploratory",
            rc.damping.mu,
        )


def load_config(path) -> RunConfig:
    """Parse and validate a config file; defaults fill every omitted key."""
    return _from_values(_parse_file(path))


def execute(rc: RunConfig) -> RunResult:
    """Run the experiment described by rc and attach the config echo."""
    tp = TransformParams.from_law(rc.law)
    cons0, sym0 = make_initial(rc.initial, rc.grid, tp)
    initial = sym0 if rc.formulation == SYMMETRIC else cons0
    result = run(
        rc.solver,
        rc.formulation,
        tp,
        rc.damping,
        initial,
        m=rc.m,
        thresholds=rc.thresholds,
        support_bound=rc.initial.R,
    )
    result.config_echo = rc.echo()
    return result


def _fmt(value) -> str:
    return repr(float(value))


def write_run_csv(path, samples) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in samples:
            writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def write_result_json(path, result: RunResult) -> None:
    last = result.report.samples[-1] if result.report.samples else None
    payload = {
        "schema_version": result.schema_version,
        "status": result.status,
        "formulation": result.formulation,
        "blowup": None
        if result.blowup is None
        else {
            "kind": result.blowup.kind,
            "t": result.blowup.t,
            "location": result.blowup.location,
        },
        "fps_margin": result.fps_margin,
        "steps": result.steps,
        "wall_time_s": result.wall_time,
        "e_inst_initial": result.report.e0,
        "sup_ratio": max((s.ratio for s in result.report.samples), default=0.0),
        "final": None
        if last is None
        else {"t": last.t, "E_m": last.E_m, "L_m": last.L_m, "ratio": last.ratio},
        "error_message": result.error_message,
        "config": result.config_echo,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


_SVG_COLORS = ("#1b6ca8", "#c23b22", "#2e7d32", "#7b1fa2")


def write_svg_chart(path, xs, series: dict, title: str, width=720, height=420) -> None:
    """Minimal native SVG line chart: one polyline per named series."""
    pad = 56.0
    xs = list(xs)
    ys_all = [y for ys in series.values() for y in ys]
    if not xs or not ys_all:
        xs, ys_all = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x):
        return pad + (x - x_lo) / (x_hi - x_lo) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y_lo) / (y_hi - y_lo) * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15" '
        f'font-family="sans-serif">{title}</text>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" '
        f'stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{pad}" y="{height - pad + 18}" font-size="11" '
        f'font-family="sans-serif">{x_lo:.4g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 18}" text-anchor="end" font-size="11" '
        f'font-family="sans-serif">{x_hi:.4g}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" text-anchor="end" font-size="11" '
        f'font-family="sans-serif">{y_lo:.4g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="11" '
        f'font-family="sans-serif">{y_hi:.4g}</text>',
    ]
    for i, (name, ys) in enumerate(series.items()):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        parts.append(
            f'<text x="{width - pad - 4}" y="{pad + 16 + 16 * i}" text-anchor="end" '
            f'font-size="12" font-family="sans-serif" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def _resolve_outdir(rc: RunConfig, override) -> Path:
    out = override or os.environ.get(OUTDIR_ENV) or rc.output.directory
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _exit_code(status: str) -> int:
    return {STATUS_COMPLETED: 0, STATUS_BLOWUP: 2, STATUS_ERROR: 1}[status]


def cmd_run(config, outdir=None) -> int:
    """Execute one run and write run.csv, result.json, and optional SVG charts."""
    try:
        rc = config if isinstance(config, RunConfig) else load_config(config)
        result = execute(rc)
        out = _resolve_outdir(rc, outdir)
        if rc.output.csv:
            write_run_csv(out / "run.csv", result.samples)
        write_result_json(out / "result.json", result)
        if rc.output.svg:
            ts = [s["t"] for s in result.samples]
            write_svg_chart(
                out / "energy.svg",
                ts,
                {"E_m": [s["E_m"] for s in result.samples],
                 "L_m": [s["L_m"] for s in result.samples]},
                "running energy sup and dissipation integral",
            )
            write_svg_chart(
                out / "ratio.svg",
                ts,
                {"ratio": [s["ratio"] for s in result.samples]},
                "(E_m^2 + L_m) / E_m(0)^2",
            )
        blow = ""
        if result.blowup is not None:
            blow = f" ({result.blowup.kind} at t={result.blowup.t:.6g})"
        print(f"{result.status}{blow}: {result.steps} steps, "
              f"fps_margin={result.fps_margin:.6g}, outputs in {out}")
        return _exit_code(result.status)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.error("%s", exc)
        return 1


def _apply_vary(rc: RunConfig, key: str, raw: str) -> RunConfig:
    if key == "mu":
        return replace(rc, damping=DampingLaw(float(raw), rc.damping.lam))
    if key == "lambda":
        return replace(rc, damping=DampingLaw(rc.damping.mu, float(raw)))
    if key == "epsilon":
        return replace(rc, initial=replace(rc.initial, epsilon=float(raw)))
    kind = raw.strip().lower()
    if kind not in KINDS:
        raise ValidationError(f"unknown law kind {kind!r} in sweep")
    law = PressureLaw(kind, _DEFAULT_A[kind], rc.law.K1, rc.law.K)
    return replace(rc, law=law)


def _sweep_row(task) -> dict:
    rc, keys, combo = task
    params = {
        "mu": rc.damping.mu,
        "lambda": rc.damping.lam,
        "epsilon": rc.initial.epsilon,
        "law": rc.law.kind,
    }
    for key, raw in zip(keys, combo):
        params[key] = str(raw).strip().lower() if key == "law" else float(raw)
    row = dict(
        params,
        status=STATUS_ERROR,
        blowup_time=-1.0,
        final_ratio=0.0,
        fps_margin=0.0,
        error="",
    )
    try:
        case = rc
        for key, raw in zip(keys, combo):
            case = _apply_vary(case, key, str(raw))
        _validate(case)
        result = execute(case)
        row["status"] = result.status
        if result.blowup is not None and result.blowup.t is not None:
            row["blowup_time"] = result.blowup.t
        if result.report.samples:
            row["final_ratio"] = result.report.samples[-1].ratio
        row["fps_margin"] = result.fps_margin
    except Exception as exc:  # noqa: BLE001 - recorded per row, sweep continues
        row["error"] = str(exc)
    return row


def cmd_sweep(config, vary: dict, outdir=None, cap: int = 64, workers: int = 1) -> int:
    """Cartesian-product sweep; one row per run in sweep.csv.

    Rows are ordered by the parameter product, never by completion order, so
    the file is reproducible also with workers > 1.
    """
    try:
        rc = config if isinstance(config, RunConfig) else load_config(config)
        if not vary:
            raise ValidationError("sweep needs at least one --vary key=v1,v2,...")
        for key, vals in vary.items():
            if key not in SWEEP_KEYS:
                raise ValidationError(f"sweep key must be one of {SWEEP_KEYS}, got {key!r}")
            if not vals:
                raise ValidationError(f"sweep list for {key!r} is empty")
        keys = list(vary.keys())
        combos = list(itertools.product(*(vary[k] for k in keys)))
        if len(combos) > cap:
            raise ValidationError(f"sweep size {len(combos)} exceeds the cap {cap}")

        tasks = [(rc, keys, combo) for combo in combos]
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_sweep_row, tasks))
        else:
            rows = [_sweep_row(task) for task in tasks]

        out = _resolve_outdir(rc, outdir)
        with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(SWEEP_COLUMNS)
            for row in rows:
                writer.writerow(
                    [
                        _fmt(row["mu"]),
                        _fmt(row["lambda"]),
                        _fmt(row["epsilon"]),
                        row["law"],
                        row["status"],
                        _fmt(row["blowup_time"]),
                        _fmt(row["final_ratio"]),
                        _fmt(row["fps_margin"]),
                        row["error"],
                    ]
                )
        for row in rows:
            print(f"mu={row['mu']} lambda={row['lambda']} epsilon={row['epsilon']} "
                  f"law={row['law']}: {row['status']}")
        if any(r["status"] == STATUS_ERROR for r in rows):
            return 1
        if any(r["status"] == STATUS_BLOWUP for r in rows):
            return 2
        return 0
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.error("%s", exc)
        return 1


def cmd_check(suite: str) -> int:
    """Run the named acceptance suite; exit 0 iff every criterion passes."""
    from . import acceptance

    return acceptance.run_suite(suite)
