"""Method-of-lines evolution of both formulations.

Symmetric form: central 4th-order derivatives + classic RK4, no artificial
viscosity.  That is valid for the smooth small-data regime; runs that steepen
into shocks are expected to trip the blowup detectors rather than resolve
them.  Conservative form: Rusanov flux with optional minmod MUSCL
reconstruction, so large-data steepening stays observable without an
immediate NaN cascade.  The damping term s(t)*u (resp. s(t)*m) is evaluated
unsplit inside the RHS, so RK4's temporal order applies to the full system.

Time stepping is frozen over windows of 2*snapshot_stride steps and
re-evaluated from the CFL condition at window boundaries; that makes every
non-overlapping snapshot triple uniformly spaced in time, which the
time-centered diagnostics require.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .errors import (
    HyperbolicityLoss,
    InvalidVRange,
    NonFiniteValue,
    NonPositiveDensity,
)
from .grid import Field
from .states import ConsState, SymState
from .transform import TransformParams, rho_to_v

SYMMETRIC = "symmetric"
CONSERVATIVE = "conservative"
FORMULATIONS = (SYMMETRIC, CONSERVATIVE)

STATUS_COMPLETED = "CompletedGlobal"
STATUS_BLOWUP = "BlowupDetected"
STATUS_ERROR = "Error"

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class DampingLaw:
    """Friction coefficient s(t) = mu / (1+t)**lam."""

    mu: float
    lam: float = 1.0

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("mu must be >= 0")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")

    def rate(self, t: float) -> float:
        return self.mu / (1.0 + t) ** self.lam


@dataclass(frozen=True)
class SolverConfig:
    """cfl, final time, snapshot cadence, and the conservative limiter.

    `support_floor`: symmetric-run amplitudes below this are flushed to zero
    after each step, keeping the discrete support compact at the measurement
    tolerance (None means "use the support tolerance of the diagnostics").
    `filter_gamma`: optional grid-scale low-pass (0 disables, the default:
    the filter regularizes steepening profiles and would mask the blowup
    detectors).
    """

    cfl: float = 0.4
    t_end: float = 50.0
    snapshot_stride: int = 10
    limiter: str = "minmod"
    support_floor: float | None = None
    filter_gamma: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ValueError("cfl must be in (0, 1)")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")
        if self.limiter not in ("none", "minmod"):
            raise ValueError("limiter must be 'none' or 'minmod'")
        if self.support_floor is not None and self.support_floor < 0:
            raise ValueError("support_floor must be >= 0")
        if not 0.0 <= self.filter_gamma <= 2.0:
            raise ValueError("filter_gamma must be in [0, 2]")


def sym_rhs(s: SymState, tp: TransformParams, dl: DampingLaw, linearized: bool = False):
    """Time derivative (dv, du) of the symmetric system at state s."""
    dv, du = kern.sym_rhs(
        s.v.values, s.u.values, tp.sigma, tp.half_a, dl.rate(s.t), s.grid.dx, linearized
    )
    return Field(s.grid, dv), Field(s.grid, du)


def cons_rhs(s: ConsState, law, dl: DampingLaw, limiter: str = "minmod"):
    """Time derivative (drho, dm) of the conservative system at state s.

    limiter "minmod" gives TVD slopes (robust near steep fronts); "none"
    gives unlimited central MUSCL slopes (sharper on smooth profiles).
    """
    drho, dm = kern.cons_rhs(
        s.rho.values,
        s.m.values,
        law.A,
        law.K1,
        law.K,
        dl.rate(s.t),
        s.grid.dx,
        limiter == "minmod",
    )
    return Field(s.grid, drho), Field(s.grid, dm)


def _sym_max_speed(v, u, sigma, half_a):
    c = sigma + half_a * v
    if not np.all(c > 0.0):
        bad = int(np.argmin(c > 0.0))
        raise HyperbolicityLoss(f"wave speed not positive at node {bad}")
    return float(np.max(np.abs(u) + c))


def _cons_max_speed(rho, m, law):
    if not np.all(rho > 0.0):
        bad = int(np.argmin(rho > 0.0))
        raise NonPositiveDensity(f"density must stay > 0, violated at node {bad}")
    c = np.sqrt(law.K1) * rho ** (0.5 * law.A)
    return float(np.max(np.abs(m / rho) + c))


def cfl_dt(s, tp_or_law, cfg: SolverConfig) -> float:
    """Explicit stable step: cfl * dx / max(|u| + c)."""
    if isinstance(s, SymState):
        tp = tp_or_law
        speed = _sym_max_speed(s.v.values, s.u.values, tp.sigma, tp.half_a)
    else:
        law = tp_or_law.law if isinstance(tp_or_law, TransformParams) else tp_or_law
        speed = _cons_max_speed(s.rho.values, s.m.values, law)
    return cfg.cfl * s.grid.dx / speed


def rk4_step(s, dt: float, rhs):
    """One classic RK4 step; rhs(state) -> (dField, dField).

    The time-dependent coefficients inside rhs are evaluated at the stage
    times t, t+dt/2, t+dt.  x-uniform equilibria are preserved exactly.
    """
    if isinstance(s, SymState):
        a, b = s.v.values, s.u.values
        rebuild = lambda av, bv, tv: SymState(Field(s.grid, av), Field(s.grid, bv), tv)
    else:
        a, b = s.rho.values, s.m.values
        rebuild = lambda av, bv, tv: ConsState(Field(s.grid, av), Field(s.grid, bv), tv)
    t = s.t
    k1a, k1b = (f.values for f in rhs(s))
    s2 = rebuild(a + 0.5 * dt * k1a, b + 0.5 * dt * k1b, t + 0.5 * dt)
    k2a, k2b = (f.values for f in rhs(s2))
    s3 = rebuild(a + 0.5 * dt * k2a, b + 0.5 * dt * k2b, t + 0.5 * dt)
    k3a, k3b = (f.values for f in rhs(s3))
    s4 = rebuild(a + dt * k3a, b + dt * k3b, t + dt)
    k4a, k4b = (f.values for f in rhs(s4))
    sixth = dt / 6.0
    return rebuild(
        a + sixth * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
        b + sixth * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
        t + dt,
    )


def _rk4_arrays(a, b, t, dt, rhs_arrays):
    """Array-level RK4 used by the run loop (no Field wrapping per stage)."""
    k1a, k1b = rhs_arrays(a, b, t)
    k2a, k2b = rhs_arrays(a + 0.5 * dt * k1a, b + 0.5 * dt * k1b, t + 0.5 * dt)
    k3a, k3b = rhs_arrays(a + 0.5 * dt * k2a, b + 0.5 * dt * k2b, t + 0.5 * dt)
    k4a, k4b = rhs_arrays(a + dt * k3a, b + dt * k3b, t + dt)
    sixth = dt / 6.0
    return (
        a + sixth * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
        b + sixth * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
    )


@dataclass
class Snapshot:
    t: float
    state: object
    sym: SymState


@dataclass
class RunResult:
    status: str
    formulation: str
    blowup: object
    report: object
    snapshots: list
    samples: list
    fps_margin: float
    steps: int
    wall_time: float
    error_message: str | None = None
    config_echo: dict | None = None
    schema_version: int = SCHEMA_VERSION

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]


def run(
    cfg: SolverConfig,
    formulation: str,
    tp: TransformParams,
    dl: DampingLaw,
    initial,
    m: int = 3,
    thresholds=None,
    support_bound: float | None = None,
) -> RunResult:
    """Evolve `initial` to cfg.t_end, sampling diagnostics every
    snapshot_stride steps.

    Returns CompletedGlobal when t_end is reached, BlowupDetected when a
    detector fires (gradient threshold, vacuum or transform-range escape,
    non-finite values, loss of hyperbolicity), and Error for anything else.
    `support_bound` is the declared initial support radius R used by the
    characteristic-cone margin; when omitted the measured radius is used.
    """
    from . import diagnostics as diag

    if formulation not in FORMULATIONS:
        raise ValueError(f"unknown formulation {formulation!r}")
    is_sym = formulation == SYMMETRIC
    if is_sym and not isinstance(initial, SymState):
        raise ValueError("symmetric runs start from a SymState")
    if not is_sym and not isinstance(initial, ConsState):
        raise ValueError("conservative runs start from a ConsState")
    thr = thresholds if thresholds is not None else diag.Thresholds()

    grid = initial.grid
    dx = grid.dx
    law = tp.law
    sigma, half_a = tp.sigma, tp.half_a
    stride = cfg.snapshot_stride
    window = 2 * stride

    if is_sym:

        def rhs_arrays(a, b, t):
            return kern.sym_rhs(a, b, sigma, half_a, dl.rate(t), dx)

        def detect(a, b, t):
            return diag.detect_sym_arrays(a, b, sigma, half_a, dx, thr, t)

        def max_speed(a, b):
            return _sym_max_speed(a, b, sigma, half_a)

    else:

        def rhs_arrays(a, b, t):
            return kern.cons_rhs(a, b, law.A, law.K1, law.K, dl.rate(t), dx, cfg.limiter == "minmod")

        def detect(a, b, t):
            return diag.detect_cons_arrays(a, b, law, dx, thr, t)

        def max_speed(a, b):
            return _cons_max_speed(a, b, law)

    report = diag.EnergyReport(m)
    samples: list[dict] = []
    snapshots: list[Snapshot] = []

    def sample(t, a, b, dt):
        if is_sym:
            v, u = a, b
            state = SymState(Field(grid, v.copy()), Field(grid, u.copy()), t)
            sym = state
        else:
            state = ConsState(Field(grid, a.copy()), Field(grid, b.copy()), t)
            v = rho_to_v(tp, a)
            u = b / a
            sym = SymState(Field(grid, v), Field(grid, u), t)
        e_inst, ell_inst = diag.energy_instant(sym, tp, dl, m)
        report.update(t, e_inst, ell_inst)
        vx = kern.diff1(sym.v.values, dx)
        ux = kern.diff1(sym.u.values, dx)
        c_max = float(np.max(np.abs(sym.u.values) + np.abs(sigma + half_a * sym.v.values)))
        samples.append(
            {
                "t": t,
                "e_inst": e_inst,
                "ell_inst": ell_inst,
                "E_m": report.energy_sup,
                "L_m": report.dissipation,
                "ratio": report.ratio,
                "max_abs_vx": float(np.max(np.abs(vx))),
                "max_abs_ux": float(np.max(np.abs(ux))),
                "support_radius_v": diag.support_radius(sym.v, thr.support_tol),
                "support_radius_u": diag.support_radius(sym.u, thr.support_tol),
                "c_max": c_max,
                "dt": dt,
            }
        )
        snapshots.append(Snapshot(t, state, sym))

    a = (initial.v if is_sym else initial.rho).values.copy()
    b = (initial.u if is_sym else initial.m).values.copy()
    t = float(initial.t)
    t_end = float(cfg.t_end)
    if not t_end > t:
        raise ValueError("t_end must exceed the initial time")
    eps_end = 1e-12 * max(1.0, t_end)

    floor = cfg.support_floor if cfg.support_floor is not None else thr.support_tol
    gamma = cfg.filter_gamma

    status = STATUS_COMPLETED
    blowup = None
    error_message = None
    steps = 0
    dt = 0.0
    started = time.perf_counter()

    try:
        with np.errstate(all="ignore"):
            while t < t_end - eps_end:
                if steps % window == 0:
                    dt = cfg.cfl * dx / max_speed(a, b)
                    remaining = t_end - t
                    if window * dt > remaining:
                        dt = remaining / window
                if steps % stride == 0:
                    sample(t, a, b, dt)
                a, b = _rk4_arrays(a, b, t, dt, rhs_arrays)
                if is_sym:
                    if gamma > 0.0:
                        a = kern.smooth_filter(a, gamma)
                        b = kern.smooth_filter(b, gamma)
                    if floor > 0.0:
                        a[np.abs(a) < floor] = 0.0
                        b[np.abs(b) < floor] = 0.0
                t += dt
                steps += 1
                found = detect(a, b, t)
                if found.kind is not None:
                    blowup = found
                    status = STATUS_BLOWUP
                    break
            else:
                sample(t, a, b, dt)
    except (NonPositiveDensity, InvalidVRange) as exc:
        blowup = diag.BlowupStatus(diag.VACUUM_APPROACH, t, None)
        status = STATUS_BLOWUP
        error_message = str(exc)
    except HyperbolicityLoss as exc:
        blowup = diag.BlowupStatus(diag.HYPERBOLICITY_LOSS, t, None)
        status = STATUS_BLOWUP
        error_message = str(exc)
    except NonFiniteValue as exc:
        blowup = diag.BlowupStatus(diag.NON_FINITE, t, None)
        status = STATUS_BLOWUP
        error_message = str(exc)

    if snapshots:
        R = support_bound
        if R is None:
            first = snapshots[0].sym
            R = max(
                diag.support_radius(first.v, thr.support_tol),
                diag.support_radius(first.u, thr.support_tol),
            )
        fps = diag.fps_margin([s.sym for s in snapshots], tp, R, thr.support_tol)
    else:
        fps = float(support_bound) if support_bound is not None else 0.0

    return RunResult(
        status=status,
        formulation=formulation,
        blowup=blowup,
        report=report,
        snapshots=snapshots,
        samples=samples,
        fps_margin=fps,
        steps=steps,
        wall_time=time.perf_counter() - started,
        error_message=error_message,
    )
