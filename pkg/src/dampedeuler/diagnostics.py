"""Energy functionals, damped-wave source decomposition and residual,
characteristic-cone margin, and blowup detection.

The headline diagnostic tracks, along a trajectory,

    e_inst(t) = (1+t)^2 * [ S_{m-1}(v_t) + S_{m-1}(v_x) + S_{m-1}(u_x) ]
                + S_0(v) + S_0(u)
    ell_inst(t) = (1+t) * [ S_{m-1}(v_t) + S_{m-1}(v_x) + S_{m-1}(u_x) ]
                + S_0(u) / (1+t)

with S_k the squared discrete Sobolev norm of order k.  E_m is the running
sup of sqrt(e_inst), L_m the running time integral (trapezoid) of ell_inst,
and ratio = (E_m^2 + L_m) / e_inst(0).  In the damped small-data regime the
ratio is expected to stay bounded uniformly in time.  v_t comes from the
system right-hand side, not from time differencing, so the headline numbers
do not depend on the snapshot spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .dynamics import sym_rhs
from .errors import NonMonotoneTime, NonUniformTriple
from .grid import Field, derivative, l2_norm_sq, sobolev_norm_sq
from .states import ConsState, SymState

GRADIENT_BLOWUP = "GradientBlowup"
VACUUM_APPROACH = "VacuumApproach"
NON_FINITE = "NonFinite"
HYPERBOLICITY_LOSS = "HyperbolicityLoss"


@dataclass(frozen=True)
class Thresholds:
    """Detector settings; defaults sit far outside the small-data dynamic range."""

    gradient: float = 1e6
    vacuum: float = 1e-8
    support_tol: float = 1e-12

    def __post_init__(self):
        if self.gradient <= 0 or self.vacuum <= 0 or self.support_tol <= 0:
            raise ValueError("thresholds must be positive")


@dataclass(frozen=True)
class BlowupStatus:
    """kind is None while the state is healthy."""

    kind: str | None = None
    t: float | None = None
    location: int | None = None


def detect_sym_arrays(v, u, sigma, half_a, dx, thr: Thresholds, t: float) -> BlowupStatus:
    vx = kern.diff1(v, dx)
    ux = kern.diff1(u, dx)
    g = np.maximum(np.abs(vx), np.abs(ux))
    gm = np.max(g)
    if gm > thr.gradient:
        return BlowupStatus(GRADIENT_BLOWUP, t, int(np.argmax(g)))
    # the transform maps v back to a density rho = q**(2/A); q <= 0 or
    # rho < vacuum means the state left the model's density range
    q = 1.0 + half_a * v / sigma
    q_vac = thr.vacuum**half_a
    if half_a > 0:
        vac = (q <= 0.0) | (q < q_vac)
    else:
        vac = (q <= 0.0) | (q > q_vac)
    if np.any(vac):
        return BlowupStatus(VACUUM_APPROACH, t, int(np.argmax(vac)))
    bad = ~np.isfinite(v) | ~np.isfinite(u)
    if np.any(bad):
        return BlowupStatus(NON_FINITE, t, int(np.argmax(bad)))
    c = sigma + half_a * v
    if np.any(c <= 0.0):
        return BlowupStatus(HYPERBOLICITY_LOSS, t, int(np.argmax(c <= 0.0)))
    return BlowupStatus()


def detect_cons_arrays(rho, m, law, dx, thr: Thresholds, t: float) -> BlowupStatus:
    with np.errstate(all="ignore"):
        u = m / rho
    rx = kern.diff1(rho, dx)
    ux = kern.diff1(u, dx)
    g = np.maximum(np.abs(rx), np.abs(ux))
    gm = np.max(g)
    if gm > thr.gradient:
        return BlowupStatus(GRADIENT_BLOWUP, t, int(np.argmax(g)))
    vac = rho < thr.vacuum
    if np.any(vac):
        return BlowupStatus(VACUUM_APPROACH, t, int(np.argmax(vac)))
    bad = ~np.isfinite(rho) | ~np.isfinite(m)
    if np.any(bad):
        return BlowupStatus(NON_FINITE, t, int(np.argmax(bad)))
    return BlowupStatus()


def detect_blowup(s, tp, thresholds: Thresholds | None = None) -> BlowupStatus:
    """Classify the state: gradient blowup, vacuum/range escape, non-finite
    values, hyperbolicity loss, or healthy (kind None)."""
    thr = thresholds if thresholds is not None else Thresholds()
    if isinstance(s, SymState):
        return detect_sym_arrays(
            s.v.values, s.u.values, tp.sigma, tp.half_a, s.grid.dx, thr, s.t
        )
    if isinstance(s, ConsState):
        law = tp.law if hasattr(tp, "law") else tp
        return detect_cons_arrays(s.rho.values, s.m.values, law, s.grid.dx, thr, s.t)
    raise TypeError(f"expected SymState or ConsState, got {type(s).__name__}")


def energy_instant(s: SymState, tp, dl, m: int, linearized: bool = False):
    """Instantaneous (e_inst, ell_inst) at the state's time."""
    if m < 1:
        raise ValueError("m must be >= 1")
    vt, _ = sym_rhs(s, tp, dl, linearized)
    vx = derivative(s.v, 1)
    ux = derivative(s.u, 1)
    core = (
        sobolev_norm_sq(vt, m - 1)
        + sobolev_norm_sq(vx, m - 1)
        + sobolev_norm_sq(ux, m - 1)
    )
    w = 1.0 + s.t
    e_inst = w * w * core + l2_norm_sq(s.v) + l2_norm_sq(s.u)
    ell_inst = w * core + l2_norm_sq(s.u) / w
    return float(e_inst), float(ell_inst)


@dataclass(frozen=True)
class EnergySample:
    t: float
    e_inst: float
    ell_inst: float
    E_m: float
    L_m: float
    ratio: float


class EnergyReport:
    """Accumulates E_m (running sup) and L_m (running trapezoid integral)."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be >= 1")
        self.m = m
        self.samples: list[EnergySample] = []
        self.energy_sup = 0.0
        self.dissipation = 0.0
        self.e0: float | None = None

    @property
    def ratio(self) -> float:
        if not self.e0:
            return 0.0
        return (self.energy_sup**2 + self.dissipation) / self.e0

    def update(self, t: float, e_inst: float, ell_inst: float) -> "EnergyReport":
        if self.samples and t <= self.samples[-1].t:
            raise NonMonotoneTime(
                f"sample time {t} does not exceed previous {self.samples[-1].t}"
            )
        if self.e0 is None:
            self.e0 = float(e_inst)
        else:
            last = self.samples[-1]
            self.dissipation += 0.5 * (ell_inst + last.ell_inst) * (t - last.t)
        self.energy_sup = max(self.energy_sup, math.sqrt(max(e_inst, 0.0)))
        self.samples.append(
            EnergySample(t, e_inst, ell_inst, self.energy_sup, self.dissipation, self.ratio)
        )
        return self


def update_running(rep: EnergyReport, t, e_inst, ell_inst, dt=None) -> EnergyReport:
    """Fold one (t, e_inst, ell_inst) sample into the report; the trapezoid
    width comes from successive sample times (dt is accepted for symmetry
    with callers that track it)."""
    return rep.update(t, e_inst, ell_inst)


def _check_triple(prev: SymState, mid: SymState, nxt: SymState) -> float:
    dt1 = mid.t - prev.t
    dt2 = nxt.t - mid.t
    if dt1 <= 0 or dt2 <= 0:
        raise NonUniformTriple("snapshot times must increase across the triple")
    if abs(dt2 - dt1) > 1e-9 * max(dt1, dt2):
        raise NonUniformTriple(f"non-uniform spacing: {dt1} vs {dt2}")
    return 0.5 * (dt1 + dt2)


def _bracket(s: SymState, half_a: float) -> np.ndarray:
    dx = s.grid.dx
    vx = kern.diff1(s.v.values, dx)
    ux = kern.diff1(s.u.values, dx)
    return s.u.values * vx + half_a * s.v.values * ux


def wave_source_terms(prev: SymState, mid: SymState, nxt: SymState, tp, dl):
    """Source of the damped-wave identity satisfied by v, split into its
    damping-proportional, time-derivative, and space-derivative parts.

    Every bracket is bilinear in (v, u), so scaling all six input fields by a
    scales each part by a**2 exactly.  The time part uses a centered
    difference over the (uniformly spaced) triple.
    """
    dt = _check_triple(prev, mid, nxt)
    ha = tp.half_a
    dx = mid.grid.dx
    grid = mid.grid
    vx = kern.diff1(mid.v.values, dx)
    ux = kern.diff1(mid.u.values, dx)
    b_mid = mid.u.values * vx + ha * mid.v.values * ux
    conv = mid.u.values * ux + ha * mid.v.values * vx

    q_damp = -dl.rate(mid.t) * b_mid
    q_time = -(_bracket(nxt, ha) - _bracket(prev, ha)) / (2.0 * dt)
    q_space = tp.sigma * kern.diff1(conv, dx)
    q_total = q_damp + q_time + q_space
    return (
        Field(grid, q_damp),
        Field(grid, q_time),
        Field(grid, q_space),
        Field(grid, q_total),
    )


def wave_residual(prev: SymState, mid: SymState, nxt: SymState, tp, dl) -> float:
    """L2 norm of  D_tt v - sigma^2 v_xx + s(t) D_t v - Q  at the middle time.

    The squared wave speed on the spatial term is what the first-order system
    implies exactly; the residual of the background trajectory is zero.
    """
    dt = _check_triple(prev, mid, nxt)
    _, _, _, q = wave_source_terms(prev, mid, nxt, tp, dl)
    v_p, v_m, v_n = prev.v.values, mid.v.values, nxt.v.values
    dx = mid.grid.dx
    d_tt = (v_n - 2.0 * v_m + v_p) / (dt * dt)
    d_t = (v_n - v_p) / (2.0 * dt)
    v_xx = kern.diff1(kern.diff1(v_m, dx), dx)
    r = d_tt - tp.sigma**2 * v_xx + dl.rate(mid.t) * d_t - q.values
    return math.sqrt(l2_norm_sq(Field(mid.grid, r)))


def support_radius(f: Field, tol: float = 1e-12) -> float:
    """Largest |x| whose node value exceeds tol in magnitude; 0 if none do."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    mask = np.abs(f.values) > tol
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(f.grid.nodes()[mask])))


def fps_margin(traj, tp, R: float, tol: float = 1e-12) -> float:
    """Minimum over snapshots of cone radius minus measured support.

    The cone radius is R plus the trapezoid integral of the per-snapshot
    maximum characteristic speed; a nonnegative margin (up to grid slack)
    certifies finite propagation speed on the run.
    """
    margins = []
    cone = float(R)
    prev_t = None
    prev_c = None
    for s in traj:
        c = float(np.max(np.abs(s.u.values) + np.abs(tp.sigma + tp.half_a * s.v.values)))
        if prev_t is not None:
            cone += 0.5 * (c + prev_c) * (s.t - prev_t)
        supp = max(support_radius(s.v, tol), support_radius(s.u, tol))
        margins.append(cone - supp)
        prev_t, prev_c = s.t, c
    return float(min(margins))


def find_uniform_triple(times, t_target: float, rtol: float = 1e-6):
    """Index i such that (i-1, i, i+1) is uniformly spaced and times[i] is
    closest to t_target; None when no uniform triple exists."""
    best = None
    best_dist = math.inf
    for i in range(1, len(times) - 1):
        dt1 = times[i] - times[i - 1]
        dt2 = times[i + 1] - times[i]
        if dt1 <= 0 or dt2 <= 0:
            continue
        if abs(dt2 - dt1) > rtol * max(dt1, dt2):
            continue
        dist = abs(times[i] - t_target)
        if dist < best_dist:
            best, best_dist = i, dist
    return best
