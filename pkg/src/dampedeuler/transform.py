"""Change of variables between density and the sound-speed variable v.

With sigma = sqrt(K1), the map

    v = (2/A) * (sqrt(p'(rho)) - sigma) = (2*sigma/A) * (rho**(A/2) - 1)

sends the unit background to v = 0 and turns the conservative system into a
symmetric first-order system in (v, u).  Its inverse is
rho = (1 + A*v/(2*sigma))**(2/A), defined while 1 + A*v/(2*sigma) > 0.

The local wave speed of the symmetric system is c = sigma + (A/2)*v, and this
equals sqrt(p'(rho)) at rho = v_to_rho(v) identically; that algebraic identity
is what makes the two formulations interchangeable and is checked by the
acceptance suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eos import PressureLaw
from .errors import HyperbolicityLoss, InvalidVRange
from .grid import Field
from .states import ConsState, SymState


@dataclass(frozen=True)
class TransformParams:
    """Pressure law together with the background wave speed sigma = sqrt(K1)."""

    law: PressureLaw
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if abs(self.sigma * self.sigma - self.law.K1) > 1e-12 * self.law.K1:
            raise ValueError("sigma**2 must equal K1")

    @classmethod
    def from_law(cls, law: PressureLaw) -> "TransformParams":
        return cls(law, math.sqrt(law.K1))

    @property
    def half_a(self) -> float:
        return 0.5 * self.law.A


def rho_to_v(tp: TransformParams, rho):
    """Map density to the sound-speed variable; the background rho = 1 maps to 0."""
    from .eos import _checked

    arr = _checked(rho)
    a = tp.law.A
    out = (2.0 * tp.sigma / a) * (arr ** (0.5 * a) - 1.0)
    return float(out) if out.ndim == 0 else out


def v_to_rho(tp: TransformParams, v):
    """Inverse map; requires 1 + A*v/(2*sigma) > 0."""
    arr = np.asarray(v, dtype=np.float64)
    a = tp.law.A
    q = 1.0 + a * arr / (2.0 * tp.sigma)
    if not np.all(q > 0.0):
        if arr.ndim == 0:
            raise InvalidVRange(f"v={float(arr)} is outside the invertible range")
        bad = int(np.argmin(q > 0.0))
        raise InvalidVRange(f"v outside the invertible range at index {bad}")
    out = q ** (2.0 / a)
    return float(out) if out.ndim == 0 else out


def char_speeds(v, u, tp: TransformParams):
    """Characteristic speeds (u - c, u + c) with c = sigma + (A/2)*v."""
    varr = np.asarray(v, dtype=np.float64)
    uarr = np.asarray(u, dtype=np.float64)
    c = tp.sigma + tp.half_a * varr
    if not np.all(c > 0.0):
        if c.ndim == 0:
            raise HyperbolicityLoss(f"wave speed {float(c)} is not positive")
        bad = int(np.argmin(c > 0.0))
        raise HyperbolicityLoss(f"wave speed not positive at index {bad}")
    lo, hi = uarr - c, uarr + c
    if np.asarray(v).ndim == 0 and np.asarray(u).ndim == 0:
        return float(lo), float(hi)
    return lo, hi


def map_cons_to_sym(cs: ConsState, tp: TransformParams) -> SymState:
    """Pointwise (rho, m) -> (v, u); u = m / rho."""
    rho = cs.rho.values
    v = rho_to_v(tp, rho)
    u = cs.m.values / rho
    return SymState(Field(cs.grid, v), Field(cs.grid, u), cs.t)


def map_sym_to_cons(ss: SymState, tp: TransformParams) -> ConsState:
    """Pointwise (v, u) -> (rho, m = rho*u); exact inverse of map_cons_to_sym."""
    rho = v_to_rho(tp, ss.v.values)
    m = rho * ss.u.values
    return ConsState(Field(ss.grid, rho), Field(ss.grid, m), ss.t)
