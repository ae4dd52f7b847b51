"""Grid states of the two formulations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDensity
from .grid import Field


@dataclass
class SymState:
    """Symmetric-form unknowns (v, u) at time t."""

    v: Field
    u: Field
    t: float

    def __post_init__(self):
        if self.v.grid is not self.u.grid and self.v.grid != self.u.grid:
            raise ValueError("v and u must share a grid")
        if self.t < 0:
            raise ValueError("time must be >= 0")

    @property
    def grid(self):
        return self.v.grid


@dataclass
class ConsState:
    """Conservative unknowns (rho, m = rho*u) at time t; rho stays positive."""

    rho: Field
    m: Field
    t: float

    def __post_init__(self):
        if self.rho.grid is not self.m.grid and self.rho.grid != self.m.grid:
            raise ValueError("rho and m must share a grid")
        if self.t < 0:
            raise ValueError("time must be >= 0")
        if not np.all(self.rho.values > 0.0):
            bad = int(np.argmin(self.rho.values > 0.0))
            raise NonPositiveDensity(f"density must stay > 0, violated at node {bad}")

    @property
    def grid(self):
        return self.rho.grid

    def velocity(self) -> np.ndarray:
        return self.m.values / self.rho.values
