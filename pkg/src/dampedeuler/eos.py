"""Barotropic pressure laws sharing p'(rho) = K1 * rho**A.

Three branches of one family:

* polytropic (gamma law), A > 0:       p = K1/(A+1) * rho**(A+1) + K,  gamma = A+1 > 1
* generalized Chaplygin, -2 <= A < -1: p = K1/(A+1) * rho**(A+1) + K,  gamma = -A-1 in (0, 1]
* logarithmic, A = -1 exactly:         p = K1*ln(rho) + K

The logarithmic law is keyed to A = -1: that is the unique exponent for which
p' = K1*rho**A integrates to a logarithm.  All three have p'(rho) > 0 for
rho > 0 (squared sound speed), and the logarithmic pressure takes both signs,
is undefined at vacuum, and is unbounded both as rho -> 0+ and rho -> inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDensity

POLYTROPIC = "polytropic"
CHAPLYGIN = "chaplygin"
LOGARITHMIC = "logarithmic"
KINDS = (POLYTROPIC, CHAPLYGIN, LOGARITHMIC)


@dataclass(frozen=True)
class PressureLaw:
    """One branch of the family, with exponent A, scale K1 > 0, offset K."""

    kind: str
    A: float
    K1: float = 1.0
    K: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown pressure law kind {self.kind!r}")
        if not self.K1 > 0:
            raise ValueError("K1 must be positive")
        if self.kind == POLYTROPIC and not self.A > 0:
            raise ValueError("polytropic law needs A > 0")
        if self.kind == CHAPLYGIN and not (-2.0 <= self.A < -1.0):
            raise ValueError("Chaplygin law needs -2 <= A < -1")
        if self.kind == LOGARITHMIC and self.A != -1.0:
            raise ValueError("logarithmic law needs A = -1 exactly")

    @classmethod
    def polytropic(cls, gamma: float = 3.0, K1: float = 1.0, K: float = 0.0) -> "PressureLaw":
        return cls(POLYTROPIC, gamma - 1.0, K1, K)

    @classmethod
    def chaplygin(cls, gamma: float = 1.0, K1: float = 1.0, K: float = 0.0) -> "PressureLaw":
        return cls(CHAPLYGIN, -gamma - 1.0, K1, K)

    @classmethod
    def logarithmic(cls, K1: float = 1.0, K: float = 0.0) -> "PressureLaw":
        return cls(LOGARITHMIC, -1.0, K1, K)

    @property
    def gamma(self) -> float:
        """Adiabatic exponent of the power branches (undefined for logarithmic)."""
        if self.kind == POLYTROPIC:
            return self.A + 1.0
        if self.kind == CHAPLYGIN:
            return -self.A - 1.0
        raise ValueError("the logarithmic law has no adiabatic exponent")


def _checked(rho):
    """Return rho as float array, rejecting any value not strictly positive."""
    arr = np.asarray(rho, dtype=np.float64)
    if not np.all(arr > 0.0):
        if arr.ndim == 0:
            raise NonPositiveDensity(f"density must be > 0, got {float(arr)}")
        bad = int(np.argmin(arr > 0.0))
        raise NonPositiveDensity(f"density must be > 0, violated at index {bad}")
    return arr


def _like(value, template):
    return float(value) if np.asarray(template).ndim == 0 else value


def pressure(law: PressureLaw, rho):
    """p(rho) for the given law; rho may be a scalar or an array."""
    arr = _checked(rho)
    if law.A == -1.0:
        out = law.K1 * np.log(arr) + law.K
    else:
        out = law.K1 / (law.A + 1.0) * arr ** (law.A + 1.0) + law.K
    return _like(out, rho)


def dpressure(law: PressureLaw, rho):
    """p'(rho) = K1 * rho**A, strictly positive (squared sound speed)."""
    arr = _checked(rho)
    return _like(law.K1 * arr**law.A, rho)


def sound_speed(law: PressureLaw, rho):
    """sqrt(p'(rho)) = sqrt(K1) * rho**(A/2)."""
    arr = _checked(rho)
    return _like(math.sqrt(law.K1) * arr ** (0.5 * law.A), rho)
