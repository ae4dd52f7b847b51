"""Uniform 1D mesh, nodal fields, compactly supported initial data, discrete
derivatives, quadrature, and discrete Sobolev norms.

Norm convention: the squared Sobolev norm of order m is the sum of squared L2
seminorms of the derivatives 0..m (trapezoid quadrature).  This is equivalent
to, and chosen over, a sum of unsquared norms because it is additive in the
energy report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .errors import (
    GridTooSmall,
    NonFiniteValue,
    NonPositiveDensity,
    SupportExceedsDomain,
    ValidationError,
)

BUMP = "bump"
BUMP_DERIVATIVE = "bump_derivative"
CUSTOM = "custom"
PROFILES = (BUMP, BUMP_DERIVATIVE, CUSTOM)

MIN_NODES = 16
STENCIL_NODES = 5
MAX_DERIVATIVE_ORDER = 4
MAX_SOBOLEV_ORDER = 3


@dataclass(frozen=True)
class Grid1D:
    """Uniform mesh of n nodes on [x_min, x_max], spacing dx = (x_max-x_min)/(n-1)."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < MIN_NODES:
            raise GridTooSmall(f"need at least {MIN_NODES} nodes, got {self.n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        object.__setattr__(self, "_nodes", np.linspace(self.x_min, self.x_max, self.n))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def nodes(self) -> np.ndarray:
        """Node coordinates (shared array; treat as read-only)."""
        return self._nodes


@dataclass
class Field:
    """Real nodal data on a grid.  NaN/Inf are rejected at construction."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"field shape {vals.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(vals)):
            bad = int(np.argmin(np.isfinite(vals)))
            raise NonFiniteValue(f"non-finite field value at node {bad}")
        self.values = vals


def zero_field(grid: Grid1D) -> Field:
    return Field(grid, np.zeros(grid.n))


def bump_profile(x, R: float):
    """Smooth compactly supported bump: exp(1 - 1/(1-(x/R)^2)) on |x| < R, else 0.

    C-infinity, maximum value 1 at x = 0.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    xs = np.asarray(x, dtype=np.float64)
    s = xs / R
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    with np.errstate(over="ignore", under="ignore"):
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
    return float(out) if out.ndim == 0 else out


def bump_derivative(x, R: float):
    """Exact derivative of bump_profile: an odd, compactly supported dipole."""
    if not R > 0:
        raise ValueError("R must be positive")
    xs = np.asarray(x, dtype=np.float64)
    s = xs / R
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    one = 1.0 - si * si
    # written as a single exponential so the underflowing bump never meets an
    # overflowing prefactor
    with np.errstate(over="ignore", under="ignore"):
        out[inside] = (-2.0 * si / R) * np.exp(1.0 - 1.0 / one - 2.0 * np.log(one))
    return float(out) if out.ndim == 0 else out


def derivative(f: Field, k: int) -> Field:
    """k-fold application of the 4th-order first-derivative stencil."""
    if not 1 <= k <= MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order must be in 1..{MAX_DERIVATIVE_ORDER}, got {k}")
    if f.grid.n < STENCIL_NODES:
        raise GridTooSmall(f"stencil needs {STENCIL_NODES} nodes, grid has {f.grid.n}")
    vals = f.values
    for _ in range(k):
        vals = kern.diff1(vals, f.grid.dx)
    return Field(f.grid, vals)


def l2_norm_sq(f: Field) -> float:
    """Composite-trapezoid approximation of the integral of f^2."""
    w = f.values
    total = np.dot(w, w) - 0.5 * (w[0] * w[0] + w[-1] * w[-1])
    return float(total * f.grid.dx)


def sobolev_norm_sq(f: Field, m: int) -> float:
    """Sum over k = 0..m of the squared L2 norm of the k-th derivative."""
    if not 0 <= m <= MAX_SOBOLEV_ORDER:
        raise ValueError(f"Sobolev order must be in 0..{MAX_SOBOLEV_ORDER}, got {m}")
    if m >= 1 and f.grid.n < STENCIL_NODES:
        raise GridTooSmall(f"stencil needs {STENCIL_NODES} nodes, grid has {f.grid.n}")
    total = l2_norm_sq(f)
    vals = f.values
    for _ in range(m):
        vals = kern.diff1(vals, f.grid.dx)
        total += l2_norm_sq(Field(f.grid, vals))
    return total


def load_profile_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column (x, value) text table for a custom profile."""
    try:
        data = np.loadtxt(path, dtype=np.float64, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"cannot read profile table {path}: {exc}") from exc
    if data.shape[1] != 2:
        raise ValidationError(f"profile table must have two columns, got {data.shape[1]}")
    x, vals = data[:, 0], data[:, 1]
    if np.any(np.diff(x) <= 0):
        raise ValidationError("profile table x column must be strictly increasing")
    if not np.all(np.isfinite(data)):
        raise ValidationError("profile table contains non-finite entries")
    return x, vals


@dataclass(frozen=True)
class InitialData:
    """Compactly supported perturbation of the unit background.

    The same profile shape is used for the density and the velocity
    perturbations; epsilon scales both, so the data is
    (1 + eps*profile(x), eps*profile(x)) with support inside [-R, R].
    """

    epsilon: float
    R: float
    profile: str = BUMP
    rho_bar: float = 1.0
    table: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValidationError("epsilon must be >= 0")
        if not self.R > 0:
            raise ValidationError("R must be positive")
        if self.rho_bar != 1.0:
            raise ValidationError("the background density is fixed to 1")
        if self.profile not in PROFILES:
            raise ValidationError(f"unknown profile {self.profile!r}")
        if self.profile == CUSTOM:
            if self.table is None:
                raise ValidationError("custom profile needs a table")
            x, vals = self.table
            outside = np.abs(x) > self.R
            if np.any(vals[outside] != 0.0):
                raise ValidationError("custom profile must vanish outside [-R, R]")
        elif self.table is not None:
            raise ValidationError("table is only allowed with the custom profile")


def profile_values(init: InitialData, x: np.ndarray) -> np.ndarray:
    if init.profile == BUMP:
        return bump_profile(x, init.R)
    if init.profile == BUMP_DERIVATIVE:
        return bump_derivative(x, init.R)
    tx, tv = init.table
    return np.interp(x, tx, tv, left=0.0, right=0.0)


def make_initial(init: InitialData, grid: Grid1D, tp):
    """Initial states at t = 0 in both formulations.

    Returns (ConsState, SymState); the symmetric state is the pointwise map of
    the conservative one.
    """
    from .states import ConsState
    from .transform import map_cons_to_sym

    if not (grid.x_min < -init.R and grid.x_max > init.R):
        raise SupportExceedsDomain(
            f"grid [{grid.x_min}, {grid.x_max}] must strictly contain [-{init.R}, {init.R}]"
        )
    x = grid.nodes()
    base = profile_values(init, x)
    rho = init.rho_bar + init.epsilon * base
    if not np.all(rho > 0.0):
        raise NonPositiveDensity(
            f"epsilon={init.epsilon} drives the density to "
            f"{float(rho.min())} at its minimum"
        )
    u = init.epsilon * base
    cons = ConsState(Field(grid, rho), Field(grid, rho * u), 0.0)
    sym = map_cons_to_sym(cons, tp)
    return cons, sym
