"""1D compressible Euler equations with time-dependent damping s(t) = mu/(1+t)**lam,
three barotropic pressure laws (polytropic, generalized Chaplygin, logarithmic),
and the symmetric first-order reformulation they share, with weighted-energy
diagnostics, a characteristic-cone check, and blowup detection."""

from ._kernels import BACKEND
from .diagnostics import (
    BlowupStatus,
    EnergyReport,
    Thresholds,
    detect_blowup,
    energy_instant,
    fps_margin,
    support_radius,
    update_running,
    wave_residual,
    wave_source_terms,
)
from .dynamics import (
    CONSERVATIVE,
    STATUS_BLOWUP,
    STATUS_COMPLETED,
    STATUS_ERROR,
    SYMMETRIC,
    DampingLaw,
    RunResult,
    SolverConfig,
    cfl_dt,
    cons_rhs,
    rk4_step,
    run,
    sym_rhs,
)
from .eos import (
    CHAPLYGIN,
    LOGARITHMIC,
    POLYTROPIC,
    PressureLaw,
    dpressure,
    pressure,
    sound_speed,
)
from .grid import (
    Field,
    Grid1D,
    InitialData,
    bump_derivative,
    bump_profile,
    derivative,
    l2_norm_sq,
    make_initial,
    sobolev_norm_sq,
)
from .harness import RunConfig, execute, load_config
from .states import ConsState, SymState
from .transform import (
    TransformParams,
    char_speeds,
    map_cons_to_sym,
    map_sym_to_cons,
    rho_to_v,
    v_to_rho,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlowupStatus",
    "CHAPLYGIN",
    "CONSERVATIVE",
    "ConsState",
    "DampingLaw",
    "EnergyReport",
    "Field",
    "Grid1D",
    "InitialData",
    "LOGARITHMIC",
    "POLYTROPIC",
    "PressureLaw",
    "RunConfig",
    "RunResult",
    "STATUS_BLOWUP",
    "STATUS_COMPLETED",
    "STATUS_ERROR",
    "SYMMETRIC",
    "SolverConfig",
    "SymState",
    "Thresholds",
    "TransformParams",
    "bump_derivative",
    "bump_profile",
    "cfl_dt",
    "char_speeds",
    "cons_rhs",
    "derivative",
    "detect_blowup",
    "dpressure",
    "energy_instant",
    "execute",
    "fps_margin",
    "l2_norm_sq",
    "load_config",
    "make_initial",
    "map_cons_to_sym",
    "map_sym_to_cons",
    "pressure",
    "rho_to_v",
    "rk4_step",
    "run",
    "sobolev_norm_sq",
    "sound_speed",
    "support_radius",
    "sym_rhs",
    "update_running",
    "v_to_rho",
    "wave_residual",
    "wave_source_terms",
]
