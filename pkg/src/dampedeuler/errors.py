"""Exception types shared across the package."""


class NonPositiveDensity(ValueError):
    """Density must stay strictly positive; vacuum is outside the model."""


class InvalidVRange(ValueError):
    """The sound-speed variable left the range the change of variables can invert."""


class HyperbolicityLoss(ValueError):
    """The local wave speed sigma + (A/2)*v dropped to zero or below."""


class GridTooSmall(ValueError):
    """Too few nodes for the requested stencil or derivative order."""


class SupportExceedsDomain(ValueError):
    """The initial support [-R, R] does not fit strictly inside the grid."""


class NonFiniteValue(FloatingPointError):
    """A field picked up a NaN or an Inf."""


class NonMonotoneTime(ValueError):
    """Energy report samples must arrive at strictly increasing times."""


class NonUniformTriple(ValueError):
    """Time-centered diagnostics need three snapshots with equal spacing."""


class ParseError(ValueError):
    """A config file could not be parsed."""


class ValidationError(ValueError):
    """Config contents violate an invariant."""
