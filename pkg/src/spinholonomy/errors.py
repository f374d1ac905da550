"""Exception types shared across the package."""


class DomainError(ValueError):
    """Inconsistent or out-of-range quantum numbers / arguments."""


class DegenerateInputError(ValueError):
    """Input vectors do not span a subspace of the requested dimension."""


class DegenerateOverlapError(ArithmeticError):
    """Endpoint overlap matrix is (numerically) singular; holonomy undefined."""


class RefinementRequiredError(ArithmeticError):
    """Sampling is too coarse to follow a curve continuously."""


class DegeneracyError(ArithmeticError):
    """A deterministic tie-break could not be resolved numerically."""
