"""Exception types shared across the package."""


class SpectralControlError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(SpectralControlError, ValueError):
    """Family or system parameters outside their admissible range."""


class DomainError(SpectralControlError, ValueError):
    """Evaluation point outside the support of the measure."""


class CapacityError(SpectralControlError):
    """Requested enumeration exceeds the configured size cap."""


class NumericError(SpectralControlError):
    """A numerical routine failed (non-convergence, failed evaluation)."""


class ShapeError(SpectralControlError, ValueError):
    """Mismatched sizes between states, systems, or decompositions."""


class ContractError(SpectralControlError, ValueError):
    """Inputs violate an operation contract, e.g. a time grid that does
    not span [0, t1]."""


class UnreachableTargetError(SpectralControlError):
    """A target component cannot be steered because its actuation
    coefficient vanishes."""

    def __init__(self, mode: int, label=None):
        self.mode = mode
        self.label = label
        where = f"mode {mode}" if label is None else f"mode {mode} (index {label})"
        super().__init__(
            f"target unreachable: {where} has zero actuation coefficient "
            "but the target differs from the free evolution"
        )


class UnderdeterminedError(SpectralControlError):
    """State recovery is impossible because an actuation coefficient is zero."""

    def __init__(self, mode: int, label=None):
        self.mode = mode
        self.label = label
        where = f"mode {mode}" if label is None else f"mode {mode} (index {label})"
        super().__init__(
            f"recovery underdetermined: {where} has zero actuation coefficient, "
            "its observations carry no information"
        )


class ConfigError(SpectralControlError, ValueError):
    """Invalid experiment configuration."""


class ExprError(SpectralControlError, ValueError):
    """Base class for expression parsing/evaluation errors; carries a
    byte offset into the source text."""

    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} (at offset {pos})")


class ParseError(ExprError):
    """Syntax error in an expression."""


class EvalError(ExprError):
    """Domain violation while evaluating an expression."""
