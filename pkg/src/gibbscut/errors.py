"""Exception types shared across the package."""


class GibbsCutError(Exception):
    """Base class for all package errors."""


class PolynomialError(GibbsCutError):
    """Malformed polynomial input or operation misuse."""


class EncodeError(GibbsCutError):
    """Invalid label function / energy model, or an expansion precondition failed."""

    def __init__(self, message: str, violating_d: int | None = None):
        super().__init__(message)
        self.violating_d = violating_d


class CapExceededError(GibbsCutError):
    """An exhaustive routine was asked to enumerate beyond its configured cap."""


class NotRepresentableError(GibbsCutError):
    """Polynomial cannot be turned into a flow network (outside the gadget class).

    ``pair`` names the offending variable pair when one is known.
    """

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class MsfmError(GibbsCutError):
    """Block-decomposition solve failed (bad partition, unsolvable block, ...)."""


class VerificationError(GibbsCutError):
    """Two redundant exact methods disagreed; indicates an internal bug."""
