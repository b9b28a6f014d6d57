"""Exception hierarchy shared by every rdlab module."""

from __future__ import annotations


class RDLabError(Exception):
    """Base class for all errors raised by rdlab."""


class BackendMismatch(RDLabError, ValueError):
    """Two operands belong to different group backends."""


class WrongBackend(RDLabError, TypeError):
    """An operation was invoked on a backend kind it does not support."""


class NotAFactorization(RDLabError, ValueError):
    """The supplied parts do not multiply to the given element."""


class BudgetExceeded(RDLabError):
    """An enumeration or search outgrew its configured cap."""

    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} exceeded the cap of {cap}")


class EmptySupport(RDLabError, ValueError):
    """A quantity that needs a nonempty support was asked of the zero function."""


class ConfigError(RDLabError, ValueError):
    """A group or run configuration failed validation.

    ``issues`` lists every problem found, not only the first one.
    """

    def __init__(self, issues: list[str]):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues))


class ContractError(RDLabError):
    """A checked invariant or precondition of an operation does not hold."""
