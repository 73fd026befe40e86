"""Exception hierarchy shared by the library and the CLI."""


class NumrangeLabError(Exception):
    """Base class for all package errors."""


class ParameterError(NumrangeLabError, ValueError):
    """A model or run parameter is outside its admissible range."""


class ContractError(NumrangeLabError, ValueError):
    """An argument violates an operation's structural precondition."""


class ConsistencyError(NumrangeLabError, RuntimeError):
    """A numerical result contradicts a property that must hold."""


class GeometryError(NumrangeLabError, RuntimeError):
    """A geometric construction has no valid result (empty region, no bracket)."""
