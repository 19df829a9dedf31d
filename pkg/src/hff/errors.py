"""Exception hierarchy and resource limits shared by every module."""

import os

DEFAULT_RESOURCE_LIMIT = 2_000_000


def resource_limit():
    """Node budget for searches that can explode, read from ``HFF_RESOURCE_LIMIT``."""
    raw = os.environ.get("HFF_RESOURCE_LIMIT")
    if not raw:
        return DEFAULT_RESOURCE_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"HFF_RESOURCE_LIMIT must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError("HFF_RESOURCE_LIMIT must be positive")
    return value


class HffError(Exception):
    pass


class ResourceLimitError(HffError):
    """A bounded computation would exceed its budget; the result is inconclusive."""

    def __init__(self, message, needed=None, limit=None):
        super().__init__(message)
        self.needed = needed
        self.limit = limit


class LevelBoundError(ResourceLimitError):
    pass


class FormulaSyntaxError(HffError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class SetLiteralError(FormulaSyntaxError):
    pass


class UnboundVariableError(HffError):
    def __init__(self, names):
        names = sorted(names)
        super().__init__("undeclared free variable(s): " + ", ".join(names))
        self.names = names


class EvaluationError(HffError):
    pass


class UnassignedVariableError(EvaluationError):
    def __init__(self, name):
        super().__init__(f"variable {name!r} has no assignment")
        self.name = name


class ArityError(HffError):
    pass


class OrderError(HffError):
    """A relation handed to ``make_notion`` is not a partial order with a top."""

    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class ForcingError(HffError):
    pass


class NameFamilyError(ForcingError):
    pass
