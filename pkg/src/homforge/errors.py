"""Exception types and the CLI exit-code contract."""


EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_PREFIX = 3
EXIT_INVALID = 4


class ForgeError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidInput(ForgeError):
    """Malformed structure/descriptor/argument."""

    exit_code = EXIT_INVALID


class InconsistentTask(InvalidInput):
    """An extension task lists the same constraint as positive and negative."""


class SizeCapExceeded(InvalidInput):
    """Structure too large for brute force."""


class BudgetExhausted(ForgeError):
    """A bounded search ran out of budget before finding a qualifying value."""

    exit_code = EXIT_BUDGET

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class DensityBoundExhausted(BudgetExhausted):
    """A disjoint-copy search hit its iteration guard."""


class PrefixExhausted(ForgeError):
    """A finite bit source was read past its end.  `index` is the offending
    position (an int, or a string such as '>=2**70' when the position is
    astronomically large)."""

    exit_code = EXIT_PREFIX

    def __init__(self, index):
        super().__init__(f"bit prefix exhausted at index {index}")
        self.index = index


class RankOverflow(ForgeError):
    """An exact copy index was requested but does not fit in explicit form."""

    exit_code = EXIT_INVALID
