"""Exception types raised across the package."""


class DcutLabError(Exception):
    """Base class for all package errors."""


class InputError(DcutLabError, ValueError):
    """An argument violates an operation's precondition."""


class EmptySubgraphError(InputError):
    pass


class LoopError(InputError):
    """Raised where an irreflexive graph is required but loops are present."""


class SignatureError(InputError):
    pass


class BudgetExceeded(InputError):
    """A size bound (power-structure domain, contraction vertex count) was exceeded."""


class ParseError(InputError):
    pass


class SearchTimeout(DcutLabError):
    """An exhaustive search ran past its deadline before deciding."""


class ClaimViolation(DcutLabError, AssertionError):
    """A constructive claim that should always hold failed on a concrete input.

    Raised by the verification instruments (table lookups, restriction maps),
    never by ordinary bad input.
    """
