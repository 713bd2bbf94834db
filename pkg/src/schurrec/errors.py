"""Exception hierarchy shared by all layers.

Exit-code contract of the CLI: 0 pass, 1 assertion/verification failure,
2 usage or schema error, 3 budget exceeded.
"""

from __future__ import annotations


class SchurrecError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(SchurrecError):
    """Malformed input: bad schema, bad flags, unsupported construction."""

    exit_code = 2


class BudgetExceeded(SchurrecError):
    """A configured search threshold or budget was exceeded.

    Carries enough context to rerun with a larger threshold.
    """

    exit_code = 3

    def __init__(self, message: str, *, needed: int | None = None, limit: int | None = None):
        if needed is not None and limit is not None:
            message = f"{message} (needed {needed}, limit {limit})"
        super().__init__(message)
        self.needed = needed
        self.limit = limit


class UniverseExhausted(SchurrecError):
    """A module fell outside the enumerated universe of indecomposables."""

    exit_code = 3

    def __init__(self, dim_vector: tuple[int, ...]):
        super().__init__(
            "universe exhausted: indecomposable summand with dimension vector "
            f"{list(dim_vector)} is not in the universe; raise the bound"
        )
        self.dim_vector = dim_vector


class InfiniteDimensional(SchurrecError):
    """The bound quiver quotient keeps growing past the path-length bound."""

    exit_code = 2

    def __init__(self, cycle: list[str], bound: int):
        super().__init__(
            f"infinite-dimensional quotient detected: path length exceeded {bound} "
            f"with new basis paths still appearing; shortest unbounded cycle: "
            f"{' * '.join(cycle)}"
        )
        self.cycle = cycle


class VerificationFailure(SchurrecError):
    """A law that the theory guarantees failed computationally.

    This is a release blocker: it signals either an implementation bug or a
    genuine counterexample, and always carries the offending instance.
    """

    exit_code = 1
