"""Exception types shared across the toolkit."""

from __future__ import annotations


class HypothesisError(Exception):
    """An operation's runtime hypothesis gate failed.

    Where the source lemmas assume asymptotic hierarchies, each operation
    instead checks the concrete inequalities its argument values must
    satisfy, and refuses with a diagnostic rather than degrade silently.
    The ``violated`` field names the failed inequality.
    """

    def __init__(self, message: str, violated: str | None = None):
        super().__init__(message)
        self.violated = violated if violated is not None else message


class RetryBudgetExceeded(Exception):
    """A randomized stage used up its resampling budget.

    Randomized existence claims are realized by redrawing up to a budget
    and auditing the claimed event exactly; running out of redraws is
    reported, never silently accepted.
    """

    def __init__(self, stage: str, budget: int):
        super().__init__(f"stage {stage!r} exhausted retry budget {budget}")
        self.stage = stage
        self.budget = budget
