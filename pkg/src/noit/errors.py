"""Exception types shared across the package.

Anything raised on bad *input* derives from InvalidInput so the CLI can map it
to exit code 2 uniformly; verification failures and budget exhaustion have
their own roots because they are answers, not usage errors.
"""

from __future__ import annotations


class NoitError(Exception):
    """Base class for all package-specific errors."""


class InvalidInput(NoitError):
    """Malformed data or parameters (CLI exit code 2)."""


class InvalidGraph(InvalidInput):
    """A graph or partition invariant is violated."""


class InvalidDistribution(InvalidInput):
    """A join distribution is not total on the dissolved block or targets
    the wrong side."""


class InvalidPlan(InvalidInput):
    """An edge-deletion plan violates one of its invariants."""


class EdgeAbsent(InvalidInput):
    """The edge named by a deletion plan is not present."""


class LoopEdge(InvalidInput):
    """An added edge would be a self-loop."""


class EmptiesBlock(InvalidInput):
    """A vertex deletion would leave some block empty."""


class NotPowerOfTwo(InvalidInput):
    pass


class NotDivisible(InvalidInput):
    pass


class BadLength(InvalidInput):
    """A cycle length parameter is not ≡ 1 (mod 3) or is too small."""


class ConditionFails(InvalidInput):
    """A generator's arithmetic precondition on its parameters fails."""


class SeedHasIT(InvalidInput):
    """A construction was asked to start from a graph that has an
    independent transversal."""


class InvalidConstraint(InvalidInput):
    """Inconsistent forced/forbidden constraints for a transversal search."""


class InvalidTransversal(InvalidInput):
    """A mapping claimed to be a (partial) independent transversal is not."""


class BudgetExceededError(NoitError):
    """A search ran out of node or time budget (CLI exit code 3)."""

    def __init__(self, nodes: int, message: str = "search budget exceeded"):
        super().__init__(f"{message} after {nodes} nodes")
        self.nodes = nodes


class CertificateError(NoitError):
    """Base for certificate verification failures (CLI exit code 1)."""


class MalformedCertificate(InvalidInput):
    """The certificate JSON itself is structurally invalid."""


class BaseHasIT(CertificateError):
    """A base payload admits an independent transversal."""


class BaseBudgetExceeded(CertificateError):
    """Exhaustive verification of a base payload ran out of budget."""


class StepPreconditionFailed(CertificateError):
    """A replayed step violates the precondition of its operation."""

    def __init__(self, step_index: int, reason: str):
        super().__init__(f"step {step_index}: {reason}")
        self.step_index = step_index
        self.reason = reason


class PreconditionFailed(NoitError):
    """A decomposition was invoked on a graph outside its precondition."""


class InvariantViolated(NoitError):
    """A runtime claim check failed during matching-construction or
    decomposition; indicates a bug or an input outside the theory."""


class NotFound(NoitError):
    """A structure guaranteed under the preconditions was not found."""


class NotCoverGraph(NoitError):
    """The graph fails the structural conditions of a list cover graph."""
