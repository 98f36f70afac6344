"""Exception types shared across the package."""


class SpaceValidationError(ValueError):
    """Raised when an input fails to define a finite metric measure space."""


class DomainError(ValueError):
    """Raised when an argument is outside an operation's stated domain."""


class EvaluationError(RuntimeError):
    """Raised when a numerical evaluation cannot converge."""


class SymbolicAnalysisError(ValueError):
    """Raised when a weight / fundamental function has no supported closed form."""


class PreconditionError(RuntimeError):
    """Raised when a check's mathematical precondition fails (refusal, not a bug)."""


class SolverError(RuntimeError):
    """Raised when an LP solve fails; carries a path to the dumped instance."""
