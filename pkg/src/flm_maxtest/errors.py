"""
Exceptions raised across the package.

The CLI catches `FLMMaxTestError` and turns it into a nonzero exit status.
"""


class FLMMaxTestError(Exception):
    pass


class ConformabilityError(FLMMaxTestError):
    """Two Hilbert points (or a point and a basis) do not share a layout."""


class DomainError(FLMMaxTestError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegenerateDataError(DomainError):
    """Every coordinate of the cross-score vector has (numerically) zero variance."""


class NumericalError(FLMMaxTestError, ArithmeticError):
    """A matrix expected to be positive semi-definite is not, beyond tolerance."""


class ValidationError(FLMMaxTestError, ValueError):
    """
    Malformed input data.

    Attributes:
        problems (list[str]): one diagnostic per offending location, each
        prefixed with its line number when known.
    """

    def __init__(self, message: str, problems: list[str] | None = None):
        self.problems = problems or []
        details = "".join(f"\n  - {p}" for p in self.problems)
        super().__init__(f"{message}{details}")


class ConfigError(FLMMaxTestError, ValueError):
    """
    Study configuration violating the schema. All violations are collected
    before raising.
    """

    def __init__(self, violations: list[str]):
        self.violations = violations
        details = "".join(f"\n  - {v}" for v in violations)
        super().__init__(f"invalid study configuration:{details}")


class ReplicateError(FLMMaxTestError):
    """A Monte Carlo replicate failed; keeps the provenance of the failure."""

    def __init__(self, r: float, r_index: int, replicate: int, seed: int, reason: str = ""):
        self.r = r
        self.r_index = r_index
        self.replicate = replicate
        self.seed = seed
        self.reason = reason
        super().__init__(
            f"replicate {replicate} at r={r} (r index {r_index}, seed {seed}) failed: {reason}"
        )

    def __reduce__(self):
        # rebuilt from its fields when sent back by a worker process
        return (
            self.__class__,
            (self.r, self.r_index, self.replicate, self.seed, self.reason),
        )


class ResultsIOError(FLMMaxTestError, OSError):
    """Reading or writing a results file failed."""

    def __init__(self, path, reason: str):
        self.path = path
        super().__init__(f"{path}: {reason}")
