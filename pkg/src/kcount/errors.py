"""Error classes shared across modules; the CLI maps them to exit codes."""


class PreconditionError(ValueError):
    """Input outside the supported range (CLI exit code 2)."""


class CertificationError(RuntimeError):
    """A requested guarantee could not be certified (CLI exit code 3)."""


class BudgetExhaustedError(RuntimeError):
    """A randomized routine ran out of its attempt budget (CLI exit code 4)."""
