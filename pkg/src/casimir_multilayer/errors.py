"""Exception hierarchy shared by all modules."""


class CasimirError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(CasimirError, RuntimeError):
    """An operation was invoked in a way its contract forbids."""


class ConfigError(CasimirError, ValueError):
    """A run description failed validation.

    ``violations`` holds one ``(field_path, message)`` pair per problem.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{path}: {msg}" for path, msg in self.violations]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))


class NumericFailure(CasimirError, ArithmeticError):
    """A numerical procedure did not reach its tolerance.

    Keyword arguments are kept in ``diagnostics`` for callers that want to
    report partial results.
    """

    def __init__(self, message, **diagnostics):
        self.diagnostics = diagnostics
        if diagnostics:
            details = ", ".join(f"{k}={v!r}" for k, v in diagnostics.items())
            message = f"{message} ({details})"
        super().__init__(message)
