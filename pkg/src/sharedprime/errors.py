"""Exception hierarchy shared by every module."""


class SharedPrimeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SharedPrimeError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ConfigError(SharedPrimeError, ValueError):
    """A configuration is unusable (empty pool, range too small, ...)."""


class ExhaustionError(SharedPrimeError):
    """A bounded search ran out of attempts."""

    def __init__(self, message: str, attempts: int, **counters: int):
        extra = "".join(f", {k}={v}" for k, v in counters.items())
        super().__init__(f"{message} (attempts={attempts}{extra})")
        self.attempts = attempts
        self.counters = counters


class NotInvertibleError(SharedPrimeError, ArithmeticError):
    def __init__(self, a: int, m: int, g: int):
        super().__init__(f"{a} is not invertible modulo {m} (gcd {g})")
        self.a = a
        self.m = m
        self.gcd = g


class AuditCapError(SharedPrimeError):
    """Exhaustive enumeration was requested above the configured cap."""


class FormatError(SharedPrimeError, ValueError):
    """A serialized record could not be parsed."""

    def __init__(self, reason: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + reason)
        self.line = line
        self.reason = reason


class ValidationError(SharedPrimeError, ValueError):
    """A record set violates a structural rule (e.g. duplicate ids)."""
