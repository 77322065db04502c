"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the exit status
the command-line front end maps it to.
"""


class SeismicError(Exception):
    code = "ERROR"
    exit_status = 1


class DomainError(SeismicError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    code = "DOMAIN"
    exit_status = 4


class UndefinedEstimateError(SeismicError, ArithmeticError):
    """The infectiousness ratio has a zero denominator."""

    code = "UNDEFINED_ESTIMATE"
    exit_status = 4


class NoPredictionError(SeismicError):
    """A predictor could not produce a finite value (not the supercritical case)."""

    code = "NO_PREDICTION"
    exit_status = 4


class FitError(SeismicError):
    code = "FIT"
    exit_status = 4


class ConfigError(SeismicError, ValueError):
    code = "CONFIG"
    exit_status = 2


class ParseError(SeismicError, ValueError):
    code = "PARSE"
    exit_status = 3

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        parts = [str(source)] if source is not None else []
        if line is not None:
            parts.append(f"line {line}")
        super().__init__(": ".join(parts + [message]))


class UndefinedCorrelationError(DomainError):
    """A rank correlation is undefined because one input is constant."""

    code = "UNDEFINED_CORRELATION"
