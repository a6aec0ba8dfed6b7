"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class HMetricError(Exception):
    """Base class for all package errors."""


class ParseError(HMetricError):
    """Malformed input file or literal. Carries the source and line when known."""

    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class PreconditionError(HMetricError):
    """An operation refused to run because a hypothesis does not hold."""

    def __init__(self, message, witness=()):
        self.witness = list(witness)
        super().__init__(message)


class CapExceeded(HMetricError):
    """An exhaustive search would exceed its configured size bound."""


class VerificationError(HMetricError):
    """A post-condition that must hold by theory failed. Indicates a bug."""
