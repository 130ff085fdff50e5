"""Exception hierarchy. The CLI maps each class to a distinct message prefix."""


class FreeMagmaError(Exception):
    prefix = "error"


class TermSyntaxError(FreeMagmaError, ValueError):
    prefix = "syntax error"

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class UnknownGenerator(FreeMagmaError, KeyError):
    prefix = "syntax error"

    def __str__(self):
        return Exception.__str__(self)


class CapExceeded(FreeMagmaError):
    prefix = "cap exceeded"


class MeanError(FreeMagmaError, ValueError):
    prefix = "invalid mean"


class PrefixExhausted(FreeMagmaError):
    """The materialized prefix of a mean sequence is too short."""

    prefix = "prefix exhausted"

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class VerificationError(FreeMagmaError):
    prefix = "verification failed"
