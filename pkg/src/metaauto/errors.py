"""Exception hierarchy shared by every module of the package."""


class MetaAutoError(Exception):
    """Base class for all package errors."""


class CircularDefinition(MetaAutoError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("circular definition: " + " -> ".join(map(str, self.cycle)))


class UndefinedTerm(MetaAutoError):
    pass


class ContradictionDetected(MetaAutoError):
    pass


class UnknownSequence(MetaAutoError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown sequence"


class VerificationFailed(MetaAutoError):
    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class KernelNotClosed(VerificationFailed):
    """Inference reached ``max_depth`` while new kernel classes were still appearing."""


class WindowTooSmall(MetaAutoError):
    pass


class NotProlongable(MetaAutoError):
    pass


class Unstable(MetaAutoError):
    def __init__(self, message, lengths=()):
        self.lengths = tuple(lengths)
        super().__init__(message)


class OutOfDomain(MetaAutoError, ValueError):
    pass


class ParseError(MetaAutoError, ValueError):
    pass


class FetchFailed(MetaAutoError):
    pass


class OffsetMismatch(MetaAutoError):
    pass
