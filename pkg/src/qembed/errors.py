"""Exception hierarchy.

``DomainError`` subclasses describe inputs that are well formed but for which
the requested computation has no answer (disconnected graph, non-embeddable
distance matrix).  ``InputError`` subclasses describe malformed input.  The
CLI maps the two families to exit codes 1 and 2.
"""


class QembedError(Exception):
    pass


class DomainError(QembedError):
    pass


class InputError(QembedError, ValueError):
    pass


class InvalidGraph(InputError):
    pass


class DisconnectedGraph(DomainError):
    pass


class TooLarge(DomainError):
    pass


class DiameterOutOfRange(DomainError):
    pass


class NotEmbeddable(DomainError):
    def __init__(self, message, qec=None):
        super().__init__(message)
        self.qec = qec


class ConvergenceError(DomainError):
    pass


class PoleHit(DomainError):
    pass


class PreconditionViolated(DomainError):
    pass


class NotAStationaryAlpha(DomainError):
    pass


class PartitionError(InputError):
    pass
