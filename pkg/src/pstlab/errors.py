"""Exceptions raised deliberately by this package.

The classes double as the CLI's exit-code taxonomy: usage and precondition
problems exit 2, input-format problems exit 3, resource-cap refusals exit 4,
and verification failures (including structural invariant violations) exit 1.
"""


class PstlabError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidSizeError(PstlabError, ValueError):
    """A size parameter (vertex count, dimension, particle number) is out of range."""


class ResourceCapError(PstlabError, ValueError):
    """Building the requested object would exceed the configured vertex cap."""


class FormatError(PstlabError, ValueError):
    """An input document does not conform to its file format."""


class DuplicateEdgeError(FormatError):
    """An edge list names the same undirected edge slot twice."""


class AsymmetryError(FormatError):
    """An edge list assigns two different weights to the same undirected edge."""


class NonFiniteWeightError(FormatError):
    """A weight is NaN or infinite."""


class DegeneratePartitionError(PstlabError, ValueError):
    """A partition cell carries zero total vertex weight, so it cannot be normalized."""


class NotEquitableError(PstlabError, ValueError):
    """A quotient was requested for a partition that is not equitable."""


class PreconditionError(PstlabError, ValueError):
    """A documented precondition of the called operation does not hold."""


class InvariantViolationError(PstlabError, RuntimeError):
    """A structural invariant failed, signalling bad input family or a construction bug."""


class ConvergenceError(PstlabError, RuntimeError):
    """An iterative numerical routine did not converge within its budget."""
