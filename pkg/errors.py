"""
Error hierarchy shared by every module of the toolkit.

The command-line entry point maps these onto exit codes, see okounkov.py.
"""


class OkounkovError(Exception):
    """Base class for all toolkit errors"""


class InputError(OkounkovError, ValueError):
    """Malformed or inconsistent input"""


class DimensionError(InputError):
    """Vectors, matrices or polyhedra of incompatible dimensions"""


class UnboundedPolytopeError(InputError):
    """An inequality system that was expected to be bounded is not"""


class ContainmentError(OkounkovError):
    """A point lies outside the cone, polytope or fan it was queried against"""


class NotPseudoEffectiveError(ContainmentError):
    """A class lies outside the image (pseudo-effective) cone"""


class DecompositionError(OkounkovError):
    """A basis does not cover a ray of its own chamber fan"""


class ChamberSegmentError(OkounkovError):
    """No certified chamber segment, or the volume interpolation check failed"""


class InstanceError(InputError):
    """
    An instance does not describe a valid global body.

    Args:
        message: Human readable diagnostic
        datum: The offending piece of data (a ray, an equation, a JSON key)
    """

    reason = 'invalid instance'

    def __init__(self, message, datum=None):
        super().__init__(message)
        self.datum = datum


class MalformedInstanceError(InstanceError):
    reason = 'malformed'


class NotPointedError(InstanceError):
    reason = 'not pointed'


class NotFullDimensionalError(InstanceError):
    reason = 'not full-dimensional'


class UnboundedFiberError(InstanceError):
    reason = 'unbounded fiber'
