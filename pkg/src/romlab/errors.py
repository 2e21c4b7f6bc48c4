"""Exception types shared across the package."""


class RomlabError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(RomlabError):
    """An input vector/matrix does not match the declared dimension."""


class SymmetryError(RomlabError):
    """A tensor violates (or lacks) the symmetry a routine requires."""


class DecompositionError(RomlabError):
    """Matrix factorization failed (e.g. non-SPD mass matrix)."""


class RigidBodyModeError(RomlabError):
    """A zero or negative eigenvalue was found where only positive ones are valid."""


class ResonanceError(RomlabError):
    """An internal resonance makes the requested coefficients singular.

    Carries the offending pairs; ``report`` is a ResonanceReport when the
    error comes from the normal-form path, or a plain tuple for MD solves.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PoleError(RomlabError):
    """Evaluation requested exactly at a pole of a closed-form expression."""


class ModelFormatError(RomlabError):
    """A model file failed validation; the message points at the offending entry."""


class ContinuationError(RomlabError):
    """The continuation could not even produce its seed point."""
