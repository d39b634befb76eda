# equivarifier/errors.py
"""
Error hierarchy for the whole package.

Every failure the library raises derives from EquivarifierError, so callers
(and the CLI's exit-code mapping) can catch one base class. Value-level
problems also subclass ValueError; data IO problems also subclass OSError.
Verification outcomes are never raised: they come back as report models.
"""


class EquivarifierError(Exception):
    """Base class for all equivarifier errors."""


# --- groups ---------------------------------------------------------------

class InvalidOrderError(EquivarifierError, ValueError):
    """A group constructor was asked for order 0 (or a negative order)."""


class InvalidElementError(EquivarifierError, ValueError):
    """An element index is outside [0, |G|)."""


class InsufficientProbeError(EquivarifierError, ValueError):
    """A kernel or descent check was given no probe values."""


class InvalidSubgroupError(EquivarifierError, ValueError):
    """A member set misses the identity or is not closed."""


class NotNormalError(EquivarifierError, ValueError):
    """A quotient was requested by a subgroup that is not normal."""


class GroupFormatError(EquivarifierError, ValueError):
    """A serialized Cayley table or a group spec string could not be parsed."""


# --- actions --------------------------------------------------------------

class CarrierMismatchError(EquivarifierError, ValueError):
    """A carrier value does not match the action's carrier descriptor."""


class NonSquareError(EquivarifierError, ValueError):
    """Rotation was requested for a non-square image."""


class WrongGroupError(EquivarifierError, ValueError):
    """Two objects that must share a group do not."""


class BlockMismatchError(EquivarifierError, ValueError):
    """A carrier axis is not |G| blocks of equal size."""


# --- lifting --------------------------------------------------------------

class NotWellDefinedError(EquivarifierError, ValueError):
    """An action does not descend to the requested quotient group."""


class CompositionError(EquivarifierError, ValueError):
    """Adjacent equivariant maps disagree on carrier shape or action."""


# --- nn / training --------------------------------------------------------

class ShapeError(EquivarifierError, ValueError):
    """Tensor shapes are inconsistent for the requested operation."""


class LabelError(EquivarifierError, ValueError):
    """A target is not one-hot or a label is out of range."""


class ParameterError(EquivarifierError, ValueError):
    """Parameter and gradient registries do not match."""


class TrainingError(EquivarifierError):
    """Training diverged; `last_checkpoint` points at the last good state."""

    def __init__(self, message: str, last_checkpoint=None):
        super().__init__(message)
        self.last_checkpoint = last_checkpoint


class CheckpointError(EquivarifierError, ValueError):
    """A checkpoint file is malformed or does not fit the model."""


# --- configuration / data -------------------------------------------------

class ConfigError(EquivarifierError, ValueError):
    """Configuration values are missing, unknown or inconsistent."""


class DataFormatError(EquivarifierError, ValueError):
    """An IDX file has the wrong magic number or header."""


class DataConsistencyError(EquivarifierError, ValueError):
    """Image and label files disagree on the sample count."""


class DataIOError(EquivarifierError, OSError):
    """A data file is missing or truncated."""
