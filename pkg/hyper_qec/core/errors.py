"""Exception hierarchy shared by the library; the CLI maps these to exit codes."""

from __future__ import annotations


class HyperQecError(Exception):
    """Base class for all library errors."""


class DimensionError(HyperQecError, ValueError):
    """Shapes or mode counts do not match."""


class PhotonLimitError(HyperQecError, ValueError):
    """Photon number exceeds the precomputed factorial table."""


class NotUnitaryError(HyperQecError, ValueError):
    """A unitary was required but the matrix fails the unitarity check."""


class NotAContractionError(HyperQecError, ValueError):
    """Largest singular value exceeds one; rescale before dilating."""


class NormalizationError(HyperQecError, ValueError):
    """A state or amplitude pair is not normalized."""


class AmbiguousSyndromeError(HyperQecError, RuntimeError):
    """Syndrome analysis did not single out one Bell label."""


class AssetError(HyperQecError, RuntimeError):
    """A matrix or netlist file is missing, unreadable or corrupt."""


class ConfigError(HyperQecError, ValueError):
    """Invalid optimizer configuration."""


class NumericalError(HyperQecError, ArithmeticError):
    """An objective evaluated to NaN or infinity."""
