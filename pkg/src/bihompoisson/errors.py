"""Exception types raised across the package.

All mathematical failure modes get their own class so callers (and the
CLI) can map them to precise diagnostics and exit codes.  Errors carry a
human-readable message plus, where useful, structured payload attributes.
"""

from __future__ import annotations


class BihomError(Exception):
    """Base class for all errors raised by this package."""


class AmbientMismatch(BihomError):
    """Two subspaces or vectors live in different ambient dimensions."""


class DimensionMismatch(BihomError):
    """A vector or matrix has the wrong size for the requested operation."""


class Singular(BihomError):
    """A map that must be invertible is not."""


class NonRationalSpectrum(BihomError):
    """A characteristic polynomial does not split over the rationals.

    The offending irreducible part is reported, never silently dropped.
    """

    def __init__(self, message: str, remainder_degree: int = 0):
        super().__init__(message)
        self.remainder_degree = remainder_degree


class NotAutomorphism(BihomError):
    """A candidate twisting map fails to preserve a product or the grading."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotCommuting(BihomError):
    """The two candidate twisting maps do not commute."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotGraded(BihomError):
    """A vector or subspace expected to be parity-homogeneous is not."""


class NotAbelian(BihomError):
    """The supplied subalgebra has a nonzero internal bracket."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSubalgebra(BihomError):
    """The supplied subspace is not closed under the superproduct."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotInvariant(BihomError):
    """A subspace is not preserved by a map that must fix it."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSplit(BihomError):
    """The requested operation needs a split root decomposition."""


class UnknownRoot(BihomError):
    """A functional is not a root of the given decomposition."""


class AsymmetricRootSystem(BihomError):
    """The root system is not closed under negation, which this operation requires."""


class CapExceeded(BihomError):
    """The brute-force search was asked to run above its dimension cap."""


class HypothesesNotMet(BihomError):
    """A structure theorem's hypotheses fail on this input."""

    def __init__(self, failed: tuple[str, ...]):
        super().__init__("hypotheses not met: " + ", ".join(failed))
        self.failed = failed


class FileFormatError(BihomError):
    """Base class for algebra-description file problems."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(message if not where else f"{where}: {message}")
        self.where = where


class ParseError(FileFormatError):
    """The file is not valid JSON or violates the schema."""


class BadRational(FileFormatError):
    """A rational literal is malformed or not in canonical form."""


class UnknownLabel(FileFormatError):
    """A table or basis reference names a label that does not exist."""


class DuplicateEntry(FileFormatError):
    """The same (left, right) pair appears twice in a table."""
