"""Exception hierarchy shared by all touchtrail modules.

Every error carries a stable machine-readable name (the class name) so the
HTTP layer and CLI can map failures without string matching on messages.
"""

from __future__ import annotations


class TouchtrailError(Exception):
    """Base class for all touchtrail errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


# -- ingest -------------------------------------------------------------------

class EmptyLog(TouchtrailError):
    """The log stream contains no event records."""


class CorruptLog(TouchtrailError):
    """The log stream is structurally unusable (missing header or too many bad lines)."""

    def __init__(self, message: str, line_numbers: tuple[int, ...] = ()):
        super().__init__(message)
        self.line_numbers = line_numbers


class AnisotropicScreen(TouchtrailError):
    """Strict isotropic px-to-mm conversion requested on a device whose axis factors disagree."""


# -- gesture metrics ----------------------------------------------------------

class InvalidSampleCount(TouchtrailError):
    """Resampling requires at least two output samples."""


class DimensionMismatch(TouchtrailError):
    """Two gesture vectors with different sample counts were compared."""


class ZeroNorm(TouchtrailError):
    """Cosine similarity is undefined for a zero-norm vector."""


# -- clustering ---------------------------------------------------------------

class TooFewPoints(TouchtrailError):
    """Fewer input vectors than requested clusters."""


class EmptySelection(TouchtrailError):
    """No points fall inside the selection circle."""


class InvalidConfidence(TouchtrailError):
    """Confidence coefficient must lie in (0, 1]."""


class OutOfBounds(TouchtrailError):
    """Fitted region center lies outside the device screen."""


# -- layout -------------------------------------------------------------------

class DegeneratePeriod(TouchtrailError):
    """Session start and end timestamps coincide; no time axis can be built."""


class AmbiguousRegions(TouchtrailError):
    """Two semantic regions overlap, so event membership would be ambiguous."""

    def __init__(self, message: str, pair: tuple[str, str] = ("", "")):
        super().__init__(message)
        self.pair = pair


# -- store / service ----------------------------------------------------------

class SessionNotFound(TouchtrailError):
    """No stored session with the requested id."""


class DuplicateSession(TouchtrailError):
    """A session with this id already exists; uploads are not merged."""
