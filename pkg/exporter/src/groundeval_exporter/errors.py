"""Exporter-side error hierarchy."""


class ExporterError(Exception):
    """Base class for exporter failures."""


class NonFiniteInput(ExporterError):
    """Raw map contains NaN or infinite values."""


class NegativeInput(ExporterError):
    """Raw map contains negative values."""


class InvalidParameter(ExporterError):
    """A caller-supplied parameter is out of range."""


class IoError(ExporterError):
    """Output directory or file could not be written."""
