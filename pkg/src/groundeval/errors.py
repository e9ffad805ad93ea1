"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class GroundevalError(Exception):
    """Base class for all toolkit errors."""


# --- activation map validation ---

class EmptyMap(GroundevalError):
    pass


class NonFiniteValue(GroundevalError):
    pass


class OutOfRangeValue(GroundevalError):
    pass


# --- ground truth construction ---

class DegenerateBox(GroundevalError):
    pass


class BoxOutOfBounds(GroundevalError):
    pass


class EmptyBoxList(GroundevalError):
    pass


# --- cross-object checks ---

class ShapeMismatch(GroundevalError):
    pass


# --- ingestion ---

class ParseError(GroundevalError):
    pass


class DuplicateId(GroundevalError):
    pass


class MissingField(GroundevalError):
    pass


class UnsupportedFormat(GroundevalError):
    pass


class UnsupportedDtype(GroundevalError):
    pass


class NotTwoDimensional(GroundevalError):
    pass


class MapLoadError(GroundevalError):
    pass


# --- reporting ---

class EmptyGroup(GroundevalError):
    pass


class OutOfRange(GroundevalError):
    pass


class UnknownMetric(GroundevalError):
    pass


# --- fixtures ---

class InvalidBlob(GroundevalError):
    pass


class BoxTooLarge(GroundevalError):
    pass


class InvalidMasses(GroundevalError):
    pass


class DegenerateMapWarning(UserWarning):
    """Raised (as a warning) when a map has zero total activation."""
