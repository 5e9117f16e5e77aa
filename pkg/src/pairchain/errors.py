"""Exceptions shared across the package."""


class DegeneracyError(RuntimeError):
    """All particle weights (or a filter normalizer) collapsed to zero."""


class TruncationLimitError(RuntimeError):
    """The stick-breaking truncation grew past its configured cap."""
