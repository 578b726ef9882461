"""Exception classes shared across the toolkit.

Every error raised on purpose derives from :class:`MesographError` so callers
(and the CLI exit-code mapping) can distinguish our failures from bugs.
"""


class MesographError(Exception):
    """Base class for all toolkit errors."""


class ParseError(MesographError):
    """A file could not be parsed. Carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class EmptyGraphError(MesographError):
    """An input that must describe a non-empty graph described none."""


class NotFoundError(MesographError):
    """A node or community ID was not present in the queried object."""


class InconsistencyError(MesographError):
    """A community structure does not match the graph it is paired with."""


class UndefinedInputError(MesographError):
    """The operation is mathematically undefined for the given input."""


class DivergenceUndefinedError(MesographError):
    """KL divergence is infinite: Q assigns zero mass on P's support."""


class InsufficientDataError(MesographError):
    """Too few samples for the requested fit."""


class DegenerateFitError(MesographError):
    """The sample has no spread, so no power-law exponent is identifiable."""


class CapacityError(MesographError):
    """A requested synthetic graph exceeds representable sizes."""


class PipelineError(MesographError):
    """A pipeline stage failed; the stage name is part of the message."""

    def __init__(self, stage, message):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
