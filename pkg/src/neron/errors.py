"""Exception hierarchy shared by the desingularization pipeline."""


class NeronError(Exception):
    """Base class; ``kind`` is the status string written to result files."""

    kind = "error"


class NoSystemError(NeronError):
    kind = "no-system"


class NotWellChosen(NeronError):
    """The legitimate failure branch: ``2c + 1 > N``."""

    kind = "not-well-chosen"

    def __init__(self, message="y′, N are not well chosen", c=None, precision=None):
        super().__init__(message)
        self.c = c
        self.precision = precision


class BoundTooSmall(NotWellChosen):
    kind = "bound-too-small"

    def __init__(self, message="the algorithm fails since the bound is too small",
                 c=None, precision=None):
        super().__init__(message, c, precision)


class ApproxTooCoarse(NeronError):
    kind = "approx-too-coarse"


class NotArtinian(NeronError):
    kind = "not-artinian"


class RelationViolated(NeronError):
    kind = "relation-violated"


class InputError(NeronError):
    """Malformed problem file or expression; carries an optional position."""

    kind = "input-error"

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
