"""Exception types shared across the engine.

Each class maps onto one wire error code (see protocol.ERROR_CODES), so the
service layer can translate failures without string matching.
"""


class PlotmapError(Exception):
    code = "invalid-input"


class InvalidConfigError(PlotmapError):
    code = "invalid-config"


class InvalidLayoutError(PlotmapError):
    code = "invalid-layout"


class MissingReferenceError(PlotmapError):
    code = "missing-reference"


class InvalidConstraintError(PlotmapError):
    # Arity/argument-slot violations; reported as invalid-input on the wire.
    code = "invalid-input"


class EpisodeFinishedError(PlotmapError):
    code = "episode-finished"


class CapacityError(PlotmapError):
    code = "capacity"


class GenerationFailedError(PlotmapError):
    code = "generation-failed"


class InvalidInputError(PlotmapError):
    code = "invalid-input"
