from .types import (
    Constraint,
    ConstraintType,
    Direction,
    SIGNATURES,
    SYMMETRIC_FACILITY_PAIRS,
    SatisfactionResult,
)
from .scoring import (
    THRESHOLDS,
    Thresholds,
    distance_to_biome,
    evaluate,
    score_across_biome,
    score_between,
    score_containment,
    score_directional,
    score_map_side,
    score_proximity,
    score_visibility,
)
from .utterances import BIOME_WORDS, TEMPLATES, parse_utterance, render_utterance

__all__ = [
    "Constraint",
    "ConstraintType",
    "Direction",
    "SIGNATURES",
    "SYMMETRIC_FACILITY_PAIRS",
    "SatisfactionResult",
    "THRESHOLDS",
    "Thresholds",
    "distance_to_biome",
    "evaluate",
    "score_across_biome",
    "score_between",
    "score_containment",
    "score_directional",
    "score_map_side",
    "score_proximity",
    "score_visibility",
    "BIOME_WORDS",
    "TEMPLATES",
    "parse_utterance",
    "render_utterance",
]
