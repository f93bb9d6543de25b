"""Constraint vocabulary: the 12 spatial relation families and their wire form."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidConstraintError
from ..worldgen.types import BiomeType


class Direction(str, Enum):
    N = "N"
    S = "S"
    E = "E"
    W = "W"

    @property
    def unit(self) -> tuple[float, float]:
        # y grows northward
        return {"N": (0.0, 1.0), "S": (0.0, -1.0), "E": (1.0, 0.0), "W": (-1.0, 0.0)}[self.value]

    @property
    def word(self) -> str:
        return {"N": "north", "S": "south", "E": "east", "W": "west"}[self.value]


class ConstraintType(str, Enum):
    ACROSS_BIOME_FROM = "AcrossBiomeFrom"
    INSIDE = "Inside"
    OUTSIDE = "Outside"
    CLOSE_TO_BIOME = "CloseToBiome"
    AWAY_FROM_BIOME = "AwayFromBiome"
    DIR_OF_BIOME = "DirOfBiome"
    CLOSE_TO_FACILITY = "CloseToFacility"
    AWAY_FROM_FACILITY = "AwayFromFacility"
    IN_BETWEEN = "InBetween"
    ON_MAP_SIDE = "OnMapSide"
    DIR_OF_FACILITY = "DirOfFacility"
    VISIBLE_FROM = "VisibleFrom"


# family -> (#biome args, #facility args, needs direction)
SIGNATURES: dict[ConstraintType, tuple[int, int, bool]] = {
    ConstraintType.ACROSS_BIOME_FROM: (1, 2, False),
    ConstraintType.INSIDE: (1, 1, False),
    ConstraintType.OUTSIDE: (1, 1, False),
    ConstraintType.CLOSE_TO_BIOME: (1, 1, False),
    ConstraintType.AWAY_FROM_BIOME: (1, 1, False),
    ConstraintType.DIR_OF_BIOME: (1, 1, True),
    ConstraintType.CLOSE_TO_FACILITY: (0, 2, False),
    ConstraintType.AWAY_FROM_FACILITY: (0, 2, False),
    ConstraintType.IN_BETWEEN: (0, 3, False),
    ConstraintType.ON_MAP_SIDE: (0, 1, True),
    ConstraintType.DIR_OF_FACILITY: (0, 2, True),
    ConstraintType.VISIBLE_FROM: (0, 2, False),
}

# Families whose facility arguments can be swapped without changing meaning;
# used for deduplication when enumerating instantiations.
SYMMETRIC_FACILITY_PAIRS = {
    ConstraintType.CLOSE_TO_FACILITY,
    ConstraintType.AWAY_FROM_FACILITY,
    ConstraintType.ACROSS_BIOME_FROM,
    ConstraintType.VISIBLE_FROM,
}


@dataclass(frozen=True)
class Constraint:
    ctype: ConstraintType
    facilities: tuple[str, ...]
    biome: BiomeType | None = None
    direction: Direction | None = None
    utterance: str = ""

    def validate(self) -> None:
        n_biomes, n_facilities, needs_dir = SIGNATURES[self.ctype]
        if len(self.facilities) != n_facilities:
            raise InvalidConstraintError(
                f"{self.ctype.value} takes {n_facilities} facilities, got {len(self.facilities)}"
            )
        if (self.biome is not None) != (n_biomes == 1):
            raise InvalidConstraintError(f"{self.ctype.value}: biome argument mismatch")
        if (self.direction is not None) != needs_dir:
            raise InvalidConstraintError(f"{self.ctype.value}: direction argument mismatch")

    def key(self) -> tuple:
        """Identity ignoring the utterance text."""
        return (self.ctype, self.facilities, self.biome, self.direction)

    def to_dict(self) -> dict:
        return {
            "type": self.ctype.value,
            "direction": self.direction.value if self.direction else None,
            "biome": self.biome.value if self.biome else None,
            "facilities": list(self.facilities),
            "utterance": self.utterance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Constraint":
        c = cls(
            ctype=ConstraintType(d["type"]),
            facilities=tuple(d["facilities"]),
            biome=BiomeType(d["biome"]) if d.get("biome") else None,
            direction=Direction(d["direction"]) if d.get("direction") else None,
            utterance=d.get("utterance", ""),
        )
        c.validate()
        return c


@dataclass(frozen=True)
class SatisfactionResult:
    score: float
    satisfied: bool

    def __post_init__(self):
        assert 0.0 <= self.score <= 1.0


def satisfied() -> SatisfactionResult:
    return SatisfactionResult(1.0, True)


def unsatisfied(raw_score: float) -> SatisfactionResult:
    """Cap shaped scores at 0.99 so score == 1 characterizes satisfaction."""
    s = max(0.0, min(raw_score, 0.99))
    return SatisfactionResult(s, False)
