"""English renderings of constraints and the inverse parser.

Each family has a small template pool; rendering with no rng picks the first
template, a seeded rng picks uniformly. parse_utterance inverts any template,
so parse(render(c)) recovers c up to the utterance text.
"""

from __future__ import annotations

import re

from ..errors import InvalidInputError
from ..worldgen.types import BiomeType
from .types import Constraint, ConstraintType, Direction

BIOME_WORDS: dict[BiomeType, str] = {
    BiomeType.OCEAN: "the ocean",
    BiomeType.LAKE: "the lake",
    BiomeType.COAST: "the coast",
    BiomeType.PLAINS: "the plains",
    BiomeType.FOREST: "the forest",
    BiomeType.DESERT: "the desert",
    BiomeType.SWAMP: "the swamp",
    BiomeType.TUNDRA: "the tundra",
    BiomeType.MOUNTAIN: "the mountains",
}
_WORD_TO_BIOME = {w: b for b, w in BIOME_WORDS.items()}
_WORD_TO_DIRECTION = {d.word: d for d in Direction}

# {a}/{b}/{c} are facility slots in constraint argument order.
TEMPLATES: dict[ConstraintType, list[str]] = {
    ConstraintType.ACROSS_BIOME_FROM: [
        "{a} is across {biome} from {b}",
        "{a} and {b} are separated by {biome}",
    ],
    ConstraintType.INSIDE: [
        "{a} is inside {biome}",
        "{a} lies within {biome}",
    ],
    ConstraintType.OUTSIDE: [
        "{a} is outside {biome}",
        "{a} stays out of {biome}",
    ],
    ConstraintType.CLOSE_TO_BIOME: [
        "{a} is close to {biome}",
        "{a} sits near {biome}",
    ],
    ConstraintType.AWAY_FROM_BIOME: [
        "{a} is away from {biome}",
        "{a} is far from {biome}",
    ],
    ConstraintType.DIR_OF_BIOME: [
        "{a} is to the {direction} of {biome}",
        "{a} lies {direction} of {biome}",
    ],
    ConstraintType.CLOSE_TO_FACILITY: [
        "{a} is close to {b}",
        "{a} sits near {b}",
    ],
    ConstraintType.AWAY_FROM_FACILITY: [
        "{a} is away from {b}",
        "{a} is far from {b}",
    ],
    ConstraintType.IN_BETWEEN: [
        "{a} is between {b} and {c}",
        "{a} lies between {b} and {c}",
    ],
    ConstraintType.ON_MAP_SIDE: [
        "{a} is on the {direction} of the map",
        "{a} sits at the {direction} edge of the map",
    ],
    ConstraintType.DIR_OF_FACILITY: [
        "{a} is located {direction} of {b}",
        "{a} is to the {direction} of {b}",
    ],
    ConstraintType.VISIBLE_FROM: [
        "{b} is visible from {a}",
        "{a} has a clear view of {b}",
    ],
}


def render_utterance(constraint: Constraint, rng=None, names: dict[str, str] | None = None) -> str:
    """Instantiate a template; rng=None always uses the first one."""
    constraint.validate()
    pool = TEMPLATES[constraint.ctype]
    template = pool[0] if rng is None else pool[int(rng.integers(len(pool)))]
    slots = {}
    for slot, fid in zip("abc", constraint.facilities):
        slots[slot] = names[fid] if names else fid
    if constraint.biome is not None:
        slots["biome"] = BIOME_WORDS[constraint.biome]
    if constraint.direction is not None:
        slots["direction"] = constraint.direction.word
    return template.format(**slots)


def _pattern_of(template: str) -> re.Pattern:
    out = re.escape(template)
    out = out.replace(r"\{a\}", r"(?P<a>.+?)")
    out = out.replace(r"\{b\}", r"(?P<b>.+?)")
    out = out.replace(r"\{c\}", r"(?P<c>.+?)")
    out = out.replace(r"\{biome\}", r"(?P<biome>the\ [a-z]+)")
    out = out.replace(r"\{direction\}", r"(?P<direction>north|south|east|west)")
    return re.compile("^" + out + "$")


_COMPILED: list[tuple[ConstraintType, re.Pattern]] = [
    (ctype, _pattern_of(t)) for ctype, pool in TEMPLATES.items() for t in pool
]


def parse_utterance(text: str, names: dict[str, str] | None = None) -> Constraint:
    """Recover the constraint from any rendered template.

    Biome-flavored patterns are tried first; a capture that is not a known
    biome word falls through to the facility-flavored family.
    """
    reverse_names = {v: k for k, v in names.items()} if names else {}
    for ctype, pattern in _COMPILED:
        m = pattern.match(text.strip())
        if not m:
            continue
        groups = m.groupdict()
        biome = None
        if "biome" in groups and groups["biome"] is not None:
            biome = _WORD_TO_BIOME.get(groups["biome"])
            if biome is None:
                continue
        direction = None
        if "direction" in groups and groups["direction"] is not None:
            direction = _WORD_TO_DIRECTION[groups["direction"]]
        facilities = tuple(
            reverse_names.get(groups[s], groups[s])
            for s in "abc"
            if s in groups and groups[s] is not None
        )
        c = Constraint(
            ctype=ctype,
            facilities=facilities,
            biome=biome,
            direction=direction,
            utterance=text,
        )
        try:
            c.validate()
        except Exception:
            continue
        return c
    raise InvalidInputError(f"unparseable utterance: {text!r}")
