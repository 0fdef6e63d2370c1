"""Scale and mask constructors, pitch-class arithmetic and key closeness.

Pitch classes and octave groups are plain ``int`` values: a MIDI pitch ``p``
splits as ``p == pitch_class(p) + 12 * octave(p)``.

A :class:`Mode` is identified by the keynote of its *major* reference scale.
Minor modes carry the keynote of their relative major, so ``Mode(0, MINOR)``
is A minor; :attr:`Mode.tonic` gives the sounding tonic.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator

NOTE_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

MAJOR_STEPS = (0, 2, 4, 5, 7, 9, 11)
MINOR_STEPS = (0, 2, 3, 5, 7, 8, 10)
MAJOR_MASK_STEPS = (1, 3, 6, 8, 10)
MINOR_MASK_STEPS = (1, 3, 6, 7, 10)

# relative minor tonic sits a major sixth above the major keynote
RELATIVE_MINOR_OFFSET = 9


class Quality(enum.IntEnum):
    MAJOR = 0
    MINOR = 1


MAJOR = Quality.MAJOR
MINOR = Quality.MINOR


def pitch_class(pitch: int) -> int:
    return pitch % 12


def octave(pitch: int) -> int:
    return pitch // 12


def _build(keynote: int, octave_group: int, steps: tuple[int, ...]) -> list[int]:
    if octave_group < 0:
        raise ValueError(f"octave group must be non-negative, got {octave_group}")
    base = keynote + octave_group * 12
    return [base + step for step in steps]


def major_scale(keynote: int, octave_group: int = 0) -> list[int]:
    """Natural major scale on ``keynote`` in the given octave group.

    >>> major_scale(7, 0)
    [7, 9, 11, 12, 14, 16, 18]
    """
    return _build(keynote, octave_group, MAJOR_STEPS)


def minor_scale(keynote: int, octave_group: int = 0) -> list[int]:
    """Natural minor scale on ``keynote`` in the given octave group."""
    return _build(keynote, octave_group, MINOR_STEPS)


def major_mask(keynote: int, octave_group: int = 0) -> list[int]:
    """The five pitches foreign to the major scale on ``keynote``.

    >>> major_mask(0, 1)
    [13, 15, 18, 20, 22]
    """
    return _build(keynote, octave_group, MAJOR_MASK_STEPS)


def minor_mask(keynote: int, octave_group: int = 0) -> list[int]:
    """Exclusion mask for the minor mode labelled by major keynote ``keynote``.

    Identical to :func:`major_mask` except that ``keynote + 7`` replaces
    ``keynote + 8``; its complement is the harmonic minor of
    ``keynote + 9``, not :func:`minor_scale`.
    """
    return _build(keynote, octave_group, MINOR_MASK_STEPS)


@dataclass(frozen=True, order=True)
class Mode:
    """One of the 24 candidate modes.

    Ordering follows :attr:`index`: all majors by ascending keynote, then
    all minors. That is also the tie-break order used by tendency ranking.
    """

    quality: Quality
    keynote: int

    def __init__(self, keynote: int, quality: Quality = MAJOR):
        if not 0 <= keynote <= 11:
            raise ValueError(f"keynote must be in 0..11, got {keynote}")
        object.__setattr__(self, "quality", Quality(quality))
        object.__setattr__(self, "keynote", keynote)

    @property
    def index(self) -> int:
        return self.quality * 12 + self.keynote

    @property
    def bit(self) -> int:
        return 1 << self.index

    @property
    def tonic(self) -> int:
        if self.quality is MAJOR:
            return self.keynote
        return (self.keynote + RELATIVE_MINOR_OFFSET) % 12

    @property
    def name(self) -> str:
        suffix = "m" if self.quality is MINOR else ""
        return NOTE_NAMES[self.tonic] + suffix

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Mode({self.name})"

    @classmethod
    def from_index(cls, index: int) -> Mode:
        return ALL_MODES[index]

    @classmethod
    def parse(cls, name: str) -> Mode:
        """Parse names such as ``"C"``, ``"F#"``, ``"Bb"``, ``"Am"`` or ``"C#m"``."""
        match = _NAME_RE.fullmatch(name.strip())
        if match is None:
            raise ValueError(f"not a mode name: {name!r}")
        letter, accidental, minor = match.groups()
        tonic = NOTE_NAMES.index(letter.upper())
        tonic += {"": 0, "#": 1, "b": -1}[accidental]
        tonic %= 12
        if minor:
            return cls((tonic - RELATIVE_MINOR_OFFSET) % 12, MINOR)
        return cls(tonic, MAJOR)

    def scale_pitch_classes(self) -> frozenset[int]:
        """Pitch classes that survive this mode's mask (the complement)."""
        return frozenset(range(12)) - mask_pitch_classes(self)


_NAME_RE = re.compile(r"([A-Ga-g])([#b]?)(m?)")

ALL_MODES: tuple[Mode, ...] = tuple(
    Mode(k, q) for q in (MAJOR, MINOR) for k in range(12)
)


def iter_modes() -> Iterator[Mode]:
    return iter(ALL_MODES)


def mask_pitch_classes(mode: Mode) -> frozenset[int]:
    steps = MAJOR_MASK_STEPS if mode.quality is MAJOR else MINOR_MASK_STEPS
    return frozenset((mode.keynote + d) % 12 for d in steps)


def pc_bits(pitch_classes) -> int:
    """Pack pitch classes into a 12-bit integer (bit ``pc`` set)."""
    bits = 0
    for pc in pitch_classes:
        bits |= 1 << (pc % 12)
    return bits


# 12-bit mask per mode, indexed by Mode.index
MODE_MASK_BITS: tuple[int, ...] = tuple(pc_bits(mask_pitch_classes(m)) for m in ALL_MODES)


def fifths_distance(a: int, b: int) -> int:
    """Fewest perfect-fifth steps between two pitch classes (0..6)."""
    # a fifth is 7 semitones and 7 * 7 == 49 == 1 (mod 12), so 7 is its own inverse
    steps = ((b - a) * 7) % 12
    return min(steps, 12 - steps)


def is_closely_related(a: Mode, b: Mode, threshold: int = 1) -> bool:
    return fifths_distance(a.keynote, b.keynote) <= threshold
