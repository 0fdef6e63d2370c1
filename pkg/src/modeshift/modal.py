"""Per-bar mode candidates, piece-wide mode tendency and bar assignment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from . import kernels
from .errors import EmptyPiece
from .midi import Bar
from .theory import ALL_MODES, Mode

FULL_SET_BITS = (1 << 24) - 1


@dataclass(frozen=True)
class CandidateSet:
    """Modes surviving mask exclusion for one bar, as a 24-bit membership mask.

    Bit ``i`` corresponds to ``Mode.from_index(i)``.
    """

    bits: int = 0

    @classmethod
    def of(cls, modes: Iterable[Mode]) -> CandidateSet:
        bits = 0
        for mode in modes:
            bits |= mode.bit
        return cls(bits)

    @classmethod
    def full(cls) -> CandidateSet:
        return cls(FULL_SET_BITS)

    def __contains__(self, mode: Mode) -> bool:
        return bool(self.bits >> mode.index & 1)

    def __iter__(self) -> Iterator[Mode]:
        return (m for m in ALL_MODES if self.bits >> m.index & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def names(self) -> list[str]:
        return [m.name for m in self]


@dataclass(frozen=True)
class TendencyRanking:
    """All 24 modes with their survival counts, most frequent first.

    Equal counts are ordered Major before Minor, then by ascending keynote.
    """

    entries: tuple[tuple[Mode, int], ...]

    @classmethod
    def from_counts(cls, counts: dict[Mode, int]) -> TendencyRanking:
        entries = [(m, counts.get(m, 0)) for m in ALL_MODES]
        entries.sort(key=lambda e: (-e[1], e[0].index))
        return cls(tuple(entries))

    @property
    def order(self) -> list[Mode]:
        return [m for m, _ in self.entries]

    @property
    def head(self) -> Mode:
        return self.entries[0][0]

    def count(self, mode: Mode) -> int:
        for m, c in self.entries:
            if m == mode:
                return c
        raise KeyError(mode)


# per-bar entry of a ModeTrace when no mode survives
UNKNOWN = None
ModeTrace = list[Optional[Mode]]


def candidate_modes(bar: Bar | Sequence[int]) -> CandidateSet:
    """Modes whose mask shares no pitch class with the bar.

    >>> Mode(0) in candidate_modes([13])
    False
    """
    pitches = bar.pitches if isinstance(bar, Bar) else bar
    return CandidateSet(kernels.candidate_masks([kernels.pitch_class_mask(pitches)])[0])


def candidate_sets(bars: Sequence[Bar]) -> list[CandidateSet]:
    pc_masks = [kernels.pitch_class_mask(b.pitches) for b in bars]
    return [CandidateSet(bits) for bits in kernels.candidate_masks(pc_masks)]


def tendency_ranking(sets: Sequence[CandidateSet]) -> TendencyRanking:
    if not sets:
        raise EmptyPiece("no bars to rank")
    counts = [0] * 24
    for s in sets:
        bits = s.bits
        for i in range(24):
            counts[i] += bits >> i & 1
    return TendencyRanking.from_counts({m: counts[m.index] for m in ALL_MODES})


def assign_bar_modes(sets: Sequence[CandidateSet], ranking: TendencyRanking) -> ModeTrace:
    """Give each bar the highest-ranked mode it admits, or ``UNKNOWN``."""
    order = ranking.order
    trace: ModeTrace = []
    for s in sets:
        trace.append(next((m for m in order if m in s), UNKNOWN))
    return trace


def debug_dump(bars: Sequence[Bar], sets: Sequence[CandidateSet] | None = None) -> str:
    """One tab-separated line per bar: index, pitch classes, surviving modes."""
    if sets is None:
        sets = candidate_sets(bars)
    lines = []
    for bar, s in zip(bars, sets):
        pcs = ",".join(str(pc) for pc in sorted({p % 12 for p in bar.pitches}))
        modes = " ".join(s.names()) or "-"
        lines.append(f"{bar.index}\t{pcs or '-'}\t{modes}")
    return "\n".join(lines) + ("\n" if lines else "")
