"""Abnormal mode-change detection and the human/machine provenance score."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import EmptyTrace
from .midi import Bar
from .modal import (
    CandidateSet,
    ModeTrace,
    TendencyRanking,
    assign_bar_modes,
    candidate_sets,
    tendency_ranking,
)
from .theory import Mode, is_closely_related


class PolicyKind(enum.Enum):
    ANCHOR_RETURN = "anchor-return"
    PAIRWISE = "pairwise"


class Direction(enum.Enum):
    LOW_IS_MACHINE = "low-is-machine"
    HIGH_IS_MACHINE = "high-is-machine"


class Label(enum.Enum):
    MACHINE = "Machine"
    HUMAN = "Human"


@dataclass(frozen=True)
class TransitionPolicy:
    kind: PolicyKind = PolicyKind.ANCHOR_RETURN
    threshold: int = 1

    def __post_init__(self):
        if not 0 <= self.threshold <= 6:
            raise ValueError(f"closeness threshold must be in 0..6, got {self.threshold}")


ANCHOR_RETURN = TransitionPolicy(PolicyKind.ANCHOR_RETURN)
PAIRWISE = TransitionPolicy(PolicyKind.PAIRWISE)


@dataclass(frozen=True)
class Transition:
    """One bar boundary: bars ``index`` and ``index + 1``."""

    index: int
    prev: Optional[Mode]
    cur: Optional[Mode]
    abnormal: bool
    state: str  # policy state after this transition
    anchor: Optional[Mode] = None

    def as_dict(self) -> dict:
        return {
            "bars": [self.index, self.index + 1],
            "prev": _name(self.prev),
            "cur": _name(self.cur),
            "abnormal": self.abnormal,
            "state": self.state,
            "anchor": _name(self.anchor),
        }


def _name(mode: Optional[Mode]) -> Optional[str]:
    return None if mode is None else mode.name


@dataclass(frozen=True)
class ProvenanceScore:
    abnormal_count: int
    transition_count: int
    transitions: tuple[Transition, ...] = ()
    degenerate: bool = False

    @property
    def score(self) -> Fraction:
        if self.transition_count == 0:
            return Fraction(0)
        return Fraction(self.abnormal_count, self.transition_count)

    @property
    def flags(self) -> list[bool]:
        return [t.abnormal for t in self.transitions]


def _anchor_return(trace: ModeTrace, threshold: int) -> list[Transition]:
    out = []
    anchor = trace[0]
    stable = True
    for i in range(1, len(trace)):
        prev, cur = trace[i - 1], trace[i]
        if anchor is None:
            # no known mode seen yet; the first known one seeds the anchor
            abnormal = True
            if cur is not None:
                anchor = cur
                stable = True
        elif stable:
            if cur is None or not is_closely_related(anchor, cur, threshold):
                abnormal = True
                stable = False
            else:
                abnormal = False
                anchor = cur
        else:
            if cur == anchor:
                abnormal = False
                stable = True
            else:
                abnormal = True
        out.append(Transition(i - 1, prev, cur, abnormal, "stable" if stable else "abnormal", anchor))
    return out


def _pairwise(trace: ModeTrace, threshold: int) -> list[Transition]:
    out = []
    for i in range(1, len(trace)):
        prev, cur = trace[i - 1], trace[i]
        abnormal = prev is None or cur is None or not is_closely_related(prev, cur, threshold)
        out.append(Transition(i - 1, prev, cur, abnormal, "abnormal" if abnormal else "stable"))
    return out


def abnormal_transitions(trace: ModeTrace, policy: TransitionPolicy = ANCHOR_RETURN) -> ProvenanceScore:
    """Flag each bar-to-bar mode change as normal or abnormal.

    Under ``ANCHOR_RETURN`` a change away from the running anchor mode to a
    distant (or unknown) mode starts an abnormal stretch that lasts until
    the anchor itself comes back. ``PAIRWISE`` judges each neighbouring pair
    on its own.
    """
    if len(trace) == 0:
        raise EmptyTrace("cannot score an empty mode trace")
    if policy.kind is PolicyKind.ANCHOR_RETURN:
        transitions = _anchor_return(trace, policy.threshold)
    else:
        transitions = _pairwise(trace, policy.threshold)
    abnormal = sum(t.abnormal for t in transitions)
    return ProvenanceScore(abnormal, len(transitions), tuple(transitions), degenerate=not transitions)


@dataclass(frozen=True)
class MelodyAnalysis:
    bars: tuple[Bar, ...]
    sets: tuple[CandidateSet, ...]
    ranking: Optional[TendencyRanking]
    trace: tuple[Optional[Mode], ...]
    result: ProvenanceScore = field(default_factory=lambda: ProvenanceScore(0, 0, degenerate=True))

    @property
    def main_mode(self) -> Optional[Mode]:
        """Head of the tendency ranking, or ``None`` if no mode survives any bar."""
        if self.ranking is None or self.ranking.entries[0][1] == 0:
            return None
        return self.ranking.head


def analyze_bars(bars: Sequence[Bar], policy: TransitionPolicy = ANCHOR_RETURN) -> MelodyAnalysis:
    """Run candidates, tendency, assignment and scoring over a melody's bars."""
    bars = tuple(bars)
    if not bars:
        return MelodyAnalysis((), (), None, ())
    sets = tuple(candidate_sets(bars))
    ranking = tendency_ranking(sets)
    trace = tuple(assign_bar_modes(sets, ranking))
    return MelodyAnalysis(bars, sets, ranking, trace, abnormal_transitions(list(trace), policy))


def melody_score(bars: Sequence[Bar], policy: TransitionPolicy = ANCHOR_RETURN) -> ProvenanceScore:
    return analyze_bars(bars, policy).result


def as_fraction(value: Union[Fraction, int, float, str]) -> Fraction:
    if isinstance(value, float):
        # go through the decimal repr so 0.3 means 3/10, not the nearest double
        return Fraction(repr(value))
    return Fraction(value)


def classify(
    score: Union[ProvenanceScore, Fraction, float],
    threshold: Union[Fraction, float, str] = Fraction(3, 10),
    direction: Direction = Direction.LOW_IS_MACHINE,
) -> Label:
    """Machine iff score <= threshold (LOW_IS_MACHINE) or score > threshold."""
    value = score.score if isinstance(score, ProvenanceScore) else as_fraction(score)
    limit = as_fraction(threshold)
    if not 0 <= limit <= 1:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    low = value <= limit
    if direction is Direction.LOW_IS_MACHINE:
        return Label.MACHINE if low else Label.HUMAN
    return Label.HUMAN if low else Label.MACHINE
