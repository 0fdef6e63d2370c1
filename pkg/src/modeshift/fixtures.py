"""Deterministic synthetic melody corpora.

Every fixture is an 8-bar, 4/4, single-track format-0 file at 480 ticks per
quarter with a tempo drawn between 68 and 118 bpm. Kinds:

``diatonic``
    one random major key throughout.
``close-modulating``
    one modulation to a key a fifth away.
``distant-modulating``
    a new key three or more fifths away from the previous one in every bar.
``chromatic``
    sixteen uniformly random pitch classes per bar, at least ten distinct.

Tonal bars are eight eighth notes covering all seven scale degrees of the
bar's key, so every tonal bar admits exactly one candidate mode.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Sequence

from .midi import NoteEvent, write_smf
from .theory import MAJOR, Mode, fifths_distance

KINDS = ("diatonic", "close-modulating", "distant-modulating", "chromatic")
TICKS_PER_QUARTER = 480
BAR_TICKS = 4 * TICKS_PER_QUARTER
N_BARS = 8
MIN_BPM, MAX_BPM = 68, 118
LOW_PITCH, HIGH_PITCH = 55, 84

# the abnormal-change worked example, one bar per listed major key
WORKED_EXAMPLE = ("C", "C", "C", "G", "G", "E", "A", "B", "F", "A", "C")


def _nearest(prev: int, pc: int) -> int:
    """Pitch with class ``pc`` closest to ``prev`` inside the melody range."""
    options = [p for p in range(LOW_PITCH, HIGH_PITCH + 1) if p % 12 == pc]
    return min(options, key=lambda p: (abs(p - prev), p))


def _bar_notes(pcs: Sequence[int], bar: int, step: int, prev: int, rng: random.Random) -> tuple[list[NoteEvent], int]:
    notes = []
    start = bar * BAR_TICKS
    for i, pc in enumerate(pcs):
        pitch = _nearest(prev, pc)
        velocity = rng.randint(60, 100)
        notes.append(NoteEvent(start + i * step, step, pitch, velocity))
        prev = pitch
    return notes, prev


def _tonal_bar(mode: Mode, rng: random.Random) -> list[int]:
    pcs = sorted(mode.scale_pitch_classes())
    pcs.append(rng.choice(pcs))
    rng.shuffle(pcs)
    return pcs


def _chromatic_bar(rng: random.Random) -> list[int]:
    while True:
        pcs = [rng.randrange(12) for _ in range(16)]
        if len(set(pcs)) >= 10:
            return pcs


def melody_from_modes(modes: Sequence[Mode], rng: random.Random | None = None) -> list[NoteEvent]:
    """One bar per mode, each bar spelling that mode's full survivor scale."""
    rng = rng or random.Random(0)
    notes: list[NoteEvent] = []
    prev = 67
    for bar, mode in enumerate(modes):
        bar_notes, prev = _bar_notes(_tonal_bar(mode, rng), bar, TICKS_PER_QUARTER // 2, prev, rng)
        notes += bar_notes
    return notes


def bar_keys(kind: str, rng: random.Random) -> list[Mode] | None:
    """Per-bar keys for a tonal kind; ``None`` for ``chromatic``."""
    key = rng.randrange(12)
    if kind == "diatonic":
        return [Mode(key, MAJOR)] * N_BARS
    if kind == "close-modulating":
        target = (key + rng.choice((7, 5))) % 12
        switch = rng.randint(2, N_BARS - 2)
        return [Mode(key if b < switch else target, MAJOR) for b in range(N_BARS)]
    if kind == "distant-modulating":
        keys = [key]
        for _ in range(N_BARS - 1):
            keys.append(rng.choice([k for k in range(12) if fifths_distance(keys[-1], k) >= 3]))
        return [Mode(k, MAJOR) for k in keys]
    if kind == "chromatic":
        return None
    raise ValueError(f"unknown fixture kind {kind!r}; expected one of {', '.join(KINDS)}")


def fixture_bytes(kind: str, rng: random.Random) -> bytes:
    tempo = round(60_000_000 / rng.randint(MIN_BPM, MAX_BPM))
    keys = bar_keys(kind, rng)
    if keys is None:
        notes: list[NoteEvent] = []
        prev = 67
        for bar in range(N_BARS):
            bar_notes, prev = _bar_notes(_chromatic_bar(rng), bar, TICKS_PER_QUARTER // 4, prev, rng)
            notes += bar_notes
    else:
        notes = melody_from_modes(keys, rng)
    return write_smf([notes], TICKS_PER_QUARTER, tempo=tempo)


def worked_example_bytes() -> bytes:
    modes = [Mode.parse(name) for name in WORKED_EXAMPLE]
    return write_smf([melody_from_modes(modes)], TICKS_PER_QUARTER)


def generate_fixture_corpus(kind: str, count: int, seed: int, out_dir) -> list[Path]:
    """Write ``count`` fixtures of ``kind`` into ``out_dir``; same seed, same bytes."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if kind not in KINDS:
        raise ValueError(f"unknown fixture kind {kind!r}; expected one of {', '.join(KINDS)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        rng = random.Random(f"{kind}:{seed}:{i}")
        path = out / f"{kind}-{seed}-{i:05d}.mid"
        path.write_bytes(fixture_bytes(kind, rng))
        paths.append(path)
    return paths
