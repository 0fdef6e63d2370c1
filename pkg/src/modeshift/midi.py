"""Standard MIDI File ingestion: decoding, track roles, cleaning and bars.

Only format 0/1 files with metrical (ticks-per-quarter) division are read.
:func:`write_smf` is the package's own writer, used by the fixture generator
and by round-trip tests.
"""

from __future__ import annotations

import enum
import struct
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from . import kernels
from .errors import (
    DanglingNoteOn,
    MalformedHeader,
    NoMelodyTrack,
    TooManyBars,
    TruncatedTrack,
    UnsupportedFormat,
)

DEFAULT_TIME_SIGNATURE = (4, 4)
DEFAULT_TEMPO = 500_000  # microseconds per quarter, 120 bpm
DRUM_CHANNEL = 9
POLYPHONY_CUTOFF = 0.95
# time signatures with a denominator above 2**6 are ignored as corrupt
MAX_DENOMINATOR_EXPONENT = 6
MAX_BARS = 100_000


@dataclass(frozen=True, order=True)
class NoteEvent:
    onset: int
    duration: int
    pitch: int
    velocity: int = 64
    channel: int = 0
    track: int = 0

    @property
    def end(self) -> int:
        return self.onset + self.duration


@dataclass(frozen=True)
class TimeGrid:
    ticks_per_quarter: int
    time_signatures: tuple[tuple[int, int, int], ...] = ((0, 4, 4),)
    tempos: tuple[tuple[int, int], ...] = ((0, DEFAULT_TEMPO),)

    def __post_init__(self):
        if self.ticks_per_quarter <= 0:
            raise ValueError("ticks_per_quarter must be positive")
        object.__setattr__(self, "time_signatures", _normalize(self.time_signatures, (0, *DEFAULT_TIME_SIGNATURE)))
        object.__setattr__(self, "tempos", _normalize(self.tempos, (0, DEFAULT_TEMPO)))

    def bar_length(self, numerator: int, denominator: int) -> Fraction:
        return Fraction(numerator * self.ticks_per_quarter * 4, denominator)


def _normalize(entries, default):
    """Sort by tick, keep the last entry per tick, inject ``default`` at tick 0."""
    by_tick = {}
    for entry in sorted(entries, key=lambda e: e[0]):
        by_tick[entry[0]] = tuple(entry)
    if 0 not in by_tick:
        by_tick[0] = default
    return tuple(by_tick[t] for t in sorted(by_tick))


class TrackRole(enum.Enum):
    MELODY = "Melody"
    ACCOMPANIMENT = "Accompaniment"
    DRUM = "Drum"
    POLYPHONY = "Polyphony"
    EMPTY = "Empty"


@dataclass(frozen=True)
class TrackInfo:
    index: int
    role: TrackRole
    note_count: int
    monophony_ratio: float


@dataclass(frozen=True)
class Bar:
    index: int
    pitches: tuple[int, ...]
    start: Fraction = Fraction(0)
    end: Fraction = Fraction(0)


# -- decoding ---------------------------------------------------------------


def parse_smf(data: bytes) -> tuple[TimeGrid, list[list[NoteEvent]]]:
    """Decode SMF bytes into a :class:`TimeGrid` and per-track note lists.

    Note-ons are paired with the earliest unmatched note-on of the same
    channel and pitch. Notes still open at the end of a track are closed
    there and a :class:`DanglingNoteOn` warning is issued.
    """
    data = bytes(data)
    if len(data) < 8 or data[:4] != b"MThd":
        raise MalformedHeader("missing MThd chunk")
    (header_len,) = struct.unpack(">I", data[4:8])
    if header_len < 6:
        raise MalformedHeader(f"header length {header_len} is shorter than 6")
    if len(data) < 8 + header_len:
        raise MalformedHeader("header chunk shorter than declared")
    fmt, ntracks, division = struct.unpack(">HHH", data[8:14])
    if fmt == 2:
        raise UnsupportedFormat("format 2 (sequential tracks) is not supported")
    if fmt not in (0, 1):
        raise MalformedHeader(f"unknown SMF format {fmt}")
    if division & 0x8000:
        raise UnsupportedFormat("SMPTE time division is not supported")
    if division == 0:
        raise MalformedHeader("ticks per quarter must be positive")

    pos = 8 + header_len
    tracks: list[list[NoteEvent]] = []
    signatures = []
    tempos = []
    dangling = 0
    while pos < len(data):
        if len(data) - pos < 8:
            raise TruncatedTrack("chunk header cut short")
        chunk_id = data[pos:pos + 4]
        (length,) = struct.unpack(">I", data[pos + 4:pos + 8])
        body_start = pos + 8
        if body_start + length > len(data):
            raise TruncatedTrack(f"chunk declares {length} bytes, {len(data) - body_start} available")
        pos = body_start + length
        if chunk_id != b"MTrk":
            continue
        index = len(tracks)
        raw, metas, n_dangling = kernels.decode_track(data[body_start:pos])
        dangling += n_dangling
        notes = [NoteEvent(o, d, p, v, c, index) for o, d, p, v, c in raw]
        notes.sort()
        tracks.append(notes)
        for tick, meta_type, payload in metas:
            if meta_type == 0x51 and len(payload) == 3:
                tempo = int.from_bytes(payload, "big")
                if tempo > 0:
                    tempos.append((tick, tempo))
            elif meta_type == 0x58 and len(payload) >= 2:
                numerator, exponent = payload[0], payload[1]
                if numerator > 0 and exponent <= MAX_DENOMINATOR_EXPONENT:
                    signatures.append((tick, numerator, 1 << exponent))
    if len(tracks) < ntracks:
        raise TruncatedTrack(f"header declares {ntracks} tracks, found {len(tracks)}")
    if dangling:
        warnings.warn(f"{dangling} note-on(s) without note-off closed at track end", DanglingNoteOn, stacklevel=2)
    grid = TimeGrid(division, tuple(signatures), tuple(tempos))
    return grid, tracks


def read_smf(source) -> tuple[TimeGrid, list[list[NoteEvent]]]:
    """Parse from a path, raw bytes or a binary file object."""
    if isinstance(source, (bytes, bytearray, memoryview)):
        return parse_smf(source)
    if hasattr(source, "read"):
        return parse_smf(source.read())
    with open(source, "rb") as fh:
        return parse_smf(fh.read())


# -- track roles and cleaning ------------------------------------------------


def monophony_ratio(notes: Sequence[NoteEvent]) -> float:
    """Fraction of onsets at which no other note of the track is sounding."""
    if not notes:
        return 1.0
    ordered = sorted(notes, key=lambda n: n.onset)
    clear = 0
    max_end = None  # latest end among notes with a strictly earlier onset
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j].onset == ordered[i].onset:
            j += 1
        onset = ordered[i].onset
        if j - i == 1 and (max_end is None or max_end <= onset):
            clear += 1
        group_end = max(n.end for n in ordered[i:j])
        max_end = group_end if max_end is None else max(max_end, group_end)
        i = j
    return clear / len(ordered)


def classify_tracks(tracks: Sequence[Sequence[NoteEvent]]) -> list[TrackInfo]:
    """Label each track Drum, Empty, Melody, Polyphony or Accompaniment.

    Raises :class:`NoMelodyTrack` when no track holds pitched non-drum notes.
    """
    stats = []
    for index, notes in enumerate(tracks):
        ratio = monophony_ratio(notes)
        if not notes:
            role = TrackRole.EMPTY
        elif all(n.channel == DRUM_CHANNEL for n in notes):
            role = TrackRole.DRUM
        else:
            role = None
        stats.append((index, role, len(notes), ratio))

    pitched = [s for s in stats if s[1] is None]
    if not pitched:
        raise NoMelodyTrack("no pitched non-drum track")
    melody = min(pitched, key=lambda s: (-s[2], -s[3], s[0]))[0]

    infos = []
    for index, role, count, ratio in stats:
        if role is None:
            if index == melody:
                role = TrackRole.MELODY
            elif ratio < POLYPHONY_CUTOFF:
                role = TrackRole.POLYPHONY
            else:
                role = TrackRole.ACCOMPANIMENT
        infos.append(TrackInfo(index, role, count, ratio))
    return infos


def clean_notes(notes: Iterable[NoteEvent]) -> list[NoteEvent]:
    """Drop zero-length notes, merge same-pitch overlaps, sort by (onset, pitch).

    Exact duplicates collapse as a special case of the overlap merge.
    """
    by_pitch: dict[int, list[NoteEvent]] = {}
    for note in notes:
        if note.duration > 0:
            by_pitch.setdefault(note.pitch, []).append(note)

    out = []
    for pitch_notes in by_pitch.values():
        pitch_notes.sort(key=lambda n: (n.onset, -n.duration))
        current = pitch_notes[0]
        for note in pitch_notes[1:]:
            if note.onset < current.end:
                if note.end > current.end:
                    current = _with_duration(current, note.end - current.onset)
            else:
                out.append(current)
                current = note
        out.append(current)
    out.sort(key=lambda n: (n.onset, n.pitch))
    return out


def _with_duration(note: NoteEvent, duration: int) -> NoteEvent:
    return NoteEvent(note.onset, duration, note.pitch, note.velocity, note.channel, note.track)


# -- bars --------------------------------------------------------------------


def _bar_plan(grid: TimeGrid) -> list[tuple[int, Fraction, int]]:
    """(start tick, bar length, index of first bar) for each signature segment."""
    plan = []
    for tick, numerator, denominator in grid.time_signatures:
        length = grid.bar_length(numerator, denominator)
        if plan:
            prev_tick, prev_len, prev_first = plan[-1]
            first = prev_first + ceil(Fraction(tick - prev_tick) / prev_len)
        else:
            first = 0
        plan.append((tick, length, first))
    return plan


def segment_bars(notes: Sequence[NoteEvent], grid: TimeGrid) -> list[Bar]:
    """Group note pitches into bars by onset tick.

    A time-signature change always starts a new bar. Interior empty bars
    are kept with no pitches; trailing empty bars are not produced.
    """
    if not notes:
        return []
    plan = _bar_plan(grid)
    starts = [p[0] for p in plan]

    # bar length as an integer ratio so lookup is plain floor division
    ratios = [(tick, length.numerator, length.denominator, first) for tick, length, first in plan]

    def locate(onset: int) -> int:
        tick, num, den, first = ratios[bisect_right(starts, onset) - 1]
        return first + (onset - tick) * den // num

    ordered = sorted(notes, key=lambda n: (n.onset, n.pitch))
    indices = [locate(n.onset) for n in ordered]
    n_bars = indices[-1] + 1
    if n_bars > MAX_BARS:
        raise TooManyBars(f"{n_bars} bars exceeds the limit of {MAX_BARS}")

    pitches: list[list[int]] = [[] for _ in range(n_bars)]
    for note, index in zip(ordered, indices):
        pitches[index].append(note.pitch)

    bars = []
    seg = 0
    for index in range(n_bars):
        while seg + 1 < len(plan) and plan[seg + 1][2] <= index:
            seg += 1
        tick, length, first = plan[seg]
        start = tick + (index - first) * length
        end = start + length
        if seg + 1 < len(plan):
            end = min(end, Fraction(plan[seg + 1][0]))
        bars.append(Bar(index, tuple(pitches[index]), Fraction(start), Fraction(end)))
    return bars


def melody_bars(data: bytes) -> list[Bar]:
    """Full ingest: parse, clean, pick the melody track and split it into bars."""
    grid, tracks = parse_smf(data)
    cleaned = [clean_notes(t) for t in tracks]
    infos = classify_tracks(cleaned)
    melody = next(i.index for i in infos if i.role is TrackRole.MELODY)
    return segment_bars(cleaned[melody], grid)


# -- writing -----------------------------------------------------------------


def _vlq(value: int) -> bytes:
    if value < 0 or value > 0x0FFFFFFF:
        raise ValueError(f"value {value} out of range for a variable-length quantity")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def _track_chunk(events: list[tuple[int, int, bytes]], running_status: bool) -> bytes:
    """Encode ``(tick, order, message)`` events; ``order`` breaks tick ties."""
    body = bytearray()
    last_tick = 0
    last_status = None
    for tick, _order, message in sorted(events, key=lambda e: (e[0], e[1])):
        body += _vlq(tick - last_tick)
        last_tick = tick
        status = message[0]
        if running_status and status < 0xF0 and status == last_status:
            body += message[1:]
        else:
            body += message
        last_status = status if status < 0xF0 else None
    body += b"\x00\xff\x2f\x00"
    return b"MTrk" + struct.pack(">I", len(body)) + bytes(body)


def write_smf(
    tracks: Sequence[Sequence[NoteEvent]],
    ticks_per_quarter: int = 480,
    tempo: int = DEFAULT_TEMPO,
    time_signature: tuple[int, int] = DEFAULT_TIME_SIGNATURE,
    running_status: bool = True,
    note_off_as_zero_velocity: bool = True,
) -> bytes:
    """Encode note tracks as an SMF (format 0 for one track, else format 1).

    Tempo and time signature go at tick 0 of the first track. At equal
    ticks note-offs are written before note-ons so that back-to-back notes
    of one pitch pair correctly.
    """
    numerator, denominator = time_signature
    exponent = denominator.bit_length() - 1
    if 1 << exponent != denominator:
        raise ValueError("time signature denominator must be a power of two")
    chunks = []
    for index, notes in enumerate(tracks):
        events = []
        if index == 0:
            events.append((0, 0, b"\xff\x51\x03" + tempo.to_bytes(3, "big")))
            events.append((0, 1, bytes([0xFF, 0x58, 0x04, numerator, exponent, 24, 8])))
        for note in notes:
            if note.duration <= 0:
                raise ValueError(f"cannot write a note with duration {note.duration}")
            on = bytes([0x90 | note.channel, note.pitch, note.velocity])
            if note_off_as_zero_velocity:
                off = bytes([0x90 | note.channel, note.pitch, 0])
            else:
                off = bytes([0x80 | note.channel, note.pitch, 64])
            events.append((note.onset, 3, on))
            events.append((note.end, 2, off))
        chunks.append(_track_chunk(events, running_status))
    fmt = 0 if len(tracks) == 1 else 1
    header = b"MThd" + struct.pack(">IHHH", 6, fmt, len(tracks), ticks_per_quarter)
    return header + b"".join(chunks)
