"""Pure-Python implementations of the hot kernels.

These are the reference behaviour; ``_speedups.pyx`` must match them exactly.
"""

from __future__ import annotations

from collections import deque

from .errors import MalformedTrack, TruncatedTrack
from .theory import MODE_MASK_BITS

# data-byte count for channel messages, keyed by status high nibble
_DATA_LEN = {0x8: 2, 0x9: 2, 0xA: 2, 0xB: 2, 0xC: 1, 0xD: 1, 0xE: 2}

META_TEMPO = 0x51
META_TIME_SIGNATURE = 0x58
META_END_OF_TRACK = 0x2F


def _read_vlq(data: bytes, pos: int, end: int) -> tuple[int, int]:
    value = 0
    for _ in range(4):
        if pos >= end:
            raise TruncatedTrack("variable-length quantity runs past end of track")
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos
    raise MalformedTrack("variable-length quantity longer than 4 bytes")


def decode_track(data: bytes) -> tuple[list, list, int]:
    """Decode one ``MTrk`` chunk body.

    Returns ``(notes, metas, dangling)`` where ``notes`` holds
    ``(onset, duration, pitch, velocity, channel)`` tuples in note-off order,
    ``metas`` holds ``(tick, type, payload)`` for tempo and time-signature
    events, and ``dangling`` counts note-ons closed at the end of the track.
    """
    end = len(data)
    pos = 0
    tick = 0
    running = -1
    notes = []
    metas = []
    pending: dict[tuple[int, int], deque] = {}

    while pos < end:
        delta, pos = _read_vlq(data, pos, end)
        tick += delta
        if pos >= end:
            raise TruncatedTrack("event status missing at end of track")
        status = data[pos]
        if status & 0x80:
            pos += 1
        elif running < 0:
            raise MalformedTrack(f"data byte 0x{status:02x} without running status")
        else:
            status = running

        if status == 0xFF:
            if pos >= end:
                raise TruncatedTrack("meta event type missing")
            meta_type = data[pos]
            length, pos = _read_vlq(data, pos + 1, end)
            if pos + length > end:
                raise TruncatedTrack("meta event payload runs past end of track")
            if meta_type in (META_TEMPO, META_TIME_SIGNATURE):
                metas.append((tick, meta_type, bytes(data[pos:pos + length])))
            pos += length
            running = -1
            if meta_type == META_END_OF_TRACK:
                break
        elif status == 0xF0 or status == 0xF7:
            length, pos = _read_vlq(data, pos, end)
            if pos + length > end:
                raise TruncatedTrack("sysex payload runs past end of track")
            pos += length
            running = -1
        elif status >= 0xF0:
            raise MalformedTrack(f"status 0x{status:02x} is not allowed in a file")
        else:
            kind = status >> 4
            n = _DATA_LEN[kind]
            if pos + n > end:
                raise TruncatedTrack("channel message runs past end of track")
            d1 = data[pos]
            d2 = data[pos + 1] if n == 2 else 0
            if d1 & 0x80 or d2 & 0x80:
                raise MalformedTrack("data byte with high bit set")
            pos += n
            running = status
            channel = status & 0x0F
            if kind == 0x9 and d2 > 0:
                pending.setdefault((channel, d1), deque()).append((tick, d2))
            elif kind == 0x8 or kind == 0x9:
                queue = pending.get((channel, d1))
                if queue:
                    onset, velocity = queue.popleft()
                    notes.append((onset, tick - onset, d1, velocity, channel))

    dangling = 0
    for (channel, pitch), queue in pending.items():
        for onset, velocity in queue:
            notes.append((onset, tick - onset, pitch, velocity, channel))
            dangling += 1
    return notes, metas, dangling


def pitch_class_mask(pitches) -> int:
    bits = 0
    for p in pitches:
        bits |= 1 << (p % 12)
    return bits


def candidate_masks(pc_masks) -> list[int]:
    """Map 12-bit pitch-class sets to 24-bit surviving-mode sets."""
    out = []
    for pcs in pc_masks:
        survivors = 0
        for index, mask in enumerate(MODE_MASK_BITS):
            if not pcs & mask:
                survivors |= 1 << index
        out.append(survivors)
    return out
