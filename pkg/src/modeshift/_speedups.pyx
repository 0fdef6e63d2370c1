# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; behaviour is identical."""

from modeshift.errors import MalformedTrack, TruncatedTrack
from modeshift.theory import MODE_MASK_BITS

cdef int[7] DATA_LEN = [2, 2, 2, 2, 1, 1, 2]  # nibbles 0x8..0xE

cdef unsigned int[24] _MASKS
for _i in range(24):
    _MASKS[_i] = MODE_MASK_BITS[_i]


cdef inline Py_ssize_t _read_vlq(const unsigned char[:] data, Py_ssize_t pos,
                                 Py_ssize_t end, long long *value) except -1:
    cdef long long v = 0
    cdef unsigned char byte
    cdef int i
    for i in range(4):
        if pos >= end:
            raise TruncatedTrack("variable-length quantity runs past end of track")
        byte = data[pos]
        pos += 1
        v = (v << 7) | (byte & 0x7F)
        if not byte & 0x80:
            value[0] = v
            return pos
    raise MalformedTrack("variable-length quantity longer than 4 bytes")


def decode_track(data):
    cdef const unsigned char[:] buf = data
    cdef Py_ssize_t end = buf.shape[0]
    cdef Py_ssize_t pos = 0
    cdef long long tick = 0
    cdef long long delta = 0
    cdef long long length = 0
    cdef int running = -1
    cdef int status, meta_type, kind, n, d1, d2, channel, slot
    cdef int dangling = 0
    cdef list notes = []
    cdef list metas = []
    # FIFO of (onset, velocity) per (channel, pitch); head index per slot
    cdef list pending = [None] * 2048
    cdef int[2048] head
    cdef list queue
    for slot in range(2048):
        head[slot] = 0

    while pos < end:
        pos = _read_vlq(buf, pos, end, &delta)
        tick += delta
        if pos >= end:
            raise TruncatedTrack("event status missing at end of track")
        status = buf[pos]
        if status & 0x80:
            pos += 1
        elif running < 0:
            raise MalformedTrack("data byte 0x%02x without running status" % status)
        else:
            status = running

        if status == 0xFF:
            if pos >= end:
                raise TruncatedTrack("meta event type missing")
            meta_type = buf[pos]
            pos = _read_vlq(buf, pos + 1, end, &length)
            if pos + length > end:
                raise TruncatedTrack("meta event payload runs past end of track")
            if meta_type == 0x51 or meta_type == 0x58:
                metas.append((tick, meta_type, bytes(data[pos:pos + length])))
            pos += length
            running = -1
            if meta_type == 0x2F:
                break
        elif status == 0xF0 or status == 0xF7:
            pos = _read_vlq(buf, pos, end, &length)
            if pos + length > end:
                raise TruncatedTrack("sysex payload runs past end of track")
            pos += length
            running = -1
        elif status >= 0xF0:
            raise MalformedTrack("status 0x%02x is not allowed in a file" % status)
        else:
            kind = status >> 4
            n = DATA_LEN[kind - 8]
            if pos + n > end:
                raise TruncatedTrack("channel message runs past end of track")
            d1 = buf[pos]
            d2 = buf[pos + 1] if n == 2 else 0
            if (d1 & 0x80) or (d2 & 0x80):
                raise MalformedTrack("data byte with high bit set")
            pos += n
            running = status
            channel = status & 0x0F
            if kind == 0x9 or kind == 0x8:
                slot = channel * 128 + d1
                if kind == 0x9 and d2 > 0:
                    queue = pending[slot]
                    if queue is None:
                        queue = []
                        pending[slot] = queue
                    queue.append((tick, d2))
                else:
                    queue = pending[slot]
                    if queue is not None and head[slot] < len(queue):
                        onset, velocity = queue[head[slot]]
                        head[slot] += 1
                        notes.append((onset, tick - onset, d1, velocity, channel))

    for slot in range(2048):
        queue = pending[slot]
        if queue is None:
            continue
        while head[slot] < len(queue):
            onset, velocity = queue[head[slot]]
            head[slot] += 1
            notes.append((onset, tick - onset, slot % 128, velocity, slot // 128))
            dangling += 1
    return notes, metas, dangling


def pitch_class_mask(pitches):
    cdef unsigned int bits = 0
    cdef long p
    for p in pitches:
        bits |= 1u << (p % 12)
    return bits


def candidate_masks(pc_masks):
    cdef list out = []
    cdef unsigned int pcs, survivors
    cdef int index
    for obj in pc_masks:
        pcs = obj
        survivors = 0
        for index in range(24):
            if not (pcs & _MASKS[index]):
                survivors |= 1u << index
        out.append(survivors)
    return out
