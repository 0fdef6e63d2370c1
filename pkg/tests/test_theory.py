from collections import deque

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modeshift.theory import (
    ALL_MODES,
    MAJOR,
    MINOR,
    Mode,
    fifths_distance,
    is_closely_related,
    major_mask,
    major_scale,
    mask_pitch_classes,
    minor_mask,
    minor_scale,
    octave,
    pitch_class,
)

pcs = st.integers(0, 11)


def bfs_fifths(a, b):
    """Shortest walk on the cycle of fifths, by breadth-first search."""
    seen = {a: 0}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in ((x + 7) % 12, (x - 7) % 12):
            if y not in seen:
                seen[y] = seen[x] + 1
                queue.append(y)
    return seen[b]


class TestConstructors:
    @pytest.mark.parametrize("args, expected", [
        ((0, 0), [0, 2, 4, 5, 7, 9, 11]),
        ((7, 0), [7, 9, 11, 12, 14, 16, 18]),
        ((0, 1), [12, 14, 16, 17, 19, 21, 23]),
    ])
    def test_major_scale(self, args, expected):
        assert major_scale(*args) == expected

    @pytest.mark.parametrize("args, expected", [
        ((0, 0), [0, 2, 3, 5, 7, 8, 10]),
        ((9, 0), [9, 11, 12, 14, 16, 17, 19]),
        ((0, 2), [24, 26, 27, 29, 31, 32, 34]),
    ])
    def test_minor_scale(self, args, expected):
        assert minor_scale(*args) == expected

    @pytest.mark.parametrize("args, expected", [
        ((0, 1), [13, 15, 18, 20, 22]),
        ((0, 0), [1, 3, 6, 8, 10]),
        ((7, 0), [8, 10, 13, 15, 17]),
    ])
    def test_major_mask(self, args, expected):
        assert major_mask(*args) == expected

    def test_minor_mask(self):
        assert minor_mask(0, 0) == [1, 3, 6, 7, 10]
        assert minor_mask(0, 1) == [13, 15, 18, 19, 22]
        assert set(minor_mask(0, 0)) ^ set(major_mask(0, 0)) == {7, 8}

    def test_major_intervals_whole_whole_half(self):
        scale = major_scale(0) + [12]
        assert [b - a for a, b in zip(scale, scale[1:])] == [2, 2, 1, 2, 2, 2, 1]

    def test_minor_intervals(self):
        scale = minor_scale(0) + [12]
        assert [b - a for a, b in zip(scale, scale[1:])] == [2, 1, 2, 2, 1, 2, 2]

    def test_negative_octave_rejected(self):
        with pytest.raises(ValueError):
            major_scale(0, -1)

    @given(st.integers(0, 127))
    def test_pitch_decomposition(self, p):
        assert p == pitch_class(p) + 12 * octave(p)
        assert 0 <= pitch_class(p) <= 11


class TestMasks:
    @pytest.mark.parametrize("mode, expected", [
        (Mode(0, MAJOR), {1, 3, 6, 8, 10}),
        (Mode(0, MINOR), {1, 3, 6, 7, 10}),
        (Mode(11, MAJOR), {0, 2, 5, 7, 9}),
    ])
    def test_mask_pitch_classes(self, mode, expected):
        assert mask_pitch_classes(mode) == expected

    @pytest.mark.parametrize("s", range(12))
    @pytest.mark.parametrize("o", range(10))
    def test_major_scale_and_mask_partition(self, s, o):
        scale = {p % 12 for p in major_scale(s, o)}
        mask = {p % 12 for p in major_mask(s, o)}
        assert scale | mask == set(range(12))
        assert not scale & mask

    @pytest.mark.parametrize("s", range(12))
    def test_minor_survivors_are_harmonic_minor_of_relative(self, s):
        tonic = (s + 9) % 12
        harmonic = {(tonic + d) % 12 for d in (0, 2, 3, 5, 7, 8, 11)}
        survivors = set(range(12)) - mask_pitch_classes(Mode(s, MINOR))
        assert survivors == harmonic
        assert survivors == {(s + d) % 12 for d in (0, 2, 4, 5, 8, 9, 11)}

    @given(pcs, pcs, st.sampled_from([MAJOR, MINOR]))
    def test_transposition_equivariance(self, s, k, q):
        shifted = mask_pitch_classes(Mode((s + k) % 12, q))
        assert shifted == {(x + k) % 12 for x in mask_pitch_classes(Mode(s, q))}

    def test_natural_minor_duplicates_relative_major(self):
        # the documented inconsistency: Eq. 2's set equals the relative major's
        assert {p % 12 for p in minor_scale(9)} == {p % 12 for p in major_scale(0)}


class TestFifths:
    def test_examples(self):
        assert fifths_distance(0, 7) == 1
        assert fifths_distance(0, 0) == 0
        assert fifths_distance(7, 4) == 3

    @pytest.mark.parametrize("a", range(12))
    def test_matches_bfs(self, a):
        for b in range(12):
            assert fifths_distance(a, b) == bfs_fifths(a, b)

    @given(pcs, pcs, pcs)
    def test_metric(self, a, b, c):
        assert fifths_distance(a, b) == fifths_distance(b, a)
        assert (fifths_distance(a, b) == 0) == (a == b)
        assert fifths_distance(a, c) <= fifths_distance(a, b) + fifths_distance(b, c)
        assert 0 <= fifths_distance(a, b) <= 6

    def test_closely_related_examples(self):
        assert is_closely_related(Mode.parse("C"), Mode.parse("G"))
        assert is_closely_related(Mode(0, MAJOR), Mode(0, MINOR))
        assert not is_closely_related(Mode.parse("G"), Mode.parse("E"))

    @given(st.sampled_from(ALL_MODES), st.sampled_from(ALL_MODES))
    def test_closely_related_reflexive_symmetric(self, a, b):
        assert is_closely_related(a, a)
        assert is_closely_related(a, b) == is_closely_related(b, a)


class TestModeNames:
    def test_universe(self):
        assert len(set(ALL_MODES)) == 24
        assert [m.index for m in ALL_MODES] == list(range(24))

    def test_minor_tonic(self):
        assert Mode(0, MINOR).name == "Am"
        assert Mode(0, MINOR).tonic == 9
        assert Mode(1, MINOR).name == "A#m"

    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_round_trip(self, mode):
        assert Mode.parse(mode.name) == mode

    def test_flats_and_errors(self):
        assert Mode.parse("Bb") == Mode(10)
        assert Mode.parse("Ebm") == Mode.parse("D#m")
        with pytest.raises(ValueError):
            Mode.parse("H")
        with pytest.raises(ValueError):
            Mode(12)

    def test_ordering_is_major_first(self):
        assert Mode(11, MAJOR) < Mode(0, MINOR)
        assert sorted([Mode(0, MINOR), Mode(7), Mode(2)]) == [Mode(2), Mode(7), Mode(0, MINOR)]
