"""Exit criteria. Each test fills ``criterion["detail"]``; the summary prints one line per criterion."""

import random
import time
import warnings
from fractions import Fraction

from modeshift.batch import AnalysisConfig, analyze_bytes, batch_analyze, format_score, rows_to_csv, rows_to_json
from modeshift.errors import MidiError
from modeshift.fixtures import fixture_bytes, generate_fixture_corpus
from modeshift.midi import Bar, NoteEvent, parse_smf, write_smf
from modeshift.modal import (
    CandidateSet,
    TendencyRanking,
    assign_bar_modes,
    candidate_modes,
    candidate_sets,
    tendency_ranking,
)
from modeshift.scoring import ANCHOR_RETURN, PAIRWISE, abnormal_transitions
from modeshift.theory import ALL_MODES, MAJOR, MINOR, Mode, major_mask, major_scale, mask_pitch_classes

from test_kernels import mutate


def survivor_scale(mode):
    if mode.quality is MAJOR:
        return {(mode.keynote + s) % 12 for s in (0, 2, 4, 5, 7, 9, 11)}
    tonic = (mode.keynote + 9) % 12
    return {(tonic + s) % 12 for s in (0, 2, 3, 5, 7, 8, 11)}


def test_ac01_mask_golden(criterion):
    got = major_mask(0, 1)
    criterion["detail"] = f"major_mask(0,1)={got}"
    assert got == [13, 15, 18, 20, 22]


def test_ac02_pitch_13_excludes_c_major(criterion):
    survivors = candidate_modes(Bar(0, (13,)))
    criterion["detail"] = f"C major in candidates: {Mode(0, MAJOR) in survivors}"
    assert Mode(0, MAJOR) not in survivors


def test_ac03_worked_example(criterion):
    trace = [Mode.parse(n) for n in "C C C G G E A B F A C".split()]
    anchor = abnormal_transitions(trace, ANCHOR_RETURN)
    pairwise = abnormal_transitions(trace, PAIRWISE)
    criterion["detail"] = (f"anchor-return {anchor.abnormal_count}/{anchor.transition_count}={format_score(anchor.score)}; "
                           f"pairwise {pairwise.abnormal_count}/{pairwise.transition_count}")
    assert (anchor.abnormal_count, anchor.transition_count) == (6, 10)
    assert format_score(anchor.score) == "0.600000" and anchor.score == Fraction(6, 10)
    assert (pairwise.abnormal_count, pairwise.transition_count) == (5, 10)


def test_ac04_tendency_selection(criterion):
    ranking = TendencyRanking.from_counts({Mode.parse("C"): 3, Mode.parse("G"): 2, Mode.parse("D"): 1})
    assert ranking.order[:3] == [Mode.parse(n) for n in ("C", "G", "D")]
    bar_set = CandidateSet.of(Mode.parse(n) for n in ("G", "A", "E"))
    (chosen,) = assign_bar_modes([bar_set], ranking)
    criterion["detail"] = f"assigned {chosen}"
    assert chosen == Mode.parse("G")


def test_ac05_complement_suite(criterion):
    checked = 0
    for s in range(12):
        for o in range(10):
            scale = {p % 12 for p in major_scale(s, o)}
            mask = {p % 12 for p in major_mask(s, o)}
            assert scale | mask == set(range(12)) and not scale & mask
            checked += 1
        tonic = (s + 9) % 12
        harmonic = {(tonic + d) % 12 for d in (0, 2, 3, 5, 7, 8, 11)}
        assert set(range(12)) - mask_pitch_classes(Mode(s, MINOR)) == harmonic
        checked += 1
    criterion["detail"] = f"{checked} exhaustive cases"


def test_ac06_oracle_equivalence(criterion):
    rng = random.Random(2024)
    bars = [Bar(i, tuple(rng.randrange(128) for _ in range(rng.randint(0, 12)))) for i in range(10_000)]
    start = time.perf_counter()
    sets = candidate_sets(bars)
    mismatches = 0
    for bar, s in zip(bars, sets):
        pcs = {p % 12 for p in bar.pitches}
        if set(s) != {m for m in ALL_MODES if pcs <= survivor_scale(m)}:
            mismatches += 1
    elapsed = time.perf_counter() - start
    criterion["detail"] = f"10000 bars, {mismatches} mismatches, {elapsed:.2f}s"
    assert mismatches == 0
    assert elapsed < 5


def _random_melody(rng):
    key = rng.randrange(12)
    bars = []
    for b in range(8):
        if rng.random() < 0.3:
            key = (key + rng.choice((1, 2, 5, 7))) % 12
        scale = [(key + d) % 12 for d in (0, 2, 4, 5, 7, 9, 11)]
        pcs = rng.sample(scale, rng.randint(3, 7))
        if rng.random() < 0.15:
            pcs.append(rng.randrange(12))
        bars.append([48 + rng.randrange(3) * 12 + pc for pc in pcs])
    return bars


def _tie_free(bars):
    """Head count unique and every assigned mode strictly ahead of its bar's rivals."""
    sets = candidate_sets([Bar(i, tuple(p)) for i, p in enumerate(bars)])
    ranking = tendency_ranking(sets)
    counts = dict(ranking.entries)
    if ranking.entries[0][1] == ranking.entries[1][1]:
        return False
    for s, mode in zip(sets, assign_bar_modes(sets, ranking)):
        if mode is not None and any(counts[m] == counts[mode] for m in s if m != mode):
            return False
    return True


def _melody_file(bars, shift=0):
    notes = [NoteEvent(b * 1920 + i * 240, 240, p + shift) for b, pitches in enumerate(bars) for i, p in enumerate(pitches)]
    return write_smf([notes])


def test_ac07_transposition(criterion):
    rng = random.Random(7)
    melodies = []
    while len(melodies) < 500:
        bars = _random_melody(rng)
        if _tie_free(bars):
            melodies.append(bars)
    config = AnalysisConfig()
    failures = 0
    nonzero = 0
    for bars in melodies:
        base = analyze_bytes(_melody_file(bars), config)
        nonzero += base.score > 0
        base_key = Mode.parse(base.main_mode)
        for k in range(1, 12):
            moved = analyze_bytes(_melody_file(bars, k), config)
            key = Mode.parse(moved.main_mode)
            same = (moved.score, moved.abnormal, moved.transitions) == (base.score, base.abnormal, base.transitions)
            if not (same and key.quality is base_key.quality and key.keynote == (base_key.keynote + k) % 12):
                failures += 1
    criterion["detail"] = f"500 melodies x 11 shifts, {failures} failures, {nonzero} with nonzero score"
    assert failures == 0


def test_ac08_distribution_separation(criterion, tmp_path):
    start = time.perf_counter()
    for kind in ("diatonic", "close-modulating"):
        generate_fixture_corpus(kind, 250, 8, tmp_path / "low" / kind)
    for kind in ("chromatic", "distant-modulating"):
        generate_fixture_corpus(kind, 250, 8, tmp_path / "high" / kind)
    low = batch_analyze(tmp_path / "low")
    high = batch_analyze(tmp_path / "high")
    elapsed = time.perf_counter() - start
    low_mean = sum(low.scores, Fraction(0)) / len(low.scores)
    high_mean = sum(high.scores, Fraction(0)) / len(high.scores)
    criterion["detail"] = (f"low mean {format_score(low_mean)}, high mean {format_score(high_mean)}, "
                           f"gap {format_score(high_mean - low_mean)}, {elapsed:.1f}s; "
                           f"low hist {list(low.histogram.counts)}, high hist {list(high.histogram.counts)}")
    assert len(low.scores) == len(high.scores) == 500
    assert low_mean <= Fraction(5, 100)
    assert high_mean >= Fraction(60, 100)
    assert high_mean - low_mean >= Fraction(1, 2)
    assert elapsed < 30


def test_ac09_throughput(criterion, tmp_path):
    for kind in ("diatonic", "close-modulating", "distant-modulating", "chromatic"):
        generate_fixture_corpus(kind, 2500, 9, tmp_path / kind)
    config = AnalysisConfig(format="json")
    timings, reports = [], []
    for _ in range(2):
        start = time.perf_counter()
        result = batch_analyze(tmp_path, config)
        timings.append(time.perf_counter() - start)
        reports.append((rows_to_csv(result.rows), rows_to_json(result.rows, config, result)))
    criterion["detail"] = f"{len(result.rows)} files, runs {timings[0]:.1f}s / {timings[1]:.1f}s, identical={reports[0] == reports[1]}"
    assert len(result.rows) == 10_000 and result.summary["errored"] == 0
    assert reports[0] == reports[1]
    assert max(timings) < 60


def test_ac10_parser_robustness(criterion):
    rng = random.Random(10)
    seeds = [fixture_bytes(k, random.Random(i)) for k in ("diatonic", "chromatic", "distant-modulating") for i in range(4)]
    config = AnalysisConfig()
    typed_errors = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(10_000):
            data = mutate(rng.choice(seeds), rng)
            try:
                parse_smf(data)
            except MidiError:
                typed_errors += 1
            analyze_bytes(data, config)  # must return a row, never raise

    lossless = 0
    for _ in range(1000):
        notes = []
        busy = {}
        for _ in range(rng.randint(0, 40)):
            ch, pitch = rng.randrange(16), rng.randrange(128)
            onset = max(rng.randrange(20_000), busy.get((ch, pitch), 0))
            note = NoteEvent(onset, rng.randint(1, 3000), pitch, rng.randint(1, 127), ch)
            busy[(ch, pitch)] = note.end
            notes.append(note)
        data = write_smf([notes], running_status=rng.random() < 0.5, note_off_as_zero_velocity=rng.random() < 0.5)
        _, tracks = parse_smf(data)
        key = lambda n: (n.onset, n.duration, n.pitch, n.velocity, n.channel)
        lossless += sorted(map(key, tracks[0])) == sorted(map(key, notes))
    criterion["detail"] = f"10000 fuzzed inputs, {typed_errors} typed errors, 0 crashes; {lossless}/1000 lossless round-trips"
    assert lossless == 1000
