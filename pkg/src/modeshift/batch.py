"""Single-file and corpus analysis, report rows, histograms and writers."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import statistics
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from pathlib import Path
from typing import Optional, Sequence

from .errors import DanglingNoteOn, EmptyCorpus, ModeshiftError
from .midi import melody_bars
from .scoring import Direction, PolicyKind, TransitionPolicy, analyze_bars, as_fraction, classify

log = logging.getLogger(__name__)

CSV_COLUMNS = ("path", "score", "abnormal", "transitions", "n_bars", "main_mode", "label", "error")
MIDI_SUFFIXES = (".mid", ".midi")
DEFAULT_THRESHOLD = Fraction(3, 10)


@dataclass(frozen=True)
class AnalysisConfig:
    policy: PolicyKind = PolicyKind.ANCHOR_RETURN
    close_threshold: int = 1
    threshold: Fraction = DEFAULT_THRESHOLD
    direction: Direction = Direction.LOW_IS_MACHINE
    bins: int = 20
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "threshold", as_fraction(self.threshold))
        if self.bins < 1:
            raise ValueError("histogram needs at least one bin")
        if not 0 <= self.close_threshold <= 6:
            raise ValueError("closeness threshold must be in 0..6")
        if not 0 <= self.threshold <= 1:
            raise ValueError("classification threshold must be in [0, 1]")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.format!r}")

    @property
    def transition_policy(self) -> TransitionPolicy:
        return TransitionPolicy(self.policy, self.close_threshold)


@dataclass(frozen=True)
class ReportRow:
    path: str
    score: Optional[Fraction] = None
    abnormal: Optional[int] = None
    transitions: Optional[int] = None
    n_bars: Optional[int] = None
    main_mode: str = ""
    label: str = ""
    error: str = ""
    detail: str = ""
    annotations: tuple = field(default=(), compare=False)

    @property
    def ok(self) -> bool:
        return not self.error

    def csv_fields(self) -> list[str]:
        if not self.ok:
            return [self.path, "", "", "", "", "", "", self.error]
        return [
            self.path,
            format_score(self.score),
            str(self.abnormal),
            str(self.transitions),
            str(self.n_bars),
            self.main_mode,
            self.label,
            "",
        ]

    def as_dict(self) -> dict:
        if not self.ok:
            return {"path": self.path, "error": self.error, "detail": self.detail}
        return {
            "path": self.path,
            "score": format_score(self.score),
            "abnormal": self.abnormal,
            "transitions": self.transitions,
            "n_bars": self.n_bars,
            "main_mode": self.main_mode,
            "label": self.label,
            "annotations": list(self.annotations),
        }


def format_score(value: Fraction) -> str:
    """Render a rational in [0, 1] with six decimals, rounding half up, exactly."""
    micro = floor(Fraction(value) * 1_000_000 + Fraction(1, 2))
    return f"{micro // 1_000_000}.{micro % 1_000_000:06d}"


def analyze_bytes(data: bytes, config: AnalysisConfig, path: str = "<bytes>") -> ReportRow:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DanglingNoteOn)
            bars = melody_bars(data)
        for w in caught:
            log.info("%s: %s", path, w.message)
    except ModeshiftError as exc:
        return ReportRow(path, error=type(exc).__name__, detail=str(exc))
    analysis = analyze_bars(bars, config.transition_policy)
    result = analysis.result
    main = analysis.main_mode
    label = classify(result, config.threshold, config.direction)
    return ReportRow(
        path,
        score=result.score,
        abnormal=result.abnormal_count,
        transitions=result.transition_count,
        n_bars=len(bars),
        main_mode=main.name if main is not None else "",
        label=label.value,
        annotations=tuple(t.as_dict() for t in result.transitions),
    )


def analyze_file(path, config: AnalysisConfig = AnalysisConfig(), name: Optional[str] = None) -> ReportRow:
    """Run the full pipeline on one file.

    Decoding problems become an error row; an unreadable path raises
    :class:`OSError`.
    """
    data = Path(path).read_bytes()
    return analyze_bytes(data, config, str(path) if name is None else name)


def _analyze_for_batch(job: tuple[str, str, AnalysisConfig]) -> ReportRow:
    full, name, config = job
    try:
        return analyze_file(full, config, name)
    except OSError as exc:
        return ReportRow(name, error="IoError", detail=str(exc))


@dataclass(frozen=True)
class Histogram:
    edges: tuple[Fraction, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def build(cls, scores: Sequence[Fraction], bins: int = 20) -> Histogram:
        if bins < 1:
            raise ValueError("histogram needs at least one bin")
        counts = [0] * bins
        for s in scores:
            if not 0 <= s <= 1:
                raise ValueError(f"score {s} outside [0, 1]")
            counts[min(floor(Fraction(s) * bins), bins - 1)] += 1
        edges = tuple(Fraction(i, bins) for i in range(bins + 1))
        return cls(edges, tuple(counts))

    def rows(self) -> list[tuple[str, str, int]]:
        return [
            (format_score(self.edges[i]), format_score(self.edges[i + 1]), c)
            for i, c in enumerate(self.counts)
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("bin_lo", "bin_hi", "count"))
        writer.writerows(self.rows())
        return buf.getvalue()

    def render(self, width: int = 40) -> str:
        peak = max(self.counts) or 1
        lines = []
        rows = self.rows()
        for i, (lo, hi, count) in enumerate(rows):
            bar = "#" * round(width * count / peak)
            close = "]" if i == len(rows) - 1 else ")"
            lines.append(f"[{lo}, {hi}{close} {count:>7d} {bar}".rstrip())
        return "\n".join(lines)


@dataclass(frozen=True)
class BatchResult:
    rows: tuple[ReportRow, ...]
    histogram: Histogram
    summary: dict

    @property
    def scores(self) -> list[Fraction]:
        return [r.score for r in self.rows if r.ok]


def scan_corpus(directory) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise NotADirectoryError(str(root))
    found = [p for p in root.rglob("*") if p.suffix.lower() in MIDI_SUFFIXES and p.is_file()]
    return sorted(found, key=lambda p: p.relative_to(root).as_posix())


def summarize(scores: Sequence[Fraction], n_scanned: int) -> dict:
    summary = {"scanned": n_scanned, "parsed": len(scores), "errored": n_scanned - len(scores)}
    if scores:
        summary.update(
            mean=format_score(sum(scores, Fraction(0)) / len(scores)),
            median=format_score(Fraction(statistics.median(scores))),
            min=format_score(min(scores)),
            max=format_score(max(scores)),
        )
    return summary


def batch_analyze(directory, config: AnalysisConfig = AnalysisConfig(), workers: Optional[int] = None) -> BatchResult:
    """Score every ``.mid``/``.midi`` file under ``directory``.

    Rows are ordered by path relative to ``directory`` regardless of how
    work is spread over the ``workers`` processes.
    """
    root = Path(directory)
    paths = scan_corpus(root)
    if not paths:
        raise EmptyCorpus(f"no MIDI files under {root}")
    jobs = [(str(p), p.relative_to(root).as_posix(), config) for p in paths]
    if workers is None:
        workers = min(4, os.cpu_count() or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_analyze_for_batch, jobs, chunksize=max(1, len(jobs) // (workers * 8))))
    else:
        rows = [_analyze_for_batch(job) for job in jobs]
    scores = [r.score for r in rows if r.ok]
    return BatchResult(tuple(rows), Histogram.build(scores, config.bins), summarize(scores, len(rows)))


def rows_to_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def _config_dict(config: AnalysisConfig) -> dict:
    return {
        "policy": config.policy.value,
        "close_threshold": config.close_threshold,
        "threshold": format_score(config.threshold),
        "direction": config.direction.value,
        "bins": config.bins,
    }


def rows_to_json(rows: Sequence[ReportRow], config: AnalysisConfig, result: Optional[BatchResult] = None) -> str:
    doc = {"config": _config_dict(config), "rows": [r.as_dict() for r in rows]}
    if result is not None:
        doc["summary"] = result.summary
        doc["histogram"] = [{"lo": lo, "hi": hi, "count": c} for lo, hi, c in result.histogram.rows()]
    return json.dumps(doc, indent=2) + "\n"
