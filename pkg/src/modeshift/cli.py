"""Command-line entry point: ``modeshift analyze|batch|gen``.

Exit codes: 0 success, 1 usage error, 2 I/O or decoding error, 3 empty corpus.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .batch import AnalysisConfig, analyze_file, batch_analyze, rows_to_csv, rows_to_json
from .errors import EmptyCorpus
from .fixtures import KINDS, generate_fixture_corpus
from .modal import debug_dump
from .scoring import Direction, PolicyKind

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_EMPTY = 0, 1, 2, 3

THRESHOLD_HELP = (
    "classification threshold on the score (default 0.3). This default is a "
    "placeholder: no calibrated value exists, tune it on your own data"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("must be between 0 and 1")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--policy", choices=[k.value for k in PolicyKind], default=PolicyKind.ANCHOR_RETURN.value)
    p.add_argument("--close-threshold", type=int, choices=range(7), default=1, metavar="N",
                   help="largest fifths distance still counted as closely related (0-6, default 1)")
    p.add_argument("--threshold", type=_fraction, default=Fraction(3, 10), metavar="X", help=THRESHOLD_HELP)
    p.add_argument("--direction", choices=[d.value for d in Direction], default=Direction.LOW_IS_MACHINE.value)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modeshift", description="Score monophonic MIDI melodies for abnormal mode changes.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    analyze = sub.add_parser("analyze", help="analyze one MIDI file")
    analyze.add_argument("file")
    _add_analysis_flags(analyze)
    analyze.add_argument("--dump", action="store_true", help="print per-bar candidate modes to stderr")

    batch = sub.add_parser("batch", help="score every .mid/.midi file under a directory")
    batch.add_argument("dir")
    _add_analysis_flags(batch)
    batch.add_argument("--bins", type=_positive, default=20, metavar="N")
    batch.add_argument("--hist", metavar="PATH", help="write the score histogram as CSV")
    batch.add_argument("--workers", type=_positive, default=None, metavar="N")

    gen = sub.add_parser("gen", help="generate a synthetic fixture corpus")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("count", type=_positive)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", metavar="DIR", default=".")
    return parser


def _config(args) -> AnalysisConfig:
    return AnalysisConfig(
        policy=PolicyKind(args.policy),
        close_threshold=args.close_threshold,
        threshold=args.threshold,
        direction=Direction(args.direction),
        bins=getattr(args, "bins", 20),
        format=args.format,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_analyze(args) -> int:
    config = _config(args)
    try:
        row = analyze_file(args.file, config)
    except OSError as exc:
        print(f"modeshift: cannot read {args.file}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    if args.dump and row.ok:
        from .midi import melody_bars

        sys.stderr.write(debug_dump(melody_bars(Path(args.file).read_bytes())))
    text = rows_to_csv([row]) if config.format == "csv" else rows_to_json([row], config)
    _emit(text, args.out)
    if not row.ok:
        print(f"modeshift: {args.file}: {row.error}: {row.detail}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_batch(args) -> int:
    config = _config(args)
    try:
        result = batch_analyze(args.dir, config, workers=args.workers)
    except EmptyCorpus as exc:
        print(f"modeshift: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except OSError as exc:
        print(f"modeshift: cannot scan {args.dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    text = rows_to_csv(result.rows) if config.format == "csv" else rows_to_json(result.rows, config, result)
    _emit(text, args.out)
    if args.hist:
        Path(args.hist).write_text(result.histogram.to_csv())
    summary = result.summary
    print(" ".join(f"{k}={v}" for k, v in summary.items()), file=sys.stderr)
    if summary["parsed"]:
        print(result.histogram.render(), file=sys.stderr)
    return EXIT_OK


def _cmd_gen(args) -> int:
    try:
        paths = generate_fixture_corpus(args.kind, args.count, args.seed, args.out)
    except OSError as exc:
        print(f"modeshift: cannot write fixtures: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(paths)} {args.kind} fixtures to {args.out}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handler = {"analyze": _cmd_analyze, "batch": _cmd_batch, "gen": _cmd_gen}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
