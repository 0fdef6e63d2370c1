"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--files N] [--repeat R]

Times track decoding over generated fixture files, candidate-mode masks
over random bars, and the full single-process pipeline on the same files.
"""

import argparse
import random
import time

from modeshift import kernels
from modeshift.batch import AnalysisConfig, analyze_bytes
from modeshift.fixtures import KINDS, fixture_bytes


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--files", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    files = [fixture_bytes(KINDS[i % 4], random.Random(i)) for i in range(args.files)]
    bodies = [f[22:] for f in files]
    rng = random.Random(0)
    pc_masks = [rng.randrange(4096) for _ in range(args.files * 8)]
    config = AnalysisConfig()

    results = {}
    for name, module in kernels.BACKENDS.items():
        def decode():
            for body in bodies:
                module.decode_track(body)

        def masks():
            module.candidate_masks(pc_masks)

        def pipeline():
            saved = kernels.decode_track, kernels.pitch_class_mask, kernels.candidate_masks
            kernels.decode_track = module.decode_track
            kernels.pitch_class_mask = module.pitch_class_mask
            kernels.candidate_masks = module.candidate_masks
            try:
                for data in files:
                    analyze_bytes(data, config)
            finally:
                kernels.decode_track, kernels.pitch_class_mask, kernels.candidate_masks = saved

        results[name] = {
            "decode_track": best_of(decode, args.repeat),
            "candidate_masks": best_of(masks, args.repeat),
            "pipeline": best_of(pipeline, args.repeat),
        }

    print(f"{args.files} files, {len(pc_masks)} bars, best of {args.repeat}")
    print(f"{'kernel':<16}" + "".join(f"{name:>12}" for name in results) + ("     speedup" if len(results) > 1 else ""))
    for kernel in ("decode_track", "candidate_masks", "pipeline"):
        row = f"{kernel:<16}" + "".join(f"{results[n][kernel] * 1000:>10.1f}ms" for n in results)
        if "cython" in results:
            row += f"{results['python'][kernel] / results['cython'][kernel]:>11.1f}x"
        print(row)
    if "cython" not in results:
        print("compiled extension not built; only the Python fallback was timed")


if __name__ == "__main__":
    main()
