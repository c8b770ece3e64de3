"""Compiled vs pure-Python word kernels.

    python3 benchmarks/bench_kernels.py [--length 20000] [--repeat 5]
"""

import argparse
import random
import timeit

from betacyl import _pykernels

try:
    from betacyl import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def self_admissible_word(length: int, seed: int) -> list[int]:
    # periodic blocks keep the word self-admissible while exercising long matches
    rng = random.Random(seed)
    block = [9] + [rng.randint(0, 8) for _ in range(rng.randint(5, 40))]
    return (block * (length // len(block) + 1))[:length]


def cases(length: int):
    w = self_admissible_word(length, 1)
    ref = w[:]
    return [
        ("z_function", lambda m: m.z_function(w)),
        ("prefix_function", lambda m: m.prefix_function(w)),
        ("is_self_admissible", lambda m: m.is_self_admissible(w)),
        ("shifts_dominated", lambda m: m.shifts_dominated(w, ref, 1)),
        ("recurrence_times", lambda m: m.recurrence_times(w)),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; nothing to compare")
        return
    print(f"{'kernel':<20}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in cases(args.length):
        assert fn(_pykernels) == fn(_ckernels)
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20}{py:>12.3f}{cy:>12.3f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
