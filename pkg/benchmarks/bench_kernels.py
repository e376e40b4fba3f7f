"""Benchmark the compiled arithmetic kernels against the pure-Python fallback.

Runs each hot kernel with both backends, checks the outputs are exactly
equal, and prints a timing table:

    python3 benchmarks/bench_kernels.py --limit 2000000 --repeats 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from zetakms import _kernels_py as pure

try:
    from zetakms import _kernels as compiled  # type: ignore[attr-defined]
except ImportError:
    compiled = None


def _time(fn, *args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def _assert_equal_sieves(a, b) -> None:
    for lhs, rhs in zip(a, b, strict=True):
        if not np.array_equal(np.asarray(lhs), np.asarray(rhs)):
            raise AssertionError("backends disagree on sieve output")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--limit", type=int, default=1_000_000,
                        help="sieve size / summand count")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repetitions (best of)")
    args = parser.parse_args()

    if compiled is None:
        print("compiled backend unavailable; nothing to compare")
        return 1

    rng = np.random.default_rng(20260813)
    terms = (rng.standard_normal(args.limit) * np.exp(
        rng.uniform(-20.0, 20.0, args.limit))).tolist()
    kern = rng.standard_normal(args.limit + 1)
    coeffs = rng.standard_normal(args.limit + 1)
    kern[0] = coeffs[0] = 0.0

    rows = []

    sieve_c = compiled.sieve_arrays(args.limit)
    sieve_p = pure.sieve_arrays(args.limit)
    _assert_equal_sieves(sieve_c, sieve_p)
    rows.append((
        f"sieve_arrays({args.limit})",
        _time(compiled.sieve_arrays, args.limit, repeats=args.repeats),
        _time(pure.sieve_arrays, args.limit, repeats=args.repeats),
    ))

    sum_c = compiled.neumaier_sum(terms)
    sum_p = pure.neumaier_sum(terms)
    if sum_c != sum_p:
        raise AssertionError("backends disagree on neumaier_sum")
    rows.append((
        f"neumaier_sum({args.limit} terms)",
        _time(compiled.neumaier_sum, terms, repeats=args.repeats),
        _time(pure.neumaier_sum, terms, repeats=args.repeats),
    ))

    conv_c = compiled.divisor_convolve(kern, coeffs)
    conv_p = pure.divisor_convolve(kern, coeffs)
    if not np.array_equal(np.asarray(conv_c), np.asarray(conv_p)):
        raise AssertionError("backends disagree on divisor_convolve")
    rows.append((
        f"divisor_convolve({kern.size - 1})",
        _time(compiled.divisor_convolve, kern, coeffs,
              repeats=args.repeats),
        _time(pure.divisor_convolve, kern, coeffs,
              repeats=args.repeats),
    ))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'compiled':>10}  {'pure':>10}  {'speedup':>8}")
    for label, fast, slow in rows:
        print(f"{label:<{width}}  {fast * 1e3:>8.2f}ms  {slow * 1e3:>8.2f}ms  "
              f"{slow / fast:>7.1f}x")
    print("outputs: exactly equal across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
