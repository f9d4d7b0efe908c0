"""Sample random rational pairs and confirm product-formula reciprocity.

Prints a histogram of ramified-set sizes and the total wall time; any
violation aborts with the offending pair, which would be a genuine bug.

    python scripts/reciprocity_scan.py --count 1000 --height 10000
"""

import argparse
import random
import time
from collections import Counter
from fractions import Fraction

from genuslab.brauer import hilbert_symbol, ramification_set
from genuslab.intarith import factor_fraction
from genuslab.places import Place


def scan(count: int, height: int, seed: int) -> Counter:
    rng = random.Random(seed)
    sizes: Counter = Counter()
    for _ in range(count):
        a = Fraction(rng.randint(-height, height) or 1, rng.randint(1, height))
        b = Fraction(rng.randint(-height, height) or 1, rng.randint(1, height))
        primes = {2}
        primes.update(p for p, _e in factor_fraction(a))
        primes.update(p for p, _e in factor_fraction(b))
        prod = hilbert_symbol(a, b, "real")
        for p in sorted(primes):
            prod *= hilbert_symbol(a, b, Place.rational(p))
        if prod != 1:
            raise SystemExit(f"reciprocity violated at a={a}, b={b}")
        ram = ramification_set(a, b)
        sizes[len(ram.finite) + (1 if ram.real else 0)] += 1
    return sizes


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--height", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    start = time.perf_counter()
    sizes = scan(args.count, args.height, args.seed)
    elapsed = time.perf_counter() - start

    print(f"{args.count} pairs, height <= {args.height}: all products +1")
    print(f"elapsed: {elapsed:.2f}s")
    print("ramified places per pair (always even):")
    for size in sorted(sizes):
        print(f"  {size:2d}: {sizes[size]}")


if __name__ == "__main__":
    main()
