"""Walk the full descent chain for a quaternion algebra, printing
certificates at every stage.

The stages: ring conditions over the chosen S-integers, the splitting
representation with its integrality check, the rank-two class set, and
two probe trivializations of coboundary-generated cocycles.  Finish by
trivializing the four rank-one norm-one cocycles explicitly.

    python scripts/descent_demo.py --d -1 --c -1 --invert 2
"""

import argparse
import json
from fractions import Fraction

from genuslab.brauer import CyclicAlgebra
from genuslab.descent import (
    DescentCocycle,
    QuadGaloisRing,
    descent_condition_T,
    trivialize_cocycle,
)
from genuslab.fields import RationalField
from genuslab.quadfield import QuadElem


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=-1)
    ap.add_argument("--c", type=Fraction, default=Fraction(-1))
    ap.add_argument("--invert", type=int, nargs="*", default=[2])
    args = ap.parse_args()

    alg = CyclicAlgebra(RationalField(), args.d, args.c)
    res = descent_condition_T(alg, invert=tuple(args.invert))
    print(json.dumps(res.to_json(), indent=2))
    print()
    print(f"verdict: {res.verdict}")
    if not res.verdict:
        return

    # the norm-one units of the order give the rank-one cocycles
    ring = QuadGaloisRing.make(args.d, tuple(args.invert))
    one = QuadElem.one(args.d)
    w = QuadElem.omega(args.d)
    candidates = [one, -one, w, -w]
    print()
    print("rank-one cocycle trivializations:")
    for x in candidates:
        try:
            coc = DescentCocycle.make(ring, ((x,),))
        except Exception:
            continue  # not a cocycle (xi * sigma(xi) != 1)
        triv = trivialize_cocycle(coc)
        assert triv.verify()
        print(f"  xi = {x}: c = {triv.c[0][0]}")


if __name__ == "__main__":
    main()
