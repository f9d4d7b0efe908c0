"""Tabulate GL_n class sets against class numbers for imaginary orders.

For each squarefree d in the range the table shows the class number,
the GL_n class-set sizes (rank-independent), and the trivializing set
of places whose inversion collapses the class set to one.

    python scripts/classset_scan.py --dmin -50 --ranks 1 2 3
"""

import argparse

from genuslab.class_sets import CoordinateRing, class_set_gln
from genuslab.divisors import pic_group, pic_trivializing_set
from genuslab.fields import QuadField
from genuslab.intarith import factor_integer


def squarefree(m: int) -> bool:
    return all(e == 1 for _q, e in factor_integer(m))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dmin", type=int, default=-50)
    ap.add_argument("--ranks", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()

    header = "    d    h  " + "  ".join(f"n={n}" for n in args.ranks)
    print(header + "  trivialized by")
    print("-" * (len(header) + 18))
    for m in range(1, -args.dmin):
        if not squarefree(m):
            continue
        d = -m
        K = QuadField(d)
        h = pic_group(K).order
        ring = CoordinateRing.quad_order(d)
        sizes = [class_set_gln(ring, n).size for n in args.ranks]
        assert all(s == h for s in sizes)
        S = pic_trivializing_set(K)
        ring_s = CoordinateRing.quad_order(d, S)
        assert all(class_set_gln(ring_s, n).size == 1 for n in args.ranks)
        cols = "  ".join(f"{s:3d}" for s in sizes)
        names = ", ".join(str(P) for P in S) or "(already principal)"
        print(f"  {d:3d}  {h:3d}  {cols}  {names}")


if __name__ == "__main__":
    main()
