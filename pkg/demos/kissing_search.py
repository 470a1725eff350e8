"""LP searches for kissing-number bounds, with and without extension functions.

Run:  python3 demos/kissing_search.py
"""

import time

from sphbound.bounds import cardinality_bound
from sphbound.funspace import BasisSpec

RUNS = [
    (3, 15, []),
    (3, 15, ["musin3"]),
    (4, 15, []),
    (4, 15, ["musin4"]),
    (9, 15, ["f-alpha"]),
    (10, 11, ["f-alpha"]),
]


def main():
    for n, degree, ext in RUNS:
        t = time.perf_counter()
        res = cardinality_bound(BasisSpec.standard(n, 60, degree, ext))
        label = "+".join(ext) or "Gegenbauer only"
        print(f"n={n:2d} degree {degree:2d} {label:16s} -> k(n) <= {res.bound}"
              f"   LP 1/c = {1 / res.lp_value:.3f}   {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main()
