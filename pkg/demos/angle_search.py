"""Upper bounds on the minimal angle of N points on a sphere.

Run:  python3 demos/angle_search.py [n N]
"""

import sys

from sphbound.bounds import max_angle_bound
from sphbound.certify import ANGLE_TABLE


def main(argv):
    cases = [(int(argv[0]), int(argv[1]))] if len(argv) == 2 else [(3, 13), (5, 15)]
    for n, N in cases:
        res = max_angle_bound(n, N)
        ref = ANGLE_TABLE.get((n, N))
        extra = f"   (published {ref})" if ref is not None else ""
        print(f"{N} points in S^{n - 1}: minimal angle <= {res.angle} deg after {res.evaluations} LP runs{extra}")


if __name__ == "__main__":
    main(sys.argv[1:])
