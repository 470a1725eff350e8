"""Sanity checks on random spherical codes.

Builds a few separated codes and checks that the entrywise images of the
Gram matrix behave as the theory predicts: Gegenbauer images stay PSD and
the pointed sums of the extension functions stay nonnegative.

Run:  python3 demos/property_checks.py
"""

from sphbound.codes import gram, min_eigenvalue, pointed_sum, random_code
from sphbound.funspace import cos_deg, f_alpha, musin_hat
from sphbound.polycore import gegenbauer_eval


def main():
    z = float(cos_deg(60))
    for n, N in [(3, 10), (4, 18), (5, 20)]:
        code = random_code(n, N, 60, seed=1)
        G = gram(code)
        eig = min(min_eigenvalue(G.apply(lambda t, k=k: gegenbauer_eval(n, k, t))) for k in range(1, 8))
        fa = min(pointed_sum(lambda t: f_alpha(z, t), code, i) for i in range(N))
        print(f"({n},{N}) code, min angle {code.min_angle_deg:.2f}: "
              f"smallest Gegenbauer eigenvalue {eig:.2e}, smallest f_alpha pointed sum {fa:.3f}")
        if n in (3, 4):
            mh = min(pointed_sum(lambda t: musin_hat(n, t), code, i) for i in range(N))
            print(f"    smallest musin{n} pointed sum {mh:.3f}")


if __name__ == "__main__":
    main()
