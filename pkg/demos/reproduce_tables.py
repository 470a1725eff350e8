"""Verify every built-in certificate and print both tables.

Run:  python3 demos/reproduce_tables.py
"""

from sphbound.certify import ANGLE_TABLE, KISSING_TABLE, builtin_certificates, verify


def main():
    for cert in builtin_certificates():
        rep = verify(cert)
        if cert.alpha_deg == 60:
            print(f"k({cert.n}) <= {rep.proved_bound}   published {KISSING_TABLE[cert.n]}")
            continue
        N = cert.claimed_bound + 1
        verdict = "excluded" if rep.valid and rep.proved_bound < N else "NOT excluded"
        print(f"({cert.n},{N}) at {ANGLE_TABLE[(cert.n, N)]} deg: bound {rep.proved_bound}, {verdict}")


if __name__ == "__main__":
    main()
