#!/usr/bin/env python3
"""Run every exact identity check across the MASA catalog and print a table."""

import argparse
import time
from fractions import Fraction

from ptsphere.masa import catalog_masa, classify_pt, validate_masa
from ptsphere.reduction import (
    casimir_projection_report,
    racah_structure_report,
    verify_conservation,
    verify_homomorphism,
    verify_masa_reduction,
    verify_sum_relation,
)

MODELS = [
    ("su2ab", dict(a=Fraction(2), b=Fraction(1))),
    ("lambda", dict(lambda2=Fraction(1, 4))),
    ("cartan_od", dict(a=Fraction(1), b=Fraction(1, 2))),
    ("nilpotent", {}),
    ("degenerate_plus", {}),
    ("degenerate_minus", {}),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20230411)
    ap.add_argument("--racah", action="store_true", help="include the slow Racah fits")
    args = ap.parse_args()

    for name, kw in MODELS:
        masa = catalog_masa(name, **kw)
        t0 = time.time()
        checks = []
        checks.append(("valid", validate_masa(masa).passed))
        checks.append(("pt", classify_pt(masa, masa.parity)))
        checks.append(("zhat=k", verify_masa_reduction(masa).passed))
        checks.append(("conserved", verify_conservation(masa).passed))
        checks.append(("brackets", verify_homomorphism(masa, seed=args.seed).passed))
        if name in ("su2ab", "lambda", "cartan_od", "nilpotent"):
            checks.append(("sum", verify_sum_relation(masa).passed))
            cp = casimir_projection_report(masa, seed=args.seed)
            checks.append(("casimir", cp.detail))
        print(f"{name:18s} [{time.time() - t0:6.1f}s] "
              + "  ".join(f"{k}={v}" for k, v in checks))

    if args.racah:
        masa = catalog_masa("lambda", lambda2=Fraction(1, 4))
        rep = racah_structure_report(masa, seed=args.seed, with_fits=True)
        print("racah antisymmetry:", rep.antisymmetry_ok, "trials:", rep.trials)
        for key, fit in rep.bracket_fits.items():
            terms = "  ".join(f"{c} {n}" for n, c in fit.items() if not c.is_zero())
            print(f"  [{key}] = {terms}")


if __name__ == "__main__":
    main()
