#!/usr/bin/env python3
"""Scan lambda^2 across the PT transition and print/export the phase labels."""

import argparse
import csv
import sys

from ptsphere.spectral import pt_phase_scan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--start", type=float, default=0.05)
    ap.add_argument("--stop", type=float, default=0.70)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--k", nargs=3, type=float, default=[1.0, 1.5, 0.5])
    ap.add_argument("--N", type=int, default=1024)
    ap.add_argument("--out", help="csv output path (default stdout)")
    args = ap.parse_args()

    grid = []
    v = args.start
    while v <= args.stop + 1e-12:
        grid.append(round(v, 10))
        v += args.step
    reps = pt_phase_scan(grid, tuple(args.k), N=args.N)

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["lambda2", "phase", "max_imag", "note"])
    for lam2, rep in zip(grid, reps):
        w.writerow([lam2, rep.phase, f"{rep.max_imag:.3e}", "; ".join(rep.notes)])
    if args.out:
        fh.close()
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
