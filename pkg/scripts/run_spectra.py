#!/usr/bin/env python3
"""Reproduce the closed-form spectra with the non-Hermitian solvers."""

import argparse

from ptsphere.spectral import (
    invert_circle_couplings,
    metamorphosis_check,
    solve_chi_equation,
    solve_periodic_s1,
    solve_poschl_teller,
)


def show(title, rep, nshow=8):
    print(title)
    for z, cand, dev, rel in rep.matches[:nshow]:
        print(f"  E = {z.real:12.6f} {z.imag:+.2e}i  closed form {cand:10.4f}"
              f"  rel dev {rel:.2e}")
    print(f"  phase = {rep.phase}, max|Im| of lowest = {rep.max_imag:.2e}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N-circle", type=int, default=512)
    ap.add_argument("--N-fd", type=int, default=4096)
    args = ap.parse_args()

    k1, k2 = invert_circle_couplings(2, 1, 2, 3)
    rep = solve_periodic_s1(2, 1, k1, k2, args.N_circle)
    show(f"circle a=2 b=1, g-=2 g+=3 (k1={k1.real:.4f}, k2={k2.real:.4f}):", rep)

    rep = solve_periodic_s1(1, 1, 1, 1, args.N_circle)
    show("Morse a=b=1 (triangular momentum matrix):", rep)

    rep = solve_poschl_teller(2, 3, args.N_fd)
    show(f"separated xi equation, l1=2 l2=3, N={args.N_fd}:", rep, 5)

    rep = solve_chi_equation(2, 5, args.N_fd)
    show(f"separated chi equation, l3=2, composite=5, N={args.N_fd}:", rep, 5)

    m = metamorphosis_check("morse", a=1, k1=1, k2=1)
    print(f"morse metamorphosis residual: {m.residual:.2e}")
    m = metamorphosis_check("degenerate", sign=1, alpha=2, q=1)
    print(f"degenerate metamorphosis residual: {m.residual:.2e}")


if __name__ == "__main__":
    main()
