import cmath
import math

import numpy as np
import pytest

from ptsphere.errors import (
    BadCouplings,
    ComplexCouplings,
    NoDefiniteParity,
    PoleInC,
    ResidualTooLarge,
    SingularPotential,
)
from ptsphere.spectral import (
    bessel_ode_residual,
    bessel_series_psi,
    circle_energy,
    closed_form_energies,
    coupling_maps,
    eigenfunction_eval,
    fourier_matrix,
    hyp2f1_terminating,
    invert_circle_couplings,
    metamorphosis_check,
    pt_parity_check,
    pt_phase_scan,
    solve_chi_equation,
    solve_periodic_s1,
    solve_poschl_teller,
    sphere_energy,
)


def test_coupling_map_roundtrip():
    cm = coupling_maps("s1", a=2, b=1, k1=3.0, k2=1.5)
    k1, k2 = invert_circle_couplings(2, 1, cm.g_minus, cm.g_plus)
    assert abs(k1 - 3.0) < 1e-12
    assert abs(k2 - 1.5) < 1e-12


def test_coupling_map_criterion_point():
    # g- = 2, g+ = 3 at a=2, b=1 comes from k1 = sqrt6 + sqrt2, k2 = 3 sqrt2 - sqrt6
    k1, k2 = invert_circle_couplings(2, 1, 2, 3)
    assert abs(k1 - (math.sqrt(6) + math.sqrt(2))) < 1e-12
    assert abs(k2 - (3 * math.sqrt(2) - math.sqrt(6))) < 1e-12
    cm = coupling_maps("s1", a=2, b=1, k1=k1.real, k2=k2.real)
    assert abs(cm.g_minus - 2) < 1e-10 and abs(cm.g_plus - 3) < 1e-10


def test_closed_form_energy_formulas():
    assert circle_energy(2, 3, 0) == 25
    assert circle_energy(2, 3, 1) == 49
    # sphere tower: (X-1) X
    e = sphere_energy((2, 3, 1), 1, 0)
    x = 2 + 3 - 1 + 2
    assert e == (x - 1) * x


def test_closed_form_families_are_sorted_and_real():
    es = closed_form_energies("s1", g_minus=2, g_plus=3, ell=None, count=6)
    assert all(e.imag == 0 for e in es)
    assert list(es) == sorted(es, key=lambda z: z.real)


def test_fourier_matrix_morse_triangular():
    m, modes = fourier_matrix(1, 1, 1, 1, 32)
    assert modes[0] > modes[-1]
    upper = np.triu(m, 1)
    assert np.max(np.abs(upper)) == 0.0
    # diagonal carries the free spectrum n^2
    diag = np.sort(np.real(np.diag(m)))
    assert diag[0] == 0.0 and 1.0 in diag and 4.0 in diag


def test_solve_periodic_morse_spectrum():
    rep = solve_periodic_s1(1, 1, 1, 1, 128)
    for z, cand, dev, rel in rep.matches[:6]:
        assert rel < 1e-10
        assert abs(round(math.sqrt(abs(cand))) ** 2 - cand) < 1e-9


def test_solve_periodic_rejects_singular():
    with pytest.raises(SingularPotential):
        solve_periodic_s1(0, 1, 1, 1, 64)


def test_solve_periodic_complex_coupling_phase():
    # b > a makes the inverse coupling map complex; the report must say so
    rep = solve_periodic_s1(1, 2, 1.0, 0.5, 128)
    assert rep.phase in ("complex-coupling", "broken", "exact")


def test_poschl_teller_fd():
    rep = solve_poschl_teller(2, 3, 1024)
    for z, cand, dev, rel in rep.matches[:4]:
        assert rel < 1e-3
    assert rep.matches[0][1] == 25.0


def test_poschl_teller_bad_couplings():
    with pytest.raises(BadCouplings):
        solve_poschl_teller(0.5, 3, 256)


def test_chi_equation_fd():
    rep = solve_chi_equation(2, 5, 2048)
    expected = [(7 + 2 * j) * (8 + 2 * j) for j in range(4)]
    got = [m[1] for m in rep.matches[: len(expected)]]
    for g, e in zip(got, expected):
        assert abs(g - e) < 1e-9


def test_fd_second_order_convergence():
    coarse = solve_poschl_teller(2, 3, 512)
    fine = solve_poschl_teller(2, 3, 1024)
    e0 = 25.0
    err_c = abs(coarse.lowest[0].real - e0)
    err_f = abs(fine.lowest[0].real - e0)
    assert 3.5 < err_c / err_f < 4.5


def test_hyp2f1_terminating_exact():
    from fractions import Fraction

    # 2F1(-1, b; c; x) = 1 - b x / c
    v = hyp2f1_terminating(-1, Fraction(3), Fraction(2), Fraction(1, 4))
    assert v == 1 - Fraction(3) * Fraction(1, 4) / Fraction(2)
    # the pole case: c a nonpositive integer reached before the series stops
    with pytest.raises(PoleInC):
        hyp2f1_terminating(-3, Fraction(1), Fraction(-1), Fraction(1, 2))


def test_hyp2f1_second_term():
    from fractions import Fraction

    # explicit 3-term check of the terminating series
    a, b, c, x = -2, Fraction(1, 2), Fraction(5, 2), Fraction(1, 3)
    t0 = Fraction(1)
    t1 = Fraction(a) * b / c * x
    t2 = (
        Fraction(a) * (a + 1) * b * (b + Fraction(1)) / (c * (c + 1)) / 2 * x * x
    )
    assert hyp2f1_terminating(a, b, c, x) == t0 + t1 + t2


def test_eigenfunction_single_valued():
    val = eigenfunction_eval("s1", 1, 0, 0.7, a=2, b=1, g_minus=2, g_plus=3)
    assert np.isfinite(val.real) and np.isfinite(val.imag)


def test_pt_parity_real_couplings():
    eps = pt_parity_check("s1", branch=1, qn=1, a=2, b=1, g_minus=2, g_plus=3)
    assert eps in (1, -1)
    eps = pt_parity_check("sphere_xi", branch=1, qn=1, lambda2=0.25, ell=(2, 3))
    assert eps in (1, -1)


def test_pt_parity_broken_regime():
    with pytest.raises(NoDefiniteParity):
        pt_parity_check("sphere_xi", branch=1, qn=1, lambda2=0.6, ell=(2, 3))


def test_bessel_series_converges():
    val, tail = bessel_series_psi(2.0, 1.0, 0.8)
    assert tail < 1e-12 * max(1.0, abs(val))
    resid = bessel_ode_residual(2.0, 1.0, 0.8)
    assert resid < 1e-10


def test_phase_scan_labels():
    reps = pt_phase_scan([0.1, 0.5, 0.6], (1.0, 1.5, 0.5), N=256)
    assert reps[0].phase == "exact"
    assert reps[1].phase == "degenerate"
    assert any("bessel" in n.lower() for n in reps[1].notes)
    assert reps[2].phase in ("broken", "complex-coupling")


def test_metamorphosis_morse():
    rep = metamorphosis_check("morse", a=1, k1=1, k2=1)
    assert rep.ok
    assert rep.residual < 1e-9


def test_metamorphosis_degenerate():
    rep = metamorphosis_check("degenerate", sign=1, alpha=2, q=1)
    assert rep.ok
    assert rep.residual < 1e-9


def test_metamorphosis_bad_case():
    with pytest.raises(Exception):
        metamorphosis_check("no-such-case")
