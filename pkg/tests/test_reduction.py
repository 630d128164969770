import random
from fractions import Fraction

import pytest

from ptsphere.exact import Exact, I, ONE, rat
from ptsphere.masa import catalog_masa
from ptsphere.phase import (
    dirac_bracket,
    sample_vals,
    vanishes_on_constraint,
)
from ptsphere.reduction import (
    build_hamiltonian,
    build_potential,
    casimir_projection_report,
    coordinate_map,
    degenerate_potential,
    jacobian_check,
    momentum_map,
    verify_conservation,
    verify_coordinate_map,
    verify_homomorphism,
    verify_masa_reduction,
    verify_sum_relation,
)

FAST_MODELS = [
    ("su2ab", dict(a=Fraction(2), b=Fraction(1))),
    ("cartan_od", dict(a=Fraction(1), b=Fraction(1, 2))),
    ("degenerate_plus", {}),
]


@pytest.mark.parametrize("name,kw", FAST_MODELS)
def test_masa_generators_reduce_to_couplings(name, kw):
    rep = verify_masa_reduction(catalog_masa(name, **kw))
    assert rep.passed, rep.detail


@pytest.mark.parametrize("name,kw", FAST_MODELS)
def test_integrals_commute_with_hamiltonian(name, kw):
    rep = verify_conservation(catalog_masa(name, **kw))
    assert rep.passed, rep.detail


def test_bracket_homomorphism_su2ab():
    rep = verify_homomorphism(catalog_masa("su2ab", a=Fraction(2), b=Fraction(1)))
    assert rep.passed, rep.detail


@pytest.mark.parametrize(
    "name,kw",
    [
        ("su2ab", dict(a=Fraction(2), b=Fraction(1))),
        ("cartan_od", dict(a=Fraction(1), b=Fraction(1, 2))),
        ("nilpotent", {}),
    ],
)
def test_sum_relation(name, kw):
    rep = verify_sum_relation(catalog_masa(name, **kw))
    assert rep.passed, rep.detail


def test_casimir_projection_su2ab_gives_twice_h():
    rep = casimir_projection_report(catalog_masa("su2ab", a=Fraction(2), b=Fraction(1)))
    assert rep.passed
    assert rep.detail == "(2) H"


def test_casimir_projection_nilpotent():
    rep = casimir_projection_report(catalog_masa("nilpotent"))
    assert rep.passed
    assert "(3) H" in rep.detail and "k1k1" in rep.detail


def test_su2ab_potential_on_circle():
    # restriction to s = (cos phi, sin phi) must agree with the angular
    # closed form used by the periodic solver
    from math import atan2

    from ptsphere.spectral import _circle_potential_phi

    masa = catalog_masa("su2ab", a=Fraction(2), b=Fraction(1))
    V = build_potential(masa)
    for t in (Fraction(1, 3), Fraction(2, 5), Fraction(-3, 4)):
        den = 1 + t * t
        s1, s2 = rat((1 - t * t) / den), rat(2 * t / den)
        vals = [s1, s2, rat(0), rat(0), rat(Fraction(1, 2)), rat(Fraction(1, 3))]
        v = V.eval(vals).to_complex()
        phi = 2 * atan2(float(t), 1.0)
        expect = _circle_potential_phi(2.0, 1.0, 0.5, 1 / 3, phi)
        assert abs(v - expect) < 1e-12 * max(1.0, abs(expect))


def test_degenerate_potential_closed_form():
    # V = alpha^2 / w^2 with w = s1 - s2 + i sqrt(2) s3 and
    # alpha^2 = 4 k1^2 + 4 k2^2 - 2 k3^2
    V = degenerate_potential(+1)
    irt2 = I * Exact.sqrt_rational(2)
    for seed in (3, 17):
        rng = random.Random(seed)
        vals = sample_vals(rng, 3)
        s1, s2, s3 = vals[0], vals[1], vals[2]
        k1, k2, k3 = vals[6], vals[7], vals[8]
        w = s1 - s2 + irt2 * s3
        alpha2 = rat(4) * (k1 * k1 + k2 * k2) - rat(2) * k3 * k3
        assert V.eval(vals) == alpha2 / (w * w)


def test_momentum_map_closes_brackets_with_constraints():
    masa = catalog_masa("cartan_od", a=Fraction(1), b=Fraction(1, 2))
    f = momentum_map(masa.matrices[0], masa)
    g = momentum_map(masa.matrices[1], masa)
    # commuting generators must have weakly vanishing Dirac bracket
    db = dirac_bracket(f, g)
    assert vanishes_on_constraint(db, trials=8, seed=2)


def test_build_hamiltonian_structure():
    sys = build_hamiltonian(catalog_masa("nilpotent"))
    names = [nm for nm, _ in sys.integrals]
    assert len(names) >= 3
    assert sys.potential.p_degree() == 0
    assert sys.hamiltonian.p_degree() == 2
    # H - V must be the ambient kinetic term at every constraint point
    rng = random.Random(9)
    checked = 0
    while checked < 3:
        vals = sample_vals(rng, 3)
        try:
            h = sys.hamiltonian.eval(vals)
            v = sys.potential.eval(vals)
        except ZeroDivisionError:
            continue
        kin = sum((p * p for p in vals[3:6]), rat(0))
        assert h - v == kin
        checked += 1


def test_coordinate_map_matches_potential():
    rep = verify_coordinate_map(Fraction(1, 4))
    assert rep.max_residual < 1e-10
    assert rep.points == 20


def test_coordinate_map_returns_finite_values():
    # the separable coordinates are complex in general; they just have to be
    # finite away from the singular directions
    c2xi, cchi = coordinate_map(Fraction(1, 4), [0.6, 0.64, 0.48])
    assert abs(complex(c2xi)) < 1e6
    assert abs(complex(cchi)) < 1e6


def test_jacobian_residuals_small():
    masa = catalog_masa("su2ab", a=Fraction(2), b=Fraction(1))
    jc = jacobian_check(masa, [0.21, -0.35], [0.6, 0.8])
    for key, val in jc.residuals.items():
        assert val < 1e-9, (key, val)
