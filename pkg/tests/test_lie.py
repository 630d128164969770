from fractions import Fraction

import pytest

from ptsphere.errors import UnsupportedOrder, UnsupportedRank
from ptsphere.exact import rat
from ptsphere.lie import (
    EnvElement,
    U2_SYMMETRIC,
    U3_SYMMETRIC,
    anticommutator,
    build_generators,
    casimir_element,
    commutator_matrix,
    env_commutator,
    pbw_normal_form,
    verify_structure_constants,
)


@pytest.fixture(scope="module")
def u2():
    return build_generators(2)


@pytest.fixture(scope="module")
def u3():
    return build_generators(3)


def test_structure_constants_pass(u2, u3):
    for basis in (u2, u3):
        rep = verify_structure_constants(basis)
        assert rep.passed, rep.mismatches
        assert rep.mismatches == []
    assert verify_structure_constants(u2).checked >= 4
    assert verify_structure_constants(u3).checked >= 28


def test_unsupported_rank():
    with pytest.raises(UnsupportedRank):
        build_generators(4)


def test_symmetry_flags_match_matrices(u2, u3):
    for basis, flags in ((u2, U2_SYMMETRIC), (u3, U3_SYMMETRIC)):
        for m, flag in zip(basis.generators, flags):
            assert m.is_symmetric() == flag


def test_brackets_close_in_basis(u2, u3):
    # every commutator of basis elements must expand exactly in the basis
    for basis in (u2, u3):
        n = basis.size
        for i in range(n):
            for j in range(n):
                coeffs = basis.bracket_coeffs(i, j)
                m = commutator_matrix(basis.generators[i], basis.generators[j])
                acc = None
                for idx, c in coeffs.items():
                    term = basis.generators[idx].scale(c)
                    acc = term if acc is None else acc + term
                if acc is None:
                    assert m.is_zero()
                else:
                    assert (m - acc).is_zero()


def test_pbw_normal_form_sorts_words(u2):
    x = EnvElement.gen(2) * EnvElement.gen(1)
    nf = pbw_normal_form(x, u2)
    for word in nf.terms:
        assert list(word) == sorted(word)
    # X2 X1 = X1 X2 - [X1, X2] reordering must preserve the commutator
    direct = env_commutator(EnvElement.gen(1), EnvElement.gen(2), u2)
    resum = pbw_normal_form(EnvElement.gen(1) * EnvElement.gen(2) - x, u2)
    assert resum == pbw_normal_form(direct, u2)


def test_env_commutator_bilinear(u2):
    a = EnvElement.gen(1).scale(rat(Fraction(2, 3)))
    b = EnvElement.gen(2) + EnvElement.gen(3)
    lhs = env_commutator(a, b, u2)
    rhs = (
        env_commutator(EnvElement.gen(1), EnvElement.gen(2), u2)
        + env_commutator(EnvElement.gen(1), EnvElement.gen(3), u2)
    ).scale(rat(Fraction(2, 3)))
    assert pbw_normal_form(lhs, u2) == pbw_normal_form(rhs, u2)


def test_anticommutator_symmetric(u2):
    a, b = EnvElement.gen(1), EnvElement.gen(2)
    assert pbw_normal_form(anticommutator(a, b), u2) == pbw_normal_form(
        anticommutator(b, a), u2
    )


@pytest.mark.parametrize("n", [2, 3])
def test_quadratic_casimir_is_central(n):
    basis = build_generators(n)
    c2 = casimir_element(2, basis)
    for i in range(basis.size):
        comm = env_commutator(c2, EnvElement.gen(i), basis)
        assert pbw_normal_form(comm, basis).is_zero()


def test_casimir_order_guard(u2):
    with pytest.raises(UnsupportedOrder):
        casimir_element(5, u2)
