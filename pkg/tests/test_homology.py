"""Exact Poincare polynomials: recursions, cell counts and assemblies."""

import pytest

from grasstop.algebra import ContractViolationError, Field
from grasstop.homology import (
    IntPolynomial,
    binomial_total,
    check_poincare_identity,
    morse_bott_assembly,
    poincare_recursive_f,
    poincare_recursive_g,
    schubert_oracle,
    total_betti,
)
from grasstop.morse import CriticalClass

P = IntPolynomial

# Known polynomials, written degree by degree.
KNOWN = {
    (Field.C, 2, 4): P([1, 0, 1, 0, 2, 0, 1, 0, 1]),
    (Field.C, 2, 5): P([1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 1]),
    (Field.C, 2, 7): P(
        [1, 0, 1, 0, 2, 0, 2, 0, 3, 0, 3, 0, 3, 0, 2, 0, 2, 0, 1, 0, 1]
    ),
    (Field.H, 2, 4): P([1, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 1]),
}


def test_polynomial_construction_and_trimming():
    assert P([1, 2, 0, 0]).coeffs == (1, 2)
    assert P([]).coeffs == ()
    assert P.zero() == P([0, 0])
    assert P.one().coeffs == (1,)
    assert P.monomial(3).coeffs == (0, 0, 0, 1)
    assert P.monomial(0, 5).coeffs == (5,)
    with pytest.raises(ContractViolationError):
        P([1.5])
    with pytest.raises(ContractViolationError):
        P([True])
    with pytest.raises(ContractViolationError):
        P.monomial(-1)


def test_polynomial_arithmetic():
    one_plus_t = P([1, 1])
    assert (one_plus_t * one_plus_t).coeffs == (1, 2, 1)
    assert (one_plus_t + one_plus_t).coeffs == (2, 2)
    assert (one_plus_t - one_plus_t) == P.zero()
    assert (-one_plus_t).coeffs == (-1, -1)
    assert (3 * one_plus_t).coeffs == (3, 3)
    assert (one_plus_t * 3).coeffs == (3, 3)
    assert one_plus_t.shift(2).coeffs == (0, 0, 1, 1)
    assert P.zero().shift(4) == P.zero()
    assert P.zero() * one_plus_t == P.zero()
    with pytest.raises(ContractViolationError):
        one_plus_t.shift(-1)


def test_polynomial_queries():
    poly = P([1, 0, 2, 0, 1])
    assert poly.degree == 4
    assert poly.evaluate(1) == 4
    assert poly.evaluate(2) == 25
    assert poly.is_palindromic()
    assert not P([1, 2]).is_palindromic()
    assert poly.coefficient(2) == 2
    assert poly.coefficient(9) == 0
    assert str(poly) == "1 + 2t^2 + t^4"
    assert str(P.zero()) == "0"
    assert str(P([0, 1, -1])) == "t - t^2"
    assert hash(P([1, 0, 1])) == hash(P([1, 0, 1, 0]))
    assert repr(poly) == "IntPolynomial([1, 0, 2, 0, 1])"


def test_base_cases():
    for field in (Field.C, Field.H):
        for m in range(6):
            assert poincare_recursive_f(field, 0, m) == P.one()
            assert poincare_recursive_f(field, m, m) == P.one()
    assert poincare_recursive_f(Field.C, 1, 2) == P([1, 0, 1])
    assert schubert_oracle(Field.C, 1, 2) == P([1, 0, 1])


@pytest.mark.parametrize("key", sorted(KNOWN, key=str))
def test_known_polynomials_by_all_methods(key):
    field, n, N = key
    expected = KNOWN[key]
    assert poincare_recursive_f(field, n, N) == expected
    assert schubert_oracle(field, n, N) == expected
    if n >= 2 and N - n >= 2:
        assert poincare_recursive_g(field, n, N) == expected


def test_projective_space_polynomials():
    for N in range(2, 11):
        expected = P([1, 0] * (N - 1) + [1])
        assert poincare_recursive_f(Field.C, 1, N) == expected
        assert schubert_oracle(Field.C, 1, N) == expected


def test_three_methods_agree_exhaustively():
    for field in (Field.C, Field.H):
        for N in range(0, 11):
            for n in range(0, N + 1):
                via_f = poincare_recursive_f(field, n, N)
                assert schubert_oracle(field, n, N) == via_f
                if n >= 2 and N - n >= 2:
                    assert poincare_recursive_g(field, n, N) == via_f


def test_duality_palindrome_and_total_betti():
    for field in (Field.C, Field.H):
        for N in range(0, 11):
            for n in range(0, N + 1):
                poly = poincare_recursive_f(field, n, N)
                assert poly == poincare_recursive_f(field, N - n, N)
                assert poly.is_palindromic()
                assert poly.degree == field.c * n * (N - n)
                assert total_betti(poly) == binomial_total(n, N)


def test_poincare_identity_exhaustively():
    for field in (Field.C, Field.H):
        for N in range(2, 11):
            for n in range(1, N):
                assert check_poincare_identity(field, n, N)
    with pytest.raises(ContractViolationError):
        check_poincare_identity(Field.C, 0, 4)


def test_cascade_g_c_2_8():
    lhs = poincare_recursive_f(Field.C, 2, 8)
    rhs = poincare_recursive_f(Field.C, 2, 7) + poincare_recursive_f(
        Field.C, 1, 7
    ).shift(12)
    assert lhs == rhs


def test_cascade_g_c_3_7():
    lhs = poincare_recursive_f(Field.C, 3, 7)
    rhs = (P.one() + P.monomial(6)) * poincare_recursive_f(Field.C, 2, 5) + (
        poincare_recursive_f(Field.C, 2, 6).shift(8)
    )
    assert lhs == rhs


def test_cascade_g_c_5_10():
    lhs = poincare_recursive_f(Field.C, 5, 10)
    inner = poincare_recursive_f(Field.C, 2, 7).shift(20) + (
        P.one() + P.monomial(8) + P.monomial(10)
    ) * poincare_recursive_f(Field.C, 3, 7)
    rhs = (P.one() + P.monomial(10)) * inner
    assert lhs == rhs
    assert total_betti(lhs) == 252


def test_real_field_is_rejected_everywhere():
    for call in (
        lambda: poincare_recursive_f(Field.R, 1, 3),
        lambda: poincare_recursive_g(Field.R, 2, 4),
        lambda: schubert_oracle(Field.R, 1, 3),
        lambda: check_poincare_identity(Field.R, 1, 3),
        lambda: morse_bott_assembly(Field.R, 1, 3),
    ):
        with pytest.raises(ContractViolationError):
            call()


def test_recursion_g_rejects_thin_shapes():
    with pytest.raises(ContractViolationError):
        poincare_recursive_g(Field.C, 1, 4)
    with pytest.raises(ContractViolationError):
        poincare_recursive_g(Field.C, 3, 4)
    with pytest.raises(ContractViolationError):
        poincare_recursive_f(Field.C, 3, 2)


def test_morse_bott_assembly_matches_recursions():
    for field in (Field.C, Field.H):
        for N in range(2, 9):
            for n in range(1, N):
                expected = poincare_recursive_f(field, n, N)
                assert morse_bott_assembly(field, n, N, source="thm31") == expected
                if n >= 2 and N - n >= 2:
                    assert morse_bott_assembly(field, n, N, source="thm35") == expected


def test_morse_bott_assembly_index_override():
    expected = poincare_recursive_f(Field.C, 2, 5)
    same = morse_bott_assembly(
        Field.C, 2, 5, source="thm31", indices={CriticalClass.F_CONTAINS: 6}
    )
    assert same == expected  # the theorem value, passed explicitly
    skewed = morse_bott_assembly(
        Field.C, 2, 5, source="thm31", indices={CriticalClass.F_CONTAINS: 4}
    )
    assert skewed != expected


def test_morse_bott_assembly_validates_inputs():
    with pytest.raises(ContractViolationError):
        morse_bott_assembly(Field.C, 0, 4, source="thm31")
    with pytest.raises(ContractViolationError):
        morse_bott_assembly(Field.C, 1, 4, source="thm35")
    with pytest.raises(ContractViolationError):
        morse_bott_assembly(Field.C, 2, 5, source="thm99")
