"""Exact Poincare polynomials of G_F(n, N) for F = C, H.

Three independent routes to the same polynomial: the one-row recursion
P(n,N) = P(n,N-1) + t^{c(N-n)} P(n-1,N-1), the two-row recursion built
from the four-class critical decomposition, and a brute-force count of
partitions in an n x (N-n) box (Schubert cells, degree c per unit of
area).  All arithmetic is exact over Python integers.  The real field
is rejected throughout: the height functions are not perfect over R
and the recursions do not apply.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .algebra import ContractViolationError, Field
from .morse import CriticalClass, critical_submanifold_shape, theorem_index_nullity

__all__ = [
    "IntPolynomial",
    "poincare_recursive_f",
    "poincare_recursive_g",
    "schubert_oracle",
    "check_poincare_identity",
    "morse_bott_assembly",
    "total_betti",
]


class IntPolynomial:
    """Dense integer polynomial in t; index = degree, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cleaned = []
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, int):
                raise ContractViolationError(
                    f"integer coefficients required, got {type(c).__name__}"
                )
            cleaned.append(c)
        while cleaned and cleaned[-1] == 0:
            cleaned.pop()
        self.coeffs = tuple(cleaned)

    @classmethod
    def zero(cls) -> "IntPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls((1,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        if degree < 0:
            raise ContractViolationError("monomial degree must be nonnegative")
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        summed = list(a)
        for k, c in enumerate(b):
            summed[k] += c
        return IntPolynomial(summed)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return IntPolynomial.zero()
        prod = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                prod[i + j] += a * b
        return IntPolynomial(prod)

    def __rmul__(self, other):
        return self.__mul__(other)

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by t^k."""
        if k < 0:
            raise ContractViolationError("shift exponent must be nonnegative")
        if not self.coeffs:
            return IntPolynomial.zero()
        return IntPolynomial((0,) * k + self.coeffs)

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def coefficient(self, degree: int) -> int:
        if 0 <= degree < len(self.coeffs):
            return self.coeffs[degree]
        return 0

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else ("-" if c == -1 else str(c))
                power = "t" if k == 1 else f"t^{k}"
                terms.append(f"{head}{power}")
        return " + ".join(terms).replace("+ -", "- ")


def _require_perfect_field(field: Field) -> int:
    if field is Field.R:
        raise ContractViolationError(
            "Poincare recursions need F = C or H; the height functions "
            "are not perfect over R"
        )
    return field.c


def _check_range(n: int, N: int) -> None:
    if not 0 <= n <= N:
        raise ContractViolationError(f"need 0 <= n <= N, got n={n}, N={N}")


@lru_cache(maxsize=None)
def _pf(c: int, n: int, N: int) -> tuple:
    if n == 0 or n == N:
        return (1,)
    below = IntPolynomial(_pf(c, n, N - 1))
    diagonal = IntPolynomial(_pf(c, n - 1, N - 1)).shift(c * (N - n))
    return (below + diagonal).coeffs


def poincare_recursive_f(field: Field, n: int, N: int) -> IntPolynomial:
    """P(G_F(n,N)) by the two-class recursion in N (one row at a time)."""
    c = _require_perfect_field(field)
    _check_range(n, N)
    return IntPolynomial(_pf(c, n, N))


def poincare_recursive_g(field: Field, n: int, N: int) -> IntPolynomial:
    """P(G_F(n,N)) by the four-class recursion removing two rows at once.

    t^{cn} P(n,N-2) + t^{c(N-n)} P(n-2,N-2) + (1+t^{c(N-1)}) P(n-1,N-2),
    with the sub-polynomials evaluated by the one-row recursion.
    """
    c = _require_perfect_field(field)
    _check_range(n, N)
    if n < 2 or N - n < 2:
        raise ContractViolationError(
            f"two-row recursion needs n >= 2 and N-n >= 2, got n={n}, N={N}"
        )
    p_sub = IntPolynomial(_pf(c, n, N - 2)).shift(c * n)
    p_contains = IntPolynomial(_pf(c, n - 2, N - 2)).shift(c * (N - n))
    saddle_factor = IntPolynomial.one() + IntPolynomial.monomial(c * (N - 1))
    return p_sub + p_contains + saddle_factor * IntPolynomial(_pf(c, n - 1, N - 2))


def _partition_degrees(n: int, width: int):
    """Yield sums of weakly increasing sequences 0 <= a_1 <= ... <= a_n <= width."""

    def rec(slots: int, lo: int, acc: int):
        if slots == 0:
            yield acc
            return
        for a in range(lo, width + 1):
            yield from rec(slots - 1, a, acc + a)

    yield from rec(n, 0, 0)


def schubert_oracle(field: Field, n: int, N: int) -> IntPolynomial:
    """Cell-by-cell count: sum of t^{c |a|} over partitions in an n x (N-n) box."""
    c = _require_perfect_field(field)
    _check_range(n, N)
    coeffs = [0] * (c * n * (N - n) + 1)
    for total in _partition_degrees(n, N - n):
        coeffs[c * total] += 1
    return IntPolynomial(coeffs)


def check_poincare_identity(field: Field, n: int, N: int) -> bool:
    """(t^{cn} - 1) P(n,N-1) = (t^{c(N-n)} - 1) P(n-1,N-1), exactly."""
    c = _require_perfect_field(field)
    if not 1 <= n <= N - 1:
        raise ContractViolationError(f"need 1 <= n <= N-1, got n={n}, N={N}")
    lhs_factor = IntPolynomial.monomial(c * n) - IntPolynomial.one()
    rhs_factor = IntPolynomial.monomial(c * (N - n)) - IntPolynomial.one()
    lhs = lhs_factor * IntPolynomial(_pf(c, n, N - 1))
    rhs = rhs_factor * IntPolynomial(_pf(c, n - 1, N - 1))
    return lhs == rhs


# Critical classes feeding each assembly source, with their submanifolds.
_ASSEMBLY_CLASSES = {
    "thm31": (CriticalClass.F_SUB, CriticalClass.F_CONTAINS),
    "thm35": (
        CriticalClass.G_ZERO_SUB,
        CriticalClass.G_ZERO_CONTAINS,
        CriticalClass.G_MINUS,
        CriticalClass.G_PLUS,
    ),
}


def morse_bott_assembly(
    field: Field,
    n: int,
    N: int,
    source: str = "thm31",
    indices: dict | None = None,
) -> IntPolynomial:
    """Sum of t^{index} P(critical submanifold) over one height function.

    source picks the decomposition: "thm31" uses the two critical classes
    of f (indices 0 and c(N-n)); "thm35" the four classes of g (indices
    cn, c(N-n), 0, c(N-1)).  indices, when given, overrides the theorem
    values per class (e.g. with numerically measured ones).  By
    perfectness the result equals P(G_F(n,N)).
    """
    _require_perfect_field(field)
    if source not in _ASSEMBLY_CLASSES:
        raise ContractViolationError(f"unknown assembly source {source!r}")
    _check_range(n, N)
    if source == "thm31" and not 1 <= n <= N - 1:
        raise ContractViolationError(
            f"thm31 assembly needs 1 <= n <= N-1, got n={n}, N={N}"
        )
    if source == "thm35" and (n < 2 or N - n < 2):
        raise ContractViolationError(
            f"thm35 assembly needs n >= 2 and N-n >= 2, got n={n}, N={N}"
        )
    total = IntPolynomial.zero()
    for cls in _ASSEMBLY_CLASSES[source]:
        predicted, _ = theorem_index_nullity(cls, field, n, N)
        idx = predicted
        if indices is not None and cls in indices:
            idx = int(indices[cls])
        k, M = critical_submanifold_shape(cls, n, N)
        total = total + poincare_recursive_f(field, k, M).shift(idx)
    return total


def total_betti(poly: IntPolynomial) -> int:
    """Evaluation at 1: the total Betti number; equals C(N, n) for P(G(n,N))."""
    return poly.evaluate(1)


def binomial_total(n: int, N: int) -> int:
    return comb(N, n)
