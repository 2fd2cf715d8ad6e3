"""Scalar and Hermitian matrix arithmetic over R, C and the quaternions.

Scalars are stored as four real components (re, i, j, k) regardless of the
ground field; R and C keep the unused slots at exact zero.  One
multiplication kernel then serves all three fields, and field membership
is enforced only at validation points.

The ambient space of Hermitian N x N matrices carries the real inner
product <A, B> = Re tr(AB).  Its real dimension is N + c N(N-1)/2 where
c is the real dimension of the field, and an orthogonal basis is exposed
by :func:`lemma21_basis`.
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "ContractViolationError",
    "DegenerateInputError",
    "InconsistencyError",
    "Field",
    "Scalar",
    "HermitianMatrix",
    "hermitian_inner",
    "lemma21_basis",
    "ambient_dimension",
    "random_hermitian",
    "quat_mul",
    "quat_conj",
    "mat_mul",
    "mat_vec",
    "conj_transpose",
    "outer",
    "vec_inner",
]


class ContractViolationError(ValueError):
    """An operation's precondition or postcondition failed."""


class DegenerateInputError(ValueError):
    """Input is rank deficient or otherwise outside an operation's domain."""


class InconsistencyError(ValueError):
    """Cross-checked quantities disagree beyond tolerance."""


class Field(enum.Enum):
    """Ground field tag: the reals, the complexes or the quaternions."""

    R = "R"
    C = "C"
    H = "H"

    @property
    def c(self) -> int:
        """Real dimension of the field; also the number of live components."""
        return _FIELD_DIM[self]

    @classmethod
    def parse(cls, text: str) -> "Field":
        try:
            return cls(text)
        except ValueError:
            raise ContractViolationError(
                f"unknown field {text!r}, expected one of R, C, H"
            ) from None


_FIELD_DIM = {Field.R: 1, Field.C: 2, Field.H: 4}

# Unit multiplication table for (1, i, j, k): entry (p, q) -> (index, sign)
# of unit_p * unit_q.  i*j = k, j*k = i, k*i = j and squares are -1.
_UNIT_TABLE = {
    (0, 0): (0, 1.0), (0, 1): (1, 1.0), (0, 2): (2, 1.0), (0, 3): (3, 1.0),
    (1, 0): (1, 1.0), (1, 1): (0, -1.0), (1, 2): (3, 1.0), (1, 3): (2, -1.0),
    (2, 0): (2, 1.0), (2, 1): (3, -1.0), (2, 2): (0, -1.0), (2, 3): (1, 1.0),
    (3, 0): (3, 1.0), (3, 1): (2, 1.0), (3, 2): (1, -1.0), (3, 3): (0, -1.0),
}

# Structure tensor: (u v)_m = sum_{p,q} _MUL[p, q, m] u_p v_q.
_MUL = np.zeros((4, 4, 4))
for (_p, _q), (_m, _s) in _UNIT_TABLE.items():
    _MUL[_p, _q, _m] = _s

_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])

# Validation tolerance for Hermitian symmetry and field membership,
# relative to the largest entry.
HERMITIAN_RTOL = 1e-12


def quat_mul(x, y):
    """Componentwise quaternion product; broadcasts over leading axes."""
    return np.einsum("...p,...q,pqm->...m", x, y, _MUL)


def quat_conj(x):
    """Quaternion conjugate: negate the three imaginary components."""
    return np.asarray(x, dtype=float) * _CONJ_SIGNS


def mat_mul(a, b):
    """Product of matrices with quaternion entries, shapes (N,K,4),(K,M,4)."""
    return np.einsum("ikp,kjq,pqm->ijm", a, b, _MUL)


def mat_vec(a, u):
    """Matrix acting on a column vector from the left, (N,K,4) x (K,4)."""
    return np.einsum("ijp,jq,pqm->im", a, u, _MUL)


def conj_transpose(a):
    """Conjugate transpose of a (N, M, 4) component array."""
    return quat_conj(a).swapaxes(0, 1)


def outer(u, v):
    """Rank-one matrix u conj(v)^t from column vectors of shape (N, 4)."""
    return np.einsum("ap,bq,pqm->abm", u, quat_conj(v), _MUL)


def vec_inner(u, v):
    """Right-module inner product (u, v) = conj(v)^t u, a quaternion (4,).

    Right-linear in u: (u lam, v) = (u, v) lam, and (v, u) = conj((u, v)).
    """
    return np.einsum("ap,aq,pqm->m", quat_conj(v), u, _MUL)


def _re_tr(a, b):
    """Re tr(ab) for component arrays; Re(uv) = u0 v0 - u1 v1 - u2 v2 - u3 v3."""
    return float(np.einsum("ikp,kip,p->", a, b, _CONJ_SIGNS))


def _check_field(field: Field, comps: np.ndarray) -> np.ndarray:
    """Validate that components beyond field.c vanish; zero them exactly."""
    c = field.c
    if c == 4:
        return comps
    scale = max(1.0, float(np.abs(comps).max(initial=0.0)))
    stray = float(np.abs(comps[..., c:]).max(initial=0.0))
    if stray > HERMITIAN_RTOL * scale:
        raise ContractViolationError(
            f"components outside field {field.value}: max stray {stray:.3e}"
        )
    comps = comps.copy()
    comps[..., c:] = 0.0
    return comps


class Scalar:
    """One element of the ground field, held as four real components."""

    __slots__ = ("components",)

    def __init__(self, re=0.0, i=0.0, j=0.0, k=0.0):
        self.components = np.array([re, i, j, k], dtype=float)

    @classmethod
    def from_components(cls, comp) -> "Scalar":
        s = cls.__new__(cls)
        s.components = np.asarray(comp, dtype=float).reshape(4).copy()
        return s

    @classmethod
    def unit(cls, index: int) -> "Scalar":
        """The unit scalar 1, i, j or k for index 0..3."""
        comp = np.zeros(4)
        comp[index] = 1.0
        return cls.from_components(comp)

    @property
    def re(self) -> float:
        return float(self.components[0])

    def conj(self) -> "Scalar":
        return Scalar.from_components(self.components * _CONJ_SIGNS)

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return Scalar.from_components(
                quat_mul(self.components, other.components)
            )
        return Scalar.from_components(self.components * float(other))

    def __rmul__(self, other):
        # real scalars commute with everything
        return Scalar.from_components(self.components * float(other))

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar.from_components(self.components + other.components)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar.from_components(self.components - other.components)

    def __neg__(self) -> "Scalar":
        return Scalar.from_components(-self.components)

    def __abs__(self) -> float:
        return float(np.sqrt(np.dot(self.components, self.components)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return bool(np.array_equal(self.components, other.components))

    def __hash__(self):
        return hash(tuple(self.components))

    def __repr__(self) -> str:
        re, i, j, k = self.components
        return f"Scalar({re:g}, {i:g}, {j:g}, {k:g})"


class HermitianMatrix:
    """Hermitian N x N matrix over the tagged field, entries shape (N, N, 4).

    Construction symmetrizes and validates: the conjugate-transpose gap and
    any stray out-of-field components must stay below 1e-12 relative to the
    largest entry.  Every instance therefore satisfies conj(A)^t = A exactly.
    """

    __slots__ = ("field", "N", "entries")

    def __init__(self, field: Field, entries):
        entries = np.array(entries, dtype=float)
        if (
            entries.ndim != 3
            or entries.shape[0] != entries.shape[1]
            or entries.shape[2] != 4
        ):
            raise ContractViolationError(
                f"expected a (N, N, 4) component array, got shape {entries.shape}"
            )
        ct = conj_transpose(entries)
        scale = max(1.0, float(np.abs(entries).max(initial=0.0)))
        gap = float(np.abs(entries - ct).max(initial=0.0))
        if gap > HERMITIAN_RTOL * scale:
            raise ContractViolationError(
                f"matrix is not Hermitian: conjugate-transpose gap {gap:.3e}"
            )
        entries = _check_field(field, 0.5 * (entries + ct))
        self.field = field
        self.N = int(entries.shape[0])
        self.entries = entries

    @classmethod
    def zero(cls, field: Field, N: int) -> "HermitianMatrix":
        return cls(field, np.zeros((N, N, 4)))

    @classmethod
    def identity(cls, field: Field, N: int) -> "HermitianMatrix":
        comps = np.zeros((N, N, 4))
        comps[np.arange(N), np.arange(N), 0] = 1.0
        return cls(field, comps)

    @classmethod
    def basis_unit(cls, field: Field, N: int, a: int, b: int) -> "HermitianMatrix":
        """Symmetric unit matrix: 1 at (a, b) and (b, a), zero elsewhere."""
        comps = np.zeros((N, N, 4))
        comps[a, b, 0] = 1.0
        comps[b, a, 0] = 1.0
        return cls(field, comps)

    def entry(self, a: int, b: int) -> Scalar:
        return Scalar.from_components(self.entries[a, b])

    def trace(self) -> float:
        # diagonal entries of a Hermitian matrix are real
        return float(self.entries[np.arange(self.N), np.arange(self.N), 0].sum())

    def square(self) -> "HermitianMatrix":
        return HermitianMatrix(self.field, mat_mul(self.entries, self.entries))

    def norm(self) -> float:
        return float(np.sqrt(max(hermitian_inner(self, self), 0.0)))

    def max_entry_gap(self, other: "HermitianMatrix") -> float:
        self._check_compatible(other)
        return float(np.abs(self.entries - other.entries).max(initial=0.0))

    def _check_compatible(self, other: "HermitianMatrix") -> None:
        if self.field is not other.field or self.N != other.N:
            raise ContractViolationError(
                f"incompatible operands: ({self.field.value}, N={self.N}) vs "
                f"({other.field.value}, N={other.N})"
            )

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        self._check_compatible(other)
        return HermitianMatrix(self.field, self.entries + other.entries)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        self._check_compatible(other)
        return HermitianMatrix(self.field, self.entries - other.entries)

    def __mul__(self, scalar) -> "HermitianMatrix":
        return HermitianMatrix(self.field, self.entries * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "HermitianMatrix":
        return HermitianMatrix(self.field, -self.entries)

    def to_json_dict(self) -> dict:
        c = self.field.c
        return {
            "field": self.field.value,
            "N": self.N,
            "entries": self.entries[:, :, :c].tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "HermitianMatrix":
        field = Field.parse(data["field"])
        N = int(data["N"])
        comps = _components_from_json(field, N, N, data["entries"])
        return cls(field, comps)

    def __repr__(self) -> str:
        return f"HermitianMatrix(field={self.field.value}, N={self.N})"


def _components_from_json(field: Field, rows: int, cols: int, entries) -> np.ndarray:
    """Decode nested entry lists; trailing components beyond field.c omitted."""
    comps = np.zeros((rows, cols, 4))
    if len(entries) != rows:
        raise ContractViolationError(
            f"expected {rows} rows in entry table, got {len(entries)}"
        )
    for a, row in enumerate(entries):
        if len(row) != cols:
            raise ContractViolationError(
                f"expected {cols} columns in row {a}, got {len(row)}"
            )
        for b, ent in enumerate(row):
            ent = list(ent)
            if len(ent) > field.c:
                raise ContractViolationError(
                    f"entry ({a}, {b}) has {len(ent)} components, "
                    f"field {field.value} allows {field.c}"
                )
            comps[a, b, : len(ent)] = ent
    return comps


def hermitian_inner(a: HermitianMatrix, b: HermitianMatrix) -> float:
    """Real inner product <A, B> = Re tr(AB) on Hermitian matrices."""
    a._check_compatible(b)
    return _re_tr(a.entries, b.entries)


def ambient_dimension(field: Field, N: int) -> int:
    """Real dimension of the Hermitian N x N matrices: N + c N(N-1)/2."""
    return N + field.c * (N * (N - 1)) // 2


def lemma21_basis(field: Field, N: int) -> list[HermitianMatrix]:
    """Orthogonal basis of the Hermitian matrices over the tagged field.

    Ordered as: the N diagonal units (norm^2 = 1), then for each pair
    B < C the symmetric unit (norm^2 = 2), then for each imaginary unit q
    of the field the matrices with q at (B, C) and -q at (C, B)
    (norm^2 = 2), pairs in lexicographic order.
    """
    if N < 1:
        raise ContractViolationError(f"need N >= 1, got {N}")
    basis = []
    for a in range(N):
        comps = np.zeros((N, N, 4))
        comps[a, a, 0] = 1.0
        basis.append(HermitianMatrix(field, comps))
    for b in range(N):
        for c_ in range(b + 1, N):
            comps = np.zeros((N, N, 4))
            comps[b, c_, 0] = 1.0
            comps[c_, b, 0] = 1.0
            basis.append(HermitianMatrix(field, comps))
    for unit in range(1, field.c):
        for b in range(N):
            for c_ in range(b + 1, N):
                comps = np.zeros((N, N, 4))
                comps[b, c_, unit] = 1.0
                comps[c_, b, unit] = -1.0
                basis.append(HermitianMatrix(field, comps))
    return basis


def random_hermitian(field: Field, N: int, seed: int) -> HermitianMatrix:
    """Gaussian combination of the orthogonal basis; deterministic per seed."""
    rng = np.random.default_rng(seed)
    basis = lemma21_basis(field, N)
    coeffs = rng.standard_normal(len(basis))
    comps = np.zeros((N, N, 4))
    for g, elem in zip(coeffs, basis):
        comps += g * elem.entries
    return HermitianMatrix(field, comps)
