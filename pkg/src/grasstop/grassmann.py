"""Grassmannian points as idempotent Hermitian matrices and their frames.

A point of G_F(n, N) is represented two ways: as an orthonormal frame
(N x n columns over F, the working representative) and as the projection
matrix A = sum_i e_i conj(e_i)^t onto its span (the embedded point, with
A^2 = A, conj(A)^t = A and tr A = n).  Frames act on scalars from the
right; the inner product is (u, v) = conj(v)^t u.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    ContractViolationError,
    DegenerateInputError,
    Field,
    HermitianMatrix,
    InconsistencyError,
    _check_field,
    _components_from_json,
    conj_transpose,
    mat_mul,
    quat_conj,
    quat_mul,
    vec_inner,
    _MUL,
)

__all__ = [
    "Frame",
    "ProjectionPoint",
    "orthonormalize",
    "embed",
    "frame_from_projection",
    "complement",
    "involution",
    "random_point",
    "real_determinant",
    "span_dimension",
    "intersection_dimension",
]

# Orthonormality and projection validation tolerance.
FRAME_TOL = 1e-10
# Residual norm below which a Gram-Schmidt candidate counts as dependent.
RANK_TOL = 1e-8


def _gram(columns: np.ndarray) -> np.ndarray:
    """Quaternion Gram matrix G[i, j] = (col_i, col_j), shape (n, n, 4)."""
    return np.einsum("ajp,aiq,pqm->ijm", quat_conj(columns), columns, _MUL)


def _gram_identity_gap(columns: np.ndarray) -> float:
    n = columns.shape[1]
    gram = _gram(columns)
    eye = np.zeros((n, n, 4))
    eye[np.arange(n), np.arange(n), 0] = 1.0
    return float(np.abs(gram - eye).max(initial=0.0))


class Frame:
    """Orthonormal n-tuple of columns in F^N, components shape (N, n, 4)."""

    __slots__ = ("field", "N", "n", "columns")

    def __init__(self, field: Field, columns):
        columns = np.array(columns, dtype=float)
        if columns.ndim != 3 or columns.shape[2] != 4:
            raise ContractViolationError(
                f"expected a (N, n, 4) component array, got shape {columns.shape}"
            )
        N, n = columns.shape[0], columns.shape[1]
        if n > N:
            raise ContractViolationError(f"frame has {n} columns in dimension {N}")
        columns = _check_field(field, columns)
        gap = _gram_identity_gap(columns)
        if gap > FRAME_TOL:
            raise ContractViolationError(
                f"columns are not orthonormal: Gram gap {gap:.3e}"
            )
        self.field = field
        self.N = int(N)
        self.n = int(n)
        self.columns = columns

    def column(self, i: int) -> np.ndarray:
        return self.columns[:, i, :]

    def to_json_dict(self) -> dict:
        c = self.field.c
        return {
            "field": self.field.value,
            "N": self.N,
            "n": self.n,
            "entries": self.columns[:, :, :c].tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Frame":
        field = Field.parse(data["field"])
        N, n = int(data["N"]), int(data["n"])
        comps = _components_from_json(field, N, n, data["entries"])
        return cls(field, comps)

    def __repr__(self) -> str:
        return f"Frame(field={self.field.value}, N={self.N}, n={self.n})"


class ProjectionPoint:
    """Embedded Grassmannian point: Hermitian A with A^2 = A, tr A = n."""

    __slots__ = ("matrix", "n")

    def __init__(self, matrix: HermitianMatrix, n: int):
        sq_gap = matrix.square().max_entry_gap(matrix)
        if sq_gap > FRAME_TOL:
            raise ContractViolationError(
                f"matrix is not idempotent: max |A^2 - A| = {sq_gap:.3e}"
            )
        tr = matrix.trace()
        if abs(tr - n) > FRAME_TOL * max(1.0, abs(tr)):
            raise ContractViolationError(
                f"trace {tr!r} does not match rank {n}"
            )
        self.matrix = matrix
        self.n = int(n)

    @property
    def field(self) -> Field:
        return self.matrix.field

    @property
    def N(self) -> int:
        return self.matrix.N

    def distance(self, other: "ProjectionPoint") -> float:
        return (self.matrix - other.matrix).norm()

    def to_json_dict(self) -> dict:
        data = self.matrix.to_json_dict()
        data["n"] = self.n
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "ProjectionPoint":
        return cls(HermitianMatrix.from_json_dict(data), int(data["n"]))

    def __repr__(self) -> str:
        return (
            f"ProjectionPoint(field={self.field.value}, n={self.n}, N={self.N})"
        )


def orthonormalize(field: Field, vectors, tol: float = RANK_TOL) -> Frame:
    """Modified Gram-Schmidt over F with right scalar action.

    vectors is a (N, k, 4) component array (or list of (N, 4) columns).
    Deterministic, no pivoting: columns are processed in the given order
    and a residual with norm below tol raises DegenerateInputError.
    The span is preserved exactly.
    """
    cols = np.array(vectors, dtype=float)
    if cols.ndim == 2:
        cols = cols[:, None, :]
    if cols.ndim != 3 or cols.shape[2] != 4:
        raise ContractViolationError(
            f"expected a (N, k, 4) component array, got shape {cols.shape}"
        )
    cols = _check_field(field, cols)
    N, k = cols.shape[0], cols.shape[1]
    out = np.zeros((N, k, 4))
    for idx in range(k):
        v = cols[:, idx, :].copy()
        for j in range(idx):
            coeff = vec_inner(v, out[:, j, :])
            v -= quat_mul(out[:, j, :], coeff)
        norm = float(np.sqrt(np.sum(v * v)))
        if norm < tol:
            raise DegenerateInputError(
                f"column {idx} is dependent: residual norm {norm:.3e}"
            )
        out[:, idx, :] = v / norm
    return Frame(field, out)


def embed(frame: Frame) -> ProjectionPoint:
    """Projection matrix A = sum_i e_i conj(e_i)^t onto the frame's span."""
    comps = np.einsum(
        "aip,biq,pqm->abm", frame.columns, quat_conj(frame.columns), _MUL
    )
    return ProjectionPoint(HermitianMatrix(frame.field, comps), frame.n)


def frame_from_projection(point: ProjectionPoint, tol: float = RANK_TOL) -> Frame:
    """Recover an orthonormal frame for range(A).

    Columns of A are taken largest-norm-first (stable order on ties) and
    orthonormalized greedily; the result is deterministic.  A numerical
    rank different from n raises InconsistencyError.
    """
    A = point.matrix.entries
    N, n = point.N, point.n
    if n == 0:
        return Frame(point.field, np.zeros((N, 0, 4)))
    # squared column norms of a projection are its real diagonal entries
    norms = A[np.arange(N), np.arange(N), 0]
    order = np.argsort(-norms, kind="stable")
    out = np.zeros((N, n, 4))
    count = 0
    for b in order:
        v = A[:, b, :].copy()
        for j in range(count):
            coeff = vec_inner(v, out[:, j, :])
            v -= quat_mul(out[:, j, :], coeff)
        norm = float(np.sqrt(np.sum(v * v)))
        if norm < tol:
            continue
        if count == n:
            raise InconsistencyError(
                f"numerical rank exceeds n={n}: extra residual {norm:.3e}"
            )
        out[:, count, :] = v / norm
        count += 1
    if count < n:
        raise InconsistencyError(f"numerical rank {count} is below n={n}")
    frame = Frame(point.field, out)
    gap = embed(frame).matrix.max_entry_gap(point.matrix)
    if gap > FRAME_TOL:
        raise InconsistencyError(
            f"recovered frame does not reproduce A: gap {gap:.3e}"
        )
    return frame


def complement(point: ProjectionPoint) -> ProjectionPoint:
    """Projection I - A onto the orthogonal complement, a point of G(N-n, N)."""
    eye = HermitianMatrix.identity(point.field, point.N)
    return ProjectionPoint(eye - point.matrix, point.N - point.n)


def involution(point: ProjectionPoint) -> HermitianMatrix:
    """The reflection I - 2A; squares to the identity."""
    eye = HermitianMatrix.identity(point.field, point.N)
    return eye - 2.0 * point.matrix


def random_point(field: Field, n: int, N: int, seed: int) -> Frame:
    """Orthonormalized Gaussian N x n frame; deterministic per seed."""
    if not 0 <= n <= N:
        raise ContractViolationError(f"need 0 <= n <= N, got n={n}, N={N}")
    rng = np.random.default_rng(seed)
    comps = np.zeros((N, n, 4))
    comps[:, :, : field.c] = rng.standard_normal((N, n, field.c))
    if n == 0:
        return Frame(field, comps)
    return orthonormalize(field, comps)


def real_determinant(matrix: HermitianMatrix) -> float:
    """Determinant of a matrix over R (other fields lack a plain determinant)."""
    if matrix.field is not Field.R:
        raise ContractViolationError(
            f"determinant is only computed over R, got {matrix.field.value}"
        )
    return float(np.linalg.det(matrix.entries[:, :, 0]))


def span_dimension(field: Field, vectors, tol: float = RANK_TOL) -> int:
    """Dimension over F of the right span of the given columns."""
    cols = np.array(vectors, dtype=float)
    if cols.ndim != 3 or cols.shape[2] != 4:
        raise ContractViolationError(
            f"expected a (N, k, 4) component array, got shape {cols.shape}"
        )
    N, k = cols.shape[0], cols.shape[1]
    kept = np.zeros((N, k, 4))
    count = 0
    for idx in range(k):
        v = cols[:, idx, :].copy()
        for j in range(count):
            coeff = vec_inner(v, kept[:, j, :])
            v -= quat_mul(kept[:, j, :], coeff)
        norm = float(np.sqrt(np.sum(v * v)))
        if norm >= tol:
            kept[:, count, :] = v / norm
            count += 1
    return count


def intersection_dimension(a: Frame, b: Frame, tol: float = RANK_TOL) -> int:
    """dim over F of range(a) intersect range(b), via dim U + dim V - dim(U+V)."""
    if a.field is not b.field or a.N != b.N:
        raise ContractViolationError("frames live in different spaces")
    joined = np.concatenate([a.columns, b.columns], axis=1)
    return a.n + b.n - span_dimension(a.field, joined, tol)
