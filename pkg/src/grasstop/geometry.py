"""Tangent spaces, geodesic rotation curves and curvature of G_F(n, N).

The embedding A = sum e_i conj(e_i)^t places G_F(n, N) inside the
Euclidean space of Hermitian matrices with <A, B> = Re tr(AB).  The
induced metric is twice the canonical one; the tangent basis vectors at
a point all have norm sqrt(2) and the one-column rotation curves below
are exact geodesics traversed at speed sqrt(2) in that metric.  Every
second-difference sum here carries a factor 1/2 so that reported
derivatives refer to the induced metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    ContractViolationError,
    Field,
    HermitianMatrix,
    Scalar,
    _check_field,
    _re_tr,
    hermitian_inner,
    mat_mul,
    outer,
    quat_conj,
    quat_mul,
    vec_inner,
    _MUL,
)
from .grassmann import Frame, ProjectionPoint, embed, orthonormalize

__all__ = [
    "FullFrame",
    "TangentVector",
    "GeodesicCurve",
    "complete_frame",
    "tangent_basis",
    "geodesic_point",
    "curve_velocity",
    "retraction_frame",
    "directional_derivative",
    "mean_curvature_closed_form",
    "mean_curvature_numeric",
    "minimality_residual",
    "sphere_slice_radius",
    "laplacian_numeric",
]

TANGENCY_TOL = 1e-10
# Residual norm needed before a completion candidate is accepted; keeps the
# Gram-Schmidt direction well conditioned.
COMPLETION_TOL = 1e-3
FD_H_MIN, FD_H_MAX = 1e-5, 1e-2


class FullFrame:
    """Orthonormal basis e_1..e_N of F^N whose first n columns span the point."""

    __slots__ = ("field", "N", "n", "columns")

    def __init__(self, field: Field, columns, n: int):
        frame = Frame(field, columns)
        if frame.n != frame.N:
            raise ContractViolationError(
                f"full frame needs N={frame.N} columns, got {frame.n}"
            )
        if not 0 <= n <= frame.N:
            raise ContractViolationError(f"invalid split n={n} for N={frame.N}")
        self.field = field
        self.N = frame.N
        self.n = int(n)
        self.columns = frame.columns

    def column(self, i: int) -> np.ndarray:
        return self.columns[:, i, :]

    def point_frame(self) -> Frame:
        return Frame(self.field, self.columns[:, : self.n, :])

    def complement_frame(self) -> Frame:
        return Frame(self.field, self.columns[:, self.n :, :])

    def base_point(self) -> ProjectionPoint:
        return embed(self.point_frame())

    def __repr__(self) -> str:
        return (
            f"FullFrame(field={self.field.value}, N={self.N}, n={self.n})"
        )


def complete_frame(frame: Frame, seed: int = 0) -> FullFrame:
    """Extend a frame to an orthonormal basis of F^N, first columns unchanged.

    Standard basis vectors are tried in index order, so completing a frame
    of standard vectors yields standard vectors; candidates whose residual
    falls below a conditioning threshold are skipped and, if the standard
    candidates run out, seeded Gaussian columns fill the remainder.
    """
    N, n = frame.N, frame.n
    out = np.zeros((N, N, 4))
    out[:, :n, :] = frame.columns
    count = n

    def try_candidate(v: np.ndarray) -> None:
        nonlocal count
        v = v.copy()
        for j in range(count):
            coeff = vec_inner(v, out[:, j, :])
            v -= quat_mul(out[:, j, :], coeff)
        norm = float(np.sqrt(np.sum(v * v)))
        if norm >= COMPLETION_TOL:
            out[:, count, :] = v / norm
            count += 1

    for a in range(N):
        if count == N:
            break
        cand = np.zeros((N, 4))
        cand[a, 0] = 1.0
        try_candidate(cand)
    rng = np.random.default_rng(seed)
    guard = 0
    while count < N:
        cand = np.zeros((N, 4))
        cand[:, : frame.field.c] = rng.standard_normal((N, frame.field.c))
        try_candidate(cand / max(float(np.sqrt(np.sum(cand * cand))), 1e-300))
        guard += 1
        if guard > 100 * N:
            raise ContractViolationError("frame completion failed to converge")
    return FullFrame(frame.field, out, n)


class TangentVector:
    """Tangent direction at a projection point, as a Hermitian matrix X.

    Tangency X A + A X = X is validated at construction.  label, when
    present, is (i, alpha, unit) for the basis vector rotating column i
    toward e_alpha times the unit scalar with component index `unit`
    (0 is the real unit, 1..3 are i, j, k).
    """

    __slots__ = ("base", "matrix", "label")

    def __init__(self, base: ProjectionPoint, matrix: HermitianMatrix, label=None):
        if matrix.field is not base.field or matrix.N != base.N:
            raise ContractViolationError("tangent matrix incompatible with base")
        xa = mat_mul(matrix.entries, base.matrix.entries)
        ax = mat_mul(base.matrix.entries, matrix.entries)
        gap = float(np.abs(xa + ax - matrix.entries).max(initial=0.0))
        scale = max(1.0, float(np.abs(matrix.entries).max(initial=0.0)))
        if gap > TANGENCY_TOL * scale:
            raise ContractViolationError(
                f"matrix is not tangent at the base point: gap {gap:.3e}"
            )
        self.base = base
        self.matrix = matrix
        self.label = label

    def norm(self) -> float:
        return self.matrix.norm()

    def __repr__(self) -> str:
        return f"TangentVector(label={self.label}, norm={self.norm():.6g})"


def _basis_matrix(columns: np.ndarray, i: int, alpha: int, unit: int) -> np.ndarray:
    """Component array of e_alpha q conj(e_i)^t +/- e_i q conj(e_alpha)^t."""
    e_i = columns[:, i, :]
    e_a = columns[:, alpha, :]
    if unit == 0:
        return outer(e_a, e_i) + outer(e_i, e_a)
    q = np.zeros(4)
    q[unit] = 1.0
    return outer(quat_mul(e_a, q), e_i) - outer(quat_mul(e_i, q), e_a)


def tangent_basis(full_frame: FullFrame) -> list[TangentVector]:
    """The c n(N-n) orthogonal tangent vectors at the base point, norm sqrt(2).

    Ordered lexicographically by (i, alpha, unit); their Gram matrix under
    hermitian_inner is 2 I, which is the induced-metric statement.
    """
    base = full_frame.base_point()
    out = []
    for i in range(full_frame.n):
        for alpha in range(full_frame.n, full_frame.N):
            for unit in range(full_frame.field.c):
                comps = _basis_matrix(full_frame.columns, i, alpha, unit)
                vec = TangentVector(
                    base,
                    HermitianMatrix(full_frame.field, comps),
                    label=(i, alpha, unit),
                )
                out.append(vec)
    return out


@dataclass
class GeodesicCurve:
    """One-column rotation geodesic: e_i(t) = cos(t) e_i + sin(t) e_alpha q."""

    full_frame: FullFrame
    i: int
    alpha: int
    q: Scalar

    def __post_init__(self):
        if not 0 <= self.i < self.full_frame.n <= self.alpha < self.full_frame.N:
            raise ContractViolationError(
                f"curve indices i={self.i}, alpha={self.alpha} invalid for "
                f"n={self.full_frame.n}, N={self.full_frame.N}"
            )
        if abs(abs(self.q) - 1.0) > 1e-12:
            raise ContractViolationError(f"direction scalar is not a unit: {self.q!r}")
        _check_field(self.full_frame.field, self.q.components.reshape(1, 1, 4))


def geodesic_point(curve: GeodesicCurve, t: float) -> Frame:
    """Frame at parameter t; stays orthonormal exactly for all t."""
    ff = curve.full_frame
    cols = ff.columns[:, : ff.n, :].copy()
    e_a_q = quat_mul(ff.column(curve.alpha), curve.q.components)
    cols[:, curve.i, :] = np.cos(t) * ff.column(curve.i) + np.sin(t) * e_a_q
    return Frame(ff.field, cols)


def curve_velocity(curve: GeodesicCurve) -> TangentVector:
    """d/dt of the embedded curve at t=0; norm sqrt(2)."""
    ff = curve.full_frame
    e_i = ff.column(curve.i)
    e_a = ff.column(curve.alpha)
    q = curve.q.components
    comps = outer(quat_mul(e_a, q), e_i) + outer(quat_mul(e_i, quat_conj(q)), e_a)
    label = None
    units = np.abs(q)
    if np.isclose(units.sum(), 1.0) and np.max(units) == 1.0:
        label = (curve.i, curve.alpha, int(np.argmax(units)))
    return TangentVector(
        embed(ff.point_frame()), HermitianMatrix(ff.field, comps), label
    )


def retraction_frame(frame: Frame, direction: HermitianMatrix, t: float) -> Frame:
    """Gram-Schmidt retraction of the Euclidean step frame + t X frame.

    The embedded curve t -> embed(retraction_frame(frame, X, t)) has exact
    velocity X at t=0 for tangent X (the span of the perturbed columns has
    derivative (I-A) X A + A X (I-A) = X).
    """
    stepped = frame.columns + t * np.einsum(
        "abp,bjq,pqm->ajm", direction.entries, frame.columns, _MUL
    )
    return orthonormalize(frame.field, stepped)


def directional_derivative(
    param: HermitianMatrix, frame: Frame, direction: HermitianMatrix, h: float = 1e-4
) -> float:
    """Central-difference derivative of f = <embed(.), param> along a tangent."""
    plus = embed(retraction_frame(frame, direction, h)).matrix
    minus = embed(retraction_frame(frame, direction, -h)).matrix
    return (hermitian_inner(plus, param) - hermitian_inner(minus, param)) / (2.0 * h)


def _check_h(h: float) -> None:
    if not FD_H_MIN <= h <= FD_H_MAX:
        raise ContractViolationError(
            f"finite-difference step h={h!r} outside [{FD_H_MIN}, {FD_H_MAX}]"
        )


def _curve_labels(full_frame: FullFrame):
    for i in range(full_frame.n):
        for alpha in range(full_frame.n, full_frame.N):
            for unit in range(full_frame.field.c):
                yield i, alpha, unit


def _second_difference_sum(full_frame: FullFrame, h: float, accumulate):
    """Sum over tangent directions of (E(h) + E(-h) - 2 E(0))/h^2, halved.

    accumulate(frame) evaluates the quantity of interest; the 1/2 converts
    the rotation-parameter derivative (speed sqrt(2) in the induced metric)
    to the unit-speed one.  Directions are summed in label order.
    """
    base_frame = full_frame.point_frame()
    base_val = accumulate(base_frame)
    total = None
    for i, alpha, unit in _curve_labels(full_frame):
        curve = GeodesicCurve(full_frame, i, alpha, Scalar.unit(unit))
        plus = accumulate(geodesic_point(curve, h))
        minus = accumulate(geodesic_point(curve, -h))
        term = 0.5 * (plus + minus - 2.0 * base_val) / (h * h)
        total = term if total is None else total + term
    if total is None:
        total = 0.0 * base_val
    return total


def mean_curvature_closed_form(full_frame: FullFrame) -> HermitianMatrix:
    """H = -(1/n) A + (1/(N-n)) (I - A), the mean curvature of the embedding."""
    n, N = full_frame.n, full_frame.N
    if n == 0 or n == N:
        raise ContractViolationError(
            f"mean curvature undefined on the single-point manifold n={n}, N={N}"
        )
    A = full_frame.base_point().matrix
    eye = HermitianMatrix.identity(full_frame.field, N)
    return (-1.0 / n) * A + (1.0 / (N - n)) * (eye - A)


def mean_curvature_numeric(
    full_frame: FullFrame, h: float, richardson: bool = False
) -> HermitianMatrix:
    """Second-difference estimate of H over the geodesic tangent directions.

    Averages the per-direction acceleration of the embedding with weight
    1/(c n (N-n)); matches the closed form to O(h^2), or O(h^4) with the
    Richardson flag.
    """
    _check_h(h)
    n, N = full_frame.n, full_frame.N
    if n == 0 or n == N:
        raise ContractViolationError(
            f"mean curvature undefined on the single-point manifold n={n}, N={N}"
        )
    m = full_frame.field.c * n * (N - n)

    def estimate(step: float) -> np.ndarray:
        return _second_difference_sum(
            full_frame, step, lambda fr: embed(fr).matrix.entries
        ) / m

    comps = estimate(h)
    if richardson:
        comps = (4.0 * comps - estimate(2.0 * h)) / 3.0
    return HermitianMatrix(full_frame.field, comps)


def minimality_residual(
    full_frame: FullFrame, curvature: HermitianMatrix | None = None
) -> float:
    """Norm of H minus its projection onto span{A, I}; zero iff minimal in
    the sphere slice cut out by |A| = sqrt(n) and tr A = n."""
    n, N = full_frame.n, full_frame.N
    H = curvature if curvature is not None else mean_curvature_closed_form(full_frame)
    A = full_frame.base_point().matrix
    eye = HermitianMatrix.identity(full_frame.field, N)
    # A and I - A are orthogonal with norms sqrt(n), sqrt(N-n)
    comp = eye - A
    proj = (hermitian_inner(H, A) / n) * A + (
        hermitian_inner(H, comp) / (N - n)
    ) * comp
    return (H - proj).norm()


def sphere_slice_radius(n: int, N: int) -> float:
    """Radius sqrt(n(N-n)/N) of the sphere slice containing G_F(n, N)."""
    if not 0 <= n <= N or N < 1:
        raise ContractViolationError(f"invalid n={n}, N={N}")
    return float(np.sqrt(n * (N - n) / N))


def laplacian_numeric(
    height_param: HermitianMatrix,
    full_frame: FullFrame,
    h: float,
    richardson: bool = False,
) -> float:
    """Laplace-Beltrami operator applied to f = <embed(.), param>.

    Sums unit-speed second derivatives over the orthonormalized tangent
    directions.  For a parameter with <param, I> = 0 the result is
    -cN f(pi); the nonnegative Hodge Laplacian is the negative of this.
    """
    _check_h(h)
    if (
        height_param.field is not full_frame.field
        or height_param.N != full_frame.N
    ):
        raise ContractViolationError("height parameter incompatible with frame")

    def estimate(step: float) -> float:
        return float(
            _second_difference_sum(
                full_frame,
                step,
                lambda fr: _re_tr(embed(fr).matrix.entries, height_param.entries),
            )
        )

    value = estimate(h)
    if richardson:
        value = (4.0 * value - estimate(2.0 * h)) / 3.0
    return value
