"""Height functions on G_F(n, N), gradient flow and Morse-Bott indices.

A Hermitian parameter P induces f_P(A) = <A, P>.  For P = E11 the
critical set splits into the sub-Grassmannian f^{-1}(0) and the
pencil f^{-1}(1); for P = E12 (value range [-1, 1]) there are four
critical classes.  The gradient is computed two ways, as the tangent
basis sum (1/2) sum <xi, P> xi and as the closed form
A P (I-A) + (I-A) P A; they agree and the flow iterates the latter.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .algebra import (
    ContractViolationError,
    Field,
    HermitianMatrix,
    InconsistencyError,
    Scalar,
    hermitian_inner,
    mat_mul,
    mat_vec,
    outer,
    quat_conj,
    quat_mul,
    vec_inner,
    _MUL,
)
from .geometry import (
    FullFrame,
    GeodesicCurve,
    TangentVector,
    _check_h,
    complete_frame,
    geodesic_point,
    retraction_frame,
    tangent_basis,
)
from .grassmann import Frame, ProjectionPoint, embed, orthonormalize, random_point

__all__ = [
    "HeightParam",
    "CriticalClass",
    "FlowReport",
    "IndexResult",
    "ClassificationError",
    "UndefinedTrajectoryError",
    "UnstableIndexWarning",
    "height",
    "gradient_matrix",
    "riemannian_gradient",
    "flow",
    "classify_critical",
    "hessian_form",
    "morse_index",
    "morse_index_from_eigenvalues",
    "TrajectoryCurve",
    "trajectory_gamma",
    "first_axis_canonical",
    "e12_criticality_residual",
    "sample_critical_point",
    "critical_submanifold_shape",
    "theorem_index_nullity",
    "class_param_name",
]

# Gradient norm below which a point is accepted as critical for Hessian work.
GRAD_CRITICAL_TOL = 1e-8
DEFAULT_CLASSIFY_TOL = 1e-6


class ClassificationError(InconsistencyError):
    """Gradient is small but no critical-class membership predicate holds."""


class UndefinedTrajectoryError(ContractViolationError):
    """Trajectory through a critical point of f is not defined."""


class UnstableIndexWarning(RuntimeWarning):
    """Some Hessian eigenvalue sits within 10% of the zero threshold."""


class HeightParam:
    """Hermitian parameter P of the height function f_P(A) = <A, P>.

    name tags the two distinguished parameters: "E11" (single diagonal
    unit) and "E12" (symmetric off-diagonal unit), which have classified
    critical sets.  Arbitrary Hermitian parameters carry name=None.
    """

    __slots__ = ("matrix", "name")

    def __init__(self, matrix: HermitianMatrix, name: str | None = None):
        self.matrix = matrix
        self.name = name

    @classmethod
    def e11(cls, field: Field, N: int) -> "HeightParam":
        if N < 1:
            raise ContractViolationError("E11 needs N >= 1")
        return cls(HermitianMatrix.basis_unit(field, N, 0, 0), name="E11")

    @classmethod
    def e12(cls, field: Field, N: int) -> "HeightParam":
        if N < 2:
            raise ContractViolationError("E12 needs N >= 2")
        return cls(HermitianMatrix.basis_unit(field, N, 0, 1), name="E12")

    @classmethod
    def from_matrix(cls, matrix: HermitianMatrix, name: str | None = None):
        return cls(matrix, name=name)

    @property
    def field(self) -> Field:
        return self.matrix.field

    @property
    def N(self) -> int:
        return self.matrix.N

    def __repr__(self) -> str:
        tag = self.name if self.name is not None else "custom"
        return f"HeightParam({tag}, field={self.field.value}, N={self.N})"


class CriticalClass(Enum):
    F_SUB = "F_SUB"
    F_CONTAINS = "F_CONTAINS"
    G_ZERO_SUB = "G_ZERO_SUB"
    G_ZERO_CONTAINS = "G_ZERO_CONTAINS"
    G_MINUS = "G_MINUS"
    G_PLUS = "G_PLUS"
    NOT_CRITICAL = "NOT_CRITICAL"


# Which named parameter each critical class belongs to.
_CLASS_PARAM = {
    CriticalClass.F_SUB: "E11",
    CriticalClass.F_CONTAINS: "E11",
    CriticalClass.G_ZERO_SUB: "E12",
    CriticalClass.G_ZERO_CONTAINS: "E12",
    CriticalClass.G_MINUS: "E12",
    CriticalClass.G_PLUS: "E12",
}


def class_param_name(cls: CriticalClass) -> str:
    if cls not in _CLASS_PARAM:
        raise ContractViolationError(f"{cls} has no associated height parameter")
    return _CLASS_PARAM[cls]


def height(P: HeightParam, A: ProjectionPoint) -> float:
    """f_P(A) = <A, P>; in [0,1] for P=E11 and in [-1,1] for P=E12."""
    if P.field is not A.field or P.N != A.N:
        raise ContractViolationError("height parameter incompatible with point")
    return hermitian_inner(A.matrix, P.matrix)


def gradient_matrix(P: HeightParam, A: ProjectionPoint) -> HermitianMatrix:
    """Closed form of the Riemannian gradient: A P (I - A) + (I - A) P A."""
    if P.field is not A.field or P.N != A.N:
        raise ContractViolationError("height parameter incompatible with point")
    a = A.matrix.entries
    p = P.matrix.entries
    ap = mat_mul(a, p)
    pa = mat_mul(p, a)
    comps = ap + pa - mat_mul(a, pa) - mat_mul(ap, a)
    return HermitianMatrix(A.field, comps)


def riemannian_gradient(P: HeightParam, full_frame: FullFrame) -> TangentVector:
    """Gradient as the tangent-basis sum (1/2) sum_tau <xi_tau, P> xi_tau.

    Equals gradient_matrix at the same point; kept as the independent
    basis-expansion form.  The 1/2 is the inverse Gram factor of the
    norm-sqrt(2) basis.
    """
    if P.field is not full_frame.field or P.N != full_frame.N:
        raise ContractViolationError("height parameter incompatible with frame")
    base = full_frame.base_point()
    comps = np.zeros((full_frame.N, full_frame.N, 4))
    for vec in tangent_basis(full_frame):
        comps += 0.5 * hermitian_inner(vec.matrix, P.matrix) * vec.matrix.entries
    return TangentVector(base, HermitianMatrix(full_frame.field, comps))


@dataclass
class FlowReport:
    """Outcome of one gradient-flow run."""

    start: ProjectionPoint
    end: ProjectionPoint
    iters: int
    converged: bool
    f_final: float
    grad_norm: float
    critical_class: CriticalClass | None = None
    index: int | None = None
    nullity: int | None = None
    f_history: list = dataclass_field(default_factory=list)
    grad_history: list = dataclass_field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "start": self.start.to_json_dict(),
            "end": self.end.to_json_dict(),
            "iters": self.iters,
            "f_final": self.f_final,
            "grad_norm": self.grad_norm,
            "class": None if self.critical_class is None else self.critical_class.value,
            "index": self.index,
            "nullity": self.nullity,
        }


def flow(
    P: HeightParam,
    start: Frame,
    step: float = 0.05,
    stop_tol: float = 1e-8,
    max_iter: int = 10000,
    direction: str = "descent",
    classify_tol: float = DEFAULT_CLASSIFY_TOL,
    compute_index: bool = True,
    index_h: float = 1e-3,
    record_history: bool = True,
) -> FlowReport:
    """Gradient flow by Euclidean tangent steps with Gram-Schmidt retraction.

    Each iteration moves every frame column by +/- step * X e_i for the
    gradient matrix X and re-orthonormalizes, which keeps the iterate on
    the manifold exactly.  Stops when the gradient norm reaches stop_tol;
    exhaustion of max_iter is reported via converged=False, not raised.
    When the endpoint classifies into a critical class of a named
    parameter, the Morse-Bott index and nullity at the limit are measured
    from the numerical Hessian (compute_index=False skips that).
    """
    if not 0.0 < step <= 0.5:
        raise ContractViolationError(f"step {step!r} outside (0, 0.5]")
    if stop_tol <= 0.0:
        raise ContractViolationError("stop_tol must be positive")
    if max_iter < 0:
        raise ContractViolationError("max_iter must be nonnegative")
    if direction not in ("ascent", "descent"):
        raise ContractViolationError(f"unknown direction {direction!r}")
    sign = 1.0 if direction == "ascent" else -1.0

    start_point = embed(start)
    cols = start.columns.copy()
    f_hist: list[float] = []
    g_hist: list[float] = []
    converged = False
    iters = 0
    current = start_point
    grad_norm = np.inf
    while True:
        X = gradient_matrix(P, current)
        grad_norm = X.norm()
        if record_history:
            f_hist.append(height(P, current))
            g_hist.append(grad_norm)
        if grad_norm <= stop_tol:
            converged = True
            break
        if iters >= max_iter:
            break
        stepped = cols + sign * step * np.einsum(
            "abp,bjq,pqm->ajm", X.entries, cols, _MUL
        )
        cols = orthonormalize(P.field, stepped).columns
        current = embed(Frame(P.field, cols))
        iters += 1

    report = FlowReport(
        start=start_point,
        end=current,
        iters=iters,
        converged=converged,
        f_final=height(P, current),
        grad_norm=grad_norm,
        f_history=f_hist,
        grad_history=g_hist,
    )
    if converged and P.name in ("E11", "E12"):
        try:
            report.critical_class = classify_critical(P, current, tol=classify_tol)
        except ClassificationError:
            report.critical_class = None
        ok_for_hessian = (
            report.critical_class is not None
            and report.critical_class is not CriticalClass.NOT_CRITICAL
            and grad_norm <= GRAD_CRITICAL_TOL
        )
        if compute_index and ok_for_hessian:
            full = complete_frame(Frame(P.field, cols))
            result = morse_index(P, full, h=index_h)
            report.index = result.index
            report.nullity = result.nullity
    return report


def _std_vector(N: int, a: int) -> np.ndarray:
    v = np.zeros((N, 4))
    v[a, 0] = 1.0
    return v


def classify_critical(
    P: HeightParam, A: ProjectionPoint, tol: float = DEFAULT_CLASSIFY_TOL
) -> CriticalClass:
    """Match a point against the critical classes of P in {E11, E12}.

    A gradient norm above tol short-circuits to NOT_CRITICAL.  Otherwise
    the class is decided by the height value together with membership of
    the distinguished vectors in range(A); a small gradient with no
    matching predicate raises ClassificationError.
    """
    if P.name not in ("E11", "E12"):
        raise ContractViolationError("classification needs the E11 or E12 parameter")
    if tol <= 0.0:
        raise ContractViolationError("tol must be positive")
    N = A.N
    grad_norm = gradient_matrix(P, A).norm()
    if grad_norm > tol:
        return CriticalClass.NOT_CRITICAL
    value = height(P, A)

    def in_range(v: np.ndarray) -> bool:
        return float(np.sqrt(np.sum((mat_vec(A.matrix.entries, v) - v) ** 2))) <= tol

    def orth_to_range(v: np.ndarray) -> bool:
        return float(np.sqrt(np.sum(mat_vec(A.matrix.entries, v) ** 2))) <= tol

    e1 = _std_vector(N, 0)
    if P.name == "E11":
        if abs(value) <= tol and orth_to_range(e1):
            return CriticalClass.F_SUB
        if abs(value - 1.0) <= tol and in_range(e1):
            return CriticalClass.F_CONTAINS
        raise ClassificationError(
            f"gradient {grad_norm:.3e} below tol but f={value!r} matches no E11 class"
        )
    e2 = _std_vector(N, 1)
    v_plus = (e1 + e2) / np.sqrt(2.0)
    v_minus = (e1 - e2) / np.sqrt(2.0)
    if abs(value) <= tol:
        if orth_to_range(e1) and orth_to_range(e2):
            return CriticalClass.G_ZERO_SUB
        if in_range(e1) and in_range(e2):
            return CriticalClass.G_ZERO_CONTAINS
    elif abs(value - 1.0) <= tol:
        if in_range(v_plus) and orth_to_range(v_minus):
            return CriticalClass.G_PLUS
    elif abs(value + 1.0) <= tol:
        if in_range(v_minus) and orth_to_range(v_plus):
            return CriticalClass.G_MINUS
    raise ClassificationError(
        f"gradient {grad_norm:.3e} below tol but g={value!r} matches no E12 class"
    )


def _richardson_secdiff(evaluate, base_value: float, h: float) -> float:
    """Fourth-order second derivative at 0 from values at +-h and +-2h."""

    def secdiff(step: float) -> float:
        return (evaluate(step) + evaluate(-step) - 2.0 * base_value) / (step * step)

    return (4.0 * secdiff(h) - secdiff(2.0 * h)) / 3.0


def hessian_form(P: HeightParam, full_frame: FullFrame, h: float = 1e-3) -> np.ndarray:
    """Hessian of f_P at a critical point, in the orthonormalized tangent basis.

    Diagonal entries are second differences of f along the rotation
    geodesics (halved, converting to unit speed); off-diagonal entries
    polarize second differences along retraction curves with velocity
    (xi_sigma + xi_tau)/sqrt(2).  At a critical point the second
    derivative along any curve depends only on the velocity, so the mix
    of curve families is consistent.  All entries are Richardson
    extrapolated, leaving eigenvalue noise far below the zero threshold.
    """
    _check_h(h)
    if P.field is not full_frame.field or P.N != full_frame.N:
        raise ContractViolationError("height parameter incompatible with frame")
    base = full_frame.base_point()
    grad_norm = gradient_matrix(P, base).norm()
    if grad_norm > GRAD_CRITICAL_TOL:
        raise ContractViolationError(
            f"Hessian needs a critical base point; gradient norm {grad_norm:.3e}"
        )
    basis = tangent_basis(full_frame)
    m = len(basis)
    base_frame = full_frame.point_frame()
    f0 = height(P, base)
    hess = np.zeros((m, m))

    def f_at(frame: Frame) -> float:
        return height(P, embed(frame))

    for t_idx, vec in enumerate(basis):
        i, alpha, unit = vec.label
        curve = GeodesicCurve(full_frame, i, alpha, Scalar.unit(unit))
        hess[t_idx, t_idx] = 0.5 * _richardson_secdiff(
            lambda s, c=curve: f_at(geodesic_point(c, s)), f0, h
        )
    for s_idx in range(m):
        for t_idx in range(s_idx + 1, m):
            w = HermitianMatrix(
                full_frame.field,
                (basis[s_idx].matrix.entries + basis[t_idx].matrix.entries)
                / np.sqrt(2.0),
            )
            q_pair = _richardson_secdiff(
                lambda s, d=w: f_at(retraction_frame(base_frame, d, s)), f0, h
            )
            value = 0.5 * (q_pair - hess[s_idx, s_idx] - hess[t_idx, t_idx])
            hess[s_idx, t_idx] = value
            hess[t_idx, s_idx] = value
    return hess


class IndexResult(NamedTuple):
    index: int
    nullity: int


def morse_index_from_eigenvalues(
    eigenvalues: np.ndarray, zero_threshold: float | None = None
) -> IndexResult:
    """Count eigenvalues below -threshold (index) and within it (nullity).

    The default threshold is 1e-6 of the largest magnitude (floor 1e-12);
    any eigenvalue landing within 10% of the threshold triggers
    UnstableIndexWarning since the counts may then flip with h.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    scale = float(np.abs(eigenvalues).max(initial=0.0))
    if zero_threshold is None:
        zero_threshold = max(1e-6 * scale, 1e-12)
    if zero_threshold <= 0.0:
        raise ContractViolationError("zero_threshold must be positive")
    gaps = np.abs(np.abs(eigenvalues) - zero_threshold)
    if eigenvalues.size and float(gaps.min()) <= 0.1 * zero_threshold:
        warnings.warn(
            f"eigenvalue within 10% of zero threshold {zero_threshold:.3e}; "
            "index/nullity may be unstable",
            UnstableIndexWarning,
            stacklevel=2,
        )
    index = int(np.sum(eigenvalues < -zero_threshold))
    nullity = int(np.sum(np.abs(eigenvalues) <= zero_threshold))
    return IndexResult(index, nullity)


def morse_index(
    P: HeightParam,
    full_frame: FullFrame,
    h: float = 1e-3,
    zero_threshold: float | None = None,
) -> IndexResult:
    """Morse-Bott index and nullity of f_P at a critical point."""
    eigs = np.linalg.eigvalsh(hessian_form(P, full_frame, h))
    return morse_index_from_eigenvalues(eigs, zero_threshold)


def first_axis_canonical(frame: Frame, tol: float = 1e-12) -> Frame:
    """Rotate a frame of the same span so x_11 = sqrt(f) >= 0 and x_i1 = 0.

    The first column becomes the normalized projection of the first
    standard vector onto the span; if that projection is null (f ~ 0)
    every column already has zero first coordinate and the frame is
    returned unchanged.
    """
    cols = frame.columns
    f_val = float(np.sum(cols[0] ** 2))
    if f_val <= tol:
        return frame
    # v = A e~1 expressed in the frame: sum_j e_j conj(x_j1)
    v = np.einsum("ajp,jq,pqm->am", cols, quat_conj(cols[0]), _MUL)
    out = np.zeros_like(cols)
    out[:, 0, :] = v / np.sqrt(f_val)
    count = 1
    for j in range(frame.n):
        if count == frame.n:
            break
        w = cols[:, j, :].copy()
        for k in range(count):
            w -= quat_mul(out[:, k, :], vec_inner(w, out[:, k, :]))
        nrm = float(np.sqrt(np.sum(w * w)))
        if nrm >= 1e-8:
            out[:, count, :] = w / nrm
            count += 1
    if count != frame.n:
        raise InconsistencyError("canonicalization lost rank")
    return Frame(frame.field, out)


def e12_criticality_residual(frame: Frame) -> float:
    """Largest residual of the E12 critical equations at a point.

    In the canonical frame (x_11 real, x_i1 = 0 for i > 1, completion
    appended) the gradient of g vanishes iff
    x_alpha1 conj(x_i2) + x_alpha2 conj(x_i1) = 0 for every row pair;
    returns the max quaternion norm over (i, alpha).
    """
    canonical = first_axis_canonical(frame)
    full = complete_frame(canonical)
    cols = full.columns
    n, N = full.n, full.N
    worst = 0.0
    for i in range(n):
        for alpha in range(n, N):
            res = quat_mul(cols[0, alpha], quat_conj(cols[1, i])) + quat_mul(
                cols[1, alpha], quat_conj(cols[0, i])
            )
            worst = max(worst, float(np.sqrt(np.sum(res * res))))
    return worst


class TrajectoryCurve:
    """Gradient-flow trajectory of f = f_E11 through a non-critical point.

    gamma(t) has first column cos(t) e~1 + sin(t) x for a unit vector x
    orthogonal to e~1, and fixed remaining columns orthogonal to both,
    so f(gamma(t)) = cos^2 t exactly; gamma(0) lies in f^{-1}(1) and
    gamma(pi/2) in f^{-1}(0).  The seed point sits at t0 = arccos sqrt(f).
    """

    __slots__ = ("field", "N", "n", "x_unit", "rest", "t0")

    def __init__(self, field: Field, x_unit: np.ndarray, rest: np.ndarray, t0: float):
        self.field = field
        self.N = x_unit.shape[0]
        self.n = rest.shape[1] + 1
        self.x_unit = x_unit
        self.rest = rest
        self.t0 = float(t0)

    @classmethod
    def from_frame(cls, frame: Frame, tol: float = 1e-10) -> "TrajectoryCurve":
        f_val = float(np.sum(frame.columns[0] ** 2))
        if f_val <= tol or f_val >= 1.0 - tol:
            raise UndefinedTrajectoryError(
                f"trajectory undefined at a critical point (f={f_val!r})"
            )
        canonical = first_axis_canonical(frame)
        e1 = canonical.columns[:, 0, :]
        root_f = np.sqrt(f_val)
        x_unit = (e1 - root_f * _std_vector(frame.N, 0)) / np.sqrt(1.0 - f_val)
        t0 = float(np.arccos(min(root_f, 1.0)))
        return cls(frame.field, x_unit, canonical.columns[:, 1:, :], t0)

    def point(self, t: float) -> Frame:
        cols = np.zeros((self.N, self.n, 4))
        cols[:, 0, :] = np.cos(t) * _std_vector(self.N, 0) + np.sin(t) * self.x_unit
        cols[:, 1:, :] = self.rest
        return Frame(self.field, cols)

    def velocity(self, t: float) -> TangentVector:
        """d/dt of the embedded trajectory; norm sqrt(2) at every t."""
        frame = self.point(t)
        e1 = frame.columns[:, 0, :]
        de1 = -np.sin(t) * _std_vector(self.N, 0) + np.cos(t) * self.x_unit
        comps = outer(de1, e1) + outer(e1, de1)
        return TangentVector(embed(frame), HermitianMatrix(self.field, comps))


def trajectory_gamma(frame, t: float) -> Frame:
    """Frame of the f_E11 trajectory through the given point, at parameter t."""
    if isinstance(frame, FullFrame):
        frame = frame.point_frame()
    return TrajectoryCurve.from_frame(frame).point(t)


def critical_submanifold_shape(cls: CriticalClass, n: int, N: int) -> tuple[int, int]:
    """(k, M) with the critical submanifold of the class a copy of G(k, M)."""
    shapes = {
        CriticalClass.F_SUB: (n, N - 1),
        CriticalClass.F_CONTAINS: (n - 1, N - 1),
        CriticalClass.G_ZERO_SUB: (n, N - 2),
        CriticalClass.G_ZERO_CONTAINS: (n - 2, N - 2),
        CriticalClass.G_MINUS: (n - 1, N - 2),
        CriticalClass.G_PLUS: (n - 1, N - 2),
    }
    if cls not in shapes:
        raise ContractViolationError(f"{cls} is not a critical class")
    k, M = shapes[cls]
    if not 0 <= k <= M:
        raise ContractViolationError(
            f"{cls.value} is empty on G(n={n}, N={N})"
        )
    return k, M


def theorem_index_nullity(
    cls: CriticalClass, field: Field, n: int, N: int
) -> IndexResult:
    """Predicted Morse-Bott index and nullity of the class on G_F(n, N)."""
    k, M = critical_submanifold_shape(cls, n, N)
    c = field.c
    indices = {
        CriticalClass.F_SUB: 0,
        CriticalClass.F_CONTAINS: c * (N - n),
        CriticalClass.G_ZERO_SUB: c * n,
        CriticalClass.G_ZERO_CONTAINS: c * (N - n),
        CriticalClass.G_MINUS: 0,
        CriticalClass.G_PLUS: c * (N - 1),
    }
    return IndexResult(indices[cls], c * k * (M - k))


def sample_critical_point(
    cls: CriticalClass, field: Field, n: int, N: int, seed: int = 0
) -> Frame:
    """Random frame of a point in the given critical submanifold.

    The distinguished columns (e~1, e~2 or their normalized sum and
    difference) are placed first; the remaining columns are a random
    point of the sub-Grassmannian supported on the remaining rows.
    """
    k, M = critical_submanifold_shape(cls, n, N)
    param = class_param_name(cls)
    if param == "E12" and (n < 2 or N - n < 2):
        raise ContractViolationError(
            f"E12 classes need n >= 2 and N-n >= 2, got n={n}, N={N}"
        )
    offset = N - M
    fixed: list[np.ndarray] = []
    if cls is CriticalClass.F_CONTAINS:
        fixed = [_std_vector(N, 0)]
    elif cls is CriticalClass.G_ZERO_CONTAINS:
        fixed = [_std_vector(N, 0), _std_vector(N, 1)]
    elif cls is CriticalClass.G_PLUS:
        fixed = [(_std_vector(N, 0) + _std_vector(N, 1)) / np.sqrt(2.0)]
    elif cls is CriticalClass.G_MINUS:
        fixed = [(_std_vector(N, 0) - _std_vector(N, 1)) / np.sqrt(2.0)]
    sub = random_point(field, k, M, seed)
    cols = np.zeros((N, n, 4))
    for j, v in enumerate(fixed):
        cols[:, j, :] = v
    cols[offset:, len(fixed) :, :] = sub.columns
    return Frame(field, cols)
