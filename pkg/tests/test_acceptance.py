"""End-to-end acceptance gates for the toolkit.

Each test exercises one numbered acceptance criterion at its stated
tolerance and prints a single "criterion <k> <name>: PASS|FAIL" line;
run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import functools
import json
import math
import shutil
import subprocess
import sys
import time

import numpy as np

from grasstop import (
    CriticalClass,
    Field,
    HeightParam,
    HermitianMatrix,
    IntPolynomial,
    TrajectoryCurve,
    check_poincare_identity,
    classify_critical,
    complete_frame,
    embed,
    flow,
    height,
    hermitian_inner,
    involution,
    lemma21_basis,
    mean_curvature_closed_form,
    mean_curvature_numeric,
    laplacian_numeric,
    minimality_residual,
    morse_index,
    poincare_recursive_f,
    poincare_recursive_g,
    random_hermitian,
    random_point,
    real_determinant,
    sample_critical_point,
    schubert_oracle,
    sphere_slice_radius,
    tangent_basis,
    theorem_index_nullity,
)
from grasstop.algebra import conj_transpose

FIELDS = (Field.R, Field.C, Field.H)


def criterion(number, name):
    """Wrap a test so it reports one PASS/FAIL line for its criterion."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"criterion {number} {name}: FAIL")
                raise
            print(f"criterion {number} {name}: PASS")

        return wrapper

    return decorate


@criterion(1, "embedding_invariants")
def test_criterion_1_embedding_invariants():
    started = time.perf_counter()
    for fi, field in enumerate(FIELDS):
        rng = np.random.default_rng(11 + fi)
        for s in range(100):
            N = int(rng.integers(1, 9))
            n = int(rng.integers(0, N + 1))
            A = embed(random_point(field, n, N, seed=1000 * fi + s)).matrix
            idem = float(np.abs(A.square().entries - A.entries).max())
            herm = float(np.abs(conj_transpose(A.entries) - A.entries).max())
            trace = abs(A.trace() - n)
            norm = abs(hermitian_inner(A, A) - n)
            worst = max(idem, herm, trace, norm)
            assert worst <= 1e-10, (
                f"{field.value} n={n} N={N} seed={s}: invariant gap {worst:.3e}"
            )
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"300 embeddings took {elapsed:.2f}s"


@criterion(2, "orthogonal_bases")
def test_criterion_2_orthogonal_bases():
    for field in FIELDS:
        for N in (3, 5):
            basis = lemma21_basis(field, N)
            expected = np.array([1.0] * N + [2.0] * (len(basis) - N))
            for i, u in enumerate(basis):
                for j, v in enumerate(basis):
                    want = expected[i] if i == j else 0.0
                    gap = abs(hermitian_inner(u, v) - want)
                    assert gap <= 1e-12, (
                        f"{field.value} N={N} ambient Gram[{i},{j}] off by {gap:.3e}"
                    )
    for field, n, N in [
        (Field.R, 1, 2),
        (Field.R, 2, 4),
        (Field.C, 1, 3),
        (Field.C, 2, 4),
        (Field.H, 1, 3),
        (Field.H, 2, 4),
    ]:
        ff = complete_frame(random_point(field, n, N, seed=2))
        vecs = tangent_basis(ff)
        assert len(vecs) == field.c * n * (N - n)
        gram = np.array(
            [[hermitian_inner(u.matrix, v.matrix) for v in vecs] for u in vecs]
        )
        gap = float(np.abs(gram - 2.0 * np.eye(len(vecs))).max())
        assert gap <= 1e-10, f"{field.value} ({n},{N}) tangent Gram gap {gap:.3e}"


@criterion(3, "minimality")
def test_criterion_3_minimality():
    steps = (1e-3, 2e-3)
    worst_gap = {h: 0.0 for h in steps}
    for s in range(50):
        field = FIELDS[s % 3]
        rng = np.random.default_rng(100 + s)
        N = int(rng.integers(2, 9))
        n = int(rng.integers(1, N))
        ff = complete_frame(random_point(field, n, N, seed=s))
        res = minimality_residual(ff)
        assert res <= 1e-10, (
            f"{field.value} n={n} N={N} seed={s}: minimality residual {res:.3e}"
        )
        closed = mean_curvature_closed_form(ff)
        for h in steps:
            num = mean_curvature_numeric(ff, h)
            gap = float(np.abs(num.entries - closed.entries).max())
            assert gap <= 10.0 * h * h, (
                f"{field.value} n={n} N={N} h={h}: curvature gap {gap:.3e}"
            )
            worst_gap[h] = max(worst_gap[h], gap)
    ratio = worst_gap[2e-3] / worst_gap[1e-3]
    assert 3.5 <= ratio <= 4.5, f"convergence ratio {ratio:.3f} not ~4"
    for N in range(1, 9):
        for n in range(0, N + 1):
            assert sphere_slice_radius(n, N) == math.sqrt(n * (N - n) / N)


@criterion(4, "laplacian_eigenfunction")
def test_criterion_4_laplacian_eigenfunction():
    n, N = 2, 5
    eye = HermitianMatrix.identity
    for field in FIELDS:
        started = time.perf_counter()
        for k in range(20):
            raw = random_hermitian(field, N, seed=300 + k)
            P = raw - (raw.trace() / N) * eye(field, N)
            ff = complete_frame(random_point(field, n, N, seed=400 + k))
            f_val = hermitian_inner(ff.base_point().matrix, P)
            lap = laplacian_numeric(P, ff, 1e-3)
            residual = abs(lap + field.c * N * f_val) / max(abs(f_val), 0.1)
            assert residual <= 1e-3, (
                f"{field.value} param {k}: eigenfunction residual {residual:.3e}"
            )
        elapsed = time.perf_counter() - started
        if field is Field.H:
            assert elapsed < 30.0, f"H (2,5) sweep took {elapsed:.2f}s"


@criterion(5, "index_nullity")
def test_criterion_5_index_nullity():
    shapes = [
        (Field.C, 1, 3),
        (Field.C, 2, 4),
        (Field.C, 2, 5),
        (Field.H, 1, 3),
        (Field.H, 2, 4),
    ]
    e11_classes = (CriticalClass.F_SUB, CriticalClass.F_CONTAINS)
    e12_classes = (
        CriticalClass.G_ZERO_SUB,
        CriticalClass.G_ZERO_CONTAINS,
        CriticalClass.G_MINUS,
        CriticalClass.G_PLUS,
    )
    for field, n, N in shapes:
        cases = [(HeightParam.e11(field, N), cls) for cls in e11_classes]
        if n >= 2 and N - n >= 2:
            cases += [(HeightParam.e12(field, N), cls) for cls in e12_classes]
        for P, cls in cases:
            frame = sample_critical_point(cls, field, n, N, seed=17)
            assert classify_critical(P, embed(frame)) is cls
            measured = morse_index(P, complete_frame(frame))
            predicted = theorem_index_nullity(cls, field, n, N)
            assert measured == predicted, (
                f"{field.value} ({n},{N}) {cls.value}: "
                f"measured {tuple(measured)} != predicted {tuple(predicted)}"
            )


@criterion(6, "flow_trajectories")
def test_criterion_6_flow_trajectories():
    for field, seed in [(Field.C, 5), (Field.H, 7)]:
        curve = TrajectoryCurve.from_frame(random_point(field, 2, 4, seed))
        P = HeightParam.e11(field, 4)
        for t in np.linspace(0.0, np.pi, 100):
            f_val = height(P, embed(curve.point(t)))
            assert abs(f_val - math.cos(t) ** 2) <= 1e-12

    curve = TrajectoryCurve.from_frame(random_point(Field.C, 2, 4, seed=9))
    P = HeightParam.e11(Field.C, 4)
    report = flow(
        P, curve.point(0.3), compute_index=False, record_history=False
    )
    target = embed(curve.point(math.pi / 2.0))
    assert report.converged
    dist = report.end.distance(target)
    assert dist <= 1e-6, f"descent endpoint misses trajectory bottom by {dist:.3e}"

    shapes = [(Field.C, 1, 3), (Field.C, 2, 4), (Field.H, 1, 3), (Field.H, 2, 4)]
    hits_down = hits_up = 0
    for s in range(200):
        field, n, N = shapes[s % 4]
        start = random_point(field, n, N, seed=s)
        P = HeightParam.e11(field, N)
        down = flow(P, start, compute_index=False, record_history=False)
        up = flow(
            P, start, direction="ascent", compute_index=False, record_history=False
        )
        hits_down += down.critical_class is CriticalClass.F_SUB
        hits_up += up.critical_class is CriticalClass.F_CONTAINS
    assert hits_down == 200, f"descent reached F_SUB in {hits_down}/200 runs"
    assert hits_up == 200, f"ascent reached F_CONTAINS in {hits_up}/200 runs"


@criterion(7, "poincare_polynomials")
def test_criterion_7_poincare_polynomials():
    started = time.perf_counter()
    for field in (Field.C, Field.H):
        for N in range(0, 11):
            for n in range(0, N + 1):
                poly = poincare_recursive_f(field, n, N)
                assert poly == schubert_oracle(field, n, N)
                if n >= 2 and N - n >= 2:
                    assert poly == poincare_recursive_g(field, n, N)
                assert poly.evaluate(1) == math.comb(N, n)
                assert poly.is_palindromic()
                if 1 <= n <= N - 1:
                    assert check_poincare_identity(field, n, N)

    known = {
        (Field.C, 2, 4): [1, 0, 1, 0, 2, 0, 1, 0, 1],
        (Field.C, 2, 5): [1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 1],
        (Field.C, 2, 7): [
            1, 0, 1, 0, 2, 0, 2, 0, 3, 0, 3, 0, 3, 0, 2, 0, 2, 0, 1, 0, 1,
        ],
        (Field.H, 2, 4): [1, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 1],
    }
    for (field, n, N), coeffs in known.items():
        assert poincare_recursive_f(field, n, N) == IntPolynomial(coeffs)
    for N in range(2, 11):
        line = [0] * (2 * N - 1)
        line[::2] = [1] * N
        assert poincare_recursive_f(Field.C, 1, N) == IntPolynomial(line)

    one = IntPolynomial.one()
    mono = IntPolynomial.monomial
    g = lambda n, N: poincare_recursive_f(Field.C, n, N)
    assert g(2, 8) == g(2, 7) + mono(12) * g(1, 7)
    assert g(3, 7) == (one + mono(6)) * g(2, 5) + mono(8) * g(2, 6)
    cascade = (one + mono(10)) * (
        mono(20) * g(2, 7) + (one + mono(8) + mono(10)) * g(3, 7)
    )
    assert g(5, 10) == cascade
    assert cascade.evaluate(1) == 252

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"polynomial sweep took {elapsed:.2f}s"


@criterion(8, "involution")
def test_criterion_8_involution():
    for fi, field in enumerate(FIELDS):
        rng = np.random.default_rng(500 + fi)
        for s in range(10):
            N = int(rng.integers(1, 9))
            n = int(rng.integers(0, N + 1))
            tilde = involution(embed(random_point(field, n, N, seed=600 + s)))
            eye = HermitianMatrix.identity(field, N)
            gap = float(np.abs(tilde.square().entries - eye.entries).max())
            assert gap <= 1e-10, (
                f"{field.value} n={n} N={N}: involution square gap {gap:.3e}"
            )
    for n in (1, 2, 3):
        for N in range(n, 7):
            tilde = involution(embed(random_point(Field.R, n, N, seed=10 * n + N)))
            det = real_determinant(tilde)
            assert abs(det - (-1.0) ** n) <= 1e-8, (
                f"R n={n} N={N}: det {det!r} != {(-1.0) ** n}"
            )


@criterion(9, "reproducibility")
def test_criterion_9_reproducibility():
    exe = shutil.which("grasstop")
    base = [exe] if exe else [sys.executable, "-m", "grasstop.cli"]
    invocations = [
        ["verify", "--field", "R", "--n", "1", "--N", "3",
         "--samples", "2", "--seed", "4", "--json"],
        ["poincare", "--field", "C", "--n", "2", "--N", "5", "--json"],
        ["flow", "--field", "C", "--n", "1", "--N", "3",
         "--param", "E11", "--seed", "3", "--json"],
        ["index", "--field", "H", "--n", "2", "--N", "4",
         "--param", "E12", "--class", "G_ZERO_SUB", "--json"],
    ]
    for argv in invocations:
        runs = [
            subprocess.run(base + argv, capture_output=True, check=False)
            for _ in range(2)
        ]
        for run in runs:
            assert run.returncode == 0, (
                f"{argv[0]} exited {run.returncode}: {run.stderr.decode()[:200]}"
            )
        assert runs[0].stdout == runs[1].stdout, f"{argv[0]} output not reproducible"
        json.loads(runs[0].stdout.decode())
