"""Command line interface: verify, poincare, flow, and index reports.

Each subcommand prints a report to stdout (pretty text by default,
--json / --format json for the machine form) and, when an output
directory is given via --outdir or GRASSTOP_OUTDIR, writes the JSON
report, a CSV table for flow batches, and a PNG figure alongside.
Identical configuration and seed give byte-identical JSON.

Exit codes: 0 all checks passed, 1 a check or convergence failure,
2 usage error (bad flags, invalid configuration).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from pathlib import Path

import numpy as np

from .algebra import (
    ContractViolationError,
    Field,
    HermitianMatrix,
    Scalar,
    conj_transpose,
    hermitian_inner,
    lemma21_basis,
    mat_mul,
    random_hermitian,
    _MUL,
)
from .geometry import (
    GeodesicCurve,
    complete_frame,
    geodesic_point,
    laplacian_numeric,
    mean_curvature_closed_form,
    mean_curvature_numeric,
    minimality_residual,
    retraction_frame,
    sphere_slice_radius,
    tangent_basis,
)
from .grassmann import (
    Frame,
    _gram_identity_gap,
    complement,
    embed,
    frame_from_projection,
    involution,
    orthonormalize,
    random_point,
    real_determinant,
)
from .homology import (
    check_poincare_identity,
    morse_bott_assembly,
    poincare_recursive_f,
    poincare_recursive_g,
    schubert_oracle,
    total_betti,
)
from .morse import (
    CriticalClass,
    HeightParam,
    class_param_name,
    classify_critical,
    flow,
    height,
    hessian_form,
    morse_index_from_eigenvalues,
    sample_critical_point,
    theorem_index_nullity,
)

__all__ = ["RunConfig", "main", "cmd_verify", "cmd_poincare", "cmd_flow", "cmd_index"]

MAX_N_DEFAULT = 16


@dataclass
class RunConfig:
    """Validated bundle of all knobs a subcommand can consume."""

    command: str
    field: Field | None = None
    n: int | None = None
    N: int | None = None
    seed: int = 0
    samples: int = 20
    tol: float = 1e-6
    stop_tol: float = 1e-8
    zero_threshold: float | None = None
    step: float = 0.05
    h: float = 1e-3
    max_iter: int = 10000
    param: str = "E11"
    direction: str = "descent"
    critical_class: str | None = None
    method: str = "recursion-f"
    check_all: bool = False
    fmt: str = "pretty"
    outdir: str | None = None
    runs: int = 1
    workers: int = 1
    max_n_cap: int = MAX_N_DEFAULT

    def validate(self) -> None:
        for name in ("tol", "stop_tol", "step", "h"):
            if getattr(self, name) <= 0:
                raise ContractViolationError(f"--{name.replace('_', '-')} must be > 0")
        if self.zero_threshold is not None and self.zero_threshold <= 0:
            raise ContractViolationError("--zero-threshold must be > 0")
        if self.samples < 1:
            raise ContractViolationError("--samples must be >= 1")
        if self.runs < 1:
            raise ContractViolationError("--runs must be >= 1")
        if self.workers < 1:
            raise ContractViolationError("--workers must be >= 1")
        if self.max_iter < 0:
            raise ContractViolationError("--max-iter must be >= 0")
        if self.N is not None and self.N > self.max_n_cap:
            raise ContractViolationError(
                f"N={self.N} exceeds the configured maximum {self.max_n_cap}"
            )
        if self.n is not None and self.N is not None and not 0 <= self.n <= self.N:
            raise ContractViolationError(
                f"need 0 <= n <= N, got n={self.n}, N={self.N}"
            )

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                flag = "--class" if name == "critical_class" else f"--{name}"
                raise ContractViolationError(f"{flag} is required for {self.command}")


def _load_param(field: Field, N: int, label: str) -> HeightParam:
    if label == "E11":
        return HeightParam.e11(field, N)
    if label == "E12":
        return HeightParam.e12(field, N)
    if label.startswith("file:"):
        path = Path(label[5:])
        data = json.loads(path.read_text())
        matrix = HermitianMatrix.from_json_dict(data)
        if matrix.field is not field or matrix.N != N:
            raise ContractViolationError(
                f"parameter file {path} is for field={matrix.field.value}, "
                f"N={matrix.N}; run asked for {field.value}, N={N}"
            )
        return HeightParam(matrix)
    raise ContractViolationError(
        f"--param must be E11, E12, or file:<path>, got {label!r}"
    )


# ---------------------------------------------------------------------------
# verify


def _max_entry(arr: np.ndarray) -> float:
    return float(np.abs(arr).max(initial=0.0))


def _verify_suite(cfg: RunConfig) -> list[dict]:
    """Invariant residuals over cfg.samples random points; max per check."""
    field, n, N = cfg.field, cfg.n, cfg.N
    c = field.c
    checks: dict[str, dict] = {}

    def record(name: str, tol: float, residual: float) -> None:
        entry = checks.setdefault(
            name, {"name": name, "max_residual": 0.0, "tol": tol, "pass": True}
        )
        entry["max_residual"] = max(entry["max_residual"], float(residual))
        entry["pass"] = entry["max_residual"] <= entry["tol"]

    # point-independent: the ambient Hermitian basis is orthogonal with
    # norm^2 = 1 on the N diagonal units and 2 on all others
    basis = lemma21_basis(field, N)
    worst = 0.0
    for i, u in enumerate(basis):
        target = 1.0 if i < N else 2.0
        worst = max(worst, abs(hermitian_inner(u, u) - target))
        for v in basis[i + 1 :]:
            worst = max(worst, abs(hermitian_inner(u, v)))
    record("lemma21_gram", 1e-10, worst)

    identity = HermitianMatrix.identity(field, N)
    rng = np.random.default_rng(cfg.seed + 99991)
    for s in range(cfg.samples):
        frame = random_point(field, n, N, cfg.seed + s)
        point = embed(frame)
        A = point.matrix
        record("projection_idempotent", 1e-10, A.square().max_entry_gap(A))
        record("projection_trace", 1e-10, abs(A.trace() - n))
        record(
            "hermitian_symmetry",
            1e-12,
            _max_entry(A.entries - conj_transpose(A.entries)),
        )
        record("projection_norm_sq", 1e-10, abs(hermitian_inner(A, A) - n))
        record(
            "sphere_slice_radius",
            1e-10,
            abs((A - (n / N) * identity).norm() - sphere_slice_radius(n, N)),
        )

        if n > 0:
            mix = np.zeros((n, n, 4))
            mix[:, :, :c] = rng.standard_normal((n, n, c))
            unitary = orthonormalize(field, mix).columns
            mixed_cols = np.einsum("aip,ijq,pqm->ajm", frame.columns, unitary, _MUL)
            record(
                "embed_basis_invariance",
                1e-12,
                point.distance(embed(Frame(field, mixed_cols))),
            )

        record(
            "frame_roundtrip",
            1e-10,
            point.distance(embed(frame_from_projection(point))),
        )

        other = embed(random_point(field, n, N, cfg.seed + 100000 + s))
        record(
            "complement_isometry",
            1e-12,
            abs(point.distance(other) - complement(point).distance(complement(other))),
        )
        tilde = involution(point)
        record("involution_square", 1e-10, tilde.square().max_entry_gap(identity))
        record(
            "involution_negation",
            1e-14,
            _max_entry(involution(complement(point)).entries + tilde.entries),
        )
        if field is Field.R:
            record(
                "involution_det", 1e-8, abs(real_determinant(tilde) - (-1.0) ** n)
            )
        if field is Field.R and n == 1 and N == 3:
            x = frame.columns[:, 0, 0]
            record(
                "veronese_coordinates",
                1e-12,
                _max_entry(A.entries[:, :, 0] - np.outer(x, x)),
            )

        if n == 0 or n == N:
            continue
        full = complete_frame(frame, seed=cfg.seed + s)
        record(
            "completion_complement",
            1e-10,
            embed(full.complement_frame()).distance(complement(point)),
        )
        vectors = tangent_basis(full)
        m = len(vectors)
        gram_worst = 0.0
        tangency_worst = 0.0
        a_entries = A.entries
        for idx, vec in enumerate(vectors):
            gram_worst = max(
                gram_worst, abs(hermitian_inner(vec.matrix, vec.matrix) - 2.0)
            )
            for other_vec in vectors[idx + 1 :]:
                gram_worst = max(
                    gram_worst, abs(hermitian_inner(vec.matrix, other_vec.matrix))
                )
            x = vec.matrix.entries
            tangency_worst = max(
                tangency_worst,
                _max_entry(mat_mul(x, a_entries) + mat_mul(a_entries, x) - x),
            )
        record("tangent_gram_2phi", 1e-10, gram_worst)
        record("tangency", 1e-10, tangency_worst)

        # velocity of the rotation curve and of the retraction both match
        # the tangent vector they were built from
        h_fd = 1e-4
        vec = vectors[s % m]
        i, alpha, unit = vec.label
        curve = GeodesicCurve(full, i, alpha, Scalar.unit(unit))
        fd = (
            embed(geodesic_point(curve, h_fd)).matrix.entries
            - embed(geodesic_point(curve, -h_fd)).matrix.entries
        ) / (2.0 * h_fd)
        record("geodesic_velocity_fd", 1e-6, _max_entry(fd - vec.matrix.entries))
        retr = (
            embed(retraction_frame(frame, vec.matrix, h_fd)).matrix.entries
            - embed(retraction_frame(frame, vec.matrix, -h_fd)).matrix.entries
        ) / (2.0 * h_fd)
        record("retraction_velocity_fd", 1e-6, _max_entry(retr - vec.matrix.entries))

        record(
            "geodesic_orthonormal",
            1e-10,
            _gram_identity_gap(geodesic_point(curve, 0.3 + 0.1 * s).columns),
        )

        closed = mean_curvature_closed_form(full)
        record("minimality_closed_form", 1e-10, minimality_residual(full, closed))
        numeric = mean_curvature_numeric(full, cfg.h)
        record("mean_curvature_numeric_gap", 1e-4, numeric.max_entry_gap(closed))
        record("mean_curvature_inner_A", 1e-4, abs(hermitian_inner(numeric, A) + 1.0))
        record("minimality_numeric", 1e-4, minimality_residual(full, numeric))

        raw = random_hermitian(field, N, cfg.seed + 5000 + s)
        parallel = raw - (hermitian_inner(raw, identity) / N) * identity
        parallel = (1.0 / max(parallel.norm(), 1e-12)) * parallel
        f_val = hermitian_inner(A, parallel)
        lap = laplacian_numeric(parallel, full, cfg.h, richardson=True)
        record(
            "laplacian_eigenfunction",
            1e-3,
            abs(lap + c * N * f_val) / max(abs(f_val), 1e-2),
        )
        record(
            "laplacian_constant",
            1e-8,
            abs(laplacian_numeric(identity, full, cfg.h, richardson=True)),
        )
        general = random_hermitian(field, N, cfg.seed + 7000 + s)
        general = (1.0 / max(general.norm(), 1e-12)) * general
        lap_general = laplacian_numeric(general, full, cfg.h, richardson=True)
        target = c * n * (N - n) * hermitian_inner(closed, general)
        record("laplacian_general_param", 1e-6, abs(lap_general - target))

    return list(checks.values())


def cmd_verify(cfg: RunConfig):
    cfg.require("field", "n", "N")
    checks = _verify_suite(cfg)
    all_pass = all(c["pass"] for c in checks)
    payload = {
        "command": "verify",
        "field": cfg.field.value,
        "n": cfg.n,
        "N": cfg.N,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "h": cfg.h,
        "checks": checks,
        "all_pass": all_pass,
    }
    return payload, not all_pass


# ---------------------------------------------------------------------------
# poincare


def _poly_payload(poly) -> dict:
    coeffs = list(poly.coeffs)
    return {
        "coeffs": coeffs,
        "euler": total_betti(poly),
        "betti": [{"degree": k, "b": b} for k, b in enumerate(coeffs)],
        "poly": str(poly),
    }


def _poincare_check_all(cfg: RunConfig):
    bound = cfg.N if cfg.N is not None else 10
    fields = [cfg.field] if cfg.field is not None else [Field.C, Field.H]
    failures = []
    cases = 0
    for field in fields:
        for N in range(0, bound + 1):
            for n in range(0, N + 1):
                cases += 1
                via_f = poincare_recursive_f(field, n, N)

                def mismatch(check: str) -> None:
                    failures.append(
                        {"field": field.value, "n": n, "N": N, "check": check}
                    )

                if schubert_oracle(field, n, N) != via_f:
                    mismatch("schubert")
                if via_f != poincare_recursive_f(field, N - n, N):
                    mismatch("duality")
                if not via_f.is_palindromic():
                    mismatch("palindrome")
                if total_betti(via_f) != comb(N, n):
                    mismatch("euler")
                if n >= 2 and N - n >= 2:
                    if poincare_recursive_g(field, n, N) != via_f:
                        mismatch("recursion-g")
                if 1 <= n <= N - 1 and not check_poincare_identity(field, n, N):
                    mismatch("identity")
    payload = {
        "command": "poincare",
        "check_all": True,
        "bound": bound,
        "fields": [f.value for f in fields],
        "cases": cases,
        "failures": failures,
        "all_match": not failures,
    }
    return payload, bool(failures)


def cmd_poincare(cfg: RunConfig):
    if cfg.check_all:
        return _poincare_check_all(cfg)
    cfg.require("field", "n", "N")
    consistent = True
    if cfg.method == "recursion-f":
        poly = poincare_recursive_f(cfg.field, cfg.n, cfg.N)
    elif cfg.method == "recursion-g":
        poly = poincare_recursive_g(cfg.field, cfg.n, cfg.N)
    elif cfg.method == "schubert":
        poly = schubert_oracle(cfg.field, cfg.n, cfg.N)
    elif cfg.method == "morse-bott":
        poly = morse_bott_assembly(cfg.field, cfg.n, cfg.N, source="thm31")
        if cfg.n >= 2 and cfg.N - cfg.n >= 2:
            consistent = (
                morse_bott_assembly(cfg.field, cfg.n, cfg.N, source="thm35") == poly
            )
    else:
        raise ContractViolationError(f"unknown method {cfg.method!r}")
    payload = {
        "command": "poincare",
        "field": cfg.field.value,
        "n": cfg.n,
        "N": cfg.N,
        "method": cfg.method,
        **_poly_payload(poly),
    }
    if cfg.method == "morse-bott":
        payload["sources_consistent"] = consistent
    return payload, not consistent


# ---------------------------------------------------------------------------
# flow


def _flow_single(field: Field, knobs: tuple, run: int, seed: int) -> dict:
    n, N, param_label, direction, step, stop_tol, max_iter, tol, h = knobs
    param = _load_param(field, N, param_label)
    start = random_point(field, n, N, seed)
    report = flow(
        param,
        start,
        step=step,
        stop_tol=stop_tol,
        max_iter=max_iter,
        direction=direction,
        classify_tol=tol,
        index_h=h,
    )
    row = {
        "run": run,
        "seed": seed,
        "f_start": report.f_history[0]
        if report.f_history
        else height(param, report.start),
        "f_final": report.f_final,
        "grad_norm": report.grad_norm,
        "iters": report.iters,
        "converged": report.converged,
        "class": None
        if report.critical_class is None
        else report.critical_class.value,
        "index": report.index,
        "nullity": report.nullity,
    }
    return {
        "row": row,
        "report": report.to_json_dict(),
        "f_history": report.f_history,
        "grad_history": report.grad_history,
    }


def _flow_job(args: tuple) -> dict:
    field_tag, knobs, run, seed = args
    return _flow_single(Field.parse(field_tag), knobs, run, seed)


def cmd_flow(cfg: RunConfig):
    cfg.require("field", "n", "N", "param")
    _load_param(cfg.field, cfg.N, cfg.param)  # fail fast before fanning out
    knobs = (
        cfg.n,
        cfg.N,
        cfg.param,
        cfg.direction,
        cfg.step,
        cfg.stop_tol,
        cfg.max_iter,
        cfg.tol,
        cfg.h,
    )
    jobs = [(cfg.field.value, knobs, run, cfg.seed + run) for run in range(cfg.runs)]
    if cfg.workers == 1 or cfg.runs == 1:
        results = [_flow_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_flow_job, jobs))
    runs_payload = []
    for res in results:
        entry = {"run": res["row"]["run"], "seed": res["row"]["seed"]}
        entry.update(res["report"])
        entry["converged"] = res["row"]["converged"]
        runs_payload.append(entry)
    payload = {
        "command": "flow",
        "field": cfg.field.value,
        "n": cfg.n,
        "N": cfg.N,
        "param": cfg.param,
        "direction": cfg.direction,
        "step": cfg.step,
        "stop_tol": cfg.stop_tol,
        "max_iter": cfg.max_iter,
        "runs": runs_payload,
        "all_converged": all(r["row"]["converged"] for r in results),
    }
    return payload, not payload["all_converged"], results


def _flow_csv(results: list[dict]) -> str:
    buf = io.StringIO()
    columns = [
        "run",
        "seed",
        "f_start",
        "f_final",
        "grad_norm",
        "iters",
        "converged",
        "class",
        "index",
        "nullity",
    ]
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for res in results:
        row = dict(res["row"])
        row["converged"] = "true" if row["converged"] else "false"
        for key in ("class", "index", "nullity"):
            if row[key] is None:
                row[key] = ""
        writer.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# index


def cmd_index(cfg: RunConfig):
    cfg.require("field", "n", "N", "param", "critical_class")
    cls = CriticalClass(cfg.critical_class)
    expected_param = class_param_name(cls)
    if cfg.param != expected_param:
        raise ContractViolationError(
            f"class {cls.value} belongs to parameter {expected_param}, "
            f"got --param {cfg.param}"
        )
    param = _load_param(cfg.field, cfg.N, cfg.param)
    frame = sample_critical_point(cls, cfg.field, cfg.n, cfg.N, seed=cfg.seed)
    full = complete_frame(frame, seed=cfg.seed)
    observed_class = classify_critical(param, full.base_point(), tol=cfg.tol)
    eigs = np.linalg.eigvalsh(hessian_form(param, full, cfg.h))
    scale = float(np.abs(eigs).max(initial=0.0))
    threshold = (
        cfg.zero_threshold
        if cfg.zero_threshold is not None
        else max(1e-6 * scale, 1e-12)
    )
    measured = morse_index_from_eigenvalues(eigs, threshold)
    predicted = theorem_index_nullity(cls, cfg.field, cfg.n, cfg.N)
    match = (
        measured.index == predicted.index
        and measured.nullity == predicted.nullity
        and observed_class is cls
    )
    payload = {
        "command": "index",
        "field": cfg.field.value,
        "n": cfg.n,
        "N": cfg.N,
        "param": cfg.param,
        "class": cls.value,
        "classified_as": observed_class.value,
        "seed": cfg.seed,
        "h": cfg.h,
        "zero_threshold": threshold,
        "eigenvalues": [float(e) for e in eigs],
        "measured": {"index": measured.index, "nullity": measured.nullity},
        "predicted": {"index": predicted.index, "nullity": predicted.nullity},
        "match": match,
    }
    return payload, not match


# ---------------------------------------------------------------------------
# rendering and entry point


def _pretty(payload: dict) -> str:
    command = payload["command"]
    lines = []
    if command == "verify":
        lines.append(
            f"verify field={payload['field']} n={payload['n']} N={payload['N']} "
            f"samples={payload['samples']} seed={payload['seed']}"
        )
        for chk in payload["checks"]:
            status = "PASS" if chk["pass"] else "FAIL"
            lines.append(
                f"  {status}  {chk['name']:<28} max residual {chk['max_residual']:.3e}"
                f"  (tol {chk['tol']:.1e})"
            )
        lines.append("all checks passed" if payload["all_pass"] else "CHECKS FAILED")
    elif command == "poincare" and payload.get("check_all"):
        lines.append(
            f"poincare check-all bound N<={payload['bound']} "
            f"fields={','.join(payload['fields'])}: {payload['cases']} cases"
        )
        for fail in payload["failures"]:
            lines.append(
                f"  MISMATCH {fail['check']} at field={fail['field']} "
                f"n={fail['n']} N={fail['N']}"
            )
        lines.append(
            "all methods agree" if payload["all_match"] else "MISMATCHES FOUND"
        )
    elif command == "poincare":
        lines.append(
            f"P(G_{payload['field']}({payload['n']},{payload['N']})) = "
            f"{payload['poly']}"
        )
        lines.append(f"  method {payload['method']}, total Betti {payload['euler']}")
    elif command == "flow":
        lines.append(
            f"flow field={payload['field']} n={payload['n']} N={payload['N']} "
            f"param={payload['param']} direction={payload['direction']}"
        )
        for run in payload["runs"]:
            status = "converged" if run["converged"] else "NOT CONVERGED"
            cls = run["class"] if run["class"] is not None else "-"
            idx = run["index"] if run["index"] is not None else "-"
            lines.append(
                f"  run {run['run']} seed {run['seed']}: {status} in "
                f"{run['iters']} iters, f={run['f_final']:.9f}, "
                f"|grad|={run['grad_norm']:.3e}, class={cls}, index={idx}"
            )
    elif command == "index":
        lines.append(
            f"index field={payload['field']} n={payload['n']} N={payload['N']} "
            f"param={payload['param']} class={payload['class']} "
            f"seed={payload['seed']}"
        )
        lines.append(
            f"  measured index={payload['measured']['index']} "
            f"nullity={payload['measured']['nullity']}; predicted "
            f"index={payload['predicted']['index']} "
            f"nullity={payload['predicted']['nullity']}"
        )
        lines.append("  MATCH" if payload["match"] else "  MISMATCH")
    return "\n".join(lines)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _write_outputs(cfg: RunConfig, payload: dict, flow_results=None) -> None:
    outdir = cfg.outdir or os.environ.get("GRASSTOP_OUTDIR")
    if not outdir:
        return
    directory = Path(outdir)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{cfg.command}.json").write_text(_json_text(payload) + "\n")
    if cfg.command == "flow" and flow_results is not None:
        (directory / "flow.csv").write_text(_flow_csv(flow_results))
    from . import report as figures

    fig_path = directory / f"{cfg.command}.png"
    if cfg.command == "verify":
        figures.save_verify_figure(payload["checks"], fig_path)
    elif cfg.command == "poincare" and not payload.get("check_all"):
        title = f"P(G_{payload['field']}({payload['n']},{payload['N']}))"
        figures.save_poincare_figure(payload["coeffs"], title, fig_path)
    elif cfg.command == "flow" and flow_results is not None:
        figures.save_flow_figure(
            [
                {
                    "run": res["row"]["run"],
                    "f_history": res["f_history"],
                    "grad_history": res["grad_history"],
                }
                for res in flow_results
            ],
            fig_path,
        )
    elif cfg.command == "index":
        figures.save_index_figure(
            payload["eigenvalues"], payload["zero_threshold"], fig_path
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grasstop",
        description="Grassmann manifolds over R, C, H: verification, flows, "
        "indices and Poincare polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--field", choices=["R", "C", "H"], default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--N", type=int, default=None, dest="N")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--format",
            dest="fmt",
            choices=["json", "csv", "pretty"],
            default="pretty",
        )
        p.add_argument(
            "--json",
            action="store_const",
            const="json",
            dest="fmt",
            help="shorthand for --format json",
        )
        p.add_argument("--outdir", default=None)
        p.add_argument("--config", default=None, help="JSON file of flag defaults")
        p.add_argument("--max-N", dest="max_n_cap", type=int, default=MAX_N_DEFAULT)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    add_common(p_verify)
    p_verify.add_argument("--samples", type=int, default=20)
    p_verify.add_argument("--h", type=float, default=1e-3)
    subparsers["verify"] = p_verify

    p_poincare = sub.add_parser("poincare", help="Poincare polynomial of G_F(n,N)")
    add_common(p_poincare)
    p_poincare.add_argument(
        "--method",
        choices=["recursion-f", "recursion-g", "schubert", "morse-bott"],
        default="recursion-f",
    )
    p_poincare.add_argument("--check-all", action="store_true", dest="check_all")
    subparsers["poincare"] = p_poincare

    p_flow = sub.add_parser("flow", help="gradient flow experiments")
    add_common(p_flow)
    p_flow.add_argument("--param", default="E11")
    p_flow.add_argument("--direction", choices=["ascent", "descent"], default="descent")
    p_flow.add_argument("--step", type=float, default=0.05)
    p_flow.add_argument("--tol", type=float, default=1e-8, dest="stop_tol")
    p_flow.add_argument("--max-iter", type=int, default=10000, dest="max_iter")
    p_flow.add_argument("--runs", type=int, default=1)
    p_flow.add_argument("--workers", type=int, default=1)
    p_flow.add_argument("--h", type=float, default=1e-3)
    subparsers["flow"] = p_flow

    p_index = sub.add_parser("index", help="Morse-Bott index at a critical class")
    add_common(p_index)
    p_index.add_argument("--param", default=None)
    p_index.add_argument(
        "--class",
        dest="critical_class",
        choices=[
            c.value for c in CriticalClass if c is not CriticalClass.NOT_CRITICAL
        ],
        default=None,
    )
    p_index.add_argument("--h", type=float, default=1e-3)
    p_index.add_argument(
        "--zero-threshold", type=float, default=None, dest="zero_threshold"
    )
    subparsers["index"] = p_index

    parser.grasstop_subparsers = subparsers
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return
    try:
        data = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file {known.config}: {exc}")
    if not isinstance(data, dict):
        parser.error(f"config file {known.config} must hold a JSON object")
    valid: set[str] = set()
    for sub_parser in parser.grasstop_subparsers.values():
        valid.update(action.dest for action in sub_parser._actions)
    unknown = sorted(set(data) - valid)
    if unknown:
        parser.error(f"unknown config keys: {', '.join(unknown)}")
    for sub_parser in parser.grasstop_subparsers.values():
        sub_parser.set_defaults(**data)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    known = set(RunConfig.__dataclass_fields__)
    values = {k: v for k, v in vars(args).items() if k in known}
    if values.get("field") is not None:
        values["field"] = Field.parse(values["field"])
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


_COMMANDS = {
    "verify": cmd_verify,
    "poincare": cmd_poincare,
    "flow": cmd_flow,
    "index": cmd_index,
}


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        _apply_config_file(parser, list(argv))
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        if cfg.fmt == "csv" and cfg.command != "flow":
            raise ContractViolationError("--format csv is only available for flow")
        outcome = _COMMANDS[cfg.command](cfg)
    except ContractViolationError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if len(outcome) == 3:
        payload, failed, flow_results = outcome
    else:
        payload, failed = outcome
        flow_results = None
    if cfg.fmt == "json":
        print(_json_text(payload))
    elif cfg.fmt == "csv":
        print(_flow_csv(flow_results), end="")
    else:
        print(_pretty(payload))
    _write_outputs(cfg, payload, flow_results)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
