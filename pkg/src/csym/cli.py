"""Command-line front end.

Usage::

    csym check matrix.json
    csym construct volterra --params '{"n": 128}' --out out/
    csym zoo partial_isometry --size 3 --seed 0 --count 200 --out zoo/
    csym verify matrix.json conjugation.json

Exit codes: 0 CSO (or success), 1 NotCSO, 2 Unknown, 3 a constructed
certificate failed verification, 64 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import builders as b
from . import io
from .core import TOL_ENV_VAR, Status, Tolerance, adjoint, csym_residual
from .errors import CsymError, InvalidParams
from .solver import SolveConfig, decide, decide_with_trace

EXIT_CODES = {Status.CSO: 0, Status.NOT_CSO: 1, Status.UNKNOWN: 2}
EXIT_VERIFY_FAILED = 3
EXIT_INPUT = 64

CONSTRUCT_CLASSES = ("binormal", "degree2", "rank_one", "normal_rank_one", "model_space", "volterra", "pisom_counterexample")


class UsageError(Exception):
    pass


# -- configuration -----------------------------------------------------------


def _tolerance(args) -> tuple[Tolerance, str]:
    if args.tol is not None:
        return Tolerance(rel=args.tol), "flag"
    if os.environ.get(TOL_ENV_VAR, "").strip():
        return Tolerance.from_env(), "env"
    return Tolerance(), "default"


def _config(args) -> SolveConfig:
    return SolveConfig(restarts=args.restarts, seed=args.seed, max_word_len=args.max_word_len)


def _config_echo(cfg: SolveConfig, tol: Tolerance, source: str) -> dict:
    return {
        "solve": cfg.to_dict(),
        "tolerance": {"rel": tol.rel, "abs": tol.abs, "source": source},
        "env": {TOL_ENV_VAR: os.environ.get(TOL_ENV_VAR)},
    }


def _emit(report: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        sys.stdout.write(io.dumps(report))
    else:
        sys.stdout.write("\n".join(text_lines(report)) + "\n")


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


# -- check ---------------------------------------------------------------------


def _stage_dict(rec, timing: bool) -> dict:
    v = rec.verdict
    d = {
        "test": rec.name,
        "outcome": v.status.value,
        "witness": None if v.obstruction is None else v.obstruction.to_dict(),
        "residual": None if not np.isfinite(v.residual) else float(v.residual),
        "reason": v.reason,
        "error": rec.error,
    }
    if timing:
        d["elapsed_ms"] = round(rec.elapsed_ms, 3)
    return d


def _check_text(r: dict) -> list[str]:
    v = r["verdict"]
    lines = [
        f"input_digest: {r['input_digest']}",
        f"verdict: {v['status']}  (stage {v['test']})",
        f"residual: {_fmt(v['residual'])}",
    ]
    if v["witness"]:
        w = v["witness"]
        lines.append(f"witness: {w['test']} left={_fmt(w['left'])} right={_fmt(w['right'])} indices={w['indices']}")
        lines.append(f"  {w['detail']}")
    if v["reason"]:
        lines.append(f"reason: {v['reason']}")
    if v["certificate"]:
        lines.append(f"certificate: {v['certificate']['rows']}x{v['certificate']['cols']} symmetric unitary s")
    lines.append("stages:")
    for s in r["stages"]:
        extra = f" {s['elapsed_ms']:.1f} ms" if "elapsed_ms" in s else ""
        lines.append(f"  {s['test']:<24} {s['outcome']:<8}{extra}")
    cfg = r["config"]
    lines.append(
        "config: " + " ".join(f"{k}={v}" for k, v in cfg["solve"].items())
        + f" tol.rel={cfg['tolerance']['rel']} tol.abs={cfg['tolerance']['abs']} ({cfg['tolerance']['source']})"
    )
    lines.append(f"exit_code: {r['exit_code']}")
    return lines


def run_check(args) -> int:
    tol, source = _tolerance(args)
    cfg = _config(args)
    t = io.load_matrix(args.file)
    if t.shape[0] != t.shape[1]:
        raise InvalidParams(f"matrix is {t.shape[0]}x{t.shape[1]}, not square")
    dec = decide_with_trace(t, cfg, tol)
    code = EXIT_CODES[dec.verdict.status]
    report = {
        "command": "check",
        "input_digest": io.matrix_digest(t),
        "verdict": dec.verdict.to_dict(),
        "stages": [_stage_dict(r, args.timing) for r in dec.stages],
        "config": _config_echo(cfg, tol, source),
        "exit_code": code,
    }
    _emit(report, args.format, _check_text)
    return code


# -- verify --------------------------------------------------------------------


def run_verify(args) -> int:
    tol, source = _tolerance(args)
    t = io.load_matrix(args.matrix)
    c = io.load_conjugation(args.conjugation, tol)
    if c.n != t.shape[0] or t.shape[0] != t.shape[1]:
        raise InvalidParams(f"matrix {t.shape} and conjugation of size {c.n} do not match")
    res = csym_residual(t, c)
    ok = res <= tol.rel
    report = {
        "command": "verify",
        "input_digest": io.matrix_digest(t),
        "conjugation_digest": io.matrix_digest(c.s),
        "csym_residual": res,
        "certified": ok,
        "tolerance": {"rel": tol.rel, "abs": tol.abs, "source": source},
        "exit_code": 0 if ok else EXIT_VERIFY_FAILED,
    }
    _emit(report, args.format, lambda r: [f"{k}: {_fmt(v)}" for k, v in r.items() if k != "tolerance"])
    return report["exit_code"]


# -- construct -----------------------------------------------------------------


def _load_params(raw: Optional[str]) -> dict:
    if raw is None:
        return {}
    path = Path(raw)
    try:
        text = path.read_text() if path.is_file() else raw
        params = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParams(f"--params is neither a JSON file nor inline JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise InvalidParams("--params must be a JSON object")
    return params


def _need(params: dict, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise InvalidParams(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def _int_param(params: dict, key: str, default=None) -> int:
    val = params.get(key, default)
    if isinstance(val, bool) or not isinstance(val, int):
        raise InvalidParams(f"parameter {key!r} must be an integer")
    return val


def _construct(cls: str, params: dict, tol: Tolerance, cfg: SolveConfig) -> tuple[dict, dict, dict]:
    """Returns ``(files, residuals, extra)``; files maps names to JSON objects."""
    vec = io.vector_from_json
    if cls == "binormal":
        ordering = params.get("ordering", "blocked")
        if params.get("preset") == "sqrt_of_normal":
            bb, cc = _need(params, "b", "c")
            t, c = b.sqrt_of_normal(vec(bb), vec(cc), vec(params.get("a", [])), tol)
            extra = {"preset": "sqrt_of_normal"}
        elif "atoms" in params:
            atoms = b.BinormalAtoms.from_json(params)
            t = atoms.matrix(ordering)
            c = b.binormal_conjugation(atoms, tol, ordering)
            extra = {"cases": b.binormal.atom_cases(atoms, tol.abs)}
        else:
            n11, n12, n21, n22 = (vec(x) for x in _need(params, "n11", "n12", "n21", "n22"))
            t, c = b.binormal_operator(n11, n12, n21, n22, tol, ordering)
            atoms, _ = b.binormal_triangularize(n11, n12, n21, n22, ordering)
            extra = {"atoms": atoms.to_json()}
        return {"T": io.matrix_to_json(t), "C": io.conjugation_to_json(c)}, {"csym": csym_residual(t, c)}, extra
    if cls in ("degree2", "rank_one"):
        if cls == "rank_one":
            u, v = _need(params, "u", "v")
            t = b.rank_one_operator(vec(u), vec(v))
        else:
            (m,) = _need(params, "matrix")
            t = io.matrix_from_json(m)
        c, data = b.degree2_conjugation(t, tol)
        canon = {
            "branch": data.branch,
            "alpha": io.complex_to_json(data.alpha),
            "beta": io.complex_to_json(data.beta),
            "roots": [io.complex_to_json(r) for r in data.roots],
            "q": io.matrix_to_json(data.q),
            "block": io.matrix_to_json(data.block),
            "block_s": io.matrix_to_json(data.block_s),
        }
        residuals = {"csym": csym_residual(t, c), "round_trip": float(np.linalg.norm(data.reconstruct() - t))}
        return {"T": io.matrix_to_json(t), "C": io.conjugation_to_json(c), "canonical": canon}, residuals, {}
    if cls == "normal_rank_one":
        eigs, a, v = _need(params, "eigs", "a", "v")
        eigs = vec(eigs)
        theta = vec(params["theta"]) if "theta" in params else np.ones(eigs.size)
        t, c = b.normal_rank_one(eigs, theta, io.complex_from_json(a), vec(v), tol)
        return {"T": io.matrix_to_json(t), "C": io.conjugation_to_json(c)}, {"csym": csym_residual(t, c)}, {}
    if cls == "model_space":
        (zeros,) = _need(params, "zeros")
        phi = b.BlaschkeProduct.from_json({"zeros": zeros, "factor": params.get("factor", 1.0)})
        lam = io.complex_from_json(params.get("lambda", 0.0))
        alpha = params.get("alpha")
        if alpha is None:
            alpha = "canonical" if abs(phi(lam)) > 1e-14 else 1.0
        elif alpha != "canonical":
            alpha = io.complex_from_json(alpha)
        points = _int_param(params, "quadrature_points", b.model_space.DEFAULT_POINTS)
        bundle = b.blaschke_model_space(phi, lam, alpha, points, tol)
        files = {
            "S": io.matrix_to_json(bundle.S_lambda),
            "U": io.matrix_to_json(bundle.U_lambda),
            "C": io.conjugation_to_json(bundle.C),
            "vectors": {"k_lambda": io.vector_to_json(bundle.k_lambda), "q_lambda": io.vector_to_json(bundle.q_lambda)},
        }
        extra = {"alpha": io.complex_to_json(bundle.alpha), "phi_at_lambda": io.complex_to_json(bundle.phi_at_lambda)}
        return files, dict(bundle.checks), extra
    if cls == "volterra":
        n = _int_param(params, "n")
        v, c = b.volterra_discretize(n, tol)
        real_part = 0.5 * (v + adjoint(v))
        sv = np.linalg.svd(real_part, compute_uv=False)
        residuals = {"csym": csym_residual(v, c), "real_part_second_singular_value": float(sv[1])}
        return {"V": io.matrix_to_json(v), "C": io.conjugation_to_json(c)}, residuals, {}
    if cls == "pisom_counterexample":
        n = _int_param(params, "n", 2)
        fx = b.partial_isometry_counterexample(n)
        verdict = decide(fx.T, cfg, tol)
        residuals = {
            "isometry_defect": float(np.linalg.norm(adjoint(fx.A) @ fx.A + adjoint(fx.B) @ fx.B - np.eye(3))),
            "projection_defect": float(np.linalg.norm(fx.P @ fx.P - fx.P)),
        }
        files = {"T": io.matrix_to_json(fx.T), "A": io.matrix_to_json(fx.A), "B": io.matrix_to_json(fx.B)}
        return files, residuals, {"verdict": verdict.to_dict()}
    raise InvalidParams(f"unknown class {cls!r}; expected one of {', '.join(CONSTRUCT_CLASSES)}")


def run_construct(args) -> int:
    tol, source = _tolerance(args)
    cfg = _config(args)
    params = _load_params(args.params)
    files, residuals, extra = _construct(args.cls, params, tol, cfg)
    ok = all(v <= tol.rel for v in residuals.values())
    if args.cls == "pisom_counterexample":
        ok = ok and extra["verdict"]["status"] == Status.NOT_CSO.value
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, obj in files.items():
        io.write_json(out / f"{name}.json", obj)
    report = {
        "command": "construct",
        "class": args.cls,
        "params": params,
        "files": sorted(f"{name}.json" for name in files),
        "residuals": residuals,
        "verified": ok,
        "config": _config_echo(cfg, tol, source),
        "exit_code": 0 if ok else EXIT_VERIFY_FAILED,
        **extra,
    }
    io.write_json(out / "report.json", report)

    def text(r):
        lines = [f"class: {r['class']}", f"wrote: {', '.join(r['files'])} and report.json to {args.out}"]
        lines += [f"  {k}: {_fmt(v)}" for k, v in r["residuals"].items()]
        if "verdict" in r:
            lines.append(f"self-check verdict: {r['verdict']['status']} ({r['verdict']['test']})")
        lines.append(f"verified: {r['verified']}")
        return lines

    _emit(report, args.format, text)
    return report["exit_code"]


# -- zoo -----------------------------------------------------------------------

_KIND_RE = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def _parse_kind(spec: str) -> tuple[str, list[str]]:
    """``partial_isometry(3,2)`` -> ("partial_isometry", ["3", "2"]); "." stands for unset."""
    m = _KIND_RE.match(spec)
    if not m:
        raise InvalidParams(f"cannot parse zoo kind {spec!r}")
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2) else []
    return m.group(1), args


def _zoo_jobs(args) -> list[dict]:
    kind, kargs = _parse_kind(args.kind)
    if kind not in b.ZOO_KINDS:
        raise InvalidParams(f"unknown zoo kind {kind!r}; expected one of {', '.join(b.ZOO_KINDS)}")

    def positional(i):
        return kargs[i] if i < len(kargs) and kargs[i] not in ("", ".", "*", "·") else None

    if kind == "nilpotent3":
        if args.grid:
            vals = [io.complex_from_json(json.loads(x)) for x in args.grid.split(",")]
            return [{"kind": kind, "seed": args.seed, "a": a, "b": bb} for a in vals for bb in vals]
        a = complex(positional(0) or args.a)
        bb = complex(positional(1) or args.b)
        return [{"kind": kind, "seed": args.seed + i, "a": a, "b": bb} for i in range(args.count)]
    size = args.size if args.size is not None else (int(positional(0)) if positional(0) else None)
    rank = args.rank if args.rank is not None else (int(positional(1)) if positional(1) else None)
    jobs = []
    for i in range(args.count):
        job = {"kind": kind, "seed": args.seed + i, "size": size}
        if kind == "partial_isometry":
            dim = size if size is not None else b.zoo.DEFAULT_SIZE[kind]
            job["rank"] = rank if rank is not None else i % (dim + 1)
        jobs.append(job)
    return jobs


def run_zoo(args) -> int:
    tol, source = _tolerance(args)
    cfg = _config(args)
    if args.count < 1:
        raise InvalidParams("--count must be >= 1")
    jobs = _zoo_jobs(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    counts = {s.value: 0 for s in Status}
    samples = []
    for idx, job in enumerate(jobs):
        params = {k: v for k, v in job.items() if k not in ("kind",)}
        t = b.zoo_sample(job["kind"], **params)
        start = time.perf_counter()
        v = decide(t, cfg, tol)
        elapsed = 1e3 * (time.perf_counter() - start)
        name = f"sample_{idx:04d}.json"
        io.save_matrix(out / name, t)
        counts[v.status.value] += 1
        entry = {
            "index": idx,
            "file": name,
            "params": {k: (io.complex_to_json(x) if isinstance(x, complex) else x) for k, x in params.items()},
            "input_digest": io.matrix_digest(t),
            "status": v.status.value,
            "test": v.test,
            "residual": None if not np.isfinite(v.residual) else float(v.residual),
        }
        if args.timing:
            entry["elapsed_ms"] = round(elapsed, 3)
        samples.append(entry)
    summary = {
        "command": "zoo",
        "kind": args.kind,
        "seed": args.seed,
        "count": len(jobs),
        "counts": counts,
        "samples": samples,
        "config": _config_echo(cfg, tol, source),
    }
    io.write_json(out / "summary.json", summary)

    def text(r):
        lines = [f"{'index':>5}  {'status':<8} {'stage':<24} params"]
        for s in r["samples"]:
            lines.append(f"{s['index']:>5}  {s['status']:<8} {s['test']:<24} {json.dumps(s['params'], sort_keys=True)}")
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in r["counts"].items()))
        return lines

    _emit(summary, args.format, text)
    return 0


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help=f"relative tolerance (default 1e-8, or ${TOL_ENV_VAR})")
    common.add_argument("--restarts", type=int, default=SolveConfig.restarts, help="unitary-search restarts")
    common.add_argument("--seed", type=int, default=0, help="seed for searches and zoo samples")
    common.add_argument("--max-word-len", type=int, default=SolveConfig.max_word_len, help="longest trace word")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="include per-stage wall-clock times")

    p = argparse.ArgumentParser(prog="csym", description="Decide, certify and construct complex symmetric matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("check", parents=[common], help="decide complex symmetry of a matrix file")
    pc.add_argument("file")
    pc.set_defaults(func=run_check)

    pv = sub.add_parser("verify", parents=[common], help="check a given conjugation against a matrix")
    pv.add_argument("matrix")
    pv.add_argument("conjugation")
    pv.set_defaults(func=run_verify)

    pk = sub.add_parser("construct", parents=[common], help="build an operator and its conjugation")
    pk.add_argument("cls", metavar="class", choices=CONSTRUCT_CLASSES)
    pk.add_argument("--params", help="JSON file or inline JSON object")
    pk.add_argument("--out", required=True)
    pk.set_defaults(func=run_construct)

    pz = sub.add_parser("zoo", parents=[common], help="decide a batch of seeded random samples")
    pz.add_argument("kind", help="e.g. normal, partial_isometry(3,2), nilpotent3(1,2)")
    pz.add_argument("--count", type=int, default=1)
    pz.add_argument("--size", type=int, default=None)
    pz.add_argument("--rank", type=int, default=None, help="partial_isometry rank (cycles 0..dim if omitted)")
    pz.add_argument("--a", default="1", help="nilpotent3 entry a")
    pz.add_argument("--b", default="2", help="nilpotent3 entry b")
    pz.add_argument("--grid", default=None, help="nilpotent3: comma-separated values, all (a, b) pairs")
    pz.add_argument("--out", required=True)
    pz.set_defaults(func=run_zoo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (CsymError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
