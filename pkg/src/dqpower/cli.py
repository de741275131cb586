"""Command-line entry point.

Exit codes: 0 success, 2 bad input, 3 violated precondition (e.g. a
non-Hermitian matrix), 4 no convergence.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .eigen import PowerConfig, all_eigenpairs, power_method, write_trace_csv
from .errors import (
    DQError,
    NoConvergence,
    NonPositiveLambda,
    NotHermitian,
    ZeroStandardPart,
)
from .graphs import circle_graph, laplacian, random_graph, spectrum_errors, write_edges_csv
from .linalg import read_matrix_json, read_vector_csv, write_matrix_json, write_vector_csv
from .projections import random_pose_vec
from .slam import (
    SlamConfig,
    read_problem_json,
    simulate,
    slam_errors,
    solve,
    write_gap_trace_csv,
)

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CONVERGENCE = 0, 2, 3, 4


class InputError(Exception):
    pass


def _out_dir(args) -> Path | None:
    if args.out_dir is None:
        return None
    p = Path(args.out_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _load_matrix(path):
    try:
        return read_matrix_json(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read matrix {path}: {exc}") from exc


def _power_cfg(args) -> PowerConfig:
    return PowerConfig(max_iters=args.max_iters, tol=args.tol, seed=args.seed)


def _dump(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def cmd_eig(args) -> int:
    Q = _load_matrix(args.matrix)
    t0 = time.perf_counter()
    try:
        pair = power_method(Q, _power_cfg(args))
        code = EXIT_OK
    except NoConvergence as exc:
        pair = exc.result
        print(f"warning: {exc}", file=sys.stderr)
        code = EXIT_CONVERGENCE
    elapsed = time.perf_counter() - t0
    print(f"lambda = {pair.value}")
    print(f"iterations = {pair.iters}")
    print(f"residual_2R = {pair.residual:.3e}")
    if args.trace_out:
        write_trace_csv(pair, args.trace_out)
    out = _out_dir(args)
    if out is not None:
        write_vector_csv(pair.vector, out / "eigenvector.csv")
        _dump(
            out / "eig.json",
            {
                "lambda": pair.value.to_list(),
                "iters": pair.iters,
                "residual_2R": pair.residual,
                "converged": pair.converged,
                "time_s": elapsed,
            },
        )
    return code


def cmd_eigs_all(args) -> int:
    Q = _load_matrix(args.matrix)
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        spec = all_eigenpairs(Q, _power_cfg(args), gamma=args.gamma, strict=not args.allow_partial)
    except NoConvergence as exc:
        spec = exc.result
        print(f"warning: {exc}", file=sys.stderr)
        code = EXIT_CONVERGENCE
    elapsed = time.perf_counter() - t0
    e_lam, e_L = spectrum_errors(Q, spec) if Q.appreciable() else (0.0, 0.0)
    print(f"{'k':>3}  {'lambda_st':>14}  {'lambda_du':>11}  {'iters':>6}")
    for k, p in enumerate(spec.pairs):
        flag = "" if p.converged else "  (not converged)"
        print(f"{k:>3}  {p.value.st:>14.6f}  {p.value.du:>11.2e}  {p.iters:>6}{flag}")
    print(f"e_lambda = {e_lam:.3e}")
    print(f"e_L = {e_L:.3e}")
    per = elapsed / len(spec.pairs) if spec.pairs else 0.0
    print(f"time per eigenvalue = {per:.4f} s")
    out = _out_dir(args)
    if out is not None:
        _dump(
            out / "spectrum.json",
            {
                "eigenvalues": [p.value.to_list() for p in spec.pairs],
                "iters": [p.iters for p in spec.pairs],
                "converged": [p.converged for p in spec.pairs],
                "e_lambda": e_lam,
                "e_L": e_L,
                "deflation_residual": spec.deflation_residual,
                "time_per_eigenvalue_s": per,
            },
        )
    return code


def _write_laplacian(G, args) -> int:
    rng = np.random.default_rng(args.seed)
    q = random_pose_vec(rng, G.n)
    bundle = laplacian(G, q)
    out = _out_dir(args) or Path(".")
    mpath, ppath, epath = out / "laplacian.json", out / "poses.csv", out / "edges.csv"
    write_matrix_json(bundle.L, mpath)
    write_vector_csv(q, ppath)
    write_edges_csv(G, epath)
    print(f"matrix: {mpath}")
    print(f"poses: {ppath}")
    print(f"edges: {epath} ({len(G.edges)} undirected edges)")
    return EXIT_OK


def cmd_circle(args) -> int:
    return _write_laplacian(circle_graph(args.n), args)


def cmd_randgraph(args) -> int:
    rng = np.random.default_rng(args.seed)
    G = random_graph(args.n, args.sparsity, rng)
    return _write_laplacian(G, args)


def _slam_cfg(args) -> SlamConfig:
    return SlamConfig(
        rho0=args.rho0,
        rho1=args.rho1,
        k_max=args.k_max,
        beta=args.beta,
        power_cfg=PowerConfig(max_iters=args.power_max_iters, tol=args.power_tol),
        literal=args.literal,
    )


def cmd_slam(args) -> int:
    cfg = _slam_cfg(args)
    out = _out_dir(args)
    strict = not args.allow_partial
    rows = []
    try:
        if args.problem:
            rows.append(_slam_file(args, cfg, strict, out))
        else:
            for rep in range(args.reps):
                seed = args.seed + rep
                if args.circle is not None:
                    trial = simulate(args.circle, None, args.noise, seed, cfg, strict)
                else:
                    n, s = args.randgraph
                    trial = simulate(int(n), float(s), args.noise, seed, cfg, strict)
                res = trial.result
                rows.append(
                    {
                        "rep": rep,
                        "seed": seed,
                        "noise": trial.noise,
                        "e_x": trial.e_x,
                        "e_Q": trial.e_Q,
                        "iters": res.iters,
                        "converged": res.converged,
                        "time_s": trial.time_s,
                    }
                )
                if out is not None:
                    write_vector_csv(res.poses, out / f"poses_rep{rep}.csv")
                    write_gap_trace_csv(res, out / f"gap_trace_rep{rep}.csv")
                print(
                    f"rep {rep}: e_x = {trial.e_x:.3e}  e_Q = {trial.e_Q:.3e}  "
                    f"iters = {res.iters}  time = {trial.time_s:.3f} s"
                )
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    summary = {"reps": rows}
    for key in ("e_x", "e_Q", "iters", "time_s"):
        vals = [r[key] for r in rows if r.get(key) is not None]
        summary[f"mean_{key}"] = float(np.mean(vals)) if vals else None
    print(
        "mean: "
        + "  ".join(f"{k} = {summary['mean_' + k]:.4g}" for k in ("e_x", "e_Q", "iters", "time_s") if summary["mean_" + k] is not None)
    )
    if out is not None:
        _dump(out / "metrics.json", summary)
    code = EXIT_OK
    if any(not r["converged"] for r in rows):
        code = EXIT_OK if args.allow_partial else EXIT_CONVERGENCE
    return code


def _slam_file(args, cfg, strict, out) -> dict:
    try:
        P = read_problem_json(args.problem)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read problem {args.problem}: {exc}") from exc
    cfg.seed = args.seed
    t0 = time.perf_counter()
    res = solve(P, cfg, strict=strict)
    elapsed = time.perf_counter() - t0
    row = {"rep": 0, "seed": args.seed, "e_x": None, "e_Q": None, "iters": res.iters,
           "converged": res.converged, "time_s": elapsed}
    if args.truth:
        truth = read_vector_csv(args.truth)
        row["e_x"], row["e_Q"] = slam_errors(truth, res)
    if out is not None:
        write_vector_csv(res.poses, out / "poses.csv")
        write_gap_trace_csv(res, out / "gap_trace.csv")
    print(f"iters = {res.iters}  gap = {res.gap:.3e}  time = {elapsed:.3f} s")
    return row


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dqpower", description="Dual quaternion eigenvalue and SLAM tools")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, tol=1e-8, max_iters=5000):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out-dir", default=None)
        p.add_argument("--tol", type=float, default=tol, help="relative residual tolerance")
        p.add_argument("--max-iters", type=int, default=max_iters)

    p = sub.add_parser("eig", help="dominant eigenpair of a Hermitian matrix file")
    p.add_argument("matrix")
    p.add_argument("--trace-out", default=None)
    common(p)
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("eigs-all", help="all eigenpairs by deflation")
    p.add_argument("matrix")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--allow-partial", action="store_true")
    common(p)
    p.set_defaults(func=cmd_eigs_all)

    p = sub.add_parser("circle", help="write a circle-graph Laplacian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_circle)

    p = sub.add_parser("randgraph", help="write a random-graph Laplacian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sparsity", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_randgraph)

    p = sub.add_parser("slam", help="pose-graph SLAM by rank-one completion")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--problem", help="problem JSON file")
    src.add_argument("--circle", type=int, metavar="N")
    src.add_argument("--randgraph", nargs=2, metavar=("N", "S"))
    p.add_argument("--truth", help="true poses CSV for --problem")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--allow-partial", action="store_true")
    p.add_argument("--rho0", type=float, default=0.01)
    p.add_argument("--rho1", type=float, default=1.1)
    p.add_argument("--k-max", type=int, default=1000)
    p.add_argument("--beta", type=float, default=1e-5)
    p.add_argument("--power-tol", type=float, default=1e-10)
    p.add_argument("--power-max-iters", type=int, default=2000)
    p.add_argument("--literal", action="store_true", help="unconjugated X1 update")
    p.set_defaults(func=cmd_slam)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotHermitian, ZeroStandardPart) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (NoConvergence, NonPositiveLambda) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (InputError, DQError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

if __name__ == "__main__":
    sys.exit(main())
