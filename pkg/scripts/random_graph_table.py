"""Spectrum quality on random-graph Laplacians: e_lambda, e_L, iterations and time."""
import argparse
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from dqpower.eigen import PowerConfig, all_eigenpairs
from dqpower.graphs import laplacian, random_graph, spectrum_errors
from dqpower.projections import random_pose_vec


@dataclass
class RandomGraphConfig:
    n: int = 10
    sparsities: list = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    reps: int = 10
    tol: float = 1e-8
    max_iters: int = 5000


def run(cfg: RandomGraphConfig) -> list[dict]:
    rows = []
    for s in cfg.sparsities:
        stats = []
        for seed in range(cfg.reps):
            rng = np.random.default_rng(seed)
            L = laplacian(random_graph(cfg.n, s, rng), random_pose_vec(rng, cfg.n)).L
            t0 = time.perf_counter()
            spec = all_eigenpairs(L, PowerConfig(cfg.max_iters, cfg.tol, seed), strict=False)
            dt = time.perf_counter() - t0
            e_lam, e_L = spectrum_errors(L, spec)
            k = max(1, len(spec.pairs))
            stats.append((e_lam, e_L, np.mean([p.iters for p in spec.pairs]), dt / k))
        m = np.mean(stats, axis=0)
        rows.append({"s": s, "e_lambda": m[0], "e_L": m[1], "iters": m[2], "time_per_eig_s": m[3]})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--sparsities", type=float, nargs="+", default=None)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--max-iters", type=int, default=None, help="default 5000, or 1000 when n >= 100")
    ap.add_argument("--json")
    args = ap.parse_args()
    default_s = [0.05, 0.08, 0.10, 0.15, 0.18, 0.20] if args.n >= 100 else [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
    cfg = RandomGraphConfig(
        n=args.n,
        sparsities=args.sparsities or default_s,
        reps=args.reps,
        tol=args.tol,
        max_iters=args.max_iters or (1000 if args.n >= 100 else 5000),
    )
    rows = run(cfg)
    print(f"{'s':>5}  {'e_lambda':>10}  {'e_L':>10}  {'iters':>7}  {'s/eig':>7}")
    for r in rows:
        print(f"{r['s']:>5.0%}  {r['e_lambda']:>10.2e}  {r['e_L']:>10.2e}  {r['iters']:>7.1f}  {r['time_per_eig_s']:>7.3f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
