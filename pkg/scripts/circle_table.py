"""Eigenvalues and per-eigenvalue iteration counts of circle-graph Laplacians."""
import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from dqpower.eigen import PowerConfig, all_eigenpairs
from dqpower.graphs import circle_graph, laplacian
from dqpower.projections import random_pose_vec


@dataclass
class CircleTableConfig:
    n_min: int = 3
    n_max: int = 10
    seed: int = 0
    tol: float = 1e-8
    max_iters: int = 5000


def run(cfg: CircleTableConfig) -> list[dict]:
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        rng = np.random.default_rng(cfg.seed + n)
        L = laplacian(circle_graph(n), random_pose_vec(rng, n)).L
        spec = all_eigenpairs(L, PowerConfig(cfg.max_iters, cfg.tol, cfg.seed))
        vals = spec.padded_values()
        iters = [p.iters for p in spec.pairs] + [0] * (n - len(spec.pairs))
        rows.append({"n": n, "eigenvalues": [v.to_list() for v in vals], "iters": iters})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(CircleTableConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    ap.add_argument("--json", help="write rows to this file")
    args = ap.parse_args()
    cfg = CircleTableConfig(**{k: getattr(args, k) for k in asdict(CircleTableConfig())})
    rows = run(cfg)
    for r in rows:
        print(f"n={r['n']:>2}  [" + ", ".join(f"{v[0]:.4f}" for v in r["eigenvalues"]) + "]")
        print("       [" + ", ".join(str(i) for i in r["iters"]) + "]")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
