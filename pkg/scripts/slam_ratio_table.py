"""Random-graph SLAM at increasing observation ratios."""
import argparse
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from dqpower.slam import SlamConfig, simulate


@dataclass
class RatioTableConfig:
    n: int = 10
    ratios: list = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    reps: int = 10
    k_max: int = 1000


def run(cfg: RatioTableConfig) -> list[dict]:
    rows = []
    for s in cfg.ratios:
        trials = [simulate(cfg.n, s, 0.0, seed=r, cfg=SlamConfig(k_max=cfg.k_max)) for r in range(cfg.reps)]
        rows.append(
            {
                "s": s,
                "e_x": float(np.mean([t.e_x for t in trials])),
                "e_Q": float(np.mean([t.e_Q for t in trials])),
                "iters": float(np.mean([t.result.iters for t in trials])),
                "time_s": float(np.mean([t.time_s for t in trials])),
            }
        )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--ratios", type=float, nargs="+", default=None)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--k-max", type=int, default=1000)
    ap.add_argument("--json")
    args = ap.parse_args()
    cfg = RatioTableConfig(n=args.n, reps=args.reps, k_max=args.k_max)
    if args.ratios:
        cfg.ratios = args.ratios
    rows = run(cfg)
    print(f"{'s':>5}  {'e_x':>9}  {'e_Q':>9}  {'iters':>7}  {'time':>7}")
    for r in rows:
        print(f"{r['s']:>5.0%}  {r['e_x']:>9.2e}  {r['e_Q']:>9.2e}  {r['iters']:>7.1f}  {r['time_s']:>7.3f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
