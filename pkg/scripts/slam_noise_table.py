"""Five-point circle SLAM at increasing noise levels."""
import argparse
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from dqpower.slam import SlamConfig, simulate


@dataclass
class NoiseTableConfig:
    n: int = 5
    levels: list = field(default_factory=lambda: [0.0, 0.05, 0.10, 0.15, 0.20, 0.25])
    reps: int = 10
    literal: bool = False


def run(cfg: NoiseTableConfig) -> list[dict]:
    rows = []
    for level in cfg.levels:
        trials = [simulate(cfg.n, None, level, seed=r, cfg=SlamConfig(literal=cfg.literal)) for r in range(cfg.reps)]
        rows.append(
            {
                "noise": level,
                "e_x": float(np.mean([t.e_x for t in trials])),
                "e_Q": float(np.mean([t.e_Q for t in trials])),
                "iters": float(np.mean([t.result.iters for t in trials])),
                "time_s": float(np.mean([t.time_s for t in trials])),
            }
        )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--levels", type=float, nargs="+", default=None)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--literal", action="store_true", help="unconjugated X1 update")
    ap.add_argument("--json")
    args = ap.parse_args()
    cfg = NoiseTableConfig(n=args.n, reps=args.reps, literal=args.literal)
    if args.levels:
        cfg.levels = args.levels
    rows = run(cfg)
    print(f"{'noise':>6}  {'e_x':>9}  {'e_Q':>9}  {'iters':>7}  {'time':>7}")
    for r in rows:
        print(f"{r['noise']:>6.0%}  {r['e_x']:>9.2e}  {r['e_Q']:>9.2e}  {r['iters']:>7.1f}  {r['time_s']:>7.3f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
