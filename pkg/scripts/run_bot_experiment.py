#!/usr/bin/env python3
"""Scripted-subject experiment: update arm vs control arm over many seeds.

Each seed plays one full maze set per arm with the same bot profile. The
output JSON holds the per-seed solve-time and path-length series plus the
moving-average increase-rate curves, ready for external plotting.

Usage:
    python3 scripts/run_bot_experiment.py --seeds 20 --n 9 --out results/bot.json
"""

import argparse
import json
from pathlib import Path

import numpy as np

from qmaze import service


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--mazes", type=int, default=30)
    ap.add_argument("--sweeps", type=int, default=500)
    ap.add_argument("--reads", type=int, default=16)
    ap.add_argument("--out", type=Path, default=Path("results/bot_experiment.json"))
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    results = {"config": vars(args) | {"out": str(args.out)}, "arms": {}}
    for label, enabled in (("update", True), ("control", False)):
        runs = []
        for seed in range(args.seeds):
            stats = service.run_bot_set(
                n=args.n,
                params=service.SessionParams(
                    n=args.n,
                    sweeps=args.sweeps,
                    reads=args.reads,
                    update_enabled=enabled,
                    set_size=args.mazes,
                ),
                profile=service.BotProfile(),
                seed=seed,
            )
            runs.append(stats)
            print(
                f"{label} seed {seed:2d}: mean path {np.mean(stats['path_lengths']):6.2f}, "
                f"mean time {np.mean(stats['solve_times']):5.2f}s, "
                f"fallbacks {sorted(set(stats['fallback_levels']))}"
            )
        results["arms"][label] = runs
        lengths = [np.mean(r["path_lengths"]) for r in runs]
        print(f"== {label}: mean path length {np.mean(lengths):.2f} (sd {np.std(lengths):.2f})")

    args.out.write_text(json.dumps(results))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
