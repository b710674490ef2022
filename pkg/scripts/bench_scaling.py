"""Time SHAP on random d-D circuits of growing size at a fixed feature count.

Prints a TSV of gate count against single-feature and all-features time,
the fitted log-log slope, and optionally writes an SVG plot.

    python3 scripts/bench_scaling.py --n 100 --targets 1000,3000,10000,30000,100000
"""
import argparse
import math
import random
import statistics
import time
from dataclasses import dataclass

from shapcirc.engine import shap_all, shap_uniform
from shapcirc.generators import random_entity, sized_dd_circuit


@dataclass
class ScalingConfig:
    n: int = 100
    targets: tuple = (1_000, 3_000, 10_000, 30_000, 100_000)
    seed: int = 0
    all_features_up_to: int = 20_000
    plot: str | None = None


def run(cfg: ScalingConfig):
    rng = random.Random(cfg.seed)
    rows = []
    print("gates\tsingle_s\tall_s")
    for target in cfg.targets:
        c = sized_dd_circuit(cfg.n, target, seed=rng.randrange(2 ** 32))
        e = random_entity(c.features, rng)
        t0 = time.perf_counter()
        shap_uniform(c, e, c.features[0])
        single = time.perf_counter() - t0
        every = float("nan")
        if len(c) <= cfg.all_features_up_to:
            t0 = time.perf_counter()
            shap_all(c, e)
            every = time.perf_counter() - t0
        rows.append((len(c), single, every))
        print(f"{len(c)}\t{single:.3f}\t{every:.3f}", flush=True)
    fit = statistics.linear_regression([math.log(g) for g, _, _ in rows],
                                       [math.log(s) for _, s, _ in rows])
    print(f"# log-log slope (single feature): {fit.slope:.2f}")
    if cfg.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.loglog([r[0] for r in rows], [r[1] for r in rows], "o-", label="single feature")
        done = [r for r in rows if not math.isnan(r[2])]
        ax.loglog([r[0] for r in done], [r[2] for r in done], "s--", label="all features")
        ax.set_xlabel("gates")
        ax.set_ylabel("seconds")
        ax.legend()
        fig.tight_layout()
        fig.savefig(cfg.plot, format="svg")
    return rows, fit.slope


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=ScalingConfig.n)
    ap.add_argument("--targets", default="1000,3000,10000,30000,100000")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--all-features-up-to", type=int, default=ScalingConfig.all_features_up_to)
    ap.add_argument("--plot")
    a = ap.parse_args()
    run(ScalingConfig(a.n, tuple(int(t) for t in a.targets.split(",")), a.seed,
                      a.all_features_up_to, a.plot))


if __name__ == "__main__":
    main()
