"""Compare every engine quantity with the brute-force oracle on random instances.

    python3 scripts/oracle_sweep.py --instances 200 --max-n 10
"""
import argparse
import random
import time
from dataclasses import dataclass

from shapcirc import oracle
from shapcirc.engine import h_uniform, shap_product, shap_uniform, ssat_profile
from shapcirc.generators import random_dd_circuit, random_entity, random_probmap
from shapcirc.transforms import prepare


@dataclass
class SweepConfig:
    instances: int = 200
    min_n: int = 2
    max_n: int = 10
    seed: int = 0


def run(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    mismatches = 0
    t0 = time.perf_counter()
    for i in range(cfg.instances):
        n = rng.randint(cfg.min_n, cfg.max_n)
        c = random_dd_circuit(n, rng.randint(2, 8) * n, rng)
        e = random_entity(c.features, rng)
        p = random_probmap(c.features, rng)
        pc = prepare(c)
        uni = oracle.brute_shap_all(c, None, e)
        prod = oracle.brute_shap_all(c, p, e)
        ok = all(shap_uniform(c, e, x) == uni[x] and shap_product(c, p, e, x) == prod[x]
                 for x in c.features)
        ok = ok and ssat_profile(pc, e) == [oracle.brute_ssat(c, e, k) for k in range(n + 1)]
        ok = ok and all(h_uniform(pc, e, k) == oracle.brute_h(c, e, k) for k in range(n + 1))
        if not ok:
            mismatches += 1
            print(f"mismatch: instance {i}, n={n}, {len(c)} gates")
    print(f"{cfg.instances - mismatches}/{cfg.instances} instances agree "
          f"({time.perf_counter() - t0:.1f} s)")
    return mismatches


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=SweepConfig.instances)
    ap.add_argument("--min-n", type=int, default=SweepConfig.min_n)
    ap.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = ap.parse_args()
    raise SystemExit(1 if run(SweepConfig(a.instances, a.min_n, a.max_n, a.seed)) else 0)


if __name__ == "__main__":
    main()
