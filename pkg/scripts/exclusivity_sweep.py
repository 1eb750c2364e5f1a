"""
Random-instance report per split size.

Run from the repo root:  python -m scripts.exclusivity_sweep [instances] [seed]
"""

import sys

from configurations.logging_config import configure_logging
from services.divisibility import exclusivity_sweep

SPLITS = [(1, 1), (2, 1), (1, 2), (2, 2)]


def main(instances: int = 200, seed: int = 0):
    configure_logging("INFO", json_output=False)
    print(f"{'split':>6} {'both':>6} {'sys':>6} {'env':>6} {'eq6>0':>6} {'eq7>0':>6} {'eq8>0':>6} {'TsTe':>6}")
    for n_s, n_e in SPLITS:
        s = exclusivity_sweep(instances=instances, seed=seed, splits=[(n_s, n_e)])
        print(
            f"{n_s}:{n_e:<4} {s.both_indivisible:>6} {s.sys_indivisible:>6} {s.env_indivisible:>6} "
            f"{s.eq6_positive:>6} {s.eq7_positive:>6} {s.eq8_positive:>6} {s.ts_te_failures:>6}"
        )
    print(f"instances per split: {instances}, seed: {seed}")


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]]
    main(*args)
