#!/usr/bin/env python3
"""Regularity of the joint w-NAF weight covariance under random digit distributions."""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from markovmoments import (cycle_rank_test, final_component, moments_determinant, product,
                           wnaf_transducer)


@dataclass
class Config:
    pairs: list[tuple[int, int]] = field(default_factory=lambda: [(2, 3), (2, 4), (3, 4), (3, 5)])
    trials: int = 20
    seed: int = 1
    per_state: bool = True  # draw a fresh input distribution at every product state


def random_dist(rng: random.Random, per_state: bool):
    cache: dict = {}

    def dist(pair):
        key = pair if per_state else None
        if key not in cache:
            p = Fraction(rng.randint(1, 99), 100)
            cache[key] = {0: p, 1: 1 - p}
        return cache[key]
    return dist


def run(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    for w1, w2 in cfg.pairs:
        t0 = time.perf_counter()
        regular = 0
        for _ in range(cfg.trials):
            chain = product(wnaf_transducer(w1), wnaf_transducer(w2), random_dist(rng, cfg.per_state))
            regular += cycle_rank_test(final_component(chain)).independent
        uni = product(wnaf_transducer(w1), wnaf_transducer(w2), {0: Fraction(1, 2), 1: Fraction(1, 2)})
        rep = moments_determinant(final_component(uni))
        print(f"w=({w1},{w2}) states={uni.n_states:3d} regular {regular}/{cfg.trials} "
              f"({time.perf_counter() - t0:.2f}s)  uniform: e={[str(x) for x in rep.e]} "
              f"c={rep.sigma[0][1]}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--global-dist", action="store_true", help="one distribution for all states")
    a = ap.parse_args()
    run(Config(trials=a.trials, seed=a.seed, per_state=not a.global_dist))


if __name__ == "__main__":
    main()
