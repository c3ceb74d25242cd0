#!/usr/bin/env python3
"""Monte Carlo check of the joint CLT: whitened moments and empirical constants."""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from markovmoments import block_chain, final_component, moments_determinant, monte_carlo


@dataclass
class Config:
    kind: str = "10-11"
    p00: str = "1/2"
    p11: str = "1/2"
    n: int = 10_000
    samples: int = 10_000
    seed: int = 2016
    workers: int = 1


def run(cfg: Config) -> dict:
    chain = block_chain(cfg.kind, Fraction(cfg.p00), Fraction(cfg.p11))
    rep = moments_determinant(final_component(chain))
    res = monte_carlo(chain, cfg.n, cfg.samples, cfg.seed, workers=cfg.workers)
    return {
        "config": asdict(cfg),
        "e": [str(x) for x in rep.e],
        "sigma": [[str(x) for x in r] for r in rep.sigma],
        "sigma_regular": rep.sigma_regular,
        **res.to_dict(),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    print(json.dumps(run(Config(**vars(ap.parse_args()))), indent=2))


if __name__ == "__main__":
    main()
