#!/usr/bin/env python3
"""Exact covariance constants for both block counters on a probability grid."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

from markovmoments import block_chain, final_component, moments_determinant


@dataclass
class Config:
    kind: str = "00-11"
    steps: int = 10
    exact: bool = False  # print exact rationals instead of decimals


def grid(cfg: Config) -> dict[tuple[Fraction, Fraction], Fraction]:
    ps = [Fraction(i, cfg.steps) for i in range(1, cfg.steps)]
    return {(a, b): moments_determinant(final_component(block_chain(cfg.kind, a, b))).sigma[0][1]
            for a in ps for b in ps}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=["00-11", "10-11"], default=Config.kind)
    ap.add_argument("--steps", type=int, default=Config.steps)
    ap.add_argument("--exact", action="store_true")
    cfg = Config(**vars(ap.parse_args()))
    g = grid(cfg)
    ps = sorted({a for a, _ in g})
    print(f"covariance constant c for {cfg.kind}; rows p00, columns p11")
    print("p00\\p11 " + " ".join(f"{float(b):>9.2f}" for b in ps))
    for a in ps:
        cells = [str(g[a, b]) if cfg.exact else f"{float(g[a, b]):9.5f}" for b in ps]
        print(f"{float(a):7.2f} " + " ".join(f"{c:>9}" for c in cells))
    zeros = [k for k, v in g.items() if v == 0]
    print(f"zero entries: {len(zeros)} of {len(g)}")


if __name__ == "__main__":
    main()
