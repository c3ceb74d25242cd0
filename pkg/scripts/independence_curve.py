#!/usr/bin/env python3
"""Trace the p00(p11) curve on which 10- and 11-block counts decorrelate.

For each p11 the script evaluates the closed-form curve, then recomputes the
covariance constant there and slightly off the curve to show the sign change.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from markovmoments import block_chain, final_component, independence_curve_10_11, moments_determinant


@dataclass
class Config:
    points: int = 19
    offset: float = 0.02


def covariance(p00: float, p11: float) -> float:
    return moments_determinant(final_component(block_chain("10-11", p00, p11))).sigma[0][1]


def run(cfg: Config) -> list[dict]:
    rows = []
    for k in range(1, cfg.points + 1):
        p11 = k / (cfg.points + 1)
        p00 = independence_curve_10_11(p11)
        rows.append({
            "p11": p11, "p00": p00,
            "c_on_curve": covariance(p00, p11),
            "c_below": covariance(max(p00 - cfg.offset, 1e-6), p11),
            "c_above": covariance(min(p00 + cfg.offset, 1 - 1e-6), p11),
        })
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--offset", type=float, default=Config.offset)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = Config(points=args.points, offset=args.offset)
    rows = run(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    print(f"{'p11':>6} {'p00':>10} {'c(curve)':>11} {'c(-)':>11} {'c(+)':>11}")
    for r in rows:
        print(f"{r['p11']:6.3f} {r['p00']:10.6f} {r['c_on_curve']:11.2e} "
              f"{r['c_below']:11.2e} {r['c_above']:11.2e}")


if __name__ == "__main__":
    main()
