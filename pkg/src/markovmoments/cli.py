"""Command-line interface.

Exit codes: 0 success, 1 semantic failure (validation, cap, method
disagreement), 2 usage or parse error.  Output is JSON unless ``--human``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import builders
from .chain import (ChainError, ChainSyntaxError, MarkovChain, NotFinallyConnected,
                    dump_chain, final_component, is_exact, parse_chain, validate)
from .cyclespace import cycle_rank_test, variance_zero
from .graph import EnumerationCapExceeded, functional_digraphs, simple_cycles
from .matrixtree import forest_sum, laplacian, laplacian_minor
from .moments import (dp_moment_sequence, moments_combinatorial, moments_determinant,
                      monte_carlo)


class MethodDisagreement(RuntimeError):
    pass


def jnum(x: Any) -> Any:
    if isinstance(x, bool) or x is None:
        return x
    if is_exact(x):
        return str(Fraction(x))
    return float(x)


def jmat(rows) -> list:
    return [[jnum(x) for x in r] for r in rows]


def analyze_chain(chain: MarkovChain, method: str = "both", cap: int | None = None,
                  timing: bool = False) -> dict:
    """Full report: validation, cycle-space verdicts and moment constants."""
    t0 = time.perf_counter()
    rep = validate(chain)
    fc = final_component(chain)
    names = chain.output_names
    m = chain.m
    cert = cycle_rank_test(fc)
    reports = {}
    if method in ("both", "determinant"):
        reports["determinant"] = moments_determinant(fc)
    if method in ("both", "digraph"):
        reports["digraph"] = moments_combinatorial(fc, cap=cap)
    if len(reports) == 2:
        a, b = reports["determinant"], reports["digraph"]
        if chain.exact and (a.e != b.e or a.sigma != b.sigma):
            raise MethodDisagreement("digraph and determinant methods disagree")
        if not chain.exact:
            diff = max([abs(x - y) for x, y in zip(a.e, b.e)]
                       + [abs(x - y) for r, s in zip(a.sigma, b.sigma) for x, y in zip(r, s)]
                       + [0.0])
            if diff > 1e-9:
                raise MethodDisagreement(f"methods disagree by {diff}")
    mr = next(iter(reports.values()))
    if mr.sigma_regular != cert.independent:
        raise MethodDisagreement("sigma regularity disagrees with the cycle rank test")
    vz = []
    for i in range(m):
        a = variance_zero(fc, i)
        vz.append({"output": names[i], "a": jnum(a)})
    pairs = []
    for i in range(m):
        for j in range(i + 1, m):
            pairs.append({"outputs": [names[i], names[j]], "c": jnum(mr.sigma[i][j]),
                          "independent": mr.pairwise_independent[i][j]})
    out = {
        "validation": rep.to_dict(chain),
        "final_component": {"states": list(fc.states), "period": rep.period},
        "outputs": list(names),
        "mode": "exact" if chain.exact else "float",
        "e": [jnum(x) for x in mr.e],
        "sigma": jmat(mr.sigma),
        "sigma_regular": cert.independent,
        "independence": pairs,
        "variance_zero": vz,
        "dependence_certificate": None if cert.independent else {
            "coefficients": [jnum(x) for x in cert.coefficients],
            "meaning": "a0*len(C) + sum_i a_i*k_i(C) = 0 on every cycle",
        },
        "methods": sorted(reports),
    }
    if timing:
        out["timing_seconds"] = time.perf_counter() - t0
    return out


# ------------------------------------------------------------------- helpers

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(args) -> MarkovChain:
    return parse_chain(_read(args.path), exact=not getattr(args, "float", False))


def _emit(obj: Any, human: bool = False) -> None:
    if human:
        _print_human(obj)
    else:
        sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _print_human(obj: Any, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                print(f"{pad}{k}:")
                _print_human(v, indent + 1)
            else:
                print(f"{pad}{k}: {_short(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                print(f"{pad}-")
                _print_human(v, indent + 1)
            else:
                print(f"{pad}- {_short(v)}")
    else:
        print(f"{pad}{obj}")


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x))
                   for x in v)
    return False


def _short(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return "null" if v is None else str(v)


def _index_list(text: str) -> list[int]:
    if not text.strip():
        return []
    return [int(x) - 1 for x in text.split(",")]


# -------------------------------------------------------------- subcommands

def cmd_validate(args) -> int:
    chain = _load(args)
    rep = validate(chain)
    _emit(rep.to_dict(chain), args.human)
    return 0 if rep.ok else 1


def cmd_analyze(args) -> int:
    chain = _load(args)
    rep = validate(chain)
    if not rep.ok:
        _emit({"error": "chain fails validation", "validation": rep.to_dict(chain)}, args.human)
        return 1
    _emit(analyze_chain(chain, args.method, timing=args.timing), args.human)
    return 0


def _cycle_dict(chain: MarkovChain, c) -> dict:
    return {"vertices": [chain.states[v] for v in c.vertices], "edges": list(c.edges),
            "length": c.length, "value": [jnum(x) for x in c.value]}


def cmd_cycles(args) -> int:
    fc = final_component(_load(args), require_aperiodic=False)
    res = simple_cycles(fc, args.limit)
    _emit({"final_component": list(fc.states), "count": len(res), "truncated": res.truncated,
           "cycles": [_cycle_dict(fc, c) for c in res]}, args.human)
    return 0


def cmd_digraphs(args) -> int:
    fc = final_component(_load(args), require_aperiodic=False)
    res = functional_digraphs(fc, args.parts)
    items = []
    for D in res:
        items.append({
            "edges": [f"{fc.states[fc.transitions[k].source]}->{fc.states[fc.transitions[k].target]}"
                      f"#{k}" for k in D.choice],
            "weight": jnum(D.weight),
            "cycles": [_cycle_dict(fc, c) for c in D.cycles],
        })
    _emit({"final_component": list(fc.states), "parts": args.parts, "count": len(items),
           "digraphs": items}, args.human)
    return 0


def cmd_moments(args) -> int:
    chain = _load(args)
    out: dict[str, Any] = {"method": args.method, "outputs": list(chain.output_names)}
    if args.method in ("digraph", "determinant"):
        fc = final_component(chain)
        rep = moments_combinatorial(fc) if args.method == "digraph" else moments_determinant(fc)
        out.update(e=[jnum(x) for x in rep.e], sigma=jmat(rep.sigma),
                   sigma_regular=rep.sigma_regular)
    elif args.method == "dp":
        seq = dp_moment_sequence(chain, args.n)
        last = seq[-1]
        out.update(n=args.n, mean=[jnum(x) for x in last.mean], cov=jmat(last.cov))
        if args.n >= 1:
            prev = seq[-2]
            out["mean_slope"] = [jnum(a - b) for a, b in zip(last.mean, prev.mean)]
            out["cov_slope"] = [[jnum(a - b) for a, b in zip(r, s)]
                                for r, s in zip(last.cov, prev.cov)]
    else:
        res = monte_carlo(chain, args.n, args.samples, args.seed, workers=args.workers)
        out.update(res.to_dict())
    _emit(out, args.human)
    return 0


def cmd_matrixtree(args) -> int:
    fc = final_component(_load(args), require_aperiodic=False)
    A, B = _index_list(args.A), _index_list(args.B)
    n = fc.n_states
    if any(not 0 <= i < n for i in A + B):
        raise ChainError(f"vertex indices must lie in 1..{n}")
    L = laplacian(fc)
    _emit({"ordering": list(fc.states), "A": [i + 1 for i in A], "B": [j + 1 for j in B],
           "laplacian": jmat(L), "minor": jnum(laplacian_minor(L, A, B)),
           "forest_sum": jnum(forest_sum(fc, A, B))}, args.human)
    return 0


def cmd_example(args) -> int:
    if args.family == "wnaf":
        if not 2 <= args.w1 < args.w2:
            raise ChainError("need 2 <= w1 < w2")
        p0 = Fraction(args.p0)
        chain = builders.product(builders.wnaf_transducer(args.w1),
                                 builders.wnaf_transducer(args.w2),
                                 {0: p0, 1: 1 - p0}, names=(f"w{args.w1}", f"w{args.w2}"))
    else:
        chain = builders.block_chain(args.kind, Fraction(args.p00), Fraction(args.p11),
                                     with_initial=args.with_initial)
    sys.stdout.write(dump_chain(chain) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="markovmoments",
                                description="Moments and CLT verdicts for Markov sources.")
    sub = p.add_subparsers(dest="command", required=True)

    def chain_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("path", help="chain file (JSON) or - for stdin")
        sp.add_argument("--human", action="store_true", help="plain-text output")
        sp.add_argument("--float", action="store_true", help="binary64 arithmetic")
        sp.set_defaults(func=func)
        return sp

    chain_cmd("validate", cmd_validate, "check finally connected / aperiodic")
    sp = chain_cmd("analyze", cmd_analyze, "moments and regularity/independence verdicts")
    sp.add_argument("--method", choices=["both", "digraph", "determinant"], default="both")
    sp.add_argument("--timing", action="store_true", help="include wall-clock timing")
    sp = chain_cmd("cycles", cmd_cycles, "simple cycles of the final component")
    sp.add_argument("--limit", type=int, default=None)
    sp = chain_cmd("digraphs", cmd_digraphs, "functional digraphs of the final component")
    sp.add_argument("--parts", type=int, choices=[1, 2], default=1)
    sp = chain_cmd("moments", cmd_moments, "moments by one method")
    sp.add_argument("--method", choices=["digraph", "determinant", "dp", "mc"],
                    default="determinant")
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp = chain_cmd("matrixtree", cmd_matrixtree, "both sides of the all-minors identity")
    sp.add_argument("--A", required=True, help="comma-separated 1-based roots")
    sp.add_argument("--B", required=True, help="comma-separated 1-based markers")

    ex = sub.add_parser("example", help="emit an example chain file")
    ex.set_defaults(func=cmd_example)
    exs = ex.add_subparsers(dest="family", required=True)
    w = exs.add_parser("wnaf", help="product of two w-NAF weight transducers")
    w.add_argument("--w1", type=int, required=True)
    w.add_argument("--w2", type=int, required=True)
    w.add_argument("--p0", default="1/2", help="probability of input digit 0")
    b = exs.add_parser("blocks", help="10/11 or 00/11 block counters")
    b.add_argument("--kind", choices=list(builders.BLOCK_KINDS), required=True)
    b.add_argument("--p00", default="1/2")
    b.add_argument("--p11", default="1/2")
    b.add_argument("--with-initial", dest="with_initial", action="store_true", default=None)
    b.add_argument("--no-initial", dest="with_initial", action="store_false")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChainSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (NotFinallyConnected, EnumerationCapExceeded, MethodDisagreement) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ChainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
