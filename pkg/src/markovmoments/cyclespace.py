"""Decision procedures on the cycle space of the final component.

The characteristic vectors of directed cycles of a strongly connected
digraph span the kernel of its vertex-edge flow-incidence matrix: every
rational circulation plus a large multiple of a positive circulation that
covers all edges is positive, and positive circulations decompose into
directed cycles.  So ``1, k_1, ..., k_m`` are linearly dependent on all
cycles iff stacking their rows under the incidence matrix does not raise
the rank by ``m + 1``.  No cycle enumeration is needed for the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .graph import iter_simple_cycles

CERTIFICATE_CYCLE_LIMIT = 100_000


@dataclass(frozen=True)
class CycleCertificate:
    """Verdict of the cycle rank test.

    ``coefficients`` is ``(a_0, ..., a_m)`` with
    ``a_0 len(C) + sum a_i k_i(C) = 0`` on every cycle, normalised so that
    the first nonzero entry is 1; ``relations`` is a basis of all such
    vectors.
    """

    independent: bool
    coefficients: tuple[Fraction, ...] | None = None
    relations: tuple[tuple[Fraction, ...], ...] = field(default=())
    rank_incidence: int = 0
    rank_stacked: int = 0

    @property
    def verdict(self) -> str:
        return "independent" if self.independent else "dependent"


def incidence_matrix(g) -> list[list[int]]:
    """Rows per vertex: +1 where an edge enters, -1 where it leaves (loops give 0)."""
    NN = [[0] * len(g.transitions) for _ in range(g.n_states)]
    for k, t in enumerate(g.transitions):
        NN[t.source][k] -= 1
        NN[t.target][k] += 1
    return NN


def _exact(x) -> Fraction:
    # floats are dyadic rationals; converting keeps the test exact
    return Fraction(x)


def function_matrix(g, outputs: Sequence[int] | None = None) -> list[list[Fraction]]:
    """Row 0 is the constant 1, row ``i`` holds ``k_i`` on every edge."""
    m = len(g.transitions[0].out) if g.transitions else 0
    idx = range(m) if outputs is None else outputs
    rows = [[Fraction(1)] * len(g.transitions)]
    for i in idx:
        rows.append([_exact(t.out[i]) for t in g.transitions])
    return rows


def _normalise(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    lead = next(x for x in vec if x != 0)
    return tuple(x / lead for x in vec)


def check_certificate(g, coefficients: Sequence[Fraction],
                      outputs: Sequence[int] | None = None,
                      limit: int = CERTIFICATE_CYCLE_LIMIT) -> int:
    """Verify a relation on enumerated cycles; returns how many were checked."""
    m = len(g.transitions[0].out) if g.transitions else 0
    idx = list(range(m) if outputs is None else outputs)
    checked = 0
    for cyc in iter_simple_cycles(g):
        total = coefficients[0] * cyc.length
        for a, i in zip(coefficients[1:], idx):
            total += a * _exact(cyc.value[i])
        if total != 0:
            raise AssertionError(f"certificate fails on cycle {cyc.edges}")
        checked += 1
        if checked >= limit:
            break
    return checked


def cycle_rank_test(g, outputs: Sequence[int] | None = None,
                    verify: bool = True) -> CycleCertificate:
    """Decide whether ``1, k_1, ..., k_m`` are independent on the cycle space.

    ``g`` must be strongly connected (normally the final component).  The
    asymptotic variance-covariance matrix is regular iff the verdict is
    independent.
    """
    NN = incidence_matrix(g)
    MM = function_matrix(g, outputs)
    r_nn = linalg.rank(NN)
    r_st = linalg.rank(NN + MM)
    if r_st == r_nn + len(MM):
        return CycleCertificate(True, rank_incidence=r_nn, rank_stacked=r_st)
    # relations a with a @ MM vanishing on ker(NN)
    Z = linalg.nullspace(NN, len(g.transitions))
    if Z:
        G = linalg.matmul(MM, linalg.transpose(Z))
        rel = linalg.nullspace(linalg.transpose(G), len(MM))
    else:
        rel = linalg.nullspace([], len(MM))
    relations = tuple(_normalise(r) for r in rel)
    cert = CycleCertificate(False, relations[0], relations, r_nn, r_st)
    if verify:
        check_certificate(g, cert.coefficients, outputs)
    return cert


def _one_cycle(g) -> list[int] | None:
    """Edge indices of some cycle, found by a successor walk from vertex 0."""
    first = {}
    for k, t in enumerate(g.transitions):
        first.setdefault(t.source, k)
    if len(first) < g.n_states:
        return None
    seen: dict[int, int] = {}
    path: list[int] = []
    v = 0
    while v not in seen:
        seen[v] = len(path)
        k = first[v]
        path.append(k)
        v = g.transitions[k].target
    return path[seen[v]:]


def variance_zero(g, output: int = 0) -> Fraction | None:
    """The constant ``a`` with ``k(C) = a len(C)`` on every cycle, or ``None``.

    Such an ``a`` exists iff the asymptotic variance of output ``output``
    vanishes; it is then also the expectation constant.
    """
    cyc = _one_cycle(g)
    if cyc is None:
        raise ValueError("component has a vertex without outgoing transitions")
    a = sum((_exact(g.transitions[k].out[output]) for k in cyc), Fraction(0)) / len(cyc)
    cert = cycle_rank_test(g, [output], verify=False)
    if cert.independent:
        return None
    a0, a1 = cert.coefficients
    if a1 == 0:
        raise AssertionError("constant function vanishing on cycles")
    if -a0 / a1 != a:
        raise AssertionError("cycle ratio disagrees with rank certificate")
    return a


def zero_one_variance_check(g, output: int = 0) -> bool:
    """For 0/1 outputs: variance zero iff the output is constant on the component."""
    vals = {t.out[output] for t in g.transitions}
    if not vals <= {0, 1}:
        raise ValueError(f"output values outside {{0, 1}}: {sorted(vals)}")
    return len(vals) <= 1
