"""Weighted Laplacian and the all-minors matrix-tree identity.

For ``|A| = |B|``::

    det L_{A,B} = (-1)^(sum A + sum B) * sum_{F in F_{A,B}} p_F sign(F)

where ``L_{A,B}`` drops the rows in ``A`` and the columns in ``B``.  Vertex
indices follow the component's canonical ordering; 0-based and 1-based
numbering give the same sign because ``|A| = |B|``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg
from .graph import iter_forests


def laplacian(g, weights: Sequence | None = None) -> list[list[Fraction]]:
    """``L[i][j] = -(total weight i -> j)`` off the diagonal, rows summing to 0."""
    n = g.n_states
    L = [[Fraction(0)] * n for _ in range(n)]
    for k, t in enumerate(g.transitions):
        if t.source == t.target:
            continue
        w = Fraction(t.prob if weights is None else weights[k])
        L[t.source][t.target] -= w
        L[t.source][t.source] += w
    return L


def laplacian_minor(L: Sequence[Sequence], A: Sequence[int], B: Sequence[int]) -> Fraction:
    A, B = set(A), set(B)
    if len(A) != len(B):
        return Fraction(0)
    n = len(L)
    rows = [i for i in range(n) if i not in A]
    cols = [j for j in range(n) if j not in B]
    return linalg.det([[L[i][j] for j in cols] for i in rows])


def forest_sum(g, A: Sequence[int], B: Sequence[int], weights: Sequence | None = None,
               cap: int | None = None) -> Fraction:
    """Signed weighted forest sum, including the ``(-1)^(sum A + sum B)`` prefactor."""
    A, B = sorted(set(A)), sorted(set(B))
    if len(A) != len(B):
        return Fraction(0)
    total = Fraction(0)
    for F in iter_forests(g, A, B, cap):
        if weights is None:
            w = Fraction(F.weight)
        else:
            w = Fraction(1)
            for k in F.edges:
                w *= Fraction(weights[k])
        total += F.sign * w
    return -total if (sum(A) + sum(B)) % 2 else total
