"""Seeded random chains and digraphs for property tests and experiments."""

from __future__ import annotations

import random
from fractions import Fraction

from .chain import MarkovChain, Transition
from .graph import WeightedDigraph, period


def random_strongly_connected(rng: random.Random, max_states: int = 6, max_parallel: int = 3,
                              m: int = 2, out_range: tuple[int, int] = (-3, 3),
                              aperiodic: bool = True) -> MarkovChain:
    """Strongly connected chain with rational probabilities and integer outputs.

    A Hamiltonian cycle guarantees strong connectivity; extra edges (loops
    and parallel edges included) are sprinkled on top.  With ``aperiodic``
    a loop is added when the period exceeds 1.
    """
    n = rng.randint(1, max_states)
    pairs = [(i, (i + 1) % n) for i in range(n)]
    for _ in range(rng.randint(0, 2 * n)):
        pairs.append((rng.randrange(n), rng.randrange(n)))
    # cap parallel multiplicity
    counts: dict[tuple[int, int], int] = {}
    kept = []
    for p in pairs:
        if counts.get(p, 0) < max_parallel:
            counts[p] = counts.get(p, 0) + 1
            kept.append(p)
    probe = WeightedDigraph.from_edges(n, [(u, v, 1) for u, v in kept])
    if aperiodic and period(probe) != 1:
        kept.append((v := rng.randrange(n), v))
    weights = [rng.randint(1, 9) for _ in kept]
    row = [0] * n
    for (u, _), w in zip(kept, weights):
        row[u] += w
    lo, hi = out_range
    trans = [Transition(u, v, Fraction(w, row[u]),
                        tuple(Fraction(rng.randint(lo, hi)) for _ in range(m)))
             for (u, v), w in zip(kept, weights)]
    return MarkovChain(tuple(f"s{i}" for i in range(n)), tuple(trans),
                       tuple(f"k{i + 1}" for i in range(m)))


def random_weighted_digraph(rng: random.Random, max_vertices: int = 5,
                            density: float = 0.5) -> WeightedDigraph:
    """Arbitrary digraph (loops, parallel edges) with random positive rational weights."""
    n = rng.randint(1, max_vertices)
    edges = []
    for u in range(n):
        for v in range(n):
            for _ in range(2):
                if rng.random() < density / 2:
                    edges.append((u, v, Fraction(rng.randint(1, 9), rng.randint(1, 5))))
    return WeightedDigraph.from_edges(n, edges)
