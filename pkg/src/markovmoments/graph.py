"""Graph algorithms on the underlying multigraph of a chain.

Every function takes a graph-like object with ``n_states`` and a sequence
``transitions`` of edges exposing ``source``, ``target``, ``prob`` and
``out``.  :class:`~markovmoments.chain.MarkovChain` qualifies, and so does
:class:`WeightedDigraph` for non-stochastic weights.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import deque
from dataclasses import dataclass
from typing import Any, Generic, Iterator, Sequence, TypeVar

DEFAULT_ENUM_CAP = 10**8

T = TypeVar("T")


class EnumerationCapExceeded(RuntimeError):
    """The number of candidates exceeds the enumeration cap."""

    def __init__(self, candidates: int, cap: int):
        self.candidates = candidates
        self.cap = cap
        super().__init__(
            f"{candidates} candidate subgraphs exceed the enumeration cap {cap}; "
            "use the determinant method or raise MM_ENUM_CAP")


def enum_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("MM_ENUM_CAP")
    return int(env) if env else DEFAULT_ENUM_CAP


@dataclass(frozen=True)
class WeightedDigraph:
    n_states: int
    transitions: tuple

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int, Any]]) -> "WeightedDigraph":
        from .chain import Transition
        return cls(n, tuple(Transition(u, v, w) for u, v, w in edges))


@dataclass
class Enumeration(Generic[T]):
    """A finite list of results together with a truncation flag."""

    items: list[T]
    truncated: bool = False

    def __iter__(self) -> Iterator[T]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


def out_edges(g) -> list[list[int]]:
    res: list[list[int]] = [[] for _ in range(g.n_states)]
    for k, t in enumerate(g.transitions):
        res[t.source].append(k)
    return res


def reachable(g, start: int) -> set[int]:
    succ = out_edges(g)
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for k in succ[v]:
            w = g.transitions[k].target
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


# ------------------------------------------------------------------ SCCs

@dataclass(frozen=True)
class Condensation:
    components: tuple[tuple[int, ...], ...]
    component_of: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def leaves(self) -> list[int]:
        has_out = {a for a, _ in self.edges}
        return [c for c in range(len(self.components)) if c not in has_out]


def scc_condensation(g) -> Condensation:
    """Tarjan's algorithm (iterative); components sorted by smallest vertex."""
    n = g.n_states
    adj = [sorted({g.transitions[k].target for k in ks}) for ks in out_edges(g)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[tuple[int, ...]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
    comps.sort()
    comp_of = [0] * n
    for c, vs in enumerate(comps):
        for v in vs:
            comp_of[v] = c
    edges = frozenset((comp_of[t.source], comp_of[t.target]) for t in g.transitions
                      if comp_of[t.source] != comp_of[t.target])
    return Condensation(tuple(comps), tuple(comp_of), edges)


def period(g, vertices: Sequence[int] | None = None) -> int:
    """Period of a strongly connected vertex set (all vertices by default).

    BFS levels ``lvl``; the period is the gcd of ``lvl(u) + 1 - lvl(v)`` over
    the edges ``u -> v`` inside the set.
    """
    vs = set(range(g.n_states) if vertices is None else vertices)
    if not vs:
        raise ValueError("period of an empty component")
    succ = out_edges(g)
    start = min(vs)
    lvl = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for k in succ[u]:
            v = g.transitions[k].target
            if v in vs and v not in lvl:
                lvl[v] = lvl[u] + 1
                queue.append(v)
    if len(lvl) != len(vs):
        raise ValueError("component is not strongly connected")
    d = 0
    for t in g.transitions:
        if t.source in vs and t.target in vs:
            d = math.gcd(d, abs(lvl[t.source] + 1 - lvl[t.target]))
    if d == 0:
        raise ValueError("component has no cycle")
    return d


# ----------------------------------------------------------------- cycles

@dataclass(frozen=True)
class Cycle:
    """Simple directed cycle, rotated so that its smallest vertex comes first."""

    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    value: tuple

    @property
    def length(self) -> int:
        return len(self.edges)


def _cycle(g, edges: Sequence[int]) -> Cycle:
    verts = [g.transitions[k].source for k in edges]
    r = verts.index(min(verts))
    edges = tuple(edges[r:]) + tuple(edges[:r])
    verts = verts[r:] + verts[:r]
    m = len(g.transitions[edges[0]].out)
    value = tuple(sum((g.transitions[k].out[i] for k in edges[1:]), g.transitions[edges[0]].out[i])
                  for i in range(m))
    return Cycle(edges, tuple(verts), value)


def _vertex_cycles(adj: list[list[int]]) -> Iterator[tuple[int, ...]]:
    """Johnson's algorithm on a simple digraph (self-loops allowed).

    Each elementary cycle is produced once, starting at its smallest vertex.
    """
    n = len(adj)
    for s in range(n):
        blocked: set[int] = set()
        bmap: dict[int, set[int]] = {}
        path = [s]

        def unblock(u: int) -> None:
            todo = [u]
            while todo:
                x = todo.pop()
                if x in blocked:
                    blocked.discard(x)
                    todo.extend(bmap.pop(x, ()))

        def circuit(v: int):
            found = False
            blocked.add(v)
            for w in adj[v]:
                if w < s:
                    continue
                if w == s:
                    yield tuple(path)
                    found = True
                elif w not in blocked:
                    path.append(w)
                    found = (yield from circuit(w)) or found
                    path.pop()
            if found:
                unblock(v)
            else:
                for w in adj[v]:
                    if w >= s:
                        bmap.setdefault(w, set()).add(v)
            return found

        yield from circuit(s)


def iter_simple_cycles(g) -> Iterator[Cycle]:
    """Every simple cycle exactly once; parallel edges give distinct cycles."""
    n = g.n_states
    par: dict[tuple[int, int], list[int]] = {}
    for k, t in enumerate(g.transitions):
        par.setdefault((t.source, t.target), []).append(k)
    adj = [sorted({v for (u, v) in par if u == x}) for x in range(n)]
    for vc in _vertex_cycles(adj):
        hops = [par[(vc[i], vc[(i + 1) % len(vc)])] for i in range(len(vc))]
        for choice in itertools.product(*hops):
            yield _cycle(g, choice)


def simple_cycles(g, limit: int | None = None) -> Enumeration[Cycle]:
    items: list[Cycle] = []
    for c in iter_simple_cycles(g):
        if limit is not None and len(items) >= limit:
            return Enumeration(items, truncated=True)
        items.append(c)
    return Enumeration(items)


# -------------------------------------------------------- functional digraphs

@dataclass(frozen=True)
class FunctionalDigraph:
    """One outgoing edge per vertex; ``choice[v]`` is the edge chosen at ``v``."""

    choice: tuple[int, ...]
    weight: Any
    cycles: tuple[Cycle, ...]

    @property
    def n_components(self) -> int:
        return len(self.cycles)


def _successor_cycles(g, choice: Sequence[int]) -> list[list[int]]:
    n = len(choice)
    mark = [-1] * n
    cycles = []
    for start in range(n):
        if mark[start] >= 0:
            continue
        v = start
        while mark[v] < 0:
            mark[v] = start
            v = g.transitions[choice[v]].target
        if mark[v] == start:
            # closed a new cycle on this walk
            cyc = []
            u = v
            while True:
                cyc.append(choice[u])
                u = g.transitions[choice[u]].target
                if u == v:
                    break
            cycles.append(cyc)
    return cycles


def _product(values):
    it = iter(values)
    acc = next(it)
    for x in it:
        acc = acc * x
    return acc


def iter_functional_digraphs(g, parts: int | None = 1,
                             cap: int | None = None) -> Iterator[FunctionalDigraph]:
    succ = out_edges(g)
    total = math.prod(len(s) for s in succ)
    cap = enum_cap(cap)
    if total > cap:
        raise EnumerationCapExceeded(total, cap)
    if total == 0:
        return
    probs = [t.prob for t in g.transitions]
    for choice in itertools.product(*succ):
        cyc = _successor_cycles(g, choice)
        if parts is not None and len(cyc) != parts:
            continue
        yield FunctionalDigraph(tuple(choice), _product(probs[k] for k in choice),
                                tuple(_cycle(g, c) for c in cyc))


def functional_digraphs(g, parts: int | None = 1,
                        cap: int | None = None) -> Enumeration[FunctionalDigraph]:
    """Spanning functional digraphs with exactly ``parts`` components.

    ``parts=None`` returns all out-degree-one spanning subgraphs.  Raises
    :class:`EnumerationCapExceeded` when the product of out-degrees is
    larger than the cap (``MM_ENUM_CAP`` or ``10**8``).
    """
    return Enumeration(list(iter_functional_digraphs(g, parts, cap)))


# --------------------------------------------------------------- forests

@dataclass(frozen=True)
class RootedForest:
    edges: tuple[int, ...]
    roots: tuple[int, ...]
    markers: tuple[int, ...]
    sign: int
    weight: Any


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``range(len(perm))``."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def iter_forests(g, roots: Sequence[int], markers: Sequence[int],
                 cap: int | None = None) -> Iterator[RootedForest]:
    A = sorted(set(roots))
    B = sorted(set(markers))
    if len(A) != len(B):
        return
    n = g.n_states
    succ = out_edges(g)
    aset = set(A)
    bset = set(B)
    free = [v for v in range(n) if v not in aset]
    options = [[k for k in succ[v] if g.transitions[k].target != v] for v in free]
    total = math.prod(len(o) for o in options)
    cap = enum_cap(cap)
    if total > cap:
        raise EnumerationCapExceeded(total, cap)
    probs = [t.prob for t in g.transitions]
    one = probs[0] * 0 + 1 if probs else 1
    for choice in itertools.product(*options):
        nxt = dict(zip(free, (g.transitions[k].target for k in choice)))
        root_of: dict[int, int] = {a: a for a in A}
        ok = True
        for v in free:
            path = []
            u = v
            while u not in root_of:
                if u in path:
                    ok = False
                    break
                path.append(u)
                u = nxt[u]
            if not ok:
                break
            for x in path:
                root_of[x] = root_of[u]
        if not ok:
            continue
        count = {a: 0 for a in A}
        for b in B:
            count[root_of[b]] += 1
        if any(c != 1 for c in count.values()):
            continue
        # g: B -> A (root of the tree holding b), h: A -> B order-preserving
        pos = {a: i for i, a in enumerate(A)}
        perm = [pos[root_of[B[i]]] for i in range(len(A))]
        weight = one
        for k in choice:
            weight = weight * probs[k]
        yield RootedForest(tuple(choice), tuple(A), tuple(B), permutation_sign(perm), weight)


def forests(g, roots: Sequence[int], markers: Sequence[int],
            cap: int | None = None) -> Enumeration[RootedForest]:
    """Spanning forests with ``|A|`` in-trees rooted in ``A``, one ``B``-vertex each."""
    return Enumeration(list(iter_forests(g, roots, markers, cap)))
