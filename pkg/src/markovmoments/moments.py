"""Asymptotic moment constants and finite-n oracles.

``moments_combinatorial`` sums over functional digraphs with one and two
components; ``moments_determinant`` differentiates ``det(I - z A(x))``.
Both return the same exact constants.  ``exact_dp_moments`` and
``monte_carlo`` work on the whole chain at a fixed length ``n``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np
from scipy import stats

from . import linalg
from .chain import MarkovChain, is_exact
from .cyclespace import cycle_rank_test
from .graph import iter_functional_digraphs
from .jets import char_derivatives

FLOAT_ZERO_TOL = 1e-9


def _is_zero(x) -> bool:
    return x == 0 if is_exact(x) else abs(x) < FLOAT_ZERO_TOL


@dataclass(frozen=True)
class D1D2Sums:
    """Weighted cycle sums over one- and two-component functional digraphs.

    Functions are indexed ``0`` for the constant 1 and ``i + 1`` for
    output ``i``.  ``d1[g]`` is ``g(D1)``; ``d1_pair[g][h]`` is
    ``(g, h)(D1)``; ``d2_pair[g][h]`` is ``(g, h)(D2)`` summed over
    *ordered* pairs of distinct cycles.
    """

    d1: tuple
    d1_pair: tuple
    d2_pair: tuple
    n_d1: int
    n_d2: int

    @property
    def one_d1(self):
        return self.d1[0]

    def centered(self, pair: tuple, e: Sequence, i: int, j: int):
        """``(k_i - e_i 1, k_j - e_j 1)`` applied to a bilinear table."""
        a, b = i + 1, j + 1
        return (pair[a][b] - e[j] * pair[a][0] - e[i] * pair[0][b]
                + e[i] * e[j] * pair[0][0])


def d1_d2_sums(g, outputs: Sequence[int] | None = None, cap: int | None = None) -> D1D2Sums:
    m = len(g.transitions[0].out) if g.transitions else 0
    idx = list(range(m) if outputs is None else outputs)
    nf = len(idx) + 1
    zero = g.transitions[0].prob * 0
    d1 = [zero] * nf
    p1 = [[zero] * nf for _ in range(nf)]
    p2 = [[zero] * nf for _ in range(nf)]
    n1 = n2 = 0
    for D in iter_functional_digraphs(g, parts=None, cap=cap):
        k = D.n_components
        if k > 2:
            continue
        vals = [[c.length] + [c.value[i] for i in idx] for c in D.cycles]
        w = D.weight
        if k == 1:
            n1 += 1
            v = vals[0]
            for a in range(nf):
                d1[a] += w * v[a]
                for b in range(nf):
                    p1[a][b] += w * v[a] * v[b]
        else:
            n2 += 1
            u, v = vals
            for a in range(nf):
                for b in range(nf):
                    p2[a][b] += w * (u[a] * v[b] + v[a] * u[b])
    return D1D2Sums(tuple(d1), tuple(map(tuple, p1)), tuple(map(tuple, p2)), n1, n2)


@dataclass(frozen=True)
class MomentReport:
    e: tuple
    sigma: tuple
    sigma_regular: bool
    pairwise_independent: tuple
    method: str

    @property
    def v(self) -> tuple:
        return tuple(self.sigma[i][i] for i in range(len(self.e)))


def _sigma_regular(sigma, g, outputs) -> bool:
    if sigma and all(is_exact(x) for row in sigma for x in row):
        return linalg.rank(sigma) == len(sigma)
    # float constants: use the exact combinatorial criterion instead
    return cycle_rank_test(g, outputs, verify=False).independent


def _report(e, sigma, g, outputs, method) -> MomentReport:
    m = len(e)
    indep = tuple(tuple(_is_zero(sigma[i][j]) for j in range(m)) for i in range(m))
    return MomentReport(tuple(e), tuple(tuple(r) for r in sigma),
                        _sigma_regular(sigma, g, outputs), indep, method)


def moments_combinatorial(g, outputs: Sequence[int] | None = None,
                          cap: int | None = None, sums: D1D2Sums | None = None) -> MomentReport:
    """Expectation and covariance constants from functional-digraph sums."""
    s = sums if sums is not None else d1_d2_sums(g, outputs, cap)
    m = len(s.d1) - 1
    one = s.one_d1
    e = [s.d1[i + 1] / one for i in range(m)]
    sigma = [[(s.centered(s.d1_pair, e, i, j) - s.centered(s.d2_pair, e, i, j)) / one
              for j in range(m)] for i in range(m)]
    return _report(e, sigma, g, outputs, "digraph")


def moments_determinant(g, outputs: Sequence[int] | None = None) -> MomentReport:
    """Expectation and covariance constants by implicit differentiation."""
    d = char_derivatives(g, outputs)
    fz = d.fz
    if fz == 0:
        raise ArithmeticError("f_z vanishes; not a valid final component")
    m = len(d.fx)
    e = [d.fx[i] / fz for i in range(m)]
    fz3 = fz * fz * fz
    sigma = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            fi, fj = d.fx[i], d.fx[j]
            # on the diagonal fxx already carries f_{x_i x_i} + f_{x_i}
            sigma[i][j] = (fi * fj * d.fzz + fz * fz * d.fxx[i][j]
                           - fj * fz * d.fxz[i] - fi * fz * d.fxz[j]) / fz3
    return _report(e, sigma, g, outputs, "determinant")


# ------------------------------------------------------------------ finite n

@dataclass(frozen=True)
class FiniteMoments:
    n: int
    mean: tuple
    cov: tuple

    @property
    def var(self) -> tuple:
        return tuple(self.cov[i][i] for i in range(len(self.mean)))


def dp_moment_sequence(chain: MarkovChain, n_max: int,
                       exact: bool | None = None) -> list[FiniteMoments]:
    """Exact moments of ``K_n`` for ``n = 0..n_max`` by forward propagation.

    Per state we carry the probability mass, ``E[K_i; X_n ends here]`` and
    ``E[K_i K_j; X_n ends here]``; cost is ``O(n |E| m^2)``.
    """
    if n_max < 0:
        raise ValueError("n must be >= 0")
    if exact is None:
        exact = chain.exact
    conv = Fraction if exact else float
    N, m = chain.n_states, chain.m
    trans = [(t.source, t.target, conv(t.prob), [conv(x) for x in t.out])
             for t in chain.transitions]
    zero = conv(0)
    P = [zero] * N
    P[chain.initial] = conv(1)
    S1 = [[zero] * m for _ in range(N)]
    S2 = [[[zero] * m for _ in range(m)] for _ in range(N)]

    def snapshot(k):
        mean = [sum((S1[s][i] for s in range(N)), zero) for i in range(m)]
        second = [[sum((S2[s][i][j] for s in range(N)), zero) for j in range(m)]
                  for i in range(m)]
        cov = tuple(tuple(second[i][j] - mean[i] * mean[j] for j in range(m))
                    for i in range(m))
        return FiniteMoments(k, tuple(mean), cov)

    seq = [snapshot(0)]
    for k in range(1, n_max + 1):
        P2 = [zero] * N
        T1 = [[zero] * m for _ in range(N)]
        T2 = [[[zero] * m for _ in range(m)] for _ in range(N)]
        for s, t, p, o in trans:
            ps = P[s]
            if ps == 0:
                continue
            P2[t] += p * ps
            s1, t1 = S1[s], T1[t]
            for i in range(m):
                t1[i] += p * (s1[i] + o[i] * ps)
            s2, t2 = S2[s], T2[t]
            for i in range(m):
                for j in range(m):
                    t2[i][j] += p * (s2[i][j] + o[i] * s1[j] + o[j] * s1[i] + o[i] * o[j] * ps)
        P, S1, S2 = P2, T1, T2
        seq.append(snapshot(k))
    return seq


def exact_dp_moments(chain: MarkovChain, n: int, exact: bool | None = None) -> FiniteMoments:
    return dp_moment_sequence(chain, n, exact)[-1]


# --------------------------------------------------------------- Monte Carlo

@dataclass(frozen=True)
class MonteCarloResult:
    n: int
    samples: int
    seed: int
    mean: np.ndarray          # sample mean of K_n
    cov: np.ndarray           # sample covariance of K_n
    standardized: np.ndarray  # (samples, m)
    whitened: bool
    skewness: np.ndarray
    excess_kurtosis: np.ndarray

    def to_dict(self) -> dict:
        return {
            "n": self.n, "samples": self.samples, "seed": self.seed,
            "mean": self.mean.tolist(), "cov": self.cov.tolist(),
            "mean_per_n": (self.mean / self.n).tolist() if self.n else None,
            "cov_per_n": (self.cov / self.n).tolist() if self.n else None,
            "whitened": self.whitened,
            "skewness": self.skewness.tolist(),
            "excess_kurtosis": self.excess_kurtosis.tolist(),
        }


SHARD = 1024


def _simulate(tables, n: int, count: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    cum, edge_of, target, out, start = tables
    rng = np.random.default_rng(seed_seq)
    state = np.full(count, start, dtype=np.int64)
    K = np.zeros((count, out.shape[1]))
    for _ in range(n):
        u = rng.random(count)
        slot = (u[:, None] >= cum[state]).sum(axis=1)
        e = edge_of[state, slot]
        K += out[e]
        state = target[e]
    return K


def _tables(chain: MarkovChain):
    """Per-state cumulative thresholds and edge lookup for vectorised sampling."""
    succ = chain.out_edges()
    D = max(len(s) for s in succ)
    N = chain.n_states
    cum = np.full((N, D - 1), 2.0)  # 2.0 is never reached by u in [0, 1)
    edge_of = np.zeros((N, D), dtype=np.int64)
    for v, ks in enumerate(succ):
        acc = 0.0
        for d, k in enumerate(ks):
            edge_of[v, d] = k
            if d < len(ks) - 1:
                acc += float(chain.transitions[k].prob)
                cum[v, d] = acc
    target = np.array([t.target for t in chain.transitions], dtype=np.int64)
    out = np.array([[float(x) for x in t.out] for t in chain.transitions], dtype=float)
    out = out.reshape(len(chain.transitions), chain.m)
    return cum, edge_of, target, out, chain.initial


def monte_carlo(chain: MarkovChain, n: int, samples: int, seed: int, *,
                e: Sequence | None = None, sigma: Sequence | None = None,
                workers: int = 1) -> MonteCarloResult:
    """Simulate ``samples`` paths of length ``n`` and standardize ``K_n``.

    Samples are drawn in fixed shards, each with its own stream spawned
    from ``seed``, so the result does not depend on ``workers``.
    Standardization is ``(K_n - e n) / sqrt(n)``, whitened by the Cholesky
    factor of ``sigma``; if ``sigma`` is singular only the coordinates
    with positive variance are scaled and ``whitened`` is False.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if e is None or sigma is None:
        from .chain import final_component
        rep = moments_determinant(final_component(chain))
        e, sigma = rep.e, rep.sigma
    tables = _tables(chain)
    shards = [(i, min(SHARD, samples - i * SHARD)) for i in range((samples + SHARD - 1) // SHARD)]
    seqs = np.random.SeedSequence(seed).spawn(len(shards))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda s: _simulate(tables, n, s[1], seqs[s[0]]), shards))
    else:
        parts = [_simulate(tables, n, c, seqs[i]) for i, c in shards]
    K = np.vstack(parts)
    m = chain.m
    mean = K.mean(axis=0)
    cov = np.cov(K, rowvar=False, ddof=1).reshape(m, m) if samples > 1 else np.zeros((m, m))
    ev = np.array([float(x) for x in e])
    S = np.array([[float(x) for x in row] for row in sigma]).reshape(m, m)
    Z = (K - ev * n) / math.sqrt(max(n, 1))
    whitened = True
    try:
        L = np.linalg.cholesky(S)
        if np.min(np.abs(np.diag(L))) < 1e-12:
            raise np.linalg.LinAlgError("singular")
        W = np.linalg.solve(L, Z.T).T
    except np.linalg.LinAlgError:
        whitened = False
        d = np.sqrt(np.clip(np.diag(S), 0, None))
        W = np.where(d > 0, Z / np.where(d > 0, d, 1), Z)
    return MonteCarloResult(
        n=n, samples=samples, seed=seed, mean=mean, cov=cov, standardized=W,
        whitened=whitened,
        skewness=np.atleast_1d(stats.skew(W, axis=0)),
        excess_kurtosis=np.atleast_1d(stats.kurtosis(W, axis=0)),
    )
