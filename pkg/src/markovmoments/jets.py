"""Total-degree-2 truncated Taylor arithmetic and a division-free determinant.

We evaluate ``f(x_1, ..., x_m, z) = det(I - z A(x))`` on the final
component with the substitution ``x_i = exp(t_i)``, ``z = exp(zeta)``.
Then, at ``t = zeta = 0``:

* coefficient of ``t_i``           is ``f_{x_i}``
* coefficient of ``zeta``          is ``f_z``
* coefficient of ``t_i t_j``       is ``f_{x_i x_j}``       (i != j)
* twice the coefficient of ``t_i^2``  is ``f_{x_i x_i} + f_{x_i}``
* twice the coefficient of ``zeta^2`` is ``f_{zz} + f_z``
* coefficient of ``t_i zeta``      is ``f_{x_i z}``

Jets are not a field (no inverse without a constant term), so the
determinant is computed without divisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .chain import is_exact

FLOAT_ZERO_TOL = 1e-12


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


class Jet2:
    """Element of ``K[v_0..v_{n-1}] / (degree >= 3)``.

    ``quad`` is stored for the pairs ``i <= j`` in row-major order.
    """

    __slots__ = ("nvars", "c0", "lin", "quad")

    def __init__(self, nvars: int, c0: Any = 0, lin: Sequence | None = None,
                 quad: Sequence | None = None):
        self.nvars = nvars
        self.c0 = c0
        zero = c0 * 0
        self.lin = tuple(lin) if lin is not None else (zero,) * nvars
        npairs = nvars * (nvars + 1) // 2
        self.quad = tuple(quad) if quad is not None else (zero,) * npairs
        if len(self.lin) != nvars or len(self.quad) != npairs:
            raise ValueError("coefficient vectors do not match the number of variables")

    @classmethod
    def constant(cls, nvars: int, c: Any) -> "Jet2":
        return cls(nvars, c)

    @classmethod
    def from_dict(cls, nvars: int, coeffs: dict, zero: Any = Fraction(0)) -> "Jet2":
        """Build from ``{(): c, (i,): a, (i, j): b}`` with ``i <= j``."""
        c0 = coeffs.get((), zero)
        lin = [coeffs.get((i,), zero) for i in range(nvars)]
        quad = [coeffs.get(p, zero) for p in _pairs(nvars)]
        return cls(nvars, c0, lin, quad)

    def _index(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        n = self.nvars
        return i * n - i * (i - 1) // 2 + (j - i)

    def q(self, i: int, j: int) -> Any:
        """Coefficient of ``v_i v_j``."""
        return self.quad[self._index(i, j)]

    def _coerce(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            if other.nvars != self.nvars:
                raise ValueError("jets in different numbers of variables")
            return other
        return Jet2(self.nvars, other)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet2(self.nvars, self.c0 + o.c0,
                    [a + b for a, b in zip(self.lin, o.lin)],
                    [a + b for a, b in zip(self.quad, o.quad)])

    __radd__ = __add__

    def __neg__(self):
        return Jet2(self.nvars, -self.c0, [-a for a in self.lin], [-a for a in self.quad])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.nvars, self.c0 * other, [a * other for a in self.lin],
                        [a * other for a in self.quad])
        o = self._coerce(other)
        a0, b0 = self.c0, o.c0
        al, bl = self.lin, o.lin
        quad = []
        for (i, j), qa, qb in zip(_pairs(self.nvars), self.quad, o.quad):
            cross = al[i] * bl[j] if i == j else al[i] * bl[j] + al[j] * bl[i]
            quad.append(a0 * qb + b0 * qa + cross)
        return Jet2(self.nvars, a0 * b0, [a0 * y + b0 * x for x, y in zip(al, bl)], quad)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            other = Jet2(self.nvars, other)
        return (self.nvars == other.nvars and self.c0 == other.c0
                and self.lin == other.lin and self.quad == other.quad)

    def __hash__(self):
        return hash((self.nvars, self.c0, self.lin, self.quad))

    def is_zero(self) -> bool:
        return self.c0 == 0 and all(x == 0 for x in self.lin) and all(x == 0 for x in self.quad)

    def __repr__(self):
        return f"Jet2({self.nvars}, {self.c0!r}, {list(self.lin)!r}, {list(self.quad)!r})"


def jet_exp_linear(c: Any, ell: Sequence) -> Jet2:
    """Degree-2 truncation of ``c * exp(sum ell_i v_i)``."""
    n = len(ell)
    quad = []
    for i, j in _pairs(n):
        quad.append(c * ell[i] * ell[i] / 2 if i == j else c * ell[i] * ell[j])
    return Jet2(n, c, [c * a for a in ell], quad)


def det_cofactor(M: Sequence[Sequence]) -> Any:
    """Laplace expansion along the first row; for small matrices and tests."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in M[1:])]
        term = M[0][j] * det_cofactor(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def det_division_free(M: Sequence[Sequence]) -> Any:
    """Determinant over a commutative ring with ``O(n^4)`` ring operations.

    Bird's iteration: with ``mu(X)`` the strictly upper part of ``X`` plus
    diagonal entries ``-(x_{i+1,i+1} + ... + x_{nn})``, set
    ``X_1 = A`` and ``X_{k+1} = mu(X_k) A``; then
    ``det A = (-1)^(n-1) (X_n)_{11}``.
    """
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    zero = A[0][0] * 0
    X = A
    for _ in range(n - 1):
        mu = [[zero] * n for _ in range(n)]
        tail = zero
        for i in range(n - 1, -1, -1):
            mu[i][i] = -tail
            tail = tail + X[i][i]
            for j in range(i + 1, n):
                mu[i][j] = X[i][j]
        Y = [[zero] * n for _ in range(n)]
        for i in range(n):
            for k in range(i, n):
                a = mu[i][k]
                if isinstance(a, Jet2) and a.is_zero():
                    continue
                row = A[k]
                Yi = Y[i]
                for j in range(n):
                    Yi[j] = Yi[j] + a * row[j]
        X = Y
    d = X[0][0]
    return d if (n - 1) % 2 == 0 else -d


@dataclass(frozen=True)
class CharDerivatives:
    """Partial derivatives of ``det(I - z A(x))`` at ``(1, ..., 1, 1)``.

    ``fxx[i][j]`` is ``f_{x_i x_j}`` off the diagonal and
    ``f_{x_i x_i} + f_{x_i}`` on it; ``fzz`` is ``f_{zz} + f_z``.
    """

    f0: Any
    fz: Any
    fx: tuple
    fxx: tuple
    fzz: Any
    fxz: tuple


def transition_jet_matrix(g, outputs: Sequence[int] | None = None) -> list[list[Jet2]]:
    """``I - z A(x)`` as a matrix of jets in ``(t_1..t_m, zeta)``."""
    m = len(g.transitions[0].out) if g.transitions else 0
    idx = list(range(m) if outputs is None else outputs)
    nv = len(idx) + 1
    one = g.transitions[0].prob * 0 + 1
    zero = one * 0
    n = g.n_states
    M = [[Jet2(nv, one if i == j else zero) for j in range(n)] for i in range(n)]
    for t in g.transitions:
        ell = [t.out[i] for i in idx] + [one]
        M[t.source][t.target] = M[t.source][t.target] - jet_exp_linear(t.prob, ell)
    return M


def char_derivatives(g, outputs: Sequence[int] | None = None,
                     check: bool = True) -> CharDerivatives:
    """Derivative bundle of the characteristic function of a stochastic component."""
    M = transition_jet_matrix(g, outputs)
    d = det_division_free(M)
    nv = d.nvars
    m = nv - 1
    exact = is_exact(d.c0)
    if check:
        bad = d.c0 != 0 if exact else abs(d.c0) > FLOAT_ZERO_TOL
        if bad:
            raise ArithmeticError(f"det(I - A) = {d.c0} != 0; component is not stochastic")
    zeta = m
    fxx = tuple(tuple(2 * d.q(i, i) if i == j else d.q(i, j) for j in range(m))
                for i in range(m))
    return CharDerivatives(
        f0=d.c0,
        fz=d.lin[zeta],
        fx=tuple(d.lin[:m]),
        fxx=fxx,
        fzz=2 * d.q(zeta, zeta),
        fxz=tuple(d.q(i, zeta) for i in range(m)),
    )
