"""Markov chains whose transitions carry vectors of outputs.

A chain has states ``0..M-1`` (state ``0`` is the initial state), a multiset
of transitions with positive probabilities, and ``m`` output functions
given per transition.  Numbers are :class:`fractions.Fraction` in exact
mode and ``float`` in float mode; a chain never mixes the two.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence, Union

from . import graph

Number = Union[Fraction, float]

FLOAT_ROW_TOL = 1e-9


class ChainError(ValueError):
    """Raised for chains that are malformed or violate the model."""


class ChainSyntaxError(ChainError):
    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)


class NotFinallyConnected(ChainError):
    pass


def to_number(value: Any, exact: bool = True) -> Number:
    """Parse ``"3/7"``, ``"0.25"``, ints or floats into a chain number.

    Decimal strings are read as exact decimal fractions in exact mode.
    """
    if isinstance(value, bool):
        raise ChainError(f"not a number: {value!r}")
    if isinstance(value, Fraction):
        return value if exact else float(value)
    if isinstance(value, int):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ChainError(f"not a finite number: {value!r}")
        return Fraction(repr(value)) if exact else value
    if isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ChainError(f"not a rational or decimal: {value!r}") from None
        return q if exact else float(q)
    raise ChainError(f"not a number: {value!r}")


def is_exact(x: Any) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True, slots=True)
class Transition:
    source: int
    target: int
    prob: Number
    out: tuple[Number, ...] = ()


@dataclass(frozen=True)
class MarkovChain:
    """Finite Markov chain with ``m`` output functions on its transitions.

    Construction checks positivity, stochastic rows and a consistent output
    dimension.  Reachability is *not* enforced here; :func:`validate`
    reports it.
    """

    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    output_names: tuple[str, ...] = ()
    exact: bool = field(default=True)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "output_names", tuple(self.output_names))
        if not self.states:
            raise ChainError("a chain needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise ChainError("duplicate state names")
        n, m = len(self.states), len(self.output_names)
        kind = Fraction if self.exact else float
        sums: list[Number] = [kind(0)] * n
        for t in self.transitions:
            if not (0 <= t.source < n and 0 <= t.target < n):
                raise ChainError(f"transition {t} refers to an unknown state")
            if not isinstance(t.prob, kind) or any(not isinstance(x, kind) for x in t.out):
                raise ChainError(f"transition {t} mixes exact and float numbers")
            if not t.prob > 0:
                raise ChainError(
                    f"probability <= 0 on {self.states[t.source]}->{self.states[t.target]}")
            if len(t.out) != m:
                raise ChainError(
                    f"inconsistent output dimension: expected {m}, got {len(t.out)}")
            sums[t.source] += t.prob
        for i, s in enumerate(sums):
            bad = s != 1 if self.exact else abs(s - 1.0) > FLOAT_ROW_TOL
            if bad:
                raise ChainError(f"row sum != 1 at state {self.states[i]!r}: {s}")

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def m(self) -> int:
        return len(self.output_names)

    @property
    def initial(self) -> int:
        return 0

    def index(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise ChainError(f"unknown state {name!r}") from None

    def output_values(self, i: int) -> list[Number]:
        """Per-transition values of output ``i`` (``-1`` is the constant 1)."""
        if i == -1:
            return [t.prob * 0 + 1 for t in self.transitions]
        return [t.out[i] for t in self.transitions]

    def with_outputs(self, values: Sequence[Sequence[Any]],
                     names: Sequence[str] | None = None) -> "MarkovChain":
        """Same graph and probabilities, new per-transition output vectors."""
        if len(values) != len(self.transitions):
            raise ChainError("need one output vector per transition")
        dim = len(values[0]) if values else 0
        if names is None:
            names = self.output_names if dim == self.m else [f"k{i + 1}" for i in range(dim)]
        trans = [Transition(t.source, t.target, t.prob,
                            tuple(to_number(x, self.exact) for x in v))
                 for t, v in zip(self.transitions, values)]
        return MarkovChain(self.states, trans, tuple(names), self.exact)

    def select_outputs(self, idx: Sequence[int]) -> "MarkovChain":
        vals = [[t.out[i] for i in idx] for t in self.transitions]
        return self.with_outputs(vals, [self.output_names[i] for i in idx])

    def with_probs(self, probs: Sequence[Any]) -> "MarkovChain":
        trans = [Transition(t.source, t.target, to_number(p, self.exact), t.out)
                 for t, p in zip(self.transitions, probs)]
        return MarkovChain(self.states, trans, self.output_names, self.exact)

    def as_float(self) -> "MarkovChain":
        if not self.exact:
            return self
        trans = [Transition(t.source, t.target, float(t.prob), tuple(float(x) for x in t.out))
                 for t in self.transitions]
        return MarkovChain(self.states, trans, self.output_names, exact=False)

    def out_edges(self) -> list[list[int]]:
        return graph.out_edges(self)


def make_chain(states: Sequence[str], transitions: Iterable[Sequence[Any]],
               outputs: Sequence[str] = (), exact: bool = True) -> MarkovChain:
    """Build a chain from ``(from, to, prob, out)`` tuples using state names."""
    states = [str(s) for s in states]
    pos = {s: i for i, s in enumerate(states)}
    trans = []
    for item in transitions:
        src, tgt, p = item[0], item[1], item[2]
        out = item[3] if len(item) > 3 else ()
        for name in (src, tgt):
            if str(name) not in pos:
                raise ChainError(f"unknown state {name!r}")
        trans.append(Transition(pos[str(src)], pos[str(tgt)], to_number(p, exact),
                                tuple(to_number(x, exact) for x in out)))
    return MarkovChain(tuple(states), tuple(trans), tuple(outputs), exact)


# ---------------------------------------------------------------- file format

def chain_from_dict(data: Mapping[str, Any], exact: bool = True) -> MarkovChain:
    if not isinstance(data, Mapping):
        raise ChainSyntaxError("top level must be a JSON object")
    for key in ("states", "transitions"):
        if key not in data:
            raise ChainSyntaxError(f"missing key {key!r}")
    states = [str(s) for s in data["states"]]
    initial = str(data.get("initial", states[0] if states else ""))
    if initial not in states:
        raise ChainError(f"unknown state {initial!r}")
    # the initial state is always index 0
    states.remove(initial)
    states.insert(0, initial)
    outputs = [str(o) for o in data.get("outputs", [])]
    trans = []
    for k, t in enumerate(data["transitions"]):
        if not isinstance(t, Mapping) or not {"from", "to", "prob"} <= set(t):
            raise ChainSyntaxError(f"transition #{k} needs 'from', 'to' and 'prob'")
        out = t.get("out", [])
        if not isinstance(out, list):
            raise ChainSyntaxError(f"transition #{k}: 'out' must be a list")
        if len(out) != len(outputs):
            raise ChainError(
                f"inconsistent output dimension in transition #{k}: "
                f"expected {len(outputs)}, got {len(out)}")
        trans.append((str(t["from"]), str(t["to"]), t["prob"], out))
    return make_chain(states, trans, outputs, exact)


def parse_chain(text: str, exact: bool = True) -> MarkovChain:
    """Parse a chain file (JSON).  Errors carry line/column for syntax problems."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChainSyntaxError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return chain_from_dict(data, exact)


def load_chain(path: str, exact: bool = True) -> MarkovChain:
    with open(path, encoding="utf-8") as fh:
        return parse_chain(fh.read(), exact)


def fmt_number(x: Number) -> str | float:
    """Rationals as ``"p/q"`` strings, floats unchanged (shortest repr in JSON)."""
    return str(x) if is_exact(x) else float(x)


def chain_to_dict(chain: MarkovChain) -> dict:
    return {
        "states": list(chain.states),
        "initial": chain.states[0],
        "outputs": list(chain.output_names),
        "transitions": [
            {"from": chain.states[t.source], "to": chain.states[t.target],
             "prob": fmt_number(t.prob) if chain.exact else repr(t.prob),
             "out": [fmt_number(x) if chain.exact else repr(x) for x in t.out]}
            for t in chain.transitions
        ],
    }


def dump_chain(chain: MarkovChain) -> str:
    return json.dumps(chain_to_dict(chain), indent=2, ensure_ascii=False)


# ------------------------------------------------------------------ validation

@dataclass(frozen=True)
class ValidationReport:
    stochastic_ok: bool
    reachable_ok: bool
    unreachable: tuple[int, ...]
    leaf_count: int
    terminal_components: tuple[tuple[int, ...], ...]
    final_states: tuple[int, ...]
    period: int | None
    finally_connected: bool
    finally_aperiodic: bool

    @property
    def ok(self) -> bool:
        return (self.stochastic_ok and self.reachable_ok
                and self.finally_connected and self.finally_aperiodic)

    def to_dict(self, chain: MarkovChain) -> dict:
        names = chain.states
        return {
            "ok": self.ok,
            "stochastic_ok": self.stochastic_ok,
            "reachable_ok": self.reachable_ok,
            "unreachable": [names[i] for i in self.unreachable],
            "leaf_count": self.leaf_count,
            "terminal_components": [[names[i] for i in c] for c in self.terminal_components],
            "final_component": [names[i] for i in self.final_states],
            "period": self.period,
            "finally_connected": self.finally_connected,
            "finally_aperiodic": self.finally_aperiodic,
        }


def validate(chain: MarkovChain) -> ValidationReport:
    # rows are checked at construction, so a MarkovChain is always stochastic
    reach = graph.reachable(chain, chain.initial)
    unreachable = tuple(i for i in range(chain.n_states) if i not in reach)
    cond = graph.scc_condensation(chain)
    leaves = cond.leaves()
    terminal = tuple(cond.components[c] for c in leaves)
    final: tuple[int, ...] = ()
    per = None
    if len(leaves) == 1:
        final = terminal[0]
        per = graph.period(chain, final)
    return ValidationReport(
        stochastic_ok=True,
        reachable_ok=not unreachable,
        unreachable=unreachable,
        leaf_count=len(leaves),
        terminal_components=terminal,
        final_states=final,
        period=per,
        finally_connected=len(leaves) == 1,
        finally_aperiodic=per == 1,
    )


def restrict(chain: MarkovChain, states: Sequence[int]) -> MarkovChain:
    """Sub-chain on a set of states closed under outgoing transitions.

    States keep their relative order, which fixes the 1-based canonical
    numbering used by the Laplacian sign prefactor.
    """
    keep = sorted(states)
    pos = {s: i for i, s in enumerate(keep)}
    trans = []
    for t in chain.transitions:
        if t.source in pos:
            if t.target not in pos:
                raise ChainError("state set is not closed under outgoing transitions")
            trans.append(Transition(pos[t.source], pos[t.target], t.prob, t.out))
    return MarkovChain(tuple(chain.states[s] for s in keep), tuple(trans),
                       chain.output_names, chain.exact)


def final_component(chain: MarkovChain, require_aperiodic: bool = True) -> MarkovChain:
    """The final component as a (strongly connected) Markov chain.

    Refuses chains that are not finally connected, have unreachable states,
    or (by default) whose final component is periodic.
    """
    rep = validate(chain)
    if not rep.reachable_ok:
        raise NotFinallyConnected(
            "states not reachable from the initial state: "
            + ", ".join(chain.states[i] for i in rep.unreachable))
    if not rep.finally_connected:
        raise NotFinallyConnected(f"condensation has {rep.leaf_count} leaves")
    if require_aperiodic and not rep.finally_aperiodic:
        raise NotFinallyConnected(f"final component has period {rep.period}")
    return restrict(chain, rep.final_states)


# ------------------------------------------------------- state-based outputs

def from_state_outputs(chain: MarkovChain, f: Mapping[Any, Sequence[Any]],
                       names: Sequence[str] | None = None) -> MarkovChain:
    """Give every transition leaving state ``i`` the output vector ``f(i)``.

    ``f`` may be keyed by state name or by state index.
    """
    vals = []
    for t in chain.transitions:
        name = chain.states[t.source]
        if name in f:
            v = f[name]
        elif t.source in f:
            v = f[t.source]
        else:
            raise ChainError(f"no output given for state {name!r}")
        vals.append(list(v))
    dims = {len(v) for v in vals}
    if len(dims) > 1:
        raise ChainError("inconsistent output dimension in f")
    if names is None:
        names = [f"f{i + 1}" for i in range(dims.pop() if dims else 0)]
    return chain.with_outputs(vals, names)


def to_state_outputs(chain: MarkovChain) -> dict[str, tuple[Number, ...]]:
    """Recover state outputs; fails when a state's outgoing outputs differ."""
    f: dict[str, tuple[Number, ...]] = {}
    for t in chain.transitions:
        name = chain.states[t.source]
        if name in f and f[name] != t.out:
            raise ChainError(
                f"outputs differ among transitions leaving {name!r}: {f[name]} vs {t.out}")
        f[name] = t.out
    return f
