"""Example chains: w-NAF Hamming-weight transducers, products, block counters."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence, Union

from .chain import ChainError, MarkovChain, make_chain, to_number

ALPHABET = (0, 1)


@dataclass(frozen=True)
class Transducer:
    """Input-deterministic, input-complete transducer over ``{0, 1}``.

    ``transitions`` are ``(source, input, target, output)`` tuples.
    """

    states: tuple[str, ...]
    initial: str
    transitions: tuple[tuple[str, int, str, Any], ...]

    def __post_init__(self):
        seen = set()
        for src, a, tgt, _ in self.transitions:
            if src not in self.states or tgt not in self.states:
                raise ValueError(f"unknown state in transition {src}->{tgt}")
            if a not in ALPHABET:
                raise ValueError(f"input letter {a!r} not in {ALPHABET}")
            if (src, a) in seen:
                raise ValueError(f"two transitions for ({src}, {a})")
            seen.add((src, a))
        missing = [(s, a) for s in self.states for a in ALPHABET if (s, a) not in seen]
        if missing:
            raise ValueError(f"transducer is not input-complete: {missing}")

    def step(self, state: str, letter: int) -> tuple[str, Any]:
        for src, a, tgt, out in self.transitions:
            if src == state and a == letter:
                return tgt, out
        raise KeyError((state, letter))

    def run(self, word: Sequence[int], state: str | None = None) -> tuple[str, list]:
        s = self.initial if state is None else state
        outs = []
        for a in word:
            s, o = self.step(s, a)
            outs.append(o)
        return s, outs


def wnaf_transducer(w: int) -> Transducer:
    """Transducer with ``w + 1`` states computing the Hamming weight of the w-NAF."""
    if w < 2:
        raise ValueError("w must be at least 2")
    s = [str(i) for i in range(1, w + 2)]  # s[i - 1] is state i
    tr = [("1", 0, "1", 0), ("1", 1, "2", 1)]
    for i in range(2, w):
        tr += [(str(i), 0, str(i + 1), 0), (str(i), 1, str(i + 1), 0)]
    tr += [(str(w), 0, "1", 0), (str(w), 1, str(w + 1), 0),
           (str(w + 1), 1, str(w + 1), 0), (str(w + 1), 0, "2", 1)]
    return Transducer(tuple(s), "1", tuple(tr))


InputProbs = Union[Mapping[int, Any], Callable[[tuple[str, str]], Mapping[int, Any]]]


def product(tA: Transducer, tB: Transducer, input_probs: InputProbs,
            names: Sequence[str] = ("A", "B"), exact: bool = True) -> MarkovChain:
    """Synchronised product driven by random input letters.

    ``input_probs`` is either one distribution on ``{0, 1}`` or a function
    giving the distribution at each product state.  Only pairs reachable
    from the initial pair are kept.
    """
    def dist(pair):
        d = input_probs(pair) if callable(input_probs) else input_probs
        d = {a: to_number(d.get(a, 0), exact) for a in ALPHABET}
        if any(p <= 0 for p in d.values()):
            raise ChainError(f"degenerate input distribution at {pair}: {d}")
        if (sum(d.values()) != 1) if exact else abs(sum(d.values()) - 1) > 1e-12:
            raise ChainError(f"input distribution at {pair} does not sum to 1")
        return d

    start = (tA.initial, tB.initial)
    order = [start]
    seen = {start}
    queue = deque([start])
    trans = []
    label = lambda p: f"({p[0]},{p[1]})"
    while queue:
        pair = queue.popleft()
        d = dist(pair)
        for a in ALPHABET:
            ta, oa = tA.step(pair[0], a)
            tb, ob = tB.step(pair[1], a)
            nxt = (ta, tb)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
            trans.append((label(pair), label(nxt), d[a], (oa, ob)))
    return make_chain([label(p) for p in order], trans, tuple(names), exact)


BLOCK_KINDS = ("10-11", "00-11")


def block_chain(kind: str, p00: Any, p11: Any, *, with_initial: bool | None = None,
                p_init0: Any = Fraction(1, 2)) -> MarkovChain:
    """Two-state 0-1 source counting two kinds of length-2 blocks.

    State ``s`` remembers the last letter; ``p00`` and ``p11`` are the
    probabilities of repeating it.  Floats select float mode.  For
    ``00-11`` an extra initial state (the first letter is drawn with
    ``p_init0``) precedes the two-state core, as in the original
    transducers; ``with_initial`` overrides that default.
    """
    if kind not in BLOCK_KINDS:
        raise ValueError(f"kind must be one of {BLOCK_KINDS}")
    exact = not any(isinstance(p, float) for p in (p00, p11, p_init0))
    p00 = to_number(p00, exact)
    p11 = to_number(p11, exact)
    p_init0 = to_number(p_init0, exact)
    for p in (p00, p11, p_init0):
        if not 0 < p < 1:
            raise ValueError("probabilities must lie strictly between 0 and 1")
    if kind == "10-11":
        outs = {"00": (0, 0), "01": (0, 0), "10": (1, 0), "11": (0, 1)}
        names = ("k10", "k11")
    else:
        outs = {"00": (1, 0), "01": (0, 0), "10": (0, 0), "11": (0, 1)}
        names = ("k00", "k11")
    trans = [("0", "0", p00, outs["00"]), ("0", "1", 1 - p00, outs["01"]),
             ("1", "1", p11, outs["11"]), ("1", "0", 1 - p11, outs["10"])]
    if with_initial is None:
        with_initial = kind == "00-11"
    states = ["0", "1"]
    if with_initial:
        states = ["init"] + states
        trans = [("init", "0", p_init0, (0, 0)), ("init", "1", 1 - p_init0, (0, 0))] + trans
    return make_chain(states, trans, names, exact)


def independence_curve_10_11(p11: float) -> float:
    """``p00`` at which 10- and 11-block counts become asymptotically independent."""
    if not 0 < p11 < 1:
        raise ValueError("p11 must lie strictly between 0 and 1")
    return -0.5 * p11 + 2 - 0.5 * math.sqrt(p11 * p11 - 8 * p11 + 8)
