import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from markovmoments.builders import (Transducer, block_chain, independence_curve_10_11,
                                    product, wnaf_transducer)
from markovmoments.chain import ChainError, final_component, validate
from markovmoments.cyclespace import cycle_rank_test
from markovmoments.moments import moments_determinant


def wnaf_weight(n, w):
    """Hamming weight of the width-w non-adjacent form, computed digit by digit."""
    count = 0
    while n:
        if n & 1:
            d = n % (1 << w)
            if d >= 1 << (w - 1):
                d -= 1 << w
            n -= d
            count += 1
        n >>= 1
    return count


def test_wnaf2_shape():
    t = wnaf_transducer(2)
    assert len(t.states) == 3 and len(t.transitions) == 6


@pytest.mark.parametrize("w", [2, 3, 4, 5])
def test_wnaf_counts_weight(w):
    t = wnaf_transducer(w)
    for n in range(1, 1500):
        bits = [int(b) for b in reversed(bin(n)[2:])] + [0] * (w + 1)
        assert sum(t.run(bits)[1]) == wnaf_weight(n, w)


@pytest.mark.parametrize("w", [2, 3, 4])
def test_wnaf_closed_walks(w):
    t = wnaf_transducer(w)
    assert t.run([0]) == ("1", [0])
    end, outs = t.run([1] + [0] * (w - 1))
    assert end == "1" and sum(outs) == 1


def test_wnaf_c3_values():
    # the same input word read by both transducers gives different weights
    word = [1, 1, 0, 0, 0]
    assert sum(wnaf_transducer(2).run(word)[1]) == 2
    assert sum(wnaf_transducer(3).run(word)[1]) == 1


def test_transducer_rejects_incomplete():
    with pytest.raises(ValueError):
        Transducer(("a",), "a", (("a", 0, "a", 0),))
    with pytest.raises(ValueError):
        Transducer(("a",), "a", (("a", 0, "a", 0), ("a", 0, "a", 1), ("a", 1, "a", 0)))


def test_self_product_certificate():
    c = product(wnaf_transducer(2), wnaf_transducer(2), {0: F(1, 2), 1: F(1, 2)})
    cert = cycle_rank_test(final_component(c))
    assert not cert.independent
    assert cert.coefficients == (0, 1, -1)


def test_product_23_uniform():
    c = product(wnaf_transducer(2), wnaf_transducer(3), {0: F(1, 2), 1: F(1, 2)})
    assert validate(c).ok
    r = moments_determinant(final_component(c))
    assert r.e == (F(1, 3), F(1, 4))
    assert r.sigma == ((F(2, 27), F(7, 216)), (F(7, 216), F(1, 32)))
    assert r.sigma_regular


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(2, 3), (2, 4), (3, 4), (3, 5)]))
def test_products_independent_any_distribution(seed, ws):
    rng = random.Random(seed)
    table = {}

    def dist(pair):
        if pair not in table:
            p = F(rng.randint(1, 19), 20)
            table[pair] = {0: p, 1: 1 - p}
        return table[pair]

    c = product(wnaf_transducer(ws[0]), wnaf_transducer(ws[1]), dist)
    assert validate(c).ok
    assert cycle_rank_test(final_component(c)).independent


def test_product_degenerate():
    with pytest.raises(ChainError):
        product(wnaf_transducer(2), wnaf_transducer(3), {0: 1, 1: 0})


def test_block_chain_errors():
    with pytest.raises(ValueError):
        block_chain("01-11", F(1, 2), F(1, 2))
    with pytest.raises(ValueError):
        block_chain("10-11", 0, F(1, 2))
    with pytest.raises(ValueError):
        block_chain("00-11", F(1, 2), 1.0)


def test_block_chain_shapes():
    a = block_chain("10-11", F(1, 3), F(1, 4))
    assert a.states == ("0", "1") and len(a.transitions) == 4
    b = block_chain("00-11", F(1, 3), F(1, 4))
    assert b.states[0] == "init" and validate(b).ok
    assert final_component(b).states == ("0", "1")
    assert not block_chain("10-11", 0.3, 0.4).exact


def test_independence_curve_values():
    assert round(independence_curve_10_11(0.5), 4) == 0.7192
    assert abs(independence_curve_10_11(0.5) - (1.75 - math.sqrt(4.25) / 2)) < 1e-15
    assert abs(independence_curve_10_11(1 - 1e-12) - 1) < 1e-9
    assert abs(independence_curve_10_11(1e-12) - (2 - math.sqrt(2))) < 1e-9
    with pytest.raises(ValueError):
        independence_curve_10_11(1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.001, 0.999))
def test_independence_curve_range_and_zero(p11):
    p00 = independence_curve_10_11(p11)
    assert 2 - math.sqrt(2) < p00 < 1
    r = moments_determinant(final_component(block_chain("10-11", p00, p11)))
    assert abs(r.sigma[0][1]) < 1e-9
