import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chainwarn.chainring import (SubsetSpec, check_condition, coset_representatives, make_chain_ring,
                                 pi_valuation, ring_arith, smallest_irreducible)
from chainwarn.errors import ConditionError, RingMismatchError

RINGS = [(2, 1, 1), (2, 1, 3), (3, 1, 2), (2, 2, 1), (2, 2, 2), (3, 2, 2), (5, 1, 1), (2, 3, 2)]


def test_construction_sizes():
    assert make_chain_ring(2, 1, 3).size == 8
    f4 = make_chain_ring(2, 2, 1)
    assert f4.size == 4 and f4.modulus == (1, 1, 1)
    gr = make_chain_ring(2, 2, 2)
    assert gr.size == 16 and gr.q == 4 and len(list(gr.elements())) == 16


def test_bad_prime():
    with pytest.raises(ValueError):
        make_chain_ring(4, 1, 1)


def test_smallest_irreducible_is_lexicographically_first():
    # over F_2 the cubics x^3+x+1 and x^3+x^2+1 are irreducible; the first wins
    assert smallest_irreducible(2, 3) == (1, 1, 0, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)


def test_arithmetic_examples():
    z8 = make_chain_ring(2, 1, 3)
    assert ring_arith(z8.element(5), z8.element(5), "add") == z8.element(2)
    assert ring_arith(z8.element(2), z8.element(4), "mul") == z8.zero
    gr = make_chain_ring(2, 2, 2)
    x = gr.element([0, 1])
    assert x * x == gr.element([3, 3])
    assert ring_arith(x, None, "neg") == gr.element([0, 3])


def test_mixed_rings_rejected():
    a = make_chain_ring(2, 1, 2).one
    b = make_chain_ring(2, 1, 3).one
    with pytest.raises(RingMismatchError):
        _ = a + b


def test_valuation_examples():
    z8 = make_chain_ring(2, 1, 3)
    assert pi_valuation(z8.element(4)) == 2
    assert pi_valuation(z8.zero) == 3
    gr = make_chain_ring(2, 2, 2)
    assert pi_valuation(gr.element([2, 2])) == 1


@pytest.mark.parametrize("p,ell,v", RINGS)
def test_valuation_level_counts(p, ell, v):
    ring = make_chain_ring(p, ell, v)
    vals = [x.valuation() for x in ring.elements()]
    for i in range(v + 1):
        assert sum(val >= i for val in vals) == p ** ((v - i) * ell)


def test_coset_representatives_examples():
    z8 = make_chain_ring(2, 1, 3)
    assert [int(x.coeffs[0]) for x in coset_representatives(z8, 2)] == [0, 1, 2, 3]
    assert len(coset_representatives(z8, 3)) == 8
    gr = make_chain_ring(2, 2, 2)
    reps = coset_representatives(gr, 1)
    assert sorted(x.coeffs for x in reps) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(ValueError):
        coset_representatives(z8, 4)


@pytest.mark.parametrize("p,ell,v", RINGS)
def test_coset_representatives_are_a_transversal(p, ell, v):
    ring = make_chain_ring(p, ell, v)
    for a in range(1, v + 1):
        reps = ring.coset_representatives(a)
        assert len(reps) == ring.q ** a
        for x, y in itertools.combinations(reps, 2):
            assert (x - y).valuation() < a


def test_conditions():
    z4 = make_chain_ring(2, 1, 2)
    assert check_condition(SubsetSpec([z4.element(0), z4.element(1)], z4), "F")
    assert check_condition(SubsetSpec([z4.element(0), z4.element(1)], z4), "D")
    assert not check_condition(SubsetSpec([z4.element(0), z4.element(2)], z4), "F")
    assert not check_condition(SubsetSpec([z4.element(0), z4.element(2)], z4), "D")
    gr = make_chain_ring(2, 2, 2)
    assert check_condition(SubsetSpec([gr.zero, gr.one, gr.element([0, 1])], gr), "F")
    with pytest.raises(ConditionError):
        check_condition(SubsetSpec([], z4), "F")
    with pytest.raises(ValueError):
        SubsetSpec([z4.one, z4.element(5)], z4)


@pytest.mark.parametrize("p,ell,v", RINGS)
def test_unit_iff_non_zero_divisor(p, ell, v):
    ring = make_chain_ring(p, ell, v)
    elems = list(ring.elements())
    for x in elems:
        zd = any(x * y == ring.zero for y in elems if y)
        assert x.is_unit() == (not zd) == (x.valuation() == 0)
        if x.is_unit():
            assert x * x.inverse() == ring.one


@pytest.mark.parametrize("p,ell,v", RINGS)
def test_vectorized_ops_match_scalar(p, ell, v):
    ring = make_chain_ring(p, ell, v)
    elems = list(ring.elements())[:40]
    pairs = list(itertools.product(elems, repeat=2))
    a = ring.asarray([x for x, _ in pairs])
    b = ring.asarray([y for _, y in pairs])
    assert ring.vadd(a, b).tolist() == [list((x + y).coeffs) for x, y in pairs]
    assert ring.vsub(a, b).tolist() == [list((x - y).coeffs) for x, y in pairs]
    assert ring.vmul(a, b).tolist() == [list((x * y).coeffs) for x, y in pairs]
    assert ring.vval(a).tolist() == [x.valuation() for x, _ in pairs]


def test_index_roundtrip_and_lift():
    ring = make_chain_ring(3, 2, 2)
    for i, x in enumerate(ring.elements()):
        assert ring.index(x) == i and ring.from_index(i) == x
    big = ring.with_length(4)
    x = ring.element([5, 7])
    assert big.lift(x).coeffs == (5, 7)
    assert ring.residue(x) == (2, 1)


ring_params = st.sampled_from(RINGS)


@settings(max_examples=200, deadline=None)
@given(ring_params, st.data())
def test_ring_axioms(params, data):
    ring = make_chain_ring(*params)
    el = st.lists(st.integers(0, ring.pv - 1), min_size=ring.ell, max_size=ring.ell).map(ring.element)
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x - x == ring.zero
    assert (x * y).valuation() == min(ring.v, x.valuation() + y.valuation())
    assert (x + y).valuation() >= min(x.valuation(), y.valuation())
