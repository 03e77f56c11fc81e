import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chainwarn.chainring import make_chain_ring
from chainwarn.mpoly import MPoly, parse_poly, poly_eval, poly_product_expand, total_degree


def z(m_exp, p=2):
    return make_chain_ring(p, 1, m_exp)


def test_eval_examples():
    z4, z8 = z(2), z(3)
    assert poly_eval(parse_poly("t1 + t2", z4, 2), [z4.element(1), z4.element(3)]) == z4.zero
    assert poly_eval(parse_poly("t1^2", z8, 1), [z8.element(2)]) == z8.element(4)
    assert poly_eval(parse_poly("2*t1*t2 + 3", z4, 2), [z4.one, z4.one]) == z4.one
    with pytest.raises(ValueError):
        poly_eval(parse_poly("t1", z4, 1), [z4.one, z4.one])


def test_degree_examples():
    z4 = z(2)
    assert total_degree(parse_poly("t1*t2 + t3", z4, 3)) == 2
    assert total_degree(MPoly(z4, 2)) is None
    assert total_degree(parse_poly("2*t1^3", z4, 1)) == 3


def test_product_examples():
    z4 = z(2)
    t = MPoly.variable(z4, 1, 0)
    assert poly_product_expand([t - 1, t + 1]) == parse_poly("t1^2 + 3", z4, 1)
    prod = poly_product_expand([t * 2, t * 2])
    assert not prod and prod.total_degree() is None
    assert poly_product_expand([], ring=z4, nvars=1) == MPoly.constant(z4, 1, 1)


def test_parse_ring_literals():
    gr = make_chain_ring(2, 2, 2)
    f = parse_poly("[0,1]*t1 - [1,1]", gr, 1)
    x = gr.element([0, 1])
    assert f([x]) == x * x - gr.element([1, 1])
    assert str(parse_poly("t1 + t1", z(1), 1)) == "0"


def test_evaluate_many_matches_scalar():
    gr = make_chain_ring(3, 2, 2)
    f = parse_poly("[1,2]*t1^2*t2 + 3*t2 + [0,4]", gr, 2)
    pts = list(itertools.product(list(gr.elements())[::7], repeat=2))
    arr = np.stack([gr.asarray(p) for p in pts])
    got = f.evaluate_many(arr)
    assert got.tolist() == [list(f(p).coeffs) for p in pts]


def test_lift_keeps_integer_coefficients():
    small, big = z(2), z(4)
    f = parse_poly("3*t1 + 2", small, 1)
    g = f.lift(big)
    assert g([big.element(5)]) == big.element(17)


rings = st.sampled_from([(2, 1, 2), (3, 1, 1), (2, 2, 2)])


def _poly(ring, nvars):
    coeff = st.integers(0, ring.pv - 1).map(ring.element)
    mono = st.tuples(*[st.integers(0, 2)] * nvars)
    return st.dictionaries(mono, coeff, max_size=4).map(lambda d: MPoly(ring, nvars, d))


@settings(max_examples=100, deadline=None)
@given(rings, st.data())
def test_ring_homomorphism_under_evaluation(params, data):
    ring = make_chain_ring(*params)
    f, g = data.draw(_poly(ring, 2)), data.draw(_poly(ring, 2))
    pt = data.draw(st.tuples(*[st.integers(0, ring.size - 1).map(ring.from_index)] * 2))
    assert (f * g)(pt) == f(pt) * g(pt)
    assert (f + g)(pt) == f(pt) + g(pt)
    if f and g and (f * g):
        assert (f * g).total_degree() <= f.total_degree() + g.total_degree()
