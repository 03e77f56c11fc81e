import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainwarn import zerosum
from chainwarn.errors import BudgetExceeded, ConditionError
from chainwarn.zerosum import GSequence, PGroup


def G(*orders):
    return PGroup.from_cyclic(orders)


def brute_weighted(g, A, B):
    """Enumerate every weight vector directly."""
    Gr = g.group
    count = 0
    for a in itertools.product(A, repeat=len(g)):
        s = Gr.zero
        for ai, x in zip(a, g.terms):
            s = Gr.add(s, Gr.scale(ai, x))
        count += s in {Gr.reduce(b) for b in B}
    return count


def brute_davenport(Gr):
    """Least n such that every length-n multiset has a nonempty zero-sum subsequence."""
    n = 1
    while True:
        for seq in itertools.combinations_with_replacement(Gr.elements(), n):
            g = GSequence(Gr, seq)
            if brute_weighted(g, (0, 1), [Gr.zero]) == 1:
                break
        else:
            return n
        n += 1


def test_invariant_factors():
    assert zerosum.invariant_factors([2, 4, 2]) == (2, 2, 4)
    assert zerosum.invariant_factors([6]) == (6,)
    assert zerosum.invariant_factors([2, 3, 4]) == (2, 12)
    assert G(2, 3).invariants == G(6).invariants


@pytest.mark.parametrize("orders,d", [((4,), 4), ((2, 2), 3), ((2, 4), 5), ((3, 3), 5)])
def test_little_d(orders, d):
    assert zerosum.little_d(G(*orders)) == d


@pytest.mark.parametrize("orders", [(4,), (2, 2), (3, 3), (2, 4), (6,), (2, 2, 2)])
def test_davenport_against_bruteforce(orders):
    Gr = G(*orders)
    D, witness = zerosum.davenport_with_witness(Gr)
    assert D == brute_davenport(Gr)
    assert len(witness) == D - 1
    w = GSequence(Gr, witness)
    assert zerosum.count_weighted_sums(w, (0, 1), [Gr.zero], exclude_empty=True) == 0


def test_davenport_budget():
    with pytest.raises(BudgetExceeded):
        zerosum.davenport(G(4, 4, 4, 4))


@pytest.mark.parametrize("orders,A,B,expected", [
    ((4,), (0, 1), [0, 2], 2),
    ((5,), (-1, 0, 1), [0], 3),
    ((2,), (0, 1), [0], 2),
])
def test_fat_davenport_examples(orders, A, B, expected):
    assert zerosum.fat_davenport(G(*orders), A, B) == expected


def test_fat_davenport_hypotheses():
    with pytest.raises(ConditionError):
        zerosum.fat_davenport(G(4), (1, 2), [0])
    with pytest.raises(ConditionError):
        zerosum.fat_davenport(G(4), (0, 1), [1])


def test_weighted_counts_examples():
    assert zerosum.count_weighted_sums(GSequence(G(2), [(1,)] * 3), (0, 1), [0]) == 4
    assert zerosum.count_weighted_sums(GSequence(G(2), [(1,)]), (0, 1), [0]) == 1
    # only (0, 0) among the nine weightings of (1, 2) in Z/4
    assert zerosum.count_weighted_sums(GSequence(G(4), [(1,), (2,)]), (-1, 0, 1), [0]) == 1


def test_subsequence_sums_include_empty():
    g = GSequence(G(5), [(1,), (1,)])
    assert zerosum.subsequence_sums(g) == {(0,), (1,), (2,)}


def test_olson_bound_is_exact():
    assert zerosum.olson_bound(2, 5) == Fraction(1, 4)


def test_fat_bound_examples():
    r = zerosum.verify_fat_bound(GSequence(G(2), [(1,)] * 3), (0, 1), [[0]])
    assert (r.count, r.bound) == (4, 4)
    r = zerosum.verify_fat_bound(GSequence(G(2, 2), [(1, 0), (0, 1)]), (0, 1), [[0], [0]])
    assert (r.count, r.bound) == (1, 1)
    with pytest.raises(ConditionError):
        zerosum.verify_fat_bound(GSequence(G(4), [(1,)]), (0, 2), [[0]])


def test_egz_examples():
    r = zerosum.egz_count(GSequence(G(2), [(1,)] * 2), (0, 1), [[0]], 1)
    assert r.count == 2
    r = zerosum.egz_count(GSequence(G(2), [(1,)] * 4), (0, 1), [[0]], 1)
    assert (r.count, r.bound) == (8, 4) and r.holds


def test_egz_against_enumeration():
    rng = random.Random(11)
    Gr = G(3)
    for _ in range(30):
        n = rng.randint(1, 5)
        g = GSequence(Gr, [(rng.randrange(3),) for _ in range(n)])
        count = 0
        for a in itertools.product((0, 1), repeat=n):
            if sum(ai * x[0] for ai, x in zip(a, g.terms)) % 3 == 0 and sum(a) % 3 == 0:
                count += 1
        assert zerosum.egz_count(g, (0, 1), [[0]], 1).count == count


def test_quotient_table():
    Gr = G(2, 4)
    t = Gr.table
    subs = t.subgroups()
    assert len(subs) == 8          # subgroups of Z/2 + Z/4
    for H in subs:
        assert len(t.quotient(H).labels) * len(t.members(H)) == Gr.order


groups = st.sampled_from([(2,), (3,), (4,), (2, 2), (5,), (2, 4), (3, 3), (8,), (2, 2, 2)])


@settings(max_examples=150, deadline=None)
@given(groups, st.data())
def test_distribution_matches_enumeration(orders, data):
    Gr = G(*orders)
    elems = Gr.elements()
    n = data.draw(st.integers(1, 5))
    g = GSequence(Gr, [data.draw(st.sampled_from(elems)) for _ in range(n)])
    A = data.draw(st.sets(st.integers(-3, 3), min_size=1, max_size=3))
    B = data.draw(st.lists(st.sampled_from(elems), min_size=1, max_size=3))
    assert zerosum.count_weighted_sums(g, sorted(A), B) == brute_weighted(g, sorted(A), B)
    assert sum(zerosum.sum_distribution(g, sorted(A)).values()) == len(A) ** n
