import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from zerosum.errors import EmptySetError, TooSmallError
from zerosum.groups import make_group
from zerosum.lemmas import groups_up_to
from zerosum.sumsets import (GroupSubset, gamma, negate, restricted_self_sumset, sumset,
                             translate_set)

GROUPS = groups_up_to(16)


def S(group, *elems):
    return GroupSubset.from_elements(group, elems)


@st.composite
def subsets(draw, min_size=1, max_size=None, group=None):
    g = group or draw(st.sampled_from(GROUPS))
    elems = draw(st.sets(st.integers(0, g.order - 1), min_size=min(min_size, g.order),
                         max_size=max_size))
    return GroupSubset.from_elements(g, elems)


def test_sumset_examples():
    z6 = make_group([6])
    assert sumset(S(z6, 0, 1, 2), S(z6, 0, 1)).elements == (0, 1, 2, 3)
    b = S(z6, 1, 4)
    assert translate_set(0, b) == b
    z5 = make_group([5])
    assert negate(S(z5, 1, 2)).elements == (3, 4)


def test_restricted_examples():
    z7, z13 = make_group([7]), make_group([13])
    assert restricted_self_sumset(S(z7, 0, 1, 2)).elements == (1, 2, 3)
    r = restricted_self_sumset(S(z13, 0, 1, 2, 3, 4, 5))
    assert r.elements == tuple(range(1, 10))
    for g in GROUPS[1:]:
        for x in range(1, g.order):
            assert restricted_self_sumset(S(g, 0, x)).elements == (x,)


def test_gamma_examples():
    z3 = make_group([3])
    assert gamma(S(z3, 0, 1), S(z3, 1, 2), 2) == 2
    z7 = make_group([7])
    a = S(z7, 1, 3, 4)
    for g in range(7):
        assert gamma(a, S(z7, 0), g) == (1 if g in a else 0)


def test_errors():
    z5 = make_group([5])
    with pytest.raises(EmptySetError):
        sumset(GroupSubset.empty(z5), S(z5, 1))
    with pytest.raises(TooSmallError):
        restricted_self_sumset(S(z5, 3))
    with pytest.raises(ValueError):
        sumset(S(z5, 1), S(make_group([6]), 1))


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_sumset_properties(data):
    a = data.draw(subsets())
    g = a.group
    b = data.draw(subsets(group=g))
    ab = sumset(a, b)
    assert ab == sumset(b, a)
    assert set(ab) == oracles.sumset(g.factors, a, b)
    x = data.draw(st.integers(0, g.order - 1))
    assert len(translate_set(x, b)) == len(b)
    assert negate(negate(a)) == a
    assert set(negate(a)) == {oracles.neg(g.factors, e) for e in a}


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_gamma_matches_oracle(data):
    a = data.draw(subsets())
    b = data.draw(subsets(group=a.group))
    x = data.draw(st.integers(0, a.group.order - 1))
    assert gamma(a, b, x) == oracles.gamma(a.group.factors, a, b, x)


def _all_subsets(g, max_size):
    for r in range(1, max_size + 1):
        yield from itertools.combinations(range(g.order), r)


def test_scherk_condition_exhaustive_set_level():
    # |A+B| >= |A|+|B|-1 whenever A meets -B exactly in {0}
    for g in groups_up_to(10):
        pool = [S(g, *c) for c in _all_subsets(g, 4)]
        with_zero = [a for a in pool if 0 in a]
        for a in with_zero:
            for b in with_zero:
                if (a & negate(b)).elements == (0,):
                    assert len(sumset(a, b)) >= len(a) + len(b) - 1


def test_restricted_inside_full_sumset_exhaustive():
    for g in groups_up_to(12):
        for c in _all_subsets(g, 6):
            if len(c) < 2:
                continue
            a = S(g, *c)
            r = restricted_self_sumset(a)
            full = sumset(a, a)
            assert r <= full
            doubles = {oracles.add(g.factors, x, x) for x in c}
            assert set(full - r) <= doubles
            assert set(r) == oracles.restricted(g.factors, c)


def test_set_algebra():
    z8 = make_group([8])
    a, b = S(z8, 1, 2, 3), S(z8, 3, 4)
    assert (a | b).elements == (1, 2, 3, 4)
    assert (a & b).elements == (3,)
    assert (a - b).elements == (1, 2)
    assert not a.isdisjoint(b) and S(z8, 1).isdisjoint(b)
    assert repr(a) == "{1,2,3}"
    assert hash(a) == hash(S(z8, 3, 2, 1))
