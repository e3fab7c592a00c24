import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from zerosum.errors import PreconditionError
from zerosum.groups import make_group
from zerosum.lemmas import (LemmaId, check_disjoint_bound, check_reduction,
                            check_restricted_sumset, check_scherk, check_set_sum_bound,
                            check_zsf_support_bound, reduction_instance, reduction_sides, groups_up_to,
                            run_lemma, sample_disjoint, sample_reduction, sweep_restricted,
                            sweep_scherk, sweep_set_bound, sweep_zsf_support)
from zerosum.sequences import Sequence
from zerosum.sumsets import GroupSubset

Z = {n: make_group([n] if n > 1 else []) for n in range(1, 14)}


def S(group, *elems):
    return GroupSubset.from_elements(group, elems)


def seq(group, *elems):
    return Sequence.from_elements(group, elems)


def test_scherk_examples():
    v = check_scherk(S(Z[6], 0, 1, 2), S(Z[6], 0, 1))
    assert v.holds and (v.lhs, v.rhs) == (4, 4)
    v = check_scherk(S(Z[7], 0, 1), S(Z[7], 0, 2))
    assert v.holds and (v.lhs, v.rhs) == (4, 3)
    b = S(Z[9], 0, 2, 5)
    v = check_scherk(S(Z[9], 0), b)
    assert v.holds and v.lhs == v.rhs == len(b)


def test_scherk_preconditions():
    with pytest.raises(PreconditionError):
        check_scherk(S(Z[6], 1, 2), S(Z[6], 0, 1))   # meet is empty
    with pytest.raises(PreconditionError):
        check_scherk(S(Z[6], 0, 1), S(Z[6], 0, 5))   # meet {0,1}
    with pytest.raises(PreconditionError):
        check_scherk(GroupSubset.empty(Z[6]), S(Z[6], 0))


def test_disjoint_examples():
    s = seq(Z[7], 1, 2, 3)
    v = check_disjoint_bound(s, [seq(Z[7], 1), seq(Z[7], 2)])
    assert v.holds and (v.lhs, v.rhs) == (6, 2)
    v = check_disjoint_bound(s, [s])
    assert v.holds and v.lhs == v.rhs
    s = seq(Z[9], 1, 1, 3)
    v = check_disjoint_bound(s, [seq(Z[9], 1, 1), seq(Z[9], 3)])
    assert v.holds and (v.lhs, v.rhs) == (5, 3)


def test_disjoint_preconditions():
    with pytest.raises(PreconditionError):
        check_disjoint_bound(seq(Z[4], 1, 3), [seq(Z[4], 1)])
    with pytest.raises(PreconditionError):
        check_disjoint_bound(seq(Z[7], 1, 2), [seq(Z[7], 1), seq(Z[7], 1)])


def test_reduction_examples():
    v = check_reduction(seq(Z[3], 0, 0, 1, 1))
    left, right = reduction_sides(seq(Z[3], 0, 0, 1, 1))
    assert v.holds and left.elements == right.elements == (1, 2)
    for n in range(1, 8):
        s = Sequence.from_counts(Z[n], {0: n})
        left, right = reduction_sides(s)
        assert left.elements == right.elements == (0,)
    s = seq(Z[4], 0, 0, 1, 1, 2)
    left, right = reduction_sides(s)
    f = (4,)
    t = [1, 1, 2]
    assert set(left) == set().union(*(oracles.subseq_sums(f, t, r) for r in range(2, 4)))
    assert set(right) == oracles.subseq_sums(f, list(s), 4)
    assert check_reduction(s).holds


def test_reduction_many_zeros_uses_empty_sum():
    # m >= n: the empty subsequence of T is allowed, so 0 is on the left
    s = seq(Z[3], 0, 0, 0, 1)
    left, right = reduction_sides(s)
    assert left.elements == right.elements == (0, 1)


def test_reduction_preconditions():
    with pytest.raises(PreconditionError):
        check_reduction(seq(Z[5], 0, 1))              # too short
    with pytest.raises(PreconditionError):
        check_reduction(seq(Z[4], 0, 1, 1, 1, 2))     # h(T) > m


def test_set_bound_examples():
    v = check_set_sum_bound(S(Z[7], 1, 2))
    assert v.holds and (v.lhs, v.rhs) == (3, 3)
    v = check_set_sum_bound(S(Z[8], 1, 2, 3))
    assert v.holds and (v.lhs, v.rhs) == (6, 6) and v.details["part"] == 3
    v = check_set_sum_bound(S(Z[11], 4))
    assert v.holds and (v.lhs, v.rhs) == (1, 1)
    with pytest.raises(PreconditionError):
        check_set_sum_bound(S(Z[6], 1, 5))


def test_set_bound_two_involutions():
    g = make_group([2, 4])
    # two involutions plus one element of order 4
    inv = [e for e in g.elements() if g.order_table[e] == 2]
    a = S(g, inv[0], inv[1], 1)
    v = check_set_sum_bound(a)
    assert v.details["involutions"] >= 2
    assert v.holds == (v.lhs == 7)


def test_zsf_examples():
    v = check_zsf_support_bound(seq(Z[5], 1, 1))
    assert v.holds and (v.lhs, v.rhs) == (2, 2) and v.details["exception"]
    v = check_zsf_support_bound(seq(Z[7], 1, 2, 3))
    assert v.holds and (v.lhs, v.rhs) == (6, 5) and v.details["strict"]
    v = check_zsf_support_bound(seq(Z[9], 1, 1, 1))
    assert v.holds and (v.lhs, v.rhs) == (3, 3)
    assert v.details["strictness_mismatch"] and not v.details["exception"]
    with pytest.raises(PreconditionError):
        check_zsf_support_bound(seq(Z[4], 2, 2))


def test_restricted_examples():
    v = check_restricted_sumset(S(Z[7], 0, 1, 2))
    assert v.holds and (v.lhs, v.rhs) == (3, 3)
    v = check_restricted_sumset(S(Z[13], 0, 1, 2, 3, 4, 5))
    assert v.holds and (v.lhs, v.rhs) == (9, 7)
    v = check_restricted_sumset(S(Z[9], 0, 1, 2, 3))
    assert v.holds and v.lhs == len(oracles.restricted((9,), [0, 1, 2, 3])) == 5
    with pytest.raises(PreconditionError):
        check_restricted_sumset(S(Z[9], 0, 1))
    with pytest.raises(PreconditionError):
        check_restricted_sumset(S(Z[9], 0, 1, 8))


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_checkers_agree_with_oracle(data):
    g = data.draw(st.sampled_from(groups_up_to(12)))
    f = g.factors
    elems = data.draw(st.sets(st.integers(1, g.order - 1), min_size=1, max_size=4)) \
        if g.order > 1 else set()
    if not elems:
        return
    a = S(g, *elems)
    sums = oracles.all_sums(f, sorted(elems))
    if 0 in sums:
        with pytest.raises(PreconditionError):
            check_set_sum_bound(a)
    else:
        assert check_set_sum_bound(a).lhs == len(sums)


def test_small_sweeps_have_no_violations():
    for rep in (sweep_scherk(6, 3), sweep_restricted(9, 3, 5), sweep_set_bound(8, 3),
                sweep_zsf_support(6, 4), sample_reduction(300, 8, 1), sample_disjoint(200, 8, 1)):
        assert rep.checked > 0
        assert rep.violated == 0 and rep.held == rep.checked


def test_reduction_instances_satisfy_precondition():
    rng = random.Random(5)
    grps = groups_up_to(12)
    for _ in range(200):
        s = reduction_instance(rng, grps)
        assert len(s) >= s.group.order
        assert max(s.mult[1:], default=0) <= s.mult[0]


def test_run_lemma_dispatch():
    rep = run_lemma("scherk", max_order=4)
    assert rep.lemma is LemmaId.SCHERK and rep.violated == 0
    d = run_lemma(LemmaId.REDUCTION, max_order=6, samples=50, seed=2).to_dict()
    assert d["lemma"] == "reduction" and d["checked"] == 50
    with pytest.raises(ValueError):
        run_lemma("nope")
