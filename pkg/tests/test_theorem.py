import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from zerosum.errors import SequenceTooShortError, StaleCheckpointError
from zerosum.groups import coordinate_permutations, enumerate_groups_of_order, make_group
from zerosum.lemmas import groups_up_to
from zerosum.literals import parse_sequence_literal
from zerosum.sequences import Sequence, orbit, translate
from zerosum.theorem import (Outcome, SweepCheckpoint, classify, groups_in_orders,
                             search_counterexample, sweep, verify_instance)

Z5 = make_group([5])

# tallies frozen from the brute-force oracle in oracles.theorem_outcome
FROZEN = {
    ((2,), 1): (4, 4, 0, 0),
    ((2,), 2): (5, 5, 0, 0),
    ((3,), 1): (15, 12, 3, 3),
    ((3,), 2): (21, 21, 0, 0),
    ((4,), 1): (56, 40, 16, 16),
    ((4,), 2): (84, 80, 4, 4),
    ((2, 2), 1): (56, 44, 12, 12),
    ((2, 2), 2): (84, 84, 0, 0),
    ((5,), 1): (210, 130, 80, 80),
    ((5,), 2): (330, 290, 40, 40),
    ((6,), 1): (792, 480, 312, 312),
    ((6,), 2): (1287, 1161, 126, 66),
}


def test_verify_instance_examples():
    v = verify_instance(parse_sequence_literal("Z5: 1^4 2^2"))
    assert (v.k, v.t, v.nsum_size, v.bound, v.outcome) == (1, 2, 2, 2, Outcome.CONDITION_2)
    v = verify_instance(parse_sequence_literal("Z2: 0 1 1"))
    assert v.zero_in_nsum and v.outcome is Outcome.CONDITION_1
    v = verify_instance(parse_sequence_literal("Z4: 1^3 2^2"))
    assert (v.k, v.t, v.nsum_size, v.outcome) == (1, 2, 2, Outcome.CONDITION_2)
    assert v.nsum_size == v.bound
    with pytest.raises(SequenceTooShortError):
        verify_instance(parse_sequence_literal("Z5: 1^5"))


def test_classify():
    assert classify(True, 0, 9) is Outcome.CONDITION_1
    assert classify(False, 3, 3) is Outcome.CONDITION_2
    assert classify(False, 2, 3) is Outcome.COUNTEREXAMPLE


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_sweep_tallies_frozen(key):
    factors, k = key
    rep = sweep(make_group(list(factors)), k, tight_cap=10**6)
    total, c1, c2, tight = FROZEN[key]
    assert (rep.total, rep.condition1, rep.condition2, rep.tight_count) == (total, c1, c2, tight)
    assert rep.counterexample_count == 0 and rep.complete
    assert len(rep.tight) == tight


def test_frozen_tallies_match_oracle():
    for (factors, k), (total, c1, c2, tight) in FROZEN.items():
        if total > 400:
            continue
        n = 1
        for d in factors:
            n *= d
        c = Counter()
        t_count = 0
        for ms in oracles.multisets(n, n + k):
            out, size, bound = oracles.theorem_outcome(factors, ms)
            c[out] += 1
            t_count += out == "C2" and size == bound
        assert (sum(c.values()), c["C1"], c["C2"], t_count) == (total, c1, c2, tight)


def test_sweep_examples():
    rep = sweep(make_group([2]), 1)
    assert rep.total == 4 and rep.counterexample_count == 0
    rep = sweep(Z5, 1)
    assert rep.total == 210 and rep.counterexample_count == 0
    assert any(oracles.same_up_to_translation((5,), list(s), [1, 1, 1, 1, 2, 2])
               for s in rep.tight)
    assert parse_sequence_literal("Z5: 1^4 2^2") in rep.tight


def test_sweep_trivial_group():
    rep = sweep(make_group([]), 3)
    assert rep.total == 1 and rep.condition1 == 1


def test_report_schema():
    d = sweep(make_group([3]), 1).to_dict()
    assert set(d) == {"group", "n", "k", "total", "condition1", "condition2", "tight",
                      "counterexamples", "tight_count", "skipped", "complete"}
    assert d["group"] == "Z3" and d["n"] == 3 and d["k"] == 1
    # oracle: the C2 multisets of length 4 over Z3 are 0^2 1^2, 0^2 2^2, 1^2 2^2
    assert d["tight"] == ["Z3: 0^2 1^2", "Z3: 0^2 2^2", "Z3: 1^2 2^2"]


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_resume_matches_uninterrupted(tmp_path, seed):
    rng = random.Random(seed)
    g = rng.choice([make_group([6]), make_group([2, 4]), make_group([7])])
    k = rng.choice([1, 2])
    full = sweep(g, k, tight_cap=50, chunk=97, checkpoint_interval=97)
    stop = rng.randrange(1, full.total)
    path = tmp_path / "cp.json"
    part = sweep(g, k, checkpoint_path=path, tight_cap=50, chunk=97, checkpoint_interval=97,
                 stop_rank=stop)
    assert not part.complete
    cp = SweepCheckpoint.load(path)
    assert cp.next_rank == stop
    done = sweep(g, k, resume=cp, tight_cap=50, chunk=97, checkpoint_interval=97)
    assert done.to_dict() == full.to_dict()


def test_resume_refuses_stale_checkpoint():
    cp = sweep(Z5, 1, stop_rank=10).checkpoint
    with pytest.raises(StaleCheckpointError):
        sweep(Z5, 2, resume=cp)
    with pytest.raises(StaleCheckpointError):
        sweep(make_group([6]), 1, resume=cp)
    with pytest.raises(StaleCheckpointError):
        sweep(Z5, 1, resume=cp, bound_offset=1)


def test_workers_agree_with_serial():
    g = make_group([7])
    a = sweep(g, 1, chunk=200)
    b = sweep(g, 1, chunk=200, workers=2)
    assert a.to_dict() == b.to_dict()


def test_automorphism_filter_preserves_counterexamples():
    # with the inflated bound there are counterexamples to compare
    for g in groups_up_to(6):
        perms = coordinate_permutations(g)
        for k in (1, 2):
            for offset in (0, 1):
                full = sweep(g, k, bound_offset=offset)
                filt = sweep(g, k, bound_offset=offset, automorphism_filter=True)
                assert filt.condition1 + filt.condition2 + filt.counterexample_count \
                    + filt.skipped == full.total
                closure = set()
                for s in filt.counterexamples:
                    closure |= orbit(s, perms)
                assert closure == {s.mult for s in full.counterexamples}
                assert bool(filt.counterexamples) == bool(full.counterexamples)


def test_automorphism_filter_skips_on_noncyclic():
    g = make_group([2, 2])
    filt = sweep(g, 1, automorphism_filter=True)
    assert filt.skipped > 0
    assert sweep(make_group([6]), 1, automorphism_filter=True).skipped == 0


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_outcome_translation_invariant(data):
    g = data.draw(st.sampled_from(groups_up_to(10)))
    k = data.draw(st.integers(1, 3))
    elems = data.draw(st.lists(st.integers(0, g.order - 1), min_size=g.order + k,
                               max_size=g.order + k))
    s = Sequence.from_elements(g, elems)
    x = data.draw(st.integers(0, g.order - 1))
    assert verify_instance(translate(s, x)).outcome == verify_instance(s).outcome


def test_search_examples():
    assert search_counterexample(range(1, 7), 2) is None
    assert search_counterexample(range(1, 2), 3) is None
    v = search_counterexample(range(5, 6), 1, bound_offset=1)
    assert v is not None and v.outcome is Outcome.COUNTEREXAMPLE
    assert v.nsum_size == 2 and v.bound == 3
    assert oracles.same_up_to_translation((5,), list(v.sequence), [1, 1, 1, 1, 2, 2])


def test_groups_in_orders():
    assert [g.literal for g in groups_in_orders(1, 8)] == [
        "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2"]
    assert len(enumerate_groups_of_order(8)) == 3
