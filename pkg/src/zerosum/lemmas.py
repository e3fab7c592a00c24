"""Machine checks for the preliminary lemmas, one checker per statement.

Every checker validates its hypotheses first and raises PreconditionError
when they fail; a verdict is only produced for inputs the lemma talks about.
The ``sweep_*``/``sample_*`` drivers feed checkers from the exhaustive
enumerators, discarding inputs that fail the hypotheses.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import Enum

from .engine import nsum, sigma_all, sigma_at_least
from .errors import PreconditionError
from .groups import GroupSpec, enumerate_groups_of_order
from .sequences import (Sequence, concat, enumerate_sequences, max_multiplicity,
                        translate)
from .sumsets import GroupSubset, negate, restricted_self_sumset, sumset


class LemmaId(str, Enum):
    SCHERK = "scherk"
    DISJOINT = "disjoint"
    REDUCTION = "reduction"
    SET_BOUND = "set-bound"
    ZSF_SUPPORT = "zsf-support"
    RESTRICTED = "restricted"


@dataclass
class LemmaVerdict:
    lemma_id: LemmaId
    holds: bool
    lhs: int
    rhs: int
    witness: str | None = None
    details: dict = field(default_factory=dict)


def _verdict(lemma, holds, lhs, rhs, witness, **details):
    return LemmaVerdict(lemma, holds, lhs, rhs, None if holds else witness, details)


def _involutions(group: GroupSpec, elements) -> int:
    return sum(1 for e in elements if group.order_table[e] == 2)


def check_scherk(a: GroupSubset, b: GroupSubset) -> LemmaVerdict:
    """|A + B| >= |A| + |B| - 1 whenever A and -B meet exactly in 0."""
    if not a or not b:
        raise PreconditionError("A and B must be nonempty")
    meet = a & negate(b)
    if meet.elements != (0,):
        raise PreconditionError(f"A ∩ (-B) = {meet}, expected {{0}}")
    lhs, rhs = len(sumset(a, b)), len(a) + len(b) - 1
    return _verdict(LemmaId.SCHERK, lhs >= rhs, lhs, rhs, f"A={a} B={b}")


def check_disjoint_bound(s: Sequence, parts) -> LemmaVerdict:
    """|Sigma(S)| >= sum of |Sigma(S_i)| for disjoint subsequences of a zero-sum free S."""
    parts = list(parts)
    if 0 in sigma_all(s):
        raise PreconditionError(f"{s} is not zero-sum free")
    joined = Sequence.empty(s.group)
    for p in parts:
        joined = concat(joined, p)
    if not joined.divides(s):
        raise PreconditionError("parts are not disjoint subsequences of S")
    lhs = len(sigma_all(s))
    rhs = sum(len(sigma_all(p)) for p in parts)
    return _verdict(LemmaId.DISJOINT, lhs >= rhs, lhs, rhs,
                    f"S={s} parts={[str(p) for p in parts]}")


def reduction_sides(s: Sequence) -> tuple[GroupSubset, GroupSubset]:
    """(Sigma_{>= n-m}(T), Sigma_n(S)) for S = 0^m T.

    When m >= n the lower index is <= 0 and the empty subsequence counts, so
    the left side becomes {0} ∪ Sigma(T).
    """
    g = s.group
    n, m = g.order, s.mult[0]
    t = Sequence(g, (0,) + s.mult[1:])
    if n - m >= 1:
        left = sigma_at_least(t, n - m)
    else:
        left = GroupSubset.from_elements(g, [0]) | sigma_all(t)
    return left, nsum(s)


def check_reduction(s: Sequence) -> LemmaVerdict:
    """Sigma_{>= n-m}(T) = Sigma_n(S) when S = 0^m T, |S| >= n, h(T) <= m."""
    g = s.group
    n, m = g.order, s.mult[0]
    if len(s) < n:
        raise PreconditionError(f"|S| = {len(s)} < n = {n}")
    h_t = max(s.mult[1:], default=0)
    if h_t > m:
        raise PreconditionError(f"h(T) = {h_t} > m = {m}")
    left, right = reduction_sides(s)
    return _verdict(LemmaId.REDUCTION, left == right, len(left), len(right),
                    f"S={s} left={left} right={right}")


def check_set_sum_bound(a: GroupSubset) -> LemmaVerdict:
    """Lower bounds on |Sigma(A)| for a zero-sum free set A."""
    g = a.group
    elems = a.elements
    if not elems:
        raise PreconditionError("A must be nonempty")
    seq = Sequence.from_elements(g, elems)
    sums = sigma_all(seq)
    if 0 in sums:
        raise PreconditionError(f"0 ∈ Σ({a})")
    size = len(elems)
    inv = _involutions(g, elems)
    if size >= 4:
        part, rhs = 2, 2 * size
    elif size == 3 and inv != 1:
        part, rhs = 3, 2 * size
    else:
        part, rhs = 1, 2 * size - 1
    lhs = len(sums)
    holds = lhs >= rhs
    if size == 3 and inv >= 2:
        # explicit count: all seven nonempty subset sums are distinct
        holds = holds and lhs == 7
    return _verdict(LemmaId.SET_BOUND, holds, lhs, rhs, f"A={a}", part=part, involutions=inv)


def zsf_exception(s: Sequence) -> bool:
    """The listed exceptions to strictness: |S| <= 2, or |S| = 3 with exactly one involution."""
    if len(s) <= 2:
        return True
    return len(s) == 3 and _involutions(s.group, list(s)) == 1


def check_zsf_support_bound(s: Sequence) -> LemmaVerdict:
    """|Sigma(S)| >= |S| + |supp(S)| - 1 for zero-sum free S.

    ``holds`` reflects the weak bound only. Strictness outside the listed
    exceptions is recorded in ``details`` because it fails for sequences with
    repeated elements (1^3 over Z9 has |Sigma| = 3 = bound).
    """
    if len(s) == 0:
        raise PreconditionError("S must be nonempty")
    sums = sigma_all(s)
    if 0 in sums:
        raise PreconditionError(f"{s} is not zero-sum free")
    lhs = len(sums)
    rhs = len(s) + sum(1 for v in s.mult if v) - 1
    exception = zsf_exception(s)
    strict = lhs > rhs
    return _verdict(LemmaId.ZSF_SUPPORT, lhs >= rhs, lhs, rhs, f"S={s}",
                    strict=strict, exception=exception,
                    strictness_mismatch=(not exception and not strict))


def check_restricted_sumset(a: GroupSubset) -> LemmaVerdict:
    """|A ∔ A| >= |A| for |A| in [3, 5] and >= |A| + 1 for |A| >= 6, when A ∩ -A = {0}."""
    if len(a) < 3:
        raise PreconditionError("|A| must be at least 3")
    meet = a & negate(a)
    if meet.elements != (0,):
        raise PreconditionError(f"A ∩ (-A) = {meet}, expected {{0}}")
    lhs = len(restricted_self_sumset(a))
    rhs = len(a) if len(a) <= 5 else len(a) + 1
    return _verdict(LemmaId.RESTRICTED, lhs >= rhs, lhs, rhs, f"A={a}")


# -- drivers -------------------------------------------------------------------

@dataclass
class LemmaReport:
    lemma: LemmaId
    checked: int = 0
    held: int = 0
    violated: int = 0
    witness: str | None = None
    extras: dict = field(default_factory=dict)

    def record(self, v: LemmaVerdict):
        self.checked += 1
        if v.holds:
            self.held += 1
        else:
            self.violated += 1
            if self.witness is None:
                self.witness = v.witness

    def to_dict(self) -> dict:
        out = {"lemma": self.lemma.value, "checked": self.checked, "held": self.held,
               "violated": self.violated}
        if self.witness is not None:
            out["witness"] = self.witness
        out.update(self.extras)
        return out


def groups_up_to(max_order: int) -> list[GroupSpec]:
    return [g for n in range(1, max_order + 1) for g in enumerate_groups_of_order(n)]


def _subsets(group: GroupSpec, sizes):
    for size in sizes:
        for combo in itertools.combinations(range(group.order), size):
            yield combo


def _bits(group: GroupSpec, elems) -> int:
    return sum(1 << e for e in elems)


def sweep_scherk(max_order: int = 10, max_size: int = 4) -> LemmaReport:
    report = LemmaReport(LemmaId.SCHERK)
    for g in groups_up_to(max_order):
        neg = g.neg_table
        subsets = list(_subsets(g, range(1, max_size + 1)))
        bits = [_bits(g, s) for s in subsets]
        negbits = [_bits(g, [int(neg[e]) for e in s]) for s in subsets]
        # A ∩ (-B) = {0} needs 0 in both; prefilter on bitmaps, checker re-verifies
        with_zero = [i for i, s in enumerate(subsets) if s[0] == 0]
        for i in with_zero:
            a = None
            for j in with_zero:
                if bits[i] & negbits[j] != 1:
                    continue
                if a is None:
                    a = GroupSubset.from_elements(g, subsets[i])
                report.record(check_scherk(a, GroupSubset.from_elements(g, subsets[j])))
    return report


def sweep_restricted(max_order: int = 15, min_size: int = 3, max_size: int = 7) -> LemmaReport:
    report = LemmaReport(LemmaId.RESTRICTED)
    for g in groups_up_to(max_order):
        neg = g.neg_table
        for combo in _subsets(g, range(min_size, max_size + 1)):
            if combo[0] != 0:
                continue
            members = set(combo)
            if any(int(neg[e]) in members for e in combo[1:]):
                continue
            report.record(check_restricted_sumset(GroupSubset.from_elements(g, combo)))
    return report


def sweep_set_bound(max_order: int = 12, max_size: int = 4) -> LemmaReport:
    report = LemmaReport(LemmaId.SET_BOUND)
    for g in groups_up_to(max_order):
        for combo in _subsets(g, range(1, max_size + 1)):
            if combo[0] == 0:
                continue
            if 0 in sigma_all(Sequence.from_elements(g, combo)):
                continue
            report.record(check_set_sum_bound(GroupSubset.from_elements(g, combo)))
    return report


def sweep_zsf_support(max_order: int = 9, max_length: int = 5) -> LemmaReport:
    report = LemmaReport(LemmaId.ZSF_SUPPORT)
    strict = mismatches = 0
    first_mismatch = None
    for g in groups_up_to(max_order):
        for length in range(1, max_length + 1):
            for s in enumerate_sequences(g, length):
                if s.mult[0] or 0 in sigma_all(s):
                    continue
                v = check_zsf_support_bound(s)
                report.record(v)
                strict += v.details["strict"]
                if v.details["strictness_mismatch"]:
                    mismatches += 1
                    if first_mismatch is None:
                        first_mismatch = str(s)
    report.extras = {"strict": strict, "strictness_mismatches": mismatches,
                     "first_strictness_mismatch": first_mismatch}
    return report


def random_sequence(rng: random.Random, group: GroupSpec, length: int) -> Sequence:
    return Sequence.from_elements(group, (rng.randrange(group.order) for _ in range(length)))


def reduction_instance(rng: random.Random, groups) -> Sequence:
    """Random S of length in [n, 2n + 1], translated so a most frequent element sits at 0."""
    g = rng.choice(groups)
    n = g.order
    s = random_sequence(rng, g, rng.randint(n, 2 * n + 1))
    top = max_multiplicity(s)
    return translate(s, s.mult.index(top))


def sample_reduction(samples: int = 10_000, max_order: int = 12, seed: int = 0) -> LemmaReport:
    rng = random.Random(seed)
    groups = groups_up_to(max_order)
    report = LemmaReport(LemmaId.REDUCTION)
    large_m = 0
    for _ in range(samples):
        s = reduction_instance(rng, groups)
        large_m += s.mult[0] >= s.group.order
        report.record(check_reduction(s))
    report.extras = {"instances_with_m_ge_n": large_m}
    return report


def sample_disjoint(samples: int = 2_000, max_order: int = 12, seed: int = 0) -> LemmaReport:
    rng = random.Random(seed)
    groups = [g for g in groups_up_to(max_order) if g.order > 1]
    report = LemmaReport(LemmaId.DISJOINT)
    while report.checked < samples:
        g = rng.choice(groups)
        s = random_sequence(rng, g, rng.randint(1, g.order))
        if 0 in sigma_all(s):
            continue
        nparts = rng.randint(1, 3)
        buckets = [[] for _ in range(nparts + 1)]
        for e in s:
            buckets[rng.randrange(nparts + 1)].append(e)
        parts = [Sequence.from_elements(g, b) for b in buckets[:nparts]]
        report.record(check_disjoint_bound(s, parts))
    return report


def run_lemma(lemma: LemmaId | str, max_order: int | None = None, samples: int | None = None,
              seed: int = 0) -> LemmaReport:
    """Run the default exhaustive or randomized suite for one lemma."""
    lemma = LemmaId(lemma)
    kw = {} if max_order is None else {"max_order": max_order}
    if lemma is LemmaId.SCHERK:
        return sweep_scherk(**kw)
    if lemma is LemmaId.RESTRICTED:
        return sweep_restricted(**kw)
    if lemma is LemmaId.SET_BOUND:
        return sweep_set_bound(**kw)
    if lemma is LemmaId.ZSF_SUPPORT:
        return sweep_zsf_support(**kw)
    if samples is not None:
        kw["samples"] = samples
    if lemma is LemmaId.REDUCTION:
        return sample_reduction(seed=seed, **kw)
    return sample_disjoint(seed=seed, **kw)
