"""Run the lower-bound construction for Sigma_n(S) on a concrete sequence.

Given |S| = n + k with 0 not in Sigma_n(S), the construction normalizes
S = 0^h T, splits off a longest zero-sum T0 | T, cuts the zero-sum free rest
T1 into U V with |V| = k - 1, and builds

    A = {0} ∪ {-x : x in supp(T0) \\ supp(T1)}
    B = {sigma(U)} ∪ (sigma(U) + Sigma(V))
    C = {sigma(U) - x : x in supp(U)}

so that A + B and C are disjoint subsets of Sigma_{>= n-h}(T) = Sigma_n(S).
Every intermediate fact is recomputed and any failure raises TraceFailure.
When |A + B| + |C| falls short of k + t - 1 the square-free small-k branch
certifies |{0} ∪ Sigma_{<= k}(T)| >= t + k - 1 directly.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .engine import (iter_zero_sum_subsequences, max_zero_sum_length, nsum,
                     sigma_all, sigma_at_least, sigma_at_most)
from .errors import ConditionOneError, SequenceTooShortError, TraceFailure
from .lemmas import (check_restricted_sumset, check_set_sum_bound,
                     check_zsf_support_bound)
from .literals import format_set
from .sequences import Sequence, iter_mult_vectors, remove, sequence_sum, translate
from .sumsets import GroupSubset, gamma, restricted_self_sumset, sumset

MAIN_CHAIN = "MAIN_CHAIN"
K_LE_3_SQUAREFREE = "K_LE_3_SQUAREFREE"
DIRECT_FALLBACK = "DIRECT_FALLBACK"


@dataclass
class TraceReport:
    sequence: Sequence
    shift: int
    normalized: Sequence
    n: int
    k: int
    t: int
    h: int
    T: Sequence
    T0: Sequence
    T1: Sequence
    r: int
    ell: int
    U: Sequence
    V: Sequence
    A: GroupSubset
    B: GroupSubset
    C: GroupSubset
    claims: dict
    chain: dict
    branch: str
    certified_bound: int
    nsum_size: int
    v_rechosen: bool = False
    fallback: dict | None = None
    notes: list = field(default_factory=list)
    alternatives_checked: int = 1
    branch_counts: dict = field(default_factory=dict)

    @property
    def slack(self) -> int:
        return self.nsum_size - self.certified_bound

    def to_dict(self) -> dict:
        return {
            "sequence": str(self.sequence), "shift": self.shift,
            "normalized": str(self.normalized),
            "n": self.n, "k": self.k, "t": self.t, "h": self.h,
            "T": str(self.T), "T0": str(self.T0), "T1": str(self.T1),
            "r": self.r, "ell": self.ell, "U": str(self.U), "V": str(self.V),
            "A": format_set(self.A), "B": format_set(self.B), "C": format_set(self.C),
            "claims": self.claims, "chain": self.chain, "branch": self.branch,
            "certified_bound": self.certified_bound, "nsum_size": self.nsum_size,
            "v_rechosen": self.v_rechosen, "fallback": self.fallback, "notes": self.notes,
            "alternatives_checked": self.alternatives_checked,
            "branch_counts": self.branch_counts,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _require(ok: bool, step: str, message: str, **objects):
    if not ok:
        raise TraceFailure(step, message, {k: str(v) for k, v in objects.items()})


def _supp(s: Sequence) -> set[int]:
    return {g for g, v in enumerate(s.mult) if v}


def _set(group, elems) -> GroupSubset:
    return GroupSubset.from_elements(group, elems)


def _sub_sequences(s: Sequence, size: int):
    """Every subsequence of the given length, in colex order."""
    items = s.items()
    caps = [m for _, m in items]
    for pick in iter_mult_vectors(len(items), size) if items else iter([()]):
        if all(p <= c for p, c in zip(pick, caps)):
            mult = [0] * s.group.order
            for (x, _), p in zip(items, pick):
                mult[x] = p
            if sum(mult) == size:
                yield Sequence(s.group, tuple(mult))


def optimal_splits(t1: Sequence, k: int) -> list[tuple[Sequence, Sequence]]:
    """All (U, V) with |V| = k - 1 maximizing |supp V|, then |supp V ∩ supp U|."""
    best = None
    out = []
    for v in _sub_sequences(t1, k - 1):
        u = remove(t1, v)
        sv = _supp(v)
        score = (len(sv), len(sv & _supp(u)))
        if best is None or score > best:
            best, out = score, [(u, v)]
        elif score == best:
            out.append((u, v))
    return out


class _Context:
    """Per-normalization data shared by every choice of T0 and V."""

    def __init__(self, s: Sequence, shift: int, k: int, t: int, ns: GroupSubset):
        g = s.group
        self.group = g
        self.sequence = s
        self.shift = shift
        self.normalized = translate(s, shift)
        self.n = g.order
        self.k = k
        self.t = t
        self.h = self.normalized.mult[0]
        self.T = Sequence(g, (0,) + self.normalized.mult[1:])
        self.nsum = ns
        n, h = self.n, self.h
        _require(len(self.T) == n - h + k, "length", "|T| != n - h + k", T=self.T)
        self.target = sigma_at_least(self.T, n - h)
        _require(self.target == ns, "reduction", "Sigma_{>=n-h}(T) != Sigma_n(S)",
                 S=s, left=self.target, right=ns)


def _evaluate(ctx: _Context, t0: Sequence, t1: Sequence, u: Sequence, v: Sequence,
              ell_set: set[int]) -> dict:
    """Build A, B, C for one split and check every bound along the inequality chain."""
    g = ctx.group
    n, k, t, h = ctx.n, ctx.k, ctx.t, ctx.h
    objs = dict(S=ctx.sequence, T0=t0, U=u, V=v)
    _require(len(u) == n - h - len(t0) + 1, "split", "|U| != n - h - |T0| + 1", **objs)
    su = sequence_sum(u)
    sig_v = sigma_all(v)
    a = _set(g, [0] + [int(g.neg_table[x]) for x in ell_set])
    b = _set(g, [su]) | _set(g, [int(g.add_table[su, y]) for y in sig_v.elements])
    supp_u = _supp(u)
    supp_v = _supp(v)
    c = _set(g, [int(g.diff_table[su, x]) for x in supp_u])
    ab = sumset(a, b)
    target = ctx.target
    objs.update(A=a, B=b, C=c)

    _require(len(a) == len(ell_set) + 1, "sizes", "|A| != ell + 1", **objs)
    _require(len(b) == 1 + len(sig_v), "sizes", "|B| != 1 + |Sigma(V)|", **objs)
    _require(ab <= target, "ab_inside_target", "A + B not inside Sigma_{>=n-h}(T)", **objs)
    _require(len(b) >= k - 1 + len(supp_v), "b_lower", "|B| < k - 1 + |supp V|", **objs)
    _require(len(c) == len(supp_u), "c_size", "|C| != |supp U|", **objs)
    _require(c <= target, "c_inside_target", "C not inside Sigma_{>=n-h}(T)", **objs)
    gam = gamma(a, b, su)
    _require(gam == 1, "unique_sum", f"gamma_sigma(U)(A, B) = {gam}", **objs)
    _require(len(ab) >= len(a) + len(b) - 1, "unique_sum", "|A + B| < |A| + |B| - 1", **objs)
    _require(ab.isdisjoint(c), "ab_c_disjoint", "(A + B) ∩ C nonempty", **objs)

    meet = len(supp_u & supp_v)
    steps = [
        ("sigma_ge", len(target)),
        ("ab_plus_c", len(ab) + len(c)),
        ("ab_plus_supp_u", len(ab) + len(supp_u)),
        ("a_plus_b_minus_1", len(a) + len(b) - 1 + len(supp_u)),
        ("ell_sigma_v", 1 + len(ell_set) + len(sig_v) + len(supp_u)),
        ("ell_v_supp_v", 1 + len(ell_set) + len(v) + len(supp_v) - 1 + len(supp_u)),
        ("ell_k_supp", len(ell_set) + k - 1 + len(supp_v) + len(supp_u)),
        ("ell_k_supp_uv", len(ell_set) + k - 1 + len(supp_u | supp_v) + meet),
        ("final", k + t - 2 + meet),
    ]
    equal_steps = {"ab_plus_supp_u", "ell_sigma_v", "ell_k_supp", "ell_k_supp_uv", "final"}
    for (prev_name, prev), (name, val) in zip(steps, steps[1:]):
        if name in equal_steps:
            _require(val == prev, "chain", f"{prev_name} = {prev} but {name} = {val}", **objs)
        else:
            _require(prev >= val, "chain", f"{prev_name} = {prev} < {name} = {val}", **objs)
    certified = len(ab | c)
    return {"U": u, "V": v, "A": a, "B": b, "C": c, "chain": dict(steps),
            "certified": certified, "certifies": certified >= k + t - 1,
            "supp_meet": meet, "sigma_v": len(sig_v)}


def _small_k_certificate(ctx: _Context, t1: Sequence, ell_set: set[int], ev: dict) -> dict:
    """Direct certificate of |{0} ∪ Sigma_{<=k}(T)| >= t + k - 1 for k <= 3."""
    g = ctx.group
    k, t, n, h = ctx.k, ctx.t, ctx.n, ctx.h
    T = ctx.T
    objs = dict(S=ctx.sequence, T1=t1)
    zero = _set(g, [0])
    low = zero | sigma_at_most(T, k)
    # complement identity: Sigma_{>=n-h}(T) = sigma(T) - ({0} ∪ Sigma_{<=k}(T))
    st = sequence_sum(T)
    reflected = _set(g, [int(g.diff_table[st, y]) for y in low.elements])
    _require(reflected == ctx.target, "complement", "complement identity fails", **objs)
    info = {"low_value": len(low), "low_target": t + k - 1, "lemma_hypothesis": None,
            "lemma": None, "lemma_conclusion": None}
    if k == 1:
        info["lemma"] = "support"
        info["lemma_conclusion"] = len(low) == 1 + len(_supp(T))
        _require(len(low) >= t, "low_bound", f"{len(low)} < t = {t}", **objs)
        return info
    d = _set(g, [0] + sorted(_supp(t1)))
    info["D"] = format_set(d)
    sym = (d & _set(g, [int(g.neg_table[x]) for x in d.elements])).elements == (0,)
    info["lemma_hypothesis"] = sym
    ell = len(ell_set)
    if k == 2 or len(d) >= 6:
        s2 = sigma_at_most(t1, 2)
        _require(restricted_self_sumset(d) == s2, "restricted", "D ∔ D != Sigma_{<=2}(T1)", **objs)
        sep = 1 + ell + len(s2)
        _require(len(low) >= sep, "low_count",
                 f"|{{0}} ∪ Sigma_<=k(T)| = {len(low)} < 1 + ell + |Sigma_<=2(T1)| = {sep}", **objs)
        needed = len(d) if len(d) <= 5 else len(d) + 1
        info["lemma"] = "restricted-3-5" if len(d) <= 5 else "restricted-6+"
        info["lemma_conclusion"] = len(s2) >= needed
        if sym:
            v = check_restricted_sumset(d)
            _require(v.holds, "lemma", f"restricted sumset bound fails on D = {d}", **objs)
    else:
        # k == 3 and |D| == 5, i.e. |T1| == 4
        s3 = sigma_at_most(t1, 3)
        sep = 1 + ell + len(s3)
        _require(len(low) >= sep, "low_count",
                 f"|{{0}} ∪ Sigma_<=3(T)| = {len(low)} < 1 + ell + |Sigma_<=3(T1)| = {sep}", **objs)
        info["lemma"] = "set-bound"
        v = check_set_sum_bound(_set(g, sorted(_supp(t1))))
        _require(v.holds, "lemma", "zero-sum free set bound fails on T1", **objs)
        info["lemma_conclusion"] = len(s3) >= 2 * len(t1) - 1
    _require(len(low) >= t + k - 1, "low_bound", f"{len(low)} < t + k - 1 = {t + k - 1}", **objs)
    return info


def _involution_count(g, v: Sequence) -> int:
    return sum(1 for x in v if g.order_table[x] == 2)


def _trace_split(ctx: _Context, t0: Sequence, t1: Sequence, ell_set: set[int],
                 u: Sequence, v: Sequence) -> tuple[str, dict, dict | None, bool]:
    """Returns (branch, evaluation, fallback info, v_rechosen)."""
    ev = _evaluate(ctx, t0, t1, u, v, ell_set)
    if ev["certifies"]:
        return MAIN_CHAIN, ev, None, False
    k = ctx.k
    objs = dict(S=ctx.sequence, T0=t0, U=u, V=v)
    _require(ev["certified"] == ctx.k + ctx.t - 2, "forced",
             "chain fell short by more than one", **objs)
    _require(ev["supp_meet"] == 0, "forced", "supp(U) ∩ supp(V) nonempty", **objs)
    if k >= 2:
        _require(t1.is_squarefree(), "forced", "T1 is not square-free", **objs)
        zv = check_zsf_support_bound(v)
        _require(zv.lhs == zv.rhs, "forced", "|Sigma(V)| != |V| + |supp V| - 1", **objs)
    if k <= 3:
        return K_LE_3_SQUAREFREE, ev, _small_k_certificate(ctx, t1, ell_set, ev), False
    if k == 4:
        g = ctx.group
        for alt in _sub_sequences(t1, k - 1):
            if _involution_count(g, alt) == 1:
                continue
            alt_ev = _evaluate(ctx, t0, t1, remove(t1, alt), alt, ell_set)
            if alt_ev["certifies"]:
                return MAIN_CHAIN, alt_ev, None, True
        low = _set(g, [0]) | sigma_at_most(ctx.T, k)
        _require(len(low) >= ctx.t + k - 1, "low_bound", "direct count below t + k - 1", **objs)
        return DIRECT_FALLBACK, ev, {"low_value": len(low), "low_target": ctx.t + k - 1}, False
    raise TraceFailure("forced", f"chain fell short with k = {k} > 4",
                       {key: str(val) for key, val in objs.items()})


def trace(s: Sequence, exhaustive_choices: bool = False) -> TraceReport:
    """Certify |Sigma_n(S)| >= k + t - 1 for a sequence with 0 not in Sigma_n(S).

    By default one deterministic path is traced (smallest most-frequent
    element, colex-first T0 and V). With ``exhaustive_choices`` every
    most-frequent element, every longest zero-sum T0 and every optimal V is
    traced and all of them must certify.
    """
    g = s.group
    n = g.order
    k = len(s) - n
    if k < 1:
        raise SequenceTooShortError(f"need |S| >= n + 1 = {n + 1}, got {len(s)}")
    ns = nsum(s)
    if 0 in ns:
        raise ConditionOneError(f"0 ∈ Sigma_n({s}); the construction does not apply")
    t = sum(1 for x in s.mult if x)
    h = max(s.mult)
    shifts = [x for x, m in enumerate(s.mult) if m == h]
    if not exhaustive_choices:
        shifts = shifts[:1]

    first: TraceReport | None = None
    checked = 0
    branches: Counter = Counter()
    for shift in shifts:
        ctx = _Context(s, shift, k, t, ns)
        T = ctx.T
        _require(0 < h < n, "normalize", f"h = {h} outside (0, n)", S=s)
        z = max_zero_sum_length(T)
        _require(z <= n - h - 1, "t0_bound", f"|T0| = {z} > n - h - 1 = {n - h - 1}", S=s)
        if z == 0:
            t0_choices = [Sequence.empty(g)]
        else:
            t0_choices = iter_zero_sum_subsequences(T, z)
            if not exhaustive_choices:
                t0_choices = itertools.islice(t0_choices, 1)
        for t0 in t0_choices:
            t1 = remove(T, t0)
            _require(0 not in sigma_all(t1), "t1_zsf", "T1 has a zero-sum subsequence", S=s, T0=t0)
            s0, s1 = _supp(t0), _supp(t1)
            ell_set = s0 - s1
            avoids = all(x not in sigma_all(t1) for x in ell_set)
            _require(avoids, "ell_avoids_t1", "some x in supp(T0) \\ supp(T1) lies in Sigma(T1)",
                     S=s, T0=t0, T1=t1)
            _require(len(t1) == n - h + k - len(t0) and len(t1) >= k + 1, "t1_length",
                     "|T1| != n - h + k - |T0| or |T1| < k + 1", S=s, T0=t0)
            # A ⊆ Sigma_{>=|T0|-1}(T0) ∪ {0}; for empty T0 only the empty-sum convention gives 0
            if len(t0):
                sums_t0 = sigma_at_least(t0, len(t0) - 1)
                _require(all(int(g.neg_table[x]) in sums_t0 for x in ell_set) and 0 in sums_t0,
                         "a_in_t0", "A not inside Sigma_{>=|T0|-1}(T0)", S=s, T0=t0)
            splits = optimal_splits(t1, k)
            if not exhaustive_choices:
                splits = splits[:1]
            for u, v in splits:
                branch, ev, fallback, rechosen = _trace_split(ctx, t0, t1, ell_set, u, v)
                certified = fallback["low_value"] if fallback else ev["certified"]
                _require(k + t - 1 <= certified <= len(ns), "certificate",
                         f"certified {certified} outside [k + t - 1, |Sigma_n|] = "
                         f"[{k + t - 1}, {len(ns)}]", S=s, T0=t0, U=ev["U"], V=ev["V"])
                checked += 1
                branches[branch] += 1
                if first is None:
                    notes = []
                    if not len(t0):
                        notes.append("T0 empty: A = {0} relies on the empty-sum convention")
                    if fallback and fallback.get("lemma_hypothesis") is False:
                        notes.append("D ∩ -D != {0} (T1 holds an element of order two); "
                                     "the low-length count is certified directly")
                    first = TraceReport(
                        sequence=s, shift=shift, normalized=ctx.normalized, n=n, k=k, t=t, h=h,
                        T=T, T0=t0, T1=t1, r=len(s0), ell=len(ell_set), U=ev["U"], V=ev["V"],
                        A=ev["A"], B=ev["B"], C=ev["C"],
                        claims={"ell_avoids_t1": True, "unique_sum": True, "ab_c_disjoint": True,
                                "gamma_sigma_u": 1, "ab_inside_target": True, "c_inside_target": True,
                                "t0_bound": True, "reduction_equality": True},
                        chain=ev["chain"], branch=branch, certified_bound=certified,
                        nsum_size=len(ns), v_rechosen=rechosen, fallback=fallback, notes=notes)
    assert first is not None
    first.alternatives_checked = checked
    first.branch_counts = dict(sorted(branches.items()))
    return first


@dataclass
class CorpusStats:
    traced: int = 0
    failures: int = 0
    alternatives: int = 0
    branches: dict = field(default_factory=dict)
    slack: dict = field(default_factory=dict)
    hypothesis_gaps: int = 0
    first_failure: str | None = None

    def to_dict(self) -> dict:
        return {"traced": self.traced, "failures": self.failures,
                "alternatives": self.alternatives,
                "branches": dict(sorted(self.branches.items())),
                "slack": {str(k): v for k, v in sorted(self.slack.items())},
                "hypothesis_gaps": self.hypothesis_gaps, "first_failure": self.first_failure}


def _trace_batch(args):
    seqs, exhaustive = args
    out = []
    for s in seqs:
        try:
            rep = trace(s, exhaustive_choices=exhaustive)
        except TraceFailure as e:
            out.append(("fail", str(s), f"{e} {e.objects}"))
            continue
        except (ConditionOneError, SequenceTooShortError) as e:
            out.append(("fail", str(s), str(e)))
            continue
        gap = bool(rep.fallback and rep.fallback.get("lemma_hypothesis") is False)
        out.append(("ok", rep.branch_counts, rep.slack, rep.alternatives_checked, gap))
    return out


def trace_corpus(instances, exhaustive_choices: bool = True, workers: int = 1,
                 fail_fast: bool = True, batch: int = 256) -> CorpusStats:
    """Trace every CONDITION_2 instance (a SweepReport or an iterable of sequences)."""
    if hasattr(instances, "condition2_instances"):
        if instances.condition2_instances is None:
            raise ValueError("sweep was run without keep_condition2=True")
        instances = instances.condition2_instances
    seqs = list(instances)
    stats = CorpusStats()
    branches: Counter = Counter()
    slack: Counter = Counter()
    jobs = [(seqs[i:i + batch], exhaustive_choices) for i in range(0, len(seqs), batch)]

    def absorb(results):
        for res in results:
            stats.traced += 1
            if res[0] == "fail":
                stats.failures += 1
                if stats.first_failure is None:
                    stats.first_failure = f"{res[1]}: {res[2]}"
                if fail_fast:
                    raise TraceFailure("corpus", stats.first_failure)
                continue
            _, bc, sl, alts, gap = res
            branches.update(bc)
            slack[sl] += 1
            stats.alternatives += alts
            stats.hypothesis_gaps += gap

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for results in pool.map(_trace_batch, jobs):
                absorb(results)
    else:
        for job in jobs:
            absorb(_trace_batch(job))
    stats.branches = dict(branches)
    stats.slack = dict(slack)
    return stats
