"""Instance checks and exhaustive sweeps for the n-sum theorem.

For |G| = n, k >= 1 and |S| = n + k with t distinct elements, either
0 ∈ Sigma_n(S) or |Sigma_n(S)| >= k + t - 1.
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .engine import batch_nsum, nsum
from .errors import SequenceTooShortError, StaleCheckpointError
from .groups import GroupSpec, coordinate_permutations, enumerate_groups_of_order
from .literals import parse_sequence_literal
from .sequences import (Sequence, colex_key, count_sequences, is_orbit_minimal,
                        mult_array)

log = logging.getLogger(__name__)


class Outcome(str, Enum):
    CONDITION_1 = "CONDITION_1"
    CONDITION_2 = "CONDITION_2"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


def classify(zero_in_nsum: bool, nsum_size: int, bound: int) -> Outcome:
    if zero_in_nsum:
        return Outcome.CONDITION_1
    if nsum_size >= bound:
        return Outcome.CONDITION_2
    return Outcome.COUNTEREXAMPLE


@dataclass(frozen=True)
class TheoremVerdict:
    group: GroupSpec
    sequence: Sequence
    n: int
    k: int
    t: int
    zero_in_nsum: bool
    nsum_size: int
    bound: int
    outcome: Outcome

    def to_dict(self) -> dict:
        return {"group": self.group.literal, "sequence": str(self.sequence), "n": self.n,
                "k": self.k, "t": self.t, "zero_in_nsum": self.zero_in_nsum,
                "nsum_size": self.nsum_size, "bound": self.bound,
                "outcome": self.outcome.value}


def verify_instance(s: Sequence, bound_offset: int = 0) -> TheoremVerdict:
    """Classify one sequence. ``bound_offset`` inflates k + t - 1 for self-tests."""
    g = s.group
    n = g.order
    k = len(s) - n
    if k < 1:
        raise SequenceTooShortError(f"need |S| >= n + 1 = {n + 1}, got {len(s)}")
    ns = nsum(s)
    t = sum(1 for v in s.mult if v)
    bound = k + t - 1 + bound_offset
    zero = 0 in ns
    return TheoremVerdict(g, s, n, k, t, zero, len(ns), bound, classify(zero, len(ns), bound))


@dataclass
class SweepCheckpoint:
    group: str
    length: int
    next_rank: int = 0
    condition1: int = 0
    condition2: int = 0
    counterexample: int = 0
    skipped: int = 0
    tight_count: int = 0
    bound_offset: int = 0
    automorphism_filter: bool = False
    tight: list[str] = field(default_factory=list)
    counterexamples: list[str] = field(default_factory=list)

    @property
    def processed(self) -> int:
        return self.condition1 + self.condition2 + self.counterexample + self.skipped

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SweepCheckpoint":
        return cls(**d)

    def save(self, path):
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path) -> "SweepCheckpoint":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class SweepReport:
    group: GroupSpec
    k: int
    total: int
    condition1: int
    condition2: int
    counterexample_count: int
    tight_count: int
    skipped: int
    complete: bool
    tight: list[Sequence]
    counterexamples: list[Sequence]
    condition2_instances: list[Sequence] | None = None
    checkpoint: SweepCheckpoint | None = None

    @property
    def n(self) -> int:
        return self.group.order

    def to_dict(self) -> dict:
        return {"group": self.group.literal, "n": self.n, "k": self.k, "total": self.total,
                "condition1": self.condition1, "condition2": self.condition2,
                "tight": [str(s) for s in self.tight],
                "counterexamples": [str(s) for s in self.counterexamples],
                "tight_count": self.tight_count, "skipped": self.skipped,
                "complete": self.complete}


def _process_chunk(args):
    group, length, lo, hi, bound_offset, perms, keep_c2 = args
    k = length - group.order
    mults = mult_array(group.order, length, lo, hi)
    skipped = 0
    if perms:
        keep = [is_orbit_minimal(Sequence(group, tuple(m)), perms) for m in mults.tolist()]
        skipped = len(keep) - sum(keep)
        mults = mults[np.array(keep, dtype=bool)] if len(keep) else mults
    ns = batch_nsum(group, mults)
    zero = ns[:, 0]
    size = ns.sum(axis=1)
    t = (mults > 0).sum(axis=1)
    tight_bound = k + t - 1
    c1 = zero
    bad = ~zero & (size < tight_bound + bound_offset)
    c2 = ~zero & ~bad
    tight = ~zero & (size == tight_bound)
    rows = mults.tolist()
    return {
        "count": hi - lo,
        "condition1": int(c1.sum()),
        "condition2": int(c2.sum()),
        "counterexample": int(bad.sum()),
        "skipped": skipped,
        "tight_count": int(tight.sum()),
        "tight": [tuple(rows[i]) for i in np.flatnonzero(tight)],
        "counterexamples": [tuple(rows[i]) for i in np.flatnonzero(bad)],
        "condition2_instances": [tuple(rows[i]) for i in np.flatnonzero(c2)] if keep_c2 else None,
    }


def sweep(group: GroupSpec, k: int, resume: SweepCheckpoint | None = None, *,
          checkpoint_path=None, checkpoint_interval: int = 50_000, tight_cap: int = 100,
          workers: int = 1, bound_offset: int = 0, automorphism_filter: bool = False,
          keep_condition2: bool = False, stop_rank: int | None = None,
          stop_on_counterexample: bool = False, chunk: int = 8192,
          on_checkpoint=None) -> SweepReport:
    """Verify every multiset of length n + k over ``group`` exactly once.

    Ranks are processed in contiguous chunks (colex order); with workers > 1
    chunks are farmed out to a process pool and merged here in rank order.
    ``stop_rank`` ends the sweep early, which is how interruption is simulated.
    Checkpoints go to ``checkpoint_path`` and/or the ``on_checkpoint`` callback.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = group.order
    length = n + k
    total = count_sequences(n, length)
    if resume is None:
        cp = SweepCheckpoint(group.literal, length, bound_offset=bound_offset,
                             automorphism_filter=automorphism_filter)
    else:
        if (resume.group, resume.length) != (group.literal, length):
            raise StaleCheckpointError(
                f"checkpoint is for {resume.group} length {resume.length}, "
                f"not {group.literal} length {length}")
        if (resume.bound_offset, resume.automorphism_filter) != (bound_offset, automorphism_filter):
            raise StaleCheckpointError("checkpoint was written with different sweep options")
        cp = SweepCheckpoint.from_dict(resume.to_dict())
    end = total if stop_rank is None else min(stop_rank, total)
    perms = coordinate_permutations(group) if automorphism_filter else None
    if perms is not None and len(perms) == 1:
        perms = None
    step = max(1, min(chunk, checkpoint_interval))
    jobs = [(group, length, lo, min(lo + step, end), bound_offset, perms, keep_condition2)
            for lo in range(cp.next_rank, end, step)]
    c2_list: list[Sequence] = []
    since = 0

    def merge(res, hi):
        nonlocal since
        for key in ("condition1", "condition2", "counterexample", "skipped", "tight_count"):
            setattr(cp, key, getattr(cp, key) + res[key])
        room = tight_cap - len(cp.tight)
        cp.tight.extend(str(Sequence(group, m)) for m in res["tight"][:max(room, 0)])
        for m in res["counterexamples"]:
            s = Sequence(group, m)
            (log.debug if bound_offset else log.warning)("counterexample found: %s", s)
            cp.counterexamples.append(str(s))
        if keep_condition2:
            c2_list.extend(Sequence(group, m) for m in res["condition2_instances"])
        cp.next_rank = hi
        since += res["count"]
        if since >= checkpoint_interval:
            save()
            since = 0

    def save():
        if checkpoint_path is not None:
            cp.save(checkpoint_path)
        if on_checkpoint is not None:
            on_checkpoint(cp)

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for job, res in zip(jobs, pool.map(_process_chunk, jobs)):
                merge(res, job[3])
                if stop_on_counterexample and cp.counterexamples:
                    break
    else:
        for job in jobs:
            merge(_process_chunk(job), job[3])
            if stop_on_counterexample and cp.counterexamples:
                break
    save()
    return SweepReport(
        group=group, k=k, total=total, condition1=cp.condition1, condition2=cp.condition2,
        counterexample_count=cp.counterexample, tight_count=cp.tight_count, skipped=cp.skipped,
        complete=cp.next_rank >= total,
        tight=[parse_sequence_literal(x) for x in cp.tight],
        counterexamples=[parse_sequence_literal(x) for x in cp.counterexamples],
        condition2_instances=c2_list if keep_condition2 else None,
        checkpoint=cp)


def groups_in_orders(lo: int, hi: int) -> list[GroupSpec]:
    return [g for n in range(lo, hi + 1) for g in enumerate_groups_of_order(n)]


def search_counterexample(orders: range, k_max: int, bound_offset: int = 0,
                          workers: int = 1) -> TheoremVerdict | None:
    """First counterexample in (order, factors, k, colex rank) order, or None.

    A positive ``bound_offset`` is the self-test mode: the inflated bound must
    be violated somewhere, otherwise the pipeline is vacuous.
    """
    for n in orders:
        for g in enumerate_groups_of_order(n):
            for k in range(1, k_max + 1):
                rep = sweep(g, k, bound_offset=bound_offset, workers=workers,
                            stop_on_counterexample=True, tight_cap=0)
                if rep.counterexamples:
                    first = min(rep.counterexamples, key=lambda s: colex_key(s.mult))
                    return verify_instance(first, bound_offset=bound_offset)
    return None
