"""Fixed-length subsequence sums Sigma_r(S) for all r at once.

The profile is built by bounded-multiplicity dynamic programming over
(length, sum) bitmaps: each support element g of multiplicity m contributes
"take j copies of g" for j in [0, m]. Row 0 is the internal convention {0}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import (EmptySequenceError, NoWitnessError, OutOfRangeError,
                     SequenceTooShortError)
from .groups import GroupSpec
from .sequences import Sequence, iter_mult_vectors
from .sumsets import GroupSubset, shift_mask


@dataclass(frozen=True, eq=False)
class SumsProfile:
    """Sigma_r(S) for r in [0, |S|], one boolean row per length."""

    sequence: Sequence
    rows: np.ndarray = field(repr=False)

    @property
    def sequence_length(self) -> int:
        return self.rows.shape[0] - 1

    def row(self, r: int) -> GroupSubset:
        if not 0 <= r <= self.sequence_length:
            raise OutOfRangeError(f"length {r} outside [0, {self.sequence_length}]")
        return GroupSubset(self.sequence.group, self.rows[r])

    def union(self, lo: int, hi: int) -> GroupSubset:
        """Union of rows lo..hi inclusive (clipped to the profile)."""
        lo, hi = max(lo, 0), min(hi, self.sequence_length)
        g = self.sequence.group
        if lo > hi:
            return GroupSubset.empty(g)
        return GroupSubset(g, self.rows[lo:hi + 1].any(axis=0))


def _layers(s: Sequence) -> tuple[list[tuple[int, int]], list[np.ndarray]]:
    """Support items and the DP table after each prefix of the support."""
    g = s.group
    L = len(s)
    rows = np.zeros((L + 1, g.order), dtype=bool)
    rows[0, 0] = True
    items = s.items()
    layers = [rows]
    done = 0
    for x, m in items:
        new = rows.copy()
        step = 0
        for j in range(1, m + 1):
            step = int(g.add_table[step, x])
            hi = min(done, L - j)
            # row r gains (row r - j) + j*x
            new[j:j + hi + 1] |= shift_mask(g, rows[:hi + 1], step)
        done += m
        rows = new
        layers.append(rows)
    return items, layers


@lru_cache(maxsize=8192)
def _profile_rows(s: Sequence) -> np.ndarray:
    rows = _layers(s)[1][-1]
    rows.setflags(write=False)
    return rows


def compute_profile(s: Sequence) -> SumsProfile:
    if len(s) == 0:
        raise EmptySequenceError("profile of the empty sequence is undefined")
    return SumsProfile(s, _profile_rows(s))


def _check_range(s: Sequence, lo: int, name: str):
    if not 1 <= lo <= len(s):
        raise OutOfRangeError(f"{name}={lo} outside [1, {len(s)}]")


def sigma_exact(s: Sequence, r: int) -> GroupSubset:
    _check_range(s, r, "r")
    return compute_profile(s).row(r)


def sigma_at_least(s: Sequence, lo: int) -> GroupSubset:
    """Union of Sigma_r(S) for lo <= r <= |S|."""
    _check_range(s, lo, "l")
    return compute_profile(s).union(lo, len(s))


def sigma_at_most(s: Sequence, hi: int) -> GroupSubset:
    """Union of Sigma_r(S) for 1 <= r <= hi."""
    _check_range(s, hi, "l")
    return compute_profile(s).union(1, hi)


def sigma_all(s: Sequence) -> GroupSubset:
    """Sigma(S); empty for the empty sequence."""
    if len(s) == 0:
        return GroupSubset.empty(s.group)
    return compute_profile(s).union(1, len(s))


def nsum(s: Sequence) -> GroupSubset:
    n = s.group.order
    if len(s) < n:
        raise SequenceTooShortError(f"|S| = {len(s)} < n = {n}")
    return compute_profile(s).row(n)


def is_zero_sum_free(s: Sequence) -> bool:
    return 0 not in sigma_all(s)


def max_zero_sum_length(s: Sequence) -> int:
    """Longest nonempty zero-sum subsequence length, 0 when S is zero-sum free."""
    if len(s) == 0:
        return 0
    rows = _profile_rows(s)
    hits = np.flatnonzero(rows[1:, 0])
    return int(hits[-1]) + 1 if hits.size else 0


def iter_subsequences(s: Sequence, r: int, target: int) -> Iterator[Sequence]:
    """Every subsequence of length r summing to target, in colex order."""
    g = s.group
    target = g.check(target)
    if not 0 <= r <= len(s):
        return
    items, layers = _layers(s)
    if not layers[-1][r, target]:
        return
    chosen = [0] * len(items)

    def walk(i, rem, tgt):
        if i == 0:
            if rem == 0 and tgt == 0:
                mult = [0] * g.order
                for (x, _), j in zip(items, chosen):
                    mult[x] = j
                yield Sequence(g, tuple(mult))
            return
        x, m = items[i - 1]
        prev = layers[i - 1]
        cur = tgt
        for j in range(0, min(m, rem) + 1):
            # cur = tgt - j*x
            if prev[rem - j, cur]:
                chosen[i - 1] = j
                yield from walk(i - 1, rem - j, cur)
            cur = int(g.diff_table[cur, x])
        chosen[i - 1] = 0

    yield from walk(len(items), r, target)


def extract_subsequence(s: Sequence, r: int, target: int) -> Sequence:
    for w in iter_subsequences(s, r, target):
        return w
    raise NoWitnessError(f"no subsequence of length {r} of {s} sums to {target}")


def extract_zero_sum_subsequence(s: Sequence, r: int) -> Sequence:
    """Colex-smallest length-r subsequence with sum 0."""
    return extract_subsequence(s, r, 0)


def iter_zero_sum_subsequences(s: Sequence, r: int) -> Iterator[Sequence]:
    return iter_subsequences(s, r, 0)


# -- batched n-sums for sweeps -------------------------------------------------

@lru_cache(maxsize=64)
def _submultisets(order: int, k: int) -> np.ndarray:
    out = np.array(list(iter_mult_vectors(order, k)), dtype=np.int16)
    out.setflags(write=False)
    return out


def batch_nsum(group: GroupSpec, mults: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Sigma_n for many equal-length sequences at once.

    Uses Sigma_n(S) = sigma(S) - Sigma_k(S) with k = |S| - n: the complement of
    an n-subsequence is a k-subsequence, so only the k-submultisets of G need
    testing for containment in each S.
    """
    mults = np.asarray(mults, dtype=np.int64)
    n = group.order
    if mults.ndim != 2 or mults.shape[1] != n:
        raise ValueError(f"expected an (N, {n}) multiplicity array")
    out = np.zeros((mults.shape[0], n), dtype=bool)
    if mults.shape[0] == 0:
        return out
    lengths = mults.sum(axis=1)
    if not (lengths == lengths[0]).all():
        raise ValueError("batch_nsum needs sequences of one common length")
    k = int(lengths[0]) - n
    if k < 0:
        raise SequenceTooShortError(f"|S| = {lengths[0]} < n = {n}")
    subs = _submultisets(n, k)
    sub_sums = group.encode_array(subs.astype(np.int64) @ group.coords_array)
    onehot = np.zeros((subs.shape[0], n), dtype=np.int32)
    onehot[np.arange(subs.shape[0]), sub_sums] = 1
    sigmas = group.encode_array(mults @ group.coords_array)
    diff = group.diff_table
    for lo in range(0, mults.shape[0], chunk):
        m = mults[lo:lo + chunk]
        fits = (m[:, None, :] >= subs[None, :, :]).all(axis=2)
        sk = (fits.astype(np.int32) @ onehot) > 0
        # x in Sigma_n  <=>  sigma - x in Sigma_k
        out[lo:lo + chunk] = np.take_along_axis(sk, diff[sigmas[lo:lo + chunk]].astype(np.int64), axis=1)
    return out

