"""Sequences over a finite abelian group, stored as multiplicity vectors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidElementError, NotSubsequenceError
from .groups import GroupSpec


def format_element(group: GroupSpec, code: int) -> str:
    if group.is_cyclic:
        return str(group.check(code))
    return "(" + ",".join(map(str, group.decode(code))) + ")"


@dataclass(frozen=True)
class Sequence:
    """A multiset over ``group``; ``mult[g]`` is the multiplicity of code g."""

    group: GroupSpec
    mult: tuple[int, ...]

    def __post_init__(self):
        mult = tuple(int(v) for v in self.mult)
        object.__setattr__(self, "mult", mult)
        if len(mult) != self.group.order:
            raise InvalidElementError(
                f"multiplicity vector has length {len(mult)}, group order is {self.group.order}")
        if any(v < 0 for v in mult):
            raise InvalidElementError("negative multiplicity")

    @classmethod
    def from_elements(cls, group: GroupSpec, elements) -> "Sequence":
        mult = [0] * group.order
        for e in elements:
            mult[group.check(e)] += 1
        return cls(group, tuple(mult))

    @classmethod
    def from_counts(cls, group: GroupSpec, counts: dict) -> "Sequence":
        mult = [0] * group.order
        for e, v in counts.items():
            mult[group.check(e)] += v
        return cls(group, tuple(mult))

    @classmethod
    def empty(cls, group: GroupSpec) -> "Sequence":
        return cls(group, (0,) * group.order)

    def __len__(self) -> int:
        return sum(self.mult)

    def __iter__(self) -> Iterator[int]:
        """Elements with repetition, in increasing code order."""
        for g, v in enumerate(self.mult):
            for _ in range(v):
                yield g

    def __str__(self) -> str:
        parts = []
        for g, v in enumerate(self.mult):
            if v:
                e = format_element(self.group, g)
                parts.append(e if v == 1 else f"{e}^{v}")
        return f"{self.group.literal}:" + ("" if not parts else " " + " ".join(parts))

    def items(self):
        """(element, multiplicity) pairs over the support."""
        return [(g, v) for g, v in enumerate(self.mult) if v]

    def multiplicity(self, g: int) -> int:
        return self.mult[self.group.check(g)]

    def divides(self, other: "Sequence") -> bool:
        return all(a <= b for a, b in zip(self.mult, other.mult))

    def is_squarefree(self) -> bool:
        return all(v <= 1 for v in self.mult)


def length(s: Sequence) -> int:
    return len(s)


def max_multiplicity(s: Sequence) -> int:
    return max(s.mult, default=0)


def support(s: Sequence):
    from .sumsets import GroupSubset
    return GroupSubset.from_elements(s.group, [g for g, v in enumerate(s.mult) if v])


def sequence_sum(s: Sequence) -> int:
    """sigma(S); the empty sequence sums to 0."""
    return s.group.sum_of(s.mult)


def _same_group(s: Sequence, t: Sequence):
    if s.group != t.group:
        raise InvalidElementError(f"sequences live in different groups: {s.group} vs {t.group}")


def concat(s: Sequence, t: Sequence) -> Sequence:
    _same_group(s, t)
    return Sequence(s.group, tuple(a + b for a, b in zip(s.mult, t.mult)))


def remove(s: Sequence, t: Sequence) -> Sequence:
    """S * T^{-1}; requires T | S."""
    _same_group(s, t)
    if not t.divides(s):
        raise NotSubsequenceError(f"{t} is not a subsequence of {s}")
    return Sequence(s.group, tuple(a - b for a, b in zip(s.mult, t.mult)))


def translate(s: Sequence, g: int) -> Sequence:
    """Replace every element x by x - g."""
    grp = s.group
    g = grp.check(g)
    # new multiplicity at y is old multiplicity at y + g
    src = grp.add_table[:, g]
    return Sequence(grp, tuple(s.mult[int(src[y])] for y in range(grp.order)))


# -- enumeration in colexicographic order ------------------------------------

def count_sequences(order: int, length: int) -> int:
    return math.comb(order + length - 1, length)


def _count(positions: int, total: int) -> int:
    # vectors of `positions` non-negative entries summing to `total`
    if positions == 0:
        return 1 if total == 0 else 0
    return math.comb(positions + total - 1, total)


def mult_rank(mult) -> int:
    """Colex rank of a multiplicity vector among vectors of the same size and sum."""
    rank = 0
    rem = sum(mult)
    for i in range(len(mult) - 1, 0, -1):
        v = mult[i]
        for c in range(v):
            rank += _count(i, rem - c)
        rem -= v
    return rank


def mult_unrank(order: int, length: int, rank: int) -> tuple[int, ...]:
    total = count_sequences(order, length)
    if not 0 <= rank < total:
        raise IndexError(f"rank {rank} outside [0, {total})")
    out = [0] * order
    rem = length
    for i in range(order - 1, 0, -1):
        c = 0
        while True:
            block = _count(i, rem - c)
            if rank < block:
                break
            rank -= block
            c += 1
        out[i] = c
        rem -= c
    out[0] = rem
    return tuple(out)


def _successor(v: list[int]) -> bool:
    n = len(v)
    j = 0
    while j < n and v[j] == 0:
        j += 1
    j += 1
    if j >= n:
        return False
    rest = sum(v[:j]) - 1
    for i in range(j):
        v[i] = 0
    v[0] = rest
    v[j] += 1
    return True


def iter_mult_vectors(order: int, length: int, start: int = 0,
                      stop: int | None = None) -> Iterator[tuple[int, ...]]:
    """Multiplicity vectors with ranks in [start, stop), in colex order."""
    total = count_sequences(order, length)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    v = list(mult_unrank(order, length, start))
    for _ in range(stop - start):
        yield tuple(v)
        if not _successor(v):
            return


def enumerate_sequences(group: GroupSpec, length: int, start: int = 0,
                        stop: int | None = None) -> Iterator[Sequence]:
    """Every multiset of the given size over ``group`` exactly once.

    ``start``/``stop`` select a contiguous rank range, so disjoint ranges can
    be handed to independent workers or resumed from a checkpoint.
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    for mult in iter_mult_vectors(group.order, length, start, stop):
        yield Sequence(group, mult)


def mult_array(order: int, length: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    rows = list(iter_mult_vectors(order, length, start, stop))
    if not rows:
        return np.zeros((0, order), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def colex_key(mult) -> tuple[int, ...]:
    return tuple(reversed(mult))


def is_orbit_minimal(s: Sequence, perms) -> bool:
    """True when S is colex-minimal among its images under the given code permutations."""
    key = colex_key(s.mult)
    for image in perms:
        moved = [0] * len(s.mult)
        for c, v in enumerate(s.mult):
            moved[image[c]] = v
        if colex_key(moved) < key:
            return False
    return True


def orbit(s: Sequence, perms) -> set[tuple[int, ...]]:
    out = set()
    for image in perms:
        moved = [0] * len(s.mult)
        for c, v in enumerate(s.mult):
            moved[image[c]] = v
        out.add(tuple(moved))
    return out
