"""Subsets of a group as membership bitmaps, and the set algebra on them."""
from __future__ import annotations

import numpy as np

from .errors import EmptySetError, InvalidElementError, TooSmallError
from .groups import GroupSpec


class GroupSubset:
    """An immutable set of element codes backed by a boolean mask of length |G|."""

    __slots__ = ("group", "mask")

    def __init__(self, group: GroupSpec, mask):
        mask = np.array(mask, dtype=bool).reshape(-1)
        if mask.shape[0] != group.order:
            raise InvalidElementError(
                f"mask has length {mask.shape[0]}, group order is {group.order}")
        mask.setflags(write=False)
        self.group = group
        self.mask = mask

    @classmethod
    def from_elements(cls, group: GroupSpec, elements) -> "GroupSubset":
        mask = np.zeros(group.order, dtype=bool)
        for e in elements:
            mask[group.check(e)] = True
        return cls(group, mask)

    @classmethod
    def empty(cls, group: GroupSpec) -> "GroupSubset":
        return cls(group, np.zeros(group.order, dtype=bool))

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.mask))

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, code) -> bool:
        return 0 <= code < self.group.order and bool(self.mask[code])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupSubset):
            return NotImplemented
        return self.group == other.group and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash((self.group, self.mask.tobytes()))

    def __repr__(self) -> str:
        from .sequences import format_element
        body = ",".join(format_element(self.group, e) for e in self.elements)
        return f"{{{body}}}"

    def _check_other(self, other: "GroupSubset"):
        if self.group != other.group:
            raise InvalidElementError(f"sets live in different groups: {self.group} vs {other.group}")

    def __or__(self, other):
        self._check_other(other)
        return GroupSubset(self.group, self.mask | other.mask)

    def __and__(self, other):
        self._check_other(other)
        return GroupSubset(self.group, self.mask & other.mask)

    def __sub__(self, other):
        self._check_other(other)
        return GroupSubset(self.group, self.mask & ~other.mask)

    def __le__(self, other):
        self._check_other(other)
        return not bool((self.mask & ~other.mask).any())

    def isdisjoint(self, other) -> bool:
        self._check_other(other)
        return not bool((self.mask & other.mask).any())


def _nonempty(*sets: GroupSubset):
    for s in sets:
        if not s:
            raise EmptySetError("sumset operands must be nonempty")
    g = sets[0].group
    for s in sets[1:]:
        if s.group != g:
            raise InvalidElementError(f"sets live in different groups: {g} vs {s.group}")


def shift_mask(group: GroupSpec, mask: np.ndarray, x: int) -> np.ndarray:
    """Mask of x + M; works on the last axis so stacked rows shift together."""
    return mask[..., group.diff_table[:, x]]


def sumset(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    _nonempty(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    g = a.group
    idx = g.diff_table[:, list(small.elements)]  # (order, |small|): y - s
    return GroupSubset(g, large.mask[idx].any(axis=1))


def translate_set(x: int, b: GroupSubset) -> GroupSubset:
    _nonempty(b)
    return GroupSubset(b.group, shift_mask(b.group, b.mask, b.group.check(x)))


def negate(c: GroupSubset) -> GroupSubset:
    _nonempty(c)
    return GroupSubset(c.group, c.mask[c.group.neg_table])


def restricted_self_sumset(a: GroupSubset) -> GroupSubset:
    """{x + y : x, y in A, x != y}."""
    elems = a.elements
    if len(elems) < 2:
        raise TooSmallError("restricted sumset needs at least two elements")
    table = a.group.add_table
    mask = np.zeros(a.group.order, dtype=bool)
    for i, x in enumerate(elems):
        mask[table[x, list(elems[i + 1:])]] = True
    return GroupSubset(a.group, mask)


def gamma(a: GroupSubset, b: GroupSubset, g: int) -> int:
    """Number of pairs (x, y) in A x B with x + y = g."""
    a._check_other(b)
    grp = a.group
    g = grp.check(g)
    # y = g - x must lie in B
    return int(b.mask[grp.diff_table[g, list(a.elements)]].sum()) if a else 0
