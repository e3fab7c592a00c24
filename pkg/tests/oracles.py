"""Brute-force reference implementations.

Nothing here imports from zerosum: groups are coordinate tuples, sequences
are plain element lists, and every set is built by enumerating subsets.
Codes use the same mixed-radix convention (last coordinate fastest), which
is just the position in itertools.product order.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter


def all_coords(factors):
    return list(itertools.product(*(range(d) for d in factors)))


def code_of(factors, coords):
    code = 0
    for c, d in zip(coords, factors):
        code = code * d + (c % d)
    return code


def coords_of(factors, code):
    out = []
    for d in reversed(factors):
        code, c = divmod(code, d)
        out.append(c)
    return tuple(reversed(out))


def add(factors, a, b):
    ca, cb = coords_of(factors, a), coords_of(factors, b)
    return code_of(factors, [x + y for x, y in zip(ca, cb)])


def neg(factors, a):
    return code_of(factors, [-c for c in coords_of(factors, a)])


def total(factors, elems):
    acc = 0
    for e in elems:
        acc = add(factors, acc, e)
    return acc


def order_of(factors, a):
    x, k = a, 1
    while x != 0:
        x = add(factors, x, a)
        k += 1
    return k


def order_census(factors):
    n = math.prod(factors)
    return sorted(order_of(factors, a) for a in range(n))


def subseq_sums(factors, elems, r):
    """Sigma_r over all index subsets of size r."""
    return {total(factors, c) for c in itertools.combinations(elems, r)}


def profile(factors, elems):
    return [subseq_sums(factors, elems, r) for r in range(len(elems) + 1)]


def all_sums(factors, elems):
    out = set()
    for r in range(1, len(elems) + 1):
        out |= subseq_sums(factors, elems, r)
    return out


def sumset(factors, a, b):
    return {add(factors, x, y) for x in a for y in b}


def restricted(factors, a):
    return {add(factors, x, y) for x, y in itertools.combinations(sorted(a), 2)}


def gamma(factors, a, b, g):
    return sum(1 for x in a for y in b if add(factors, x, y) == g)


def multisets(n, length):
    return list(itertools.combinations_with_replacement(range(n), length))


def longest_zero_sum(factors, elems):
    best = 0
    for r in range(1, len(elems) + 1):
        if 0 in subseq_sums(factors, elems, r):
            best = r
    return best


def theorem_outcome(factors, elems):
    """('C1'|'C2'|'CE', |Sigma_n|, bound) for a sequence of length n + k."""
    n = math.prod(factors)
    k = len(elems) - n
    t = len(set(elems))
    sums = subseq_sums(factors, elems, n)
    bound = k + t - 1
    if 0 in sums:
        return "C1", len(sums), bound
    return ("C2" if len(sums) >= bound else "CE"), len(sums), bound


def translate(factors, elems, g):
    return sorted(add(factors, e, neg(factors, g)) for e in elems)


def same_up_to_translation(factors, a, b):
    n = math.prod(factors)
    target = Counter(b)
    return any(Counter(translate(factors, a, g)) == target for g in range(n))


_ADD_CACHE: dict = {}


def add_table(factors):
    factors = tuple(factors)
    if factors not in _ADD_CACHE:
        n = math.prod(factors)
        _ADD_CACHE[factors] = [[add(factors, a, b) for b in range(n)] for a in range(n)]
    return _ADD_CACHE[factors]


def profile_by_masks(factors, elems):
    """Same as profile(), walking all 2^|S| index subsets with incremental sums."""
    tab = add_table(factors)
    L = len(elems)
    sums = [0] * (1 << L)
    rows = [set() for _ in range(L + 1)]
    rows[0].add(0)
    for mask in range(1, 1 << L):
        low = (mask & -mask).bit_length() - 1
        sums[mask] = tab[sums[mask & (mask - 1)]][elems[low]]
        rows[bin(mask).count("1")].add(sums[mask])
    return rows
