"""Finite abelian groups in invariant-factor form.

Elements are integer codes: the mixed-radix encoding of a coordinate vector
``(c_1, ..., c_m)`` with the last coordinate varying fastest, so sorting codes
sorts coordinate tuples lexicographically.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .errors import InvalidElementError, InvalidGroupError

MAX_ORDER = 4096


def _factorize(d: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= d:
        while d % p == 0:
            out[p] = out.get(p, 0) + 1
            d //= p
        p += 1
    if d > 1:
        out[d] = out.get(d, 0) + 1
    return out


def _crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        # m and q are coprime here
        t = ((r - x) * pow(m, -1, q)) % q
        x, m = x + m * t, m * q
    return x % m if m > 1 else 0


@dataclass(frozen=True)
class GroupSpec:
    """Z_{d_1} + ... + Z_{d_m} with d_1 | d_2 | ... | d_m, each d_i >= 2."""

    factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", fs)
        if any(d < 2 for d in fs):
            raise InvalidGroupError(f"invariant factors must be >= 2, got {fs}")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise InvalidGroupError(f"{fs} is not a divisibility chain")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupSpec({self.literal})"

    @property
    def literal(self) -> str:
        if not self.factors:
            return "Z1"
        return "x".join(f"Z{d}" for d in self.factors)

    # -- encoding -----------------------------------------------------------

    @cached_property
    def _radix(self) -> tuple[int, ...]:
        # place value of each coordinate
        out = []
        acc = 1
        for d in reversed(self.factors):
            out.append(acc)
            acc *= d
        return tuple(reversed(out))

    def check(self, code: int) -> int:
        if not isinstance(code, (int, np.integer)) or not 0 <= code < self.order:
            raise InvalidElementError(f"{code!r} is not an element code of {self.literal}")
        return int(code)

    def encode(self, coords) -> int:
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise InvalidElementError(f"expected {self.rank} coordinates, got {coords}")
        code = 0
        for c, d in zip(coords, self.factors):
            if not 0 <= c < d:
                raise InvalidElementError(f"coordinate {c} out of range for Z{d}")
            code = code * d + c
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        code = self.check(code)
        out = []
        for d in reversed(self.factors):
            code, c = divmod(code, d)
            out.append(c)
        return tuple(reversed(out))

    # -- cached tables ------------------------------------------------------

    @cached_property
    def coords_array(self) -> np.ndarray:
        """(order, rank) array of coordinates for every code."""
        if not self.factors:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.factors).reshape(self.rank, -1).T
        return np.ascontiguousarray(grids, dtype=np.int64)

    def encode_array(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if not self.factors:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        coords = coords % np.asarray(self.factors, dtype=np.int64)
        return coords @ np.asarray(self._radix, dtype=np.int64)

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords_array
        return self.encode_array(c[:, None, :] + c[None, :, :]).astype(self._dtype)

    @cached_property
    def diff_table(self) -> np.ndarray:
        """diff_table[a, b] = a - b."""
        c = self.coords_array
        return self.encode_array(c[:, None, :] - c[None, :, :]).astype(self._dtype)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode_array(-self.coords_array).astype(self._dtype)

    @cached_property
    def order_table(self) -> np.ndarray:
        out = np.ones(self.order, dtype=np.int64)
        for i, d in enumerate(self.factors):
            col = self.coords_array[:, i]
            out = np.lcm(out, d // np.gcd(col, d))
        return out

    @property
    def _dtype(self):
        return np.int16 if self.order < 2 ** 15 else np.int32

    def elements(self) -> range:
        return range(self.order)

    def multiple(self, j: int, a: int) -> int:
        """j * a."""
        return int(self.encode_array(self.coords_array[a] * j))

    def sum_of(self, mult) -> int:
        """Sum of sum_g mult[g] * g."""
        m = np.asarray(mult, dtype=np.int64)
        return int(self.encode_array(m @ self.coords_array))


def make_group(factors, max_order: int = MAX_ORDER) -> GroupSpec:
    """Normalize any direct-sum presentation into invariant-factor form.

    >>> make_group([6, 4]).factors
    (2, 12)
    """
    factors = [int(d) for d in factors]
    if any(d <= 1 for d in factors):
        raise InvalidGroupError(f"every factor must be >= 2, got {factors}")
    canon, _ = _canonicalize(factors)
    if math.prod(canon) > max_order:
        raise InvalidGroupError(f"order {math.prod(canon)} exceeds the limit {max_order}")
    return GroupSpec(tuple(canon))


def _canonicalize(factors):
    """Return (invariant factors, slot assignment).

    The slot assignment maps each (presentation index, prime) to the canonical
    factor index receiving that prime-power component.
    """
    prime_parts: dict[int, list[tuple[int, int]]] = {}
    for i, d in enumerate(factors):
        for p, e in _factorize(d).items():
            prime_parts.setdefault(p, []).append((e, i))
    m = max((len(v) for v in prime_parts.values()), default=0)
    canon = [1] * m
    slots: dict[tuple[int, int], int] = {}
    for p, parts in prime_parts.items():
        # largest prime powers go to the top invariant factor; ties keep written order
        parts.sort(key=lambda t: (-t[0], -t[1]))
        for j, (e, i) in enumerate(parts):
            canon[m - 1 - j] *= p ** e
            slots[(i, p)] = m - 1 - j
    return canon, slots


def presentation_map(factors):
    """Group plus a coordinate map from the presentation ``Z_{f_1} + ... `` to codes.

    Used for literals such as ``Z4xZ2`` whose written coordinates refer to the
    presentation order rather than the canonical one.
    """
    factors = [int(d) for d in factors]
    group = make_group(factors)
    _, slots = _canonicalize(factors)
    facs = [_factorize(d) for d in factors]

    def to_code(coords) -> int:
        coords = tuple(coords)
        if len(coords) != len(factors):
            raise InvalidElementError(f"expected {len(factors)} coordinates, got {coords}")
        comps: dict[int, list[tuple[int, int]]] = {j: [] for j in range(group.rank)}
        for i, (c, d) in enumerate(zip(coords, factors)):
            if not 0 <= c < d:
                raise InvalidElementError(f"coordinate {c} out of range for Z{d}")
            for p, e in facs[i].items():
                comps[slots[(i, p)]].append((c % p ** e, p ** e))
        canon = []
        for j, d in enumerate(group.factors):
            pairs = comps[j]
            canon.append(_crt([r for r, _ in pairs], [q for _, q in pairs]) % d)
        return group.encode(canon)

    return group, to_code


def _partitions(e: int, max_part=None):
    if max_part is None:
        max_part = e
    if e == 0:
        yield ()
        return
    for first in range(min(e, max_part), 0, -1):
        for rest in _partitions(e - first, first):
            yield (first,) + rest


def enumerate_groups_of_order(n: int) -> list[GroupSpec]:
    """One GroupSpec per isomorphism class, fewest factors first."""
    if n < 1:
        raise InvalidGroupError(f"order must be positive, got {n}")
    primes = sorted(_factorize(n).items())
    out = []
    for combo in itertools.product(*(list(_partitions(e)) for _, e in primes)):
        m = max((len(part) for part in combo), default=0)
        canon = [1] * m
        for (p, _), part in zip(primes, combo):
            for j, e in enumerate(part):
                canon[m - 1 - j] *= p ** e
        out.append(GroupSpec(tuple(canon)))
    out.sort(key=lambda g: (g.rank, g.factors))
    return out


def add(g: GroupSpec, a: int, b: int) -> int:
    return int(g.add_table[g.check(a), g.check(b)])


def neg(g: GroupSpec, a: int) -> int:
    return int(g.neg_table[g.check(a)])


def sub(g: GroupSpec, a: int, b: int) -> int:
    return int(g.diff_table[g.check(a), g.check(b)])


def element_order(g: GroupSpec, a: int) -> int:
    coords = g.decode(a)
    return reduce(math.lcm, (d // math.gcd(d, c) for c, d in zip(coords, g.factors)), 1)


def coordinate_permutations(g: GroupSpec) -> list[tuple[int, ...]]:
    """Automorphisms of g that permute coordinates among equal invariant factors.

    Each is returned as the image of every code; the identity is included.
    """
    idx = range(g.rank)
    perms = []
    for perm in itertools.permutations(idx):
        if any(g.factors[i] != g.factors[perm[i]] for i in idx):
            continue
        image = tuple(g.encode([g.decode(c)[perm[i]] for i in idx]) for c in g.elements())
        if image not in perms:
            perms.append(image)
    return perms
