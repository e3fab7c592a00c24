"""Text literals for groups, sequences and sets.

    group     Z8 | Z4xZ2 | Z2xZ2xZ2 | Z1           (case-insensitive)
    sequence  <group>: <elem>[^<mult>] ...        e.g. "Z5: 1^4 2^2"
    set       {<elem>,<elem>,...}
    elem      integer (one-factor groups) or (c1,c2,...) in the written factor order

Coordinates refer to the factors as written; ``Z4xZ2`` is canonicalized to
``Z2xZ4`` and formatting always emits the canonical form.
"""
from __future__ import annotations

import re

from .errors import InvalidElementError, InvalidGroupError, LiteralParseError
from .groups import GroupSpec, make_group, presentation_map
from .sequences import Sequence, format_element
from .sumsets import GroupSubset

_GROUP_RE = re.compile(r"z(\d+)((?:xz\d+)*)", re.IGNORECASE)
_FACTOR_RE = re.compile(r"z(\d+)", re.IGNORECASE)
_INT_RE = re.compile(r"\d+")
_TUPLE_RE = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)?\s*\)")


class _Presentation:
    def __init__(self, factors):
        self.factors = factors
        if factors == [1]:
            self.group = GroupSpec(())
            self.to_code = lambda coords: 0
        else:
            self.group, self.to_code = presentation_map(factors)

    def element(self, text: str, pos: int, offset: int) -> tuple[int, int]:
        """Parse one element at text[pos:], return (code, new_pos)."""
        m = _TUPLE_RE.match(text, pos)
        if m:
            if len(self.factors) < 2:
                raise LiteralParseError("coordinate tuple given for a cyclic group", text, offset + pos)
            coords = tuple(int(c) for c in (m.group(1) or "").split(",") if c.strip())
            try:
                return self.to_code(coords), m.end()
            except InvalidElementError as e:
                raise LiteralParseError(str(e), text, offset + pos) from None
        m = _INT_RE.match(text, pos)
        if m:
            if len(self.factors) >= 2:
                raise LiteralParseError("expected a coordinate tuple", text, offset + pos)
            v = int(m.group())
            if v >= self.group.order:
                raise LiteralParseError(f"element {v} out of range for {self.group.literal}",
                                        text, offset + pos)
            return v, m.end()
        raise LiteralParseError("expected an element", text, offset + pos)


def _parse_presentation(text: str, offset: int = 0) -> _Presentation:
    stripped = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    m = _GROUP_RE.fullmatch(stripped)
    if not m:
        raise LiteralParseError("malformed group literal", text, lead)
    factors = [int(d) for d in _FACTOR_RE.findall(stripped)]
    if factors == [1]:
        return _Presentation(factors)
    for i, d in enumerate(factors):
        if d < 2:
            raise LiteralParseError("factor must be >= 2 (Z1 only alone)", text, lead)
    try:
        return _Presentation(factors)
    except InvalidGroupError as e:
        raise LiteralParseError(str(e), text, lead) from None


def parse_group_literal(text: str) -> GroupSpec:
    return _parse_presentation(text).group


def format_group(group: GroupSpec) -> str:
    return group.literal


def parse_sequence_literal(text: str) -> Sequence:
    colon = text.find(":")
    if colon < 0:
        raise LiteralParseError("missing ':' after the group", text, len(text))
    pres = _parse_presentation(text[:colon])
    counts: dict[int, int] = {}
    pos = colon + 1
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        code, pos = pres.element(text, pos, 0)
        mult = 1
        if pos < n and text[pos] == "^":
            m = _INT_RE.match(text, pos + 1)
            if not m:
                raise LiteralParseError("expected a multiplicity after '^'", text, pos + 1)
            mult = int(m.group())
            if mult == 0:
                raise LiteralParseError("multiplicity must be positive", text, pos + 1)
            pos = m.end()
        if pos < n and not text[pos].isspace():
            raise LiteralParseError(f"unexpected {text[pos]!r}", text, pos)
        counts[code] = counts.get(code, 0) + mult
    return Sequence.from_counts(pres.group, counts)


def format_sequence(s: Sequence) -> str:
    return str(s)


def parse_set_literal(text: str, group) -> GroupSubset:
    """Parse ``{e1,e2,...}``; ``group`` is a group literal (its written factor order applies)."""
    pres = _parse_presentation(group) if isinstance(group, str) else None
    if pres is None:
        pres = _parse_presentation(group.literal)
    pos = 0
    n = len(text)
    while pos < n and text[pos].isspace():
        pos += 1
    if pos >= n or text[pos] != "{":
        raise LiteralParseError("expected '{'", text, pos)
    pos += 1
    elems = []
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos < n and text[pos] == "}" and not elems:
            pos += 1
            break
        code, pos = pres.element(text, pos, 0)
        elems.append(code)
        while pos < n and text[pos].isspace():
            pos += 1
        if pos < n and text[pos] == ",":
            pos += 1
            continue
        if pos < n and text[pos] == "}":
            pos += 1
            break
        raise LiteralParseError("expected ',' or '}'", text, pos)
    if text[pos:].strip():
        raise LiteralParseError("trailing characters", text, pos)
    return GroupSubset.from_elements(pres.group, elems)


def format_set(a: GroupSubset) -> str:
    return "{" + ",".join(format_element(a.group, e) for e in a.elements) + "}"


def element_json(group: GroupSpec, code: int):
    """JSON form of an element: int for cyclic groups, coordinate list otherwise."""
    return code if group.is_cyclic else list(group.decode(code))
