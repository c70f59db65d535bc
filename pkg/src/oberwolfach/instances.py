"""Cycle types (Oberwolfach instances): enumeration, text form, classification."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator


class CycleTypeError(ValueError):
    """Raised for malformed cycle-type text or invalid parts."""


@dataclass(frozen=True, order=True)
class CycleType:
    """A multiset of cycle lengths, stored as ascending ``(length, multiplicity)`` pairs."""

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = 0
        for length, mult in self.parts:
            if length < 3:
                raise CycleTypeError(f"cycle length {length} < 3")
            if mult < 1:
                raise CycleTypeError(f"multiplicity {mult} < 1")
            if length <= prev:
                raise CycleTypeError("lengths must be strictly increasing")
            prev = length
        if not self.parts:
            raise CycleTypeError("empty cycle type")

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> CycleType:
        counts = Counter(lengths)
        return cls(tuple(sorted(counts.items())))

    @property
    def order(self) -> int:
        return sum(length * mult for length, mult in self.parts)

    @property
    def lengths(self) -> tuple[int, ...]:
        """All cycle lengths in ascending order, repeated by multiplicity."""
        return tuple(length for length, mult in self.parts for _ in range(mult))

    @property
    def num_cycles(self) -> int:
        return sum(mult for _, mult in self.parts)

    def multiplicity(self, length: int) -> int:
        return dict(self.parts).get(length, 0)

    def counter(self) -> Counter:
        return Counter(dict(self.parts))

    def replace_one(self, old: int, new: int) -> CycleType:
        """Return the type with one ``old``-cycle turned into a ``new``-cycle."""
        counts = self.counter()
        if counts[old] < 1:
            raise CycleTypeError(f"no cycle of length {old} in {self}")
        counts[old] -= 1
        counts[new] += 1
        return CycleType.from_lengths(counts.elements())

    def __str__(self) -> str:
        return format_cycle_type(self)

    def display(self) -> str:
        """Superscript-prefix notation, e.g. ``[²3,5]``."""
        sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
        terms = [(str(m).translate(sup) if m > 1 else "") + str(length) for length, m in self.parts]
        return "[" + ",".join(terms) + "]"


_TERM = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_cycle_type(text: str) -> CycleType:
    """Parse ``"3^2,5"``-style text. Whitespace is ignored; terms may come in any order."""
    compact = re.sub(r"\s+", "", text)
    if compact.startswith("[") and compact.endswith("]"):
        compact = compact[1:-1]
    if not compact:
        raise CycleTypeError("empty cycle type")
    counts: Counter = Counter()
    for term in compact.split(","):
        match = _TERM.match(term)
        if match is None:
            raise CycleTypeError(f"malformed term {term!r} (expected L or L^M)")
        length = int(match.group(1))
        mult = int(match.group(2)) if match.group(2) is not None else 1
        if length < 3:
            raise CycleTypeError(f"cycle length {length} < 3")
        if mult < 1:
            raise CycleTypeError(f"multiplicity {mult} < 1")
        counts[length] += mult
    return CycleType(tuple(sorted(counts.items())))


def format_cycle_type(ct: CycleType) -> str:
    return ",".join(f"{length}^{mult}" if mult > 1 else str(length) for length, mult in ct.parts)


def _partitions(remaining: int, largest: int, parts: list[int], min_parts: int) -> Iterator[tuple[int, ...]]:
    if remaining == 0:
        if len(parts) >= min_parts:
            yield tuple(parts)
        return
    # every further part is >= 3, so at most remaining // 3 more parts fit
    if len(parts) + remaining // 3 < min_parts:
        return
    for part in range(min(remaining, largest), 2, -1):
        rest = remaining - part
        if 0 < rest < 3:
            continue
        parts.append(part)
        yield from _partitions(rest, part, parts, min_parts)
        parts.pop()


def enumerate_cycle_types(v: int, min_cycles: int = 1) -> Iterator[CycleType]:
    """Yield every cycle type of order ``v`` with at least ``min_cycles`` cycles.

    Order is by descending largest part, then lexicographic on the
    non-increasing length sequence: for v=9 that is [9], [3,6], [4,5], [3^3].
    """
    if v < 3:
        return
    for lengths in _partitions(v, v, [], max(min_cycles, 1)):
        yield CycleType.from_lengths(lengths)


def count_cycle_types(v: int, min_cycles: int = 1) -> int:
    return sum(1 for _ in _partitions(v, v, [], max(min_cycles, 1))) if v >= 3 else 0


KNOWN_UNSOLVABLE = frozenset(
    parse_cycle_type(text) for text in ("3^2", "3^4", "4,5", "3^2,5")
)

def lengthened_cycle(base: CycleType, target: CycleType) -> int:
    """The length L such that ``target`` is ``base`` with one L-cycle grown to L+1."""
    up = target.counter() - base.counter()
    down = base.counter() - target.counter()
    if sum(up.values()) != 1 or sum(down.values()) != 1 or next(iter(up)) != next(iter(down)) + 1:
        raise CycleTypeError(f"{target} is not {base} with one cycle lengthened by one")
    return next(iter(down))


RESIDUES = ("4t", "4t+1", "4t+2", "4t+3")


@dataclass(frozen=True)
class InstanceClass:
    residue: str
    t: int
    known_unsolvable: bool


def classify(ct: CycleType) -> InstanceClass:
    v = ct.order
    return InstanceClass(RESIDUES[v % 4], v // 4, ct in KNOWN_UNSOLVABLE)
