"""Vertex labels, 2-factors, difference lists, translation and verification.

Three labeling schemes are in use:

* ``one``: vertices are residues of Z_m (m = 2n) plus ∞ and, after extension, ∞′.
* ``two``: vertices are pairs ``(bit, x)`` with x in Z_m (m = n) plus ∞ / ∞′.
* ``plain``: canonical integers 0..v-1, the form written to files and verified.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .instances import CycleType


class Inf(enum.Enum):
    INF1 = "inf"
    INF2 = "inf2"

    def __repr__(self):
        return "∞" if self is Inf.INF1 else "∞′"


INF = Inf.INF1
INF2 = Inf.INF2


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class Scheme:
    kind: str  # "one", "two" or "plain"
    modulus: int

    def __post_init__(self):
        if self.kind not in ("one", "two", "plain"):
            raise SchemeError(f"unknown scheme {self.kind!r}")
        if self.modulus < 1:
            raise SchemeError("modulus must be positive")

    @classmethod
    def one(cls, m: int) -> Scheme:
        return cls("one", m)

    @classmethod
    def two(cls, n: int) -> Scheme:
        return cls("two", n)

    @classmethod
    def plain(cls, v: int) -> Scheme:
        return cls("plain", v)

    def canonical(self, label) -> int:
        """Map a label to its integer form: x -> x, (1,x) -> n+x, ∞ -> 2n, ∞′ -> 2n+1."""
        top = self.modulus if self.kind == "one" else 2 * self.modulus
        if label is INF:
            return top
        if label is INF2:
            return top + 1
        if self.kind == "two":
            bit, x = label
            return bit * self.modulus + x
        return label


Vertex = object  # int, (bit, int) or Inf


@dataclass(frozen=True)
class TwoFactor:
    """Disjoint cycles, each given as a vertex sequence (closing edge implied)."""

    cycles: tuple[tuple, ...]
    scheme: Scheme

    @classmethod
    def of(cls, cycles: Iterable[Sequence], scheme: Scheme) -> TwoFactor:
        return cls(tuple(tuple(c) for c in cycles), scheme)

    @property
    def order(self) -> int:
        return sum(len(c) for c in self.cycles)

    def vertices(self) -> list:
        return [x for c in self.cycles for x in c]

    def edges(self) -> Iterable[tuple]:
        for cyc in self.cycles:
            k = len(cyc)
            for i in range(k):
                yield cyc[i], cyc[(i + 1) % k]

    def cycle_type(self) -> CycleType:
        return CycleType.from_lengths(len(c) for c in self.cycles)

    def canonical(self) -> TwoFactor:
        """Relabel to plain integers."""
        if self.scheme.kind == "plain":
            return self
        conv = self.scheme.canonical
        return TwoFactor(tuple(tuple(conv(x) for x in c) for c in self.cycles), Scheme.plain(self.order))

    def cycle_with(self, vertex) -> int:
        for i, c in enumerate(self.cycles):
            if vertex in c:
                return i
        raise KeyError(vertex)


@dataclass(frozen=True)
class Factorization:
    factors: tuple[TwoFactor, ...]
    one_factor: Optional[tuple[tuple, ...]] = None
    order: int = 0

    def canonical(self) -> Factorization:
        if not self.factors:
            return self
        scheme = self.factors[0].scheme
        one = None
        if self.one_factor is not None:
            one = tuple(tuple(scheme.canonical(x) for x in e) for e in self.one_factor)
        return Factorization(tuple(f.canonical() for f in self.factors), one, self.order)


@dataclass
class DiffMultiset:
    counts: Counter
    modulus: int

    def multiplicity(self, d: int) -> int:
        return self.counts.get(d % self.modulus, 0)

    def covers_exactly(self, elements: Iterable[int], times: int = 1) -> bool:
        """True iff the multiset is exactly ``elements`` each with multiplicity ``times``."""
        want = Counter({e % self.modulus: times for e in elements})
        return +self.counts == want

    def __len__(self):
        return sum(self.counts.values())


def _is_finite(x) -> bool:
    return not isinstance(x, Inf)


def differences(f: TwoFactor, scheme: Optional[Scheme] = None):
    """Difference list of a factor.

    One-rotational scheme: a single DiffMultiset with both x-y and y-x for
    every edge with finite ends. Two-rotational: the triple (Δ00, Δ11, Δ01),
    where Δ01 holds one value per mixed edge, bit-0 label minus bit-1 label.
    """
    if scheme is not None and scheme != f.scheme:
        raise SchemeError(f"scheme mismatch: factor is {f.scheme}, asked for {scheme}")
    sch = f.scheme
    m = sch.modulus
    if sch.kind == "one":
        counts: Counter = Counter()
        for a, b in f.edges():
            if _is_finite(a) and _is_finite(b):
                counts[(a - b) % m] += 1
                counts[(b - a) % m] += 1
        return DiffMultiset(counts, m)
    if sch.kind == "two":
        d00: Counter = Counter()
        d11: Counter = Counter()
        d01: Counter = Counter()
        for a, b in f.edges():
            if not (_is_finite(a) and _is_finite(b)):
                continue
            (ba, xa), (bb, xb) = a, b
            if ba == bb:
                target = d00 if ba == 0 else d11
                target[(xa - xb) % m] += 1
                target[(xb - xa) % m] += 1
            elif ba == 0:
                d01[(xa - xb) % m] += 1
            else:
                d01[(xb - xa) % m] += 1
        return DiffMultiset(d00, m), DiffMultiset(d11, m), DiffMultiset(d01, m)
    raise SchemeError("differences are undefined for plain labels")


def translate_vertex(x, g: int, scheme: Scheme):
    if not _is_finite(x):
        return x
    if scheme.kind == "one":
        return (x + g) % scheme.modulus
    if scheme.kind == "two":
        return (x[0], (x[1] + g) % scheme.modulus)
    raise SchemeError("plain labels cannot be translated")


def translate(f: TwoFactor, g: int) -> TwoFactor:
    sch = f.scheme
    return TwoFactor(tuple(tuple(translate_vertex(x, g, sch) for x in c) for c in f.cycles), sch)


def element_order(x: int, m: int) -> int:
    """Additive order of x in Z_m."""
    if m == 0:
        raise ValueError("modulus must be nonzero")
    m = abs(m)
    return m // math.gcd(x % m, m)


def same_factor(f: TwoFactor, h: TwoFactor) -> bool:
    """Equality as graphs: same edge set, regardless of cycle rotation/orientation."""
    return _edge_set(f) == _edge_set(h)


def _edge_set(f: TwoFactor) -> frozenset:
    return frozenset(frozenset(e) for e in f.edges())


@dataclass
class VerifyReport:
    ok: bool
    violation: Optional[str] = None
    checked_pairs: int = 0
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _fail(msg: str) -> VerifyReport:
    return VerifyReport(False, msg)


def verify_factorization(v: int, target: CycleType, fz: Factorization) -> VerifyReport:
    """Check that ``fz`` decomposes K_v (v odd) or K_v - I (v even) into copies of ``target``.

    Works on canonical integers only; any input shape problem becomes a
    failed report rather than an exception.
    """
    try:
        return _verify(v, target, fz)
    except (TypeError, ValueError, AttributeError, KeyError, IndexError) as exc:
        return _fail(f"malformed record: {exc}")


def _verify(v: int, target: CycleType, fz: Factorization) -> VerifyReport:
    if v < 3:
        return _fail(f"order {v} too small")
    if target.order != v:
        return _fail(f"cycle type has order {target.order}, expected {v}")
    fz = fz.canonical()
    want_factors = (v - 1) // 2 if v % 2 else (v - 2) // 2
    if v % 2 == 0 and fz.one_factor is None:
        return _fail("one-factor required for even order")
    if v % 2 == 1 and fz.one_factor is not None:
        return _fail("one-factor given for odd order")
    if len(fz.factors) != want_factors:
        return _fail(f"expected {want_factors} factors, got {len(fz.factors)}")
    want_lengths = sorted(target.lengths)
    seen = bytearray(v * v)

    def mark(a, b, where: str) -> Optional[str]:
        if type(a) is not int or type(b) is not int:
            return f"{where}: non-integer vertex"
        if not (0 <= a < v and 0 <= b < v):
            return f"{where}: vertex out of range 0..{v - 1}"
        if a == b:
            return f"{where}: loop at {a}"
        lo, hi = (a, b) if a < b else (b, a)
        if seen[lo * v + hi]:
            return f"pair covered twice: {{{lo},{hi}}} ({where})"
        seen[lo * v + hi] = 1
        return None

    for idx, f in enumerate(fz.factors):
        where = f"factor {idx}"
        if any(len(c) < 3 for c in f.cycles):
            return _fail(f"{where}: cycle shorter than 3")
        verts = f.vertices()
        if len(verts) != v or len(set(verts)) != v:
            return _fail(f"{where}: not a spanning 2-regular subgraph")
        if sorted(len(c) for c in f.cycles) != want_lengths:
            return _fail(f"{where}: cycle type {f.cycle_type()} differs from {target}")
        for a, b in f.edges():
            err = mark(a, b, where)
            if err:
                return _fail(err)
    if fz.one_factor is not None:
        covered = set()
        for a, b in fz.one_factor:
            if a in covered or b in covered:
                return _fail("one-factor is not a matching")
            covered.update((a, b))
            err = mark(a, b, "one-factor")
            if err:
                return _fail(err)
        if len(covered) != v:
            return _fail("one-factor is not perfect")
    missing = v * (v - 1) // 2 - sum(seen)
    if missing:
        for a in range(v):
            for b in range(a + 1, v):
                if not seen[a * v + b]:
                    return _fail(f"pair not covered: {{{a},{b}}}")
    return VerifyReport(True, None, v * (v - 1) // 2)
