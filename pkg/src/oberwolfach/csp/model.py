"""Finite-domain constraint models: variables, global constraints and a direct checker."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class AllDifferent:
    vars: tuple[int, ...]

    def holds(self, val) -> bool:
        values = [val[v] for v in self.vars]
        return len(set(values)) == len(values)


@dataclass(frozen=True)
class Cardinality:
    """Between ``lo`` and ``hi`` of ``vars`` take ``value``."""

    vars: tuple[int, ...]
    value: int
    lo: int
    hi: int

    def holds(self, val) -> bool:
        return self.lo <= sum(1 for v in self.vars if val[v] == self.value) <= self.hi


@dataclass(frozen=True)
class ModDiffLink:
    """d = (x - y + offset) mod m."""

    d: int
    x: int
    y: int
    m: int
    offset: int = 0

    def holds(self, val) -> bool:
        return val[self.d] == (val[self.x] - val[self.y] + self.offset) % self.m


@dataclass(frozen=True)
class HalfPairUse:
    """For every r in [0, k) exactly one of ``vars`` takes a value congruent to r mod k.

    With m = 2k this is the statement that exactly one of r and r+k is used.
    """

    vars: tuple[int, ...]
    k: int
    m: int

    def holds(self, val) -> bool:
        counts = Counter(val[v] % self.k for v in self.vars)
        return all(counts.get(r, 0) == 1 for r in range(self.k))


@dataclass(frozen=True)
class Fix:
    var: int
    value: int

    def holds(self, val) -> bool:
        return val[self.var] == self.value


@dataclass(frozen=True)
class MixedEdgeFlag:
    """b = 1 iff (cx, cy) = (0, 1)."""

    b: int
    cx: int
    cy: int

    def holds(self, val) -> bool:
        return val[self.b] == int(val[self.cx] == 0 and val[self.cy] == 1)


@dataclass(frozen=True)
class PatternFlag:
    """b = 1 iff the vars spell out ``pattern``."""

    b: int
    vars: tuple[int, ...]
    pattern: tuple[int, ...]

    def holds(self, val) -> bool:
        return val[self.b] == int(all(val[v] == p for v, p in zip(self.vars, self.pattern)))


Constraint = Union[AllDifferent, Cardinality, ModDiffLink, HalfPairUse, Fix, MixedEdgeFlag, PatternFlag]


def constraint_vars(c: Constraint) -> tuple[int, ...]:
    if isinstance(c, (AllDifferent, Cardinality, HalfPairUse)):
        return c.vars
    if isinstance(c, ModDiffLink):
        return (c.d, c.x, c.y)
    if isinstance(c, Fix):
        return (c.var,)
    if isinstance(c, MixedEdgeFlag):
        return (c.b, c.cx, c.cy)
    if isinstance(c, PatternFlag):
        return (c.b,) + c.vars
    raise ModelError(f"unknown constraint {c!r}")


@dataclass
class CspModel:
    names: list[str] = field(default_factory=list)
    domains: list[frozenset] = field(default_factory=list)
    constraints: list = field(default_factory=list)

    def add_var(self, name: str, domain: Iterable[int]) -> int:
        dom = frozenset(int(x) for x in domain)
        if not dom:
            raise ModelError(f"empty domain for {name}")
        if min(dom) < 0:
            raise ModelError(f"negative value in domain of {name}")
        self.names.append(name)
        self.domains.append(dom)
        return len(self.names) - 1

    def add_vars(self, prefix: str, count: int, domain: Iterable[int]) -> list[int]:
        dom = list(domain)
        return [self.add_var(f"{prefix}{i}", dom) for i in range(count)]

    def add(self, c: Constraint) -> Constraint:
        for v in constraint_vars(c):
            if not 0 <= v < len(self.names):
                raise ModelError(f"constraint {c!r} references undeclared variable {v}")
        self.constraints.append(c)
        return c

    def all_different(self, vars: Sequence[int]):
        return self.add(AllDifferent(tuple(vars)))

    def cardinality(self, vars: Sequence[int], value: int, lo: int, hi: Optional[int] = None):
        return self.add(Cardinality(tuple(vars), value, lo, lo if hi is None else hi))

    def mod_diff(self, d: int, x: int, y: int, m: int, offset: int = 0):
        return self.add(ModDiffLink(d, x, y, m, offset % m))

    def half_pair_use(self, vars: Sequence[int], k: int, m: int):
        return self.add(HalfPairUse(tuple(vars), k, m))

    def fix(self, var: int, value: int):
        return self.add(Fix(var, value))

    def mixed_edge_flag(self, b: int, cx: int, cy: int):
        return self.add(MixedEdgeFlag(b, cx, cy))

    def pattern_flag(self, b: int, vars: Sequence[int], pattern: Sequence[int]):
        if len(vars) != len(pattern):
            raise ModelError("pattern length mismatch")
        return self.add(PatternFlag(b, tuple(vars), tuple(pattern)))

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def validate(self):
        for c in self.constraints:
            for v in constraint_vars(c):
                if not 0 <= v < self.num_vars:
                    raise ModelError(f"constraint {c!r} references undeclared variable {v}")
        for name, dom in zip(self.names, self.domains):
            if not dom:
                raise ModelError(f"empty domain for {name}")

    def dump(self) -> str:
        """Line-oriented listing for debugging or replay elsewhere."""
        out = [f"vars {self.num_vars}"]
        for i, (name, dom) in enumerate(zip(self.names, self.domains)):
            out.append(f"var {i} {name} {{{','.join(map(str, sorted(dom)))}}}")
        out.append(f"constraints {len(self.constraints)}")
        for c in self.constraints:
            out.append(_describe(c))
        return "\n".join(out) + "\n"


def _describe(c: Constraint) -> str:
    kind = type(c).__name__
    if isinstance(c, AllDifferent):
        return f"{kind} {' '.join(map(str, c.vars))}"
    if isinstance(c, Cardinality):
        return f"{kind} value={c.value} lo={c.lo} hi={c.hi} : {' '.join(map(str, c.vars))}"
    if isinstance(c, ModDiffLink):
        return f"{kind} d={c.d} x={c.x} y={c.y} m={c.m} offset={c.offset}"
    if isinstance(c, HalfPairUse):
        return f"{kind} k={c.k} m={c.m} : {' '.join(map(str, c.vars))}"
    if isinstance(c, Fix):
        return f"{kind} {c.var}={c.value}"
    if isinstance(c, MixedEdgeFlag):
        return f"{kind} b={c.b} cx={c.cx} cy={c.cy}"
    if isinstance(c, PatternFlag):
        return f"{kind} b={c.b} pattern={''.join(map(str, c.pattern))} : {' '.join(map(str, c.vars))}"
    return repr(c)


def check(model: CspModel, assignment: Union[Sequence[int], Mapping[int, int]]) -> tuple[bool, Optional[str]]:
    """Evaluate every constraint by its definition.

    Returns ``(True, None)`` or ``(False, description of the first violation)``.
    Raises ModelError when the assignment is not total.
    """
    if isinstance(assignment, Mapping):
        missing = [i for i in range(model.num_vars) if i not in assignment]
        if missing:
            raise ModelError(f"partial assignment: variable {missing[0]} unassigned")
        val = [assignment[i] for i in range(model.num_vars)]
    else:
        val = list(assignment)
        if len(val) != model.num_vars or any(x is None for x in val):
            raise ModelError("partial assignment")
    for i, (x, dom) in enumerate(zip(val, model.domains)):
        if x not in dom:
            return False, f"domain of {model.names[i]}: {x} not allowed"
    for c in model.constraints:
        if not c.holds(val):
            return False, _describe(c)
    return True, None
