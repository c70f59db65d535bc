"""Complete backtracking search with propagation over bitmask domains."""
from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .model import (
    AllDifferent,
    Cardinality,
    CspModel,
    Fix,
    HalfPairUse,
    MixedEdgeFlag,
    ModDiffLink,
    PatternFlag,
    constraint_vars,
)


class Status(enum.Enum):
    SOLUTION = "solution"
    INFEASIBLE = "infeasible"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    elapsed: float = 0.0
    restarts: int = 0


@dataclass
class SearchOutcome:
    status: Status
    assignment: Optional[list[int]] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def ok(self) -> bool:
        return self.status is Status.SOLUTION


class _Fail(Exception):
    pass


class _OutOfTime(Exception):
    pass


class _RestartLimit(Exception):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _single(mask: int) -> bool:
    return mask != 0 and mask & (mask - 1) == 0


def _value(mask: int) -> int:
    return mask.bit_length() - 1


def _fold(mask: int, m: int) -> int:
    """Residues mod m of the values in ``mask``."""
    full = (1 << m) - 1
    out = 0
    while mask:
        out |= mask & full
        mask >>= m
    return out


def _rot(mask: int, s: int, m: int) -> int:
    """Add s (mod m) to every value of a mask over [0, m)."""
    s %= m
    if s == 0:
        return mask
    full = (1 << m) - 1
    return ((mask << s) | (mask >> (m - s))) & full


def _unfold(resmask: int, mask: int, m: int) -> int:
    """Keep the values of ``mask`` whose residue mod m lies in ``resmask``."""
    out = 0
    shift = 0
    while mask >> shift:
        out |= (mask & (resmask << shift))
        shift += m
    return out


class _Propagator:
    def __init__(self, model: CspModel):
        model.validate()
        self.model = model
        self.cons = list(model.constraints)
        self.watch: list[list[int]] = [[] for _ in range(model.num_vars)]
        for ci, c in enumerate(self.cons):
            for v in set(constraint_vars(c)):
                self.watch[v].append(ci)

    def initial(self) -> list[int]:
        doms = []
        for dom in self.model.domains:
            mask = 0
            for x in dom:
                mask |= 1 << x
            doms.append(mask)
        for c in self.cons:
            if isinstance(c, Fix):
                doms[c.var] &= 1 << c.value
        return doms

    def run(self, doms: list[int], changed) -> None:
        queue = []
        inq = [False] * len(self.cons)
        for v in changed:
            for ci in self.watch[v]:
                if not inq[ci]:
                    inq[ci] = True
                    queue.append(ci)
        while queue:
            ci = queue.pop()
            inq[ci] = False
            for v in self._revise(self.cons[ci], doms):
                if doms[v] == 0:
                    raise _Fail
                for cj in self.watch[v]:
                    if not inq[cj]:
                        inq[cj] = True
                        queue.append(cj)

    # each revise returns the variables whose domains shrank
    def _revise(self, c, doms) -> list[int]:
        if isinstance(c, AllDifferent):
            return _alldiff(c.vars, doms)
        if isinstance(c, Cardinality):
            return _cardinality(c, doms)
        if isinstance(c, ModDiffLink):
            return _moddiff(c, doms)
        if isinstance(c, HalfPairUse):
            return _halfpair(c, doms)
        if isinstance(c, MixedEdgeFlag):
            return _pattern(c.b, (c.cx, c.cy), (0, 1), doms)
        if isinstance(c, PatternFlag):
            return _pattern(c.b, c.vars, c.pattern, doms)
        if isinstance(c, Fix):
            before = doms[c.var]
            doms[c.var] &= 1 << c.value
            return [c.var] if doms[c.var] != before else []
        raise TypeError(c)


def _alldiff(vars, doms) -> list[int]:
    changed = []
    # forward checking from fixed variables, repeated until stable
    progress = True
    done = 0
    while progress:
        progress = False
        fixed = 0
        for v in vars:
            d = doms[v]
            if _single(d):
                if fixed & d:
                    raise _Fail
                fixed |= d
        if fixed == done:
            break
        done = fixed
        for v in vars:
            d = doms[v]
            if not _single(d) and d & fixed:
                d &= ~fixed
                if d == 0:
                    raise _Fail
                doms[v] = d
                changed.append(v)
                if _single(d):
                    progress = True
    union = 0
    for v in vars:
        union |= doms[v]
    if bin(union).count("1") < len(vars):
        raise _Fail
    return changed


def _cardinality(c: Cardinality, doms) -> list[int]:
    bit = 1 << c.value
    must = can = 0
    for v in c.vars:
        d = doms[v]
        if d & bit:
            can += 1
            if d == bit:
                must += 1
    if must > c.hi or can < c.lo:
        raise _Fail
    changed = []
    if must == c.hi and can > must:
        for v in c.vars:
            d = doms[v]
            if d & bit and d != bit:
                doms[v] = d & ~bit
                changed.append(v)
    elif can == c.lo and can > must:
        for v in c.vars:
            d = doms[v]
            if d & bit and d != bit:
                doms[v] = bit
                changed.append(v)
    return changed


def _moddiff(c: ModDiffLink, doms) -> list[int]:
    m = c.m
    dx, dy, dd = doms[c.x], doms[c.y], doms[c.d]
    fx, fy, fd = _fold(dx, m), _fold(dy, m), _fold(dd, m)
    changed = []

    def support(a_mask, b_mask, sign_b, off):
        # residues a + sign_b*b + off over the cheaper loop
        out = 0
        if bin(a_mask).count("1") <= bin(b_mask).count("1"):
            for a in _bits(a_mask):
                out |= _rot(b_mask if sign_b > 0 else _neg(b_mask, m), a + off, m)
        else:
            for b in _bits(b_mask):
                out |= _rot(a_mask, sign_b * b + off, m)
        return out

    # d = x - y + off ; x = d + y - off ; y = x - d + off
    sd = support(fx, fy, -1, c.offset)
    nd = sd & dd  # d itself must lie in [0, m)
    if nd != dd:
        if not nd:
            raise _Fail
        doms[c.d] = nd
        changed.append(c.d)
        fd = _fold(nd, m)
    sx = support(fd, fy, 1, -c.offset)
    nx = _unfold(sx, dx, m)
    if nx != dx:
        if not nx:
            raise _Fail
        doms[c.x] = nx
        changed.append(c.x)
        fx = _fold(nx, m)
    sy = support(fx, fd, -1, c.offset)
    ny = _unfold(sy, dy, m)
    if ny != dy:
        if not ny:
            raise _Fail
        doms[c.y] = ny
        changed.append(c.y)
    return changed


def _neg(mask: int, m: int) -> int:
    out = 0
    for a in _bits(mask):
        out |= 1 << ((-a) % m)
    return out


def _halfpair(c: HalfPairUse, doms) -> list[int]:
    k = c.k
    changed = []
    folded = [_fold(doms[v], k) for v in c.vars]
    for r in range(k):
        bit = 1 << r
        holders = [i for i, f in enumerate(folded) if f & bit]
        if not holders:
            raise _Fail
        fixed = [i for i in holders if folded[i] == bit]
        if len(fixed) > 1:
            raise _Fail
        if len(fixed) == 1:
            for i in holders:
                if i != fixed[0]:
                    v = c.vars[i]
                    nd = _unfold(((1 << k) - 1) & ~bit, doms[v], k)
                    if not nd:
                        raise _Fail
                    doms[v] = nd
                    folded[i] &= ~bit
                    changed.append(v)
        elif len(holders) == 1:
            i = holders[0]
            v = c.vars[i]
            nd = _unfold(bit, doms[v], k)
            if nd != doms[v]:
                doms[v] = nd
                folded[i] = bit
                changed.append(v)
    return changed


def _pattern(b, vars, pattern, doms) -> list[int]:
    changed = []
    db = doms[b] & 0b11
    if db != doms[b]:
        doms[b] = db
        changed.append(b)
        if not db:
            raise _Fail
    possible = all(doms[v] >> p & 1 for v, p in zip(vars, pattern))
    certain = all(doms[v] == 1 << p for v, p in zip(vars, pattern))
    if not possible:
        if db & 2:
            doms[b] = db & 1
            changed.append(b)
            if not doms[b]:
                raise _Fail
    elif certain:
        if db & 1:
            doms[b] = db & 2
            changed.append(b)
            if not doms[b]:
                raise _Fail
    db = doms[b]
    if db == 2:
        for v, p in zip(vars, pattern):
            if doms[v] != 1 << p:
                doms[v] = 1 << p
                changed.append(v)
    elif db == 1:
        open_ = [(v, p) for v, p in zip(vars, pattern) if doms[v] != 1 << p]
        if len(open_) == 1 and doms[open_[0][0]] >> open_[0][1] & 1:
            v, p = open_[0]
            nd = doms[v] & ~(1 << p)
            if not nd:
                raise _Fail
            doms[v] = nd
            changed.append(v)
    return changed


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


def solve(model: CspModel, budget: Optional[float] = None, seed: int = 0,
          restart_base: int = 0) -> SearchOutcome:
    """Find an assignment satisfying every constraint of ``model``.

    Variables are chosen smallest-domain-first, values ascending. A nonzero
    ``seed`` shuffles tie-breaks and value order; ``restart_base`` > 0 turns
    on Luby restarts with that many nodes per unit. Either way the search is
    complete: INFEASIBLE is only returned after a run that was not cut short.
    ``budget`` is wall-clock seconds.
    """
    prop = _Propagator(model)
    stats = SearchStats()
    start = time.perf_counter()
    deadline = None if budget is None else start + budget
    rng = random.Random(seed)
    n = model.num_vars
    status = Status.INFEASIBLE
    assignment = None
    try:
        doms = prop.initial()
        if any(d == 0 for d in doms):
            raise _Fail
        prop.run(doms, range(n))
    except _Fail:
        stats.elapsed = time.perf_counter() - start
        return SearchOutcome(Status.INFEASIBLE, None, stats)
    run = 0
    while True:
        run += 1
        limit = None if restart_base <= 0 else _luby(run) * restart_base
        if seed:
            tiebreak = list(range(n))
            rng.shuffle(tiebreak)
            value_key = [rng.random() for _ in range(64)]
        else:
            tiebreak = list(range(n))
            value_key = None
        try:
            assignment = _dfs(prop, list(doms), tiebreak, value_key, rng, stats, deadline, limit)
            status = Status.SOLUTION if assignment is not None else Status.INFEASIBLE
            break
        except _RestartLimit:
            stats.restarts += 1
            continue
        except _OutOfTime:
            status = Status.BUDGET_EXHAUSTED
            assignment = None
            break
    stats.elapsed = time.perf_counter() - start
    return SearchOutcome(status, assignment, stats)


def _dfs(prop, doms, tiebreak, value_key, rng, stats, deadline, limit):
    n = len(doms)
    run_nodes = 0
    stack = []  # (doms snapshot, var, remaining values)

    def pick(ds):
        best = -1
        best_key = None
        for v in range(n):
            d = ds[v]
            if not _single(d):
                key = (bin(d).count("1"), tiebreak[v])
                if best_key is None or key < best_key:
                    best, best_key = v, key
        return best

    def values_of(d):
        vals = list(_bits(d))
        if value_key is not None:
            vals.sort(key=lambda x: (value_key[x % len(value_key)], x))
        return vals

    var = pick(doms)
    if var < 0:
        return [_value(d) for d in doms]
    stack.append((doms, var, values_of(doms[var]), 0))
    while stack:
        base, var, vals, idx = stack.pop()
        if idx >= len(vals):
            stats.backtracks += 1
            continue
        stack.append((base, var, vals, idx + 1))
        stats.nodes += 1
        run_nodes += 1
        if deadline is not None and time.perf_counter() > deadline:
            raise _OutOfTime
        if limit is not None and run_nodes > limit:
            raise _RestartLimit
        child = list(base)
        child[var] = 1 << vals[idx]
        try:
            prop.run(child, (var,))
        except _Fail:
            continue
        nxt = pick(child)
        if nxt < 0:
            return [_value(d) for d in child]
        stack.append((child, nxt, values_of(child[nxt]), 0))
    return None
