"""Non-existence of a solution to OP(3,3,5) by complete search.

The search seats 11 labels for 5 days, each day one 5-cycle and two
triplets, with every pair of labels adjacent exactly once overall. The same
engine handles other small all-cycle seatings (e.g. [3^3] on 9 labels), which
is how it is cross-checked.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Optional, Sequence, TextIO

from .errors import BudgetExhausted


@dataclass(frozen=True)
class SeatingBlock:
    """A table: a triplet or a cycle of labels, stored in canonical order."""

    kind: str
    labels: tuple[int, ...]

    @property
    def adjacency(self) -> frozenset:
        n = len(self.labels)
        return frozenset(frozenset((self.labels[i], self.labels[(i + 1) % n])) for i in range(n))


def canonical_cycle(labels: Sequence[int]) -> tuple[int, ...]:
    """Minimal rotation/reflection of a cyclic sequence."""
    n = len(labels)
    best = None
    for seq in (list(labels), list(reversed(labels))):
        for r in range(n):
            cand = tuple(seq[r:] + seq[:r])
            if best is None or cand < best:
                best = cand
    return best


def _arrangements(first: int, others: Sequence[int]):
    """Distinct cycles through ``first`` and ``others``, started at ``first``."""
    if len(others) <= 2:
        yield (first,) + tuple(others)
        return
    for perm in permutations(others):
        if perm[0] < perm[-1]:
            yield (first,) + perm


def enumerate_triplets(nlabels: int = 11) -> list[SeatingBlock]:
    return [SeatingBlock("triplet", c) for c in combinations(range(nlabels), 3)]


def enumerate_five_cycles(nlabels: int = 11) -> list[SeatingBlock]:
    out = []
    for c in combinations(range(nlabels), 5):
        out += [SeatingBlock("five-cycle", a) for a in _arrangements(c[0], c[1:])]
    return out


@dataclass
class Certificate:
    shape: tuple[int, ...]
    nlabels: int
    feasible: bool
    nodes: int
    elapsed: float
    fixed_first_day: bool
    ordered_days: bool
    solution: Optional[list[list[tuple[int, ...]]]] = None
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def summary(self) -> str:
        shape = ",".join(map(str, self.shape))
        return (f"OP({shape}) on {self.nlabels} labels: {self.status}; nodes={self.nodes} "
                f"elapsed={self.elapsed:.3f}s fixed_first_day={self.fixed_first_day} "
                f"ordered_days={self.ordered_days}")


class _Seating:
    def __init__(self, nlabels: int, shape: Sequence[int], budget: Optional[float]):
        self.v = nlabels
        self.shape = tuple(sorted(shape, reverse=True))
        if sum(self.shape) != nlabels or min(self.shape) < 3:
            raise ValueError(f"shape {shape} does not seat {nlabels} labels")
        if (nlabels - 1) % 2:
            raise ValueError("every label needs an even number of neighbours")
        self.days = (nlabels - 1) // 2
        self.eid = {}
        for a, b in combinations(range(nlabels), 2):
            self.eid[(a, b)] = self.eid[(b, a)] = len(self.eid) // 2
        self.nodes = 0
        self.deadline = None if budget is None else time.perf_counter() + budget

    def emask(self, cyc: Sequence[int]) -> int:
        m = 0
        n = len(cyc)
        for i in range(n):
            m |= 1 << self.eid[(cyc[i], cyc[(i + 1) % n])]
        return m

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes & 1023 == 0 and time.perf_counter() > self.deadline:
            raise BudgetExhausted(f"seating search stopped after {self.nodes} nodes")


def search_seating(nlabels: int, shape: Sequence[int], *, fix_first_day: bool = True,
                   order_days: bool = True, budget: Optional[float] = None) -> Certificate:
    """Complete search for a resolvable seating with tables of the given sizes.

    ``fix_first_day`` seats day 1 as consecutive labels (every day of the same
    shape is a relabeling of any other). ``order_days`` requires each new day
    to seat label 0 next to its smallest unused neighbour, which only removes
    day permutations.
    """
    st = _Seating(nlabels, shape, budget)
    t0 = time.perf_counter()
    all_v = (1 << nlabels) - 1
    # unc[u]: labels still allowed next to u (pair not yet covered)
    unc = [all_v & ~(1 << u) for u in range(nlabels)]
    days: list[list[tuple[int, ...]]] = []

    def toggle(cyc):
        n = len(cyc)
        for i in range(n):
            x, y = cyc[i], cyc[(i + 1) % n]
            unc[x] ^= 1 << y
            unc[y] ^= 1 << x

    def cycles_through(v: int, size: int, free: int):
        """Cycles of ``size`` labels through v along uncovered pairs, each once."""
        path = [v]

        def grow(last: int, avail: int):
            if len(path) == size:
                if unc[last] >> v & 1 and path[1] < path[-1]:
                    yield tuple(path)
                return
            cand = unc[last] & avail
            while cand:
                bit = cand & -cand
                cand ^= bit
                u = bit.bit_length() - 1
                path.append(u)
                yield from grow(u, avail & ~bit)
                path.pop()

        if size == 3:
            cand = unc[v] & free
            while cand:
                bit = cand & -cand
                cand ^= bit
                a = bit.bit_length() - 1
                rest = unc[a] & unc[v] & free & ~((bit << 1) - 1)
                while rest:
                    b2 = rest & -rest
                    rest ^= b2
                    yield (v, a, b2.bit_length() - 1)
            return
        yield from grow(v, free & ~(1 << v))

    def partitions(placed: int, shapes_left: tuple[int, ...], need: int, blocks: list):
        """Yield each way to finish the day; the day's pairs are marked covered while suspended."""
        st.tick()
        if not shapes_left:
            yield blocks
            return
        free = ~placed & all_v
        # most constrained free label; fewer than two free partners is a dead end
        v, best = -1, nlabels + 1
        scan = free
        while scan:
            bit = scan & -scan
            scan ^= bit
            u = bit.bit_length() - 1
            c = bin(unc[u] & free).count("1")
            if c < best:
                v, best = u, c
        if best < 2:
            return
        if need >= 0 and not placed & 1:
            v = 0
        tried = set()
        for k, size in enumerate(shapes_left):
            if size in tried:
                continue
            tried.add(size)
            rest = shapes_left[:k] + shapes_left[k + 1:]
            for cyc in list(cycles_through(v, size, free)):
                if v == 0 and need >= 0 and need not in (cyc[1], cyc[-1]):
                    continue
                pm = 0
                for u in cyc:
                    pm |= 1 << u
                blocks.append(cyc)
                toggle(cyc)
                yield from partitions(placed | pm, rest, need, blocks)
                toggle(cyc)
                blocks.pop()

    def seat_days(left: int) -> bool:
        if left == 0:
            return not any(unc)
        need = -1
        if order_days:
            need = (unc[0] & -unc[0]).bit_length() - 1
        for blocks in partitions(0, st.shape, need, []):
            days.append(list(blocks))
            if seat_days(left - 1):
                return True
            days.pop()
        return False

    if fix_first_day:
        first, start = [], 0
        for size in st.shape:
            first.append(tuple(range(start, start + size)))
            start += size
        for cyc in first:
            toggle(cyc)
        days.append(first)
        group = day_stabilizer(first, nlabels)
        feasible = False
        if st.days == 1:
            feasible = not any(unc)
        else:
            # day 2 only up to relabelings that fix day 1: first member of each orbit
            seen = set()
            for blocks in partitions(0, st.shape, -1, []):
                key = _day_key(blocks)
                if key in seen:
                    continue
                seen.update(_day_key([tuple(g[u] for u in b) for b in blocks]) for g in group)
                days.append(list(blocks))
                if seat_days(st.days - 2):
                    feasible = True
                    break
                days.pop()
    else:
        group = ()
        feasible = seat_days(st.days)
    cert = Certificate(st.shape, nlabels, feasible, st.nodes, time.perf_counter() - t0,
                       fix_first_day, order_days, [list(d) for d in days] if feasible else None)
    if fix_first_day:
        cert.notes.append(f"day 2 reduced by the {len(group)} relabelings fixing day 1")
    return cert


def _day_key(blocks) -> tuple:
    pairs = []
    for b in blocks:
        n = len(b)
        for i in range(n):
            x, y = b[i], b[(i + 1) % n]
            pairs.append((x, y) if x < y else (y, x))
    return tuple(sorted(pairs))


def day_stabilizer(blocks: Sequence[Sequence[int]], nlabels: int) -> list[tuple[int, ...]]:
    """All label permutations mapping the day's set of cycles onto itself."""
    def symmetries(c):
        n = len(c)
        out = []
        for seq in (list(c), list(reversed(c))):
            for r in range(n):
                out.append(seq[r:] + seq[:r])
        return out

    by_size: dict[int, list] = {}
    for b in blocks:
        by_size.setdefault(len(b), []).append(tuple(b))
    maps = [list(range(nlabels))]
    for group in by_size.values():
        nxt = []
        for order in permutations(group):
            partial = maps
            for src, dst in zip(group, order):
                step = []
                for g in partial:
                    for img in symmetries(dst):
                        h = list(g)
                        for k, v in zip(src, img):
                            h[k] = v
                        step.append(h)
                partial = step
            nxt += partial
        maps = nxt
    out = {tuple(g) for g in maps}
    return sorted(out)


def prove_infeasible(budget: Optional[float] = None, *, fix_first_day: bool = True) -> Certificate:
    """Run the complete search for OP(3,3,5) on K_11."""
    cert = search_seating(11, (5, 3, 3), fix_first_day=fix_first_day, budget=budget)
    cert.notes.append("no seating of 11 labels over 5 days as (5,3,3) covers every pair exactly once"
                      if not cert.feasible else "seating found")
    return cert


def emit_model(out: TextIO, nlabels: int = 11, days: int = 5) -> int:
    """Write the 0-1 system as LP-format text: F_i_d / T_j_d pick a 5-cycle / triplet on day d.

    Returns the number of constraints written.
    """
    fives = enumerate_five_cycles(nlabels)
    trips = enumerate_triplets(nlabels)
    blocks = [("F", i, b) for i, b in enumerate(fives)] + [("T", j, b) for j, b in enumerate(trips)]
    ncons = 0

    def var(tag, i, d):
        return f"{tag}_{i}_{d}"

    out.write("\\ seating model for OP(3,3,5): pure feasibility\nminimize\n obj: 0\nsubject to\n")
    for d in range(days):
        out.write(f" one_five_{d}: " + " + ".join(var("F", i, d) for i in range(len(fives))) + " = 1\n")
        out.write(f" two_trip_{d}: " + " + ".join(var("T", j, d) for j in range(len(trips))) + " = 2\n")
        ncons += 2
        for lab in range(nlabels):
            terms = [var(t, i, d) for t, i, b in blocks if lab in b.labels]
            out.write(f" seat_{lab}_{d}: " + " + ".join(terms) + " = 1\n")
            ncons += 1
    for a, b in combinations(range(nlabels), 2):
        pair = frozenset((a, b))
        terms = [var(t, i, d) for d in range(days) for t, i, blk in blocks if pair in blk.adjacency]
        out.write(f" pair_{a}_{b}: " + " + ".join(terms) + " = 1\n")
        ncons += 1
    out.write("binary\n")
    for d in range(days):
        for t, i, _ in blocks:
            out.write(f" {var(t, i, d)}\n")
    out.write("end\n")
    return ncons
