"""Almost 2-rotational starters for orders 4t+1 (n = 2t even).

Used when no 1-rotational starter can exist. The starter must contain the
critical path P = (0,0),(0,t),(1,t),(1,0); its three edges are left out of the
difference conditions and covered instead by P and its swapped twin P*.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from .csp import CspModel
from .csp import check as csp_check
from .csp import solve as csp_solve
from .errors import BudgetExhausted, Infeasible, KnownUnsolvable, Unsupported, WrongResidue
from .factors import INF, TwoFactor, differences
from .instances import KNOWN_UNSOLVABLE, CycleType
from .kernels import LabelStatus, solve_labeling
from .two_rotational_odd import (
    SLICES,
    BinaryLabeling,
    _edges_by_kind,
    _factor_from,
    build_group_problem,
    find_critical_path,
    glp_budget,
)

PATH_BITS = (0, 0, 1, 1)
# up to this order every bit labeling is tried, so failure is a certificate
EXHAUSTIVE_MAX_ORDER = 17


@dataclass(frozen=True)
class CriticalPath:
    """Four consecutive positions (cycle, index) that carry P."""

    cycle: int
    positions: tuple[tuple[int, int], ...]

    def edges(self) -> list[frozenset]:
        return [frozenset(pair) for pair in zip(self.positions, self.positions[1:])]

    def labels(self, t: int) -> dict:
        return dict(zip(self.positions, (0, t, t, 0)))


def _require_4t1(ct: CycleType):
    if ct.order % 4 != 1:
        raise WrongResidue(f"order {ct.order} is not 1 mod 4")


def _layout(ct: CycleType, host_length: Optional[int]) -> list[int]:
    lengths = sorted(ct.lengths, reverse=True)
    if host_length is not None:
        if host_length not in lengths:
            raise Infeasible(f"no cycle of length {host_length} to hold ∞")
        lengths.remove(host_length)
        lengths.insert(0, host_length)
    return lengths


def candidate_windows(lengths: list[int]) -> list[CriticalPath]:
    """Places where P can sit, ∞ at position 0 of cycle 0.

    A 4-cycle is never usable: its closing edge would be a mixed edge of
    difference 0. Rotations of a cycle without ∞, and repeated cycles of the
    same length, give equivalent windows, so only one is listed for those.
    """
    out = []
    seen_lengths = set()
    for ci, length in enumerate(lengths):
        if length < 5:
            continue
        if ci == 0:
            for s in range(1, length - 3):
                out.append(CriticalPath(0, tuple((0, s + j) for j in range(4))))
        elif length not in seen_lengths:
            seen_lengths.add(length)
            out.append(CriticalPath(ci, tuple((ci, j) for j in range(4))))
    return out


def eblp_model(ct: CycleType, lengths: list[int], window: Optional[CriticalPath] = None, *,
               require_mixed_in: Optional[int] = None):
    """Bits for n even: classes of 2t, ∞-neighbours differ, 2t-1 mixed edges, a (0,0,1,1) window.

    Without ``window`` every candidate window gets a pattern flag and at
    least one must hold; with it, the window bits are pinned.
    Returns (model, layout).
    """
    t = ct.order // 4
    model = CspModel()
    layout: list[list[Optional[int]]] = []
    for ci, length in enumerate(lengths):
        layout.append([None if (ci == 0 and k == 0) else model.add_var(f"c{ci}_{k}", (0, 1))
                       for k in range(length)])
    bits = [v for row in layout for v in row if v is not None]
    flags = []
    per_cycle = []
    for ci, row in enumerate(layout):
        mine = []
        for k in range(len(row)):
            a, b = row[k], row[(k + 1) % len(row)]
            if a is None or b is None:
                continue
            for x, y in ((a, b), (b, a)):
                f = model.add_var(f"m{ci}_{k}_{len(mine)}", (0, 1))
                model.mixed_edge_flag(f, x, y)
                mine.append(f)
        per_cycle.append(mine)
        flags += mine
    model.cardinality(flags, 1, 2 * t - 1)
    model.cardinality(bits, 0, 2 * t)
    model.cardinality(bits, 1, 2 * t)
    model.fix(layout[0][-1], 1)
    model.fix(layout[0][1], 0)
    if window is not None:
        for (ci, k), bit in zip(window.positions, PATH_BITS):
            model.fix(layout[ci][k], bit)
    else:
        pflags = []
        for w in candidate_windows(list(lengths)):
            p = model.add_var(f"p{len(pflags)}", (0, 1))
            model.pattern_flag(p, [layout[ci][k] for ci, k in w.positions], PATH_BITS)
            pflags.append(p)
        if not pflags:
            raise Unsupported(f"no cycle of {ct} can host the critical path")
        model.cardinality(pflags, 1, 1, len(pflags))
    if require_mixed_in is not None:
        extra = 1 if (window is not None and window.cycle == require_mixed_in) else 0
        model.cardinality(per_cycle[require_mixed_in], 1, 1 + extra, len(per_cycle[require_mixed_in]))
    return model, layout


def eblp_check(ct: CycleType, labeling: BinaryLabeling) -> bool:
    """Class sizes 2t, ∞-neighbours differ, 2t-1 mixed edges, at least one (0,0,1,1) window."""
    if labeling.cycle_type() != ct:
        return False
    t = ct.order // 4
    flat = [b for c in labeling.cycles for b in c]
    if flat.count(None) != 1 or any(b not in (0, 1, None) for b in flat):
        return False
    bits = labeling.finite_bits()
    if bits.count(0) != 2 * t or bits.count(1) != 2 * t:
        return False
    ci, k = labeling.inf_position()
    cyc = labeling.cycles[ci]
    if cyc[k - 1] == cyc[(k + 1) % len(cyc)]:
        return False
    if labeling.mixed_edges() != 2 * t - 1:
        return False
    return bool(critical_windows(labeling))


def critical_windows(labeling: BinaryLabeling) -> list[CriticalPath]:
    """Every run of four consecutive finite positions with bits (0,0,1,1), in a cycle of length >= 5."""
    out = []
    for ci, c in enumerate(labeling.cycles):
        L = len(c)
        if L < 5:
            continue
        for s in range(L):
            pos = [(s + j) % L for j in range(4)]
            if tuple(c[p] for p in pos) == PATH_BITS:
                out.append(CriticalPath(ci, tuple((ci, p) for p in pos)))
    return out


def eblp_solve(ct: CycleType, *, host_length: Optional[int] = None, window: Optional[CriticalPath] = None,
               require_mixed_length: Optional[int] = None, seed: int = 0,
               budget: Optional[float] = None) -> tuple[BinaryLabeling, list[CriticalPath]]:
    _require_4t1(ct)
    lengths = _layout(ct, host_length)
    req = None
    if require_mixed_length is not None:
        if require_mixed_length not in lengths:
            raise Infeasible(f"no cycle of length {require_mixed_length}")
        req = max(i for i, length in enumerate(lengths) if length == require_mixed_length)
    model, layout = eblp_model(ct, lengths, window, require_mixed_in=req)
    out = csp_solve(model, budget=budget, seed=seed, restart_base=100 if seed else 0)
    if out.status.name == "BUDGET_EXHAUSTED":
        raise BudgetExhausted(f"bit labeling for {ct} ran out of time")
    if not out.ok:
        raise Infeasible(f"no bit labeling for {ct}")
    labeling = BinaryLabeling(tuple(tuple(None if v is None else out.assignment[v] for v in row)
                                    for row in layout))
    if not eblp_check(ct, labeling):
        raise AssertionError("constraint solution fails the bit-labeling check")
    return labeling, critical_windows(labeling)


def eglp_build_model(ct: CycleType, labeling: BinaryLabeling, path: CriticalPath):
    """Group labels over Z_{2t} with P fixed to (0,t,t,0) and P's edges left out.

    Returns (model, {position: variable}).
    """
    n = ct.order // 2
    t = n // 2
    model = CspModel()
    pos_var = {}
    groups: tuple[list, list] = ([], [])
    for ci, c in enumerate(labeling.cycles):
        for k, bit in enumerate(c):
            if bit is None:
                continue
            v = model.add_var(f"{'AB'[bit]}{ci}_{k}", range(n))
            pos_var[(ci, k)] = v
            groups[bit].append(v)
    model.all_different(groups[0])
    model.all_different(groups[1])
    excluded = set(path.edges())
    allowed = [d for d in range(1, n) if d != t]
    same0, same1, mixed = _edges_by_kind(labeling)
    for name, edges in (("dA", same0), ("dB", same1)):
        dv = []
        for p, q in edges:
            if frozenset((p, q)) in excluded:
                continue
            for x, y in ((p, q), (q, p)):
                d = model.add_var(f"{name}{len(dv)}", allowed)
                model.mod_diff(d, pos_var[x], pos_var[y], n)
                dv.append(d)
        if dv:
            model.all_different(dv)
    dab = []
    for p, q in mixed:
        if frozenset((p, q)) in excluded:
            continue
        d = model.add_var(f"dAB{len(dab)}", allowed)
        model.mod_diff(d, pos_var[p], pos_var[q], n)
        dab.append(d)
    if dab:
        model.all_different(dab)
    for pos, label in path.labels(t).items():
        model.fix(pos_var[pos], label)
    return model, pos_var


def _eglp_assignment(labeling: BinaryLabeling, path: CriticalPath, labels: dict, n: int) -> list[int]:
    vals = [labels[(ci, k)] for ci, c in enumerate(labeling.cycles) for k, b in enumerate(c) if b is not None]
    excluded = set(path.edges())
    same0, same1, mixed = _edges_by_kind(labeling)
    for edges in (same0, same1):
        for p, q in edges:
            if frozenset((p, q)) in excluded:
                continue
            vals.append((labels[p] - labels[q]) % n)
            vals.append((labels[q] - labels[p]) % n)
    for p, q in mixed:
        if frozenset((p, q)) not in excluded:
            vals.append((labels[p] - labels[q]) % n)
    return vals


def is_two_rotational_starter_even(f: TwoFactor) -> bool:
    if f.scheme.kind != "two" or f.scheme.modulus % 2:
        return False
    n = f.scheme.modulus
    t = n // 2
    verts = f.vertices()
    want = {(b, x) for b in (0, 1) for x in range(n)} | {INF}
    if len(verts) != 2 * n + 1 or set(verts) != want:
        return False
    c = f.cycles[f.cycle_with(INF)]
    k = c.index(INF)
    if c[k - 1][0] == c[(k + 1) % len(c)][0]:
        return False
    where = find_critical_path(f)
    if where is None:
        return False
    ci, idx = where
    # differences of F - P: drop P's three edges from its cycle
    rest = []
    cyc = f.cycles[ci]
    path_edges = {frozenset((idx[j], idx[j + 1])) for j in range(3)}
    d00, d11, d01 = differences(f)
    for j in range(len(cyc)):
        j2 = (j + 1) % len(cyc)
        if frozenset((j, j2)) in path_edges:
            a, b = cyc[j], cyc[j2]
            rest.append((a, b))
    for a, b in rest:
        if a[0] == b[0]:
            target = d00 if a[0] == 0 else d11
            target.counts[(a[1] - b[1]) % n] -= 1
            target.counts[(b[1] - a[1]) % n] -= 1
        else:
            x0, x1 = (a[1], b[1]) if a[0] == 0 else (b[1], a[1])
            d01.counts[(x0 - x1) % n] -= 1
    want_set = [d for d in range(1, n) if d != t]
    return all(d.covers_exactly(want_set) for d in (d00, d11, d01))


def eglp_solve(ct: CycleType, labeling: BinaryLabeling, path: CriticalPath, budget: Optional[float] = None,
               seed: int = 0, backend: Optional[str] = None, info=None, restart_base: int = 200) -> TwoFactor:
    n = ct.order // 2
    t = n // 2
    allowed = [d for d in range(1, n) if d != t]
    fixed = path.labels(t)
    prob, index = build_group_problem(labeling, n, excluded=frozenset(path.edges()), fixed=fixed,
                                      allowed_same=allowed, allowed_mixed=allowed, anchor=False)
    if budget is None:
        budget = glp_budget(ct)
    res = solve_labeling(prob, seed=seed, budget=budget, backend=backend, restart_base=restart_base)
    if info is not None:
        info.nodes += res.nodes
        info.elapsed += res.elapsed
        info.backend = res.backend
    if res.status is LabelStatus.INFEASIBLE:
        raise Infeasible(f"no group labeling for this critical path of {ct}")
    if res.status is LabelStatus.BUDGET:
        raise BudgetExhausted(f"group labeling for {ct} exceeded {budget:.2f}s")
    labels = {p: res.labels[i] for p, i in index.items()}
    model, _ = eglp_build_model(ct, labeling, path)
    ok, why = csp_check(model, _eglp_assignment(labeling, path, labels, n))
    if not ok:
        raise AssertionError(f"kernel labeling violates the group model: {why}")
    f = _factor_from(labeling, labels, n)
    if not is_two_rotational_starter_even(f):
        raise AssertionError("group labeling does not give an almost 2-rotational starter")
    return f


def _attempts(ct: CycleType, require_mixed_length, seed, rounds: int = 8
              ) -> Iterator[tuple[BinaryLabeling, CriticalPath]]:
    """Bit labelings with a pinned window, round-robin over (∞ host, window) pairs.

    Each round asks every pair for one more labeling under a new seed, so a
    pair whose labelings all lead to hard group searches does not starve the rest.
    """
    pairs = []
    for host in sorted(set(ct.lengths), reverse=True):
        pairs += [(host, w) for w in candidate_windows(_layout(ct, host))]
    seen = set()
    for r in range(rounds):
        live = []
        for host, w in pairs:
            try:
                lab, _ = eblp_solve(ct, host_length=host, window=w, require_mixed_length=require_mixed_length,
                                    seed=seed + r)
            except Infeasible:
                continue
            live.append((host, w))
            key = (lab.cycles, w.positions)
            if key not in seen:
                seen.add(key)
                yield lab, w
        pairs = live


def enumerate_bit_labelings(ct: CycleType, host_length: int) -> Iterator[BinaryLabeling]:
    """Every valid bit labeling with ∞ at position 0 of a ``host_length`` cycle."""
    lengths = _layout(ct, host_length)
    nfin = sum(lengths) - 1
    for ones in combinations(range(nfin), nfin // 2):
        bits = [0] * nfin
        for i in ones:
            bits[i] = 1
        it = iter(bits)
        lab = BinaryLabeling(tuple(tuple(None if (ci == 0 and k == 0) else next(it) for k in range(length))
                                   for ci, length in enumerate(lengths)))
        if eblp_check(ct, lab):
            yield lab


def _exhaustive_attempts(ct: CycleType, require_mixed_length) -> Iterator[tuple[BinaryLabeling, CriticalPath]]:
    for host in sorted(set(ct.lengths), reverse=True):
        for lab in enumerate_bit_labelings(ct, host):
            if require_mixed_length is not None and not any(
                    len(c) == require_mixed_length and lab.mixed_edges(ci) > 0 for ci, c in enumerate(lab.cycles)):
                continue
            for w in critical_windows(lab):
                yield lab, w


def has_window_host(ct: CycleType) -> bool:
    """P needs a cycle of length >= 5."""
    return max(ct.lengths) >= 5


def solve_two_rotational_even(ct: CycleType, budget: Optional[float] = None, seed: int = 0, *,
                              require_mixed_length: Optional[int] = None, backend: Optional[str] = None,
                              max_attempts: int = 24, info=None) -> TwoFactor:
    """Iterate (∞ host, critical window) pairs until a group labeling is found."""
    _require_4t1(ct)
    if ct in KNOWN_UNSOLVABLE:
        raise KnownUnsolvable(f"{ct} has no solution")
    if not has_window_host(ct):
        raise Unsupported(f"no cycle of {ct} can host the critical path")
    if budget is None:
        budget = glp_budget(ct)
    exhaustive = ct.order <= EXHAUSTIVE_MAX_ORDER
    slice_ = max(budget / (2 * SLICES), 0.2)
    tried = 0
    slow = []

    def attempt(k, lab, w, limit, restart_base=200):
        try:
            return eglp_solve(ct, lab, w, budget=limit, seed=seed + 104729 * k, backend=backend, info=info,
                              restart_base=restart_base)
        except BudgetExhausted:
            slow.append((k, lab, w))
        except Infeasible:
            pass
        return None

    for k, (lab, w) in enumerate(_attempts(ct, require_mixed_length, seed)):
        if tried >= max_attempts:
            break
        tried += 1
        f = attempt(k, lab, w, min(slice_, budget))
        if f is not None:
            return f
    if exhaustive:
        for k, (lab, w) in enumerate(_exhaustive_attempts(ct, require_mixed_length)):
            tried += 1
            # plain depth-first search: these runs mostly end in a proof of infeasibility
            f = attempt(k, lab, w, min(slice_, budget), restart_base=0)
            if f is not None:
                return f
    unproven, slow = slow, []
    if unproven:
        k, lab, w = unproven[0]
        f = attempt(k, lab, w, budget)
        if f is not None:
            return f
        unproven = unproven[1:] + slow
    if unproven:
        raise BudgetExhausted(f"almost 2-rotational search for {ct} ran out of time")
    if exhaustive:
        what = "with the required mixed edge " if require_mixed_length is not None else ""
        raise Unsupported(f"{ct} has no almost 2-rotational starter {what}(all bit labelings tried)")
    raise Infeasible(f"no almost 2-rotational starter found for {ct} ({tried} attempts)")
