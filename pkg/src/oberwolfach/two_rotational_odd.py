"""2-rotational starters for orders 4t+3 (n = 2t+1 odd), built in two steps.

First every finite vertex gets a bit (which Z_n orbit it lies in), then a group
label in Z_n. Expansion and the one-step extension to order 2n+2 live here
too and handle both parities of n.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .csp import CspModel
from .csp import check as csp_check
from .csp import solve as csp_solve
from .errors import BudgetExhausted, Infeasible, KnownUnsolvable, PatternMiss, WrongResidue
from .factors import INF, INF2, Factorization, Scheme, TwoFactor, differences, translate, translate_vertex
from .instances import KNOWN_UNSOLVABLE, CycleType, lengthened_cycle
from .kernels import LabelingProblem, LabelStatus, solve_labeling


@dataclass(frozen=True)
class BinaryLabeling:
    """Bits per cycle position; ``None`` marks ∞ (exactly one, in the ∞-cycle)."""

    cycles: tuple[tuple[Optional[int], ...], ...]

    def cycle_type(self) -> CycleType:
        return CycleType.from_lengths(len(c) for c in self.cycles)

    def finite_bits(self) -> list[int]:
        return [b for c in self.cycles for b in c if b is not None]

    def inf_position(self) -> tuple[int, int]:
        for ci, c in enumerate(self.cycles):
            for k, b in enumerate(c):
                if b is None:
                    return ci, k
        raise ValueError("no ∞ vertex")

    def mixed_edges(self, ci: Optional[int] = None) -> int:
        total = 0
        for idx, c in enumerate(self.cycles):
            if ci is not None and idx != ci:
                continue
            for k in range(len(c)):
                a, b = c[k], c[(k + 1) % len(c)]
                if a is not None and b is not None and a != b:
                    total += 1
        return total


def _require_4t3(ct: CycleType):
    if ct.order % 4 != 3:
        raise WrongResidue(f"order {ct.order} is not 3 mod 4")


def blp_check(ct: CycleType, labeling: BinaryLabeling) -> bool:
    """Bit classes of size 2t+1, ∞-neighbours differ, exactly 2t+1 mixed edges."""
    if labeling.cycle_type() != ct:
        return False
    t = ct.order // 4
    flat = [b for c in labeling.cycles for b in c]
    if flat.count(None) != 1 or any(b not in (0, 1, None) for b in flat):
        return False
    bits = labeling.finite_bits()
    if bits.count(0) != 2 * t + 1 or bits.count(1) != 2 * t + 1:
        return False
    ci, k = labeling.inf_position()
    cyc = labeling.cycles[ci]
    if len(cyc) < 3 or cyc[k - 1] == cyc[(k + 1) % len(cyc)]:
        return False
    return labeling.mixed_edges() == 2 * t + 1


# Residual patterns left after stripping 4-blocks. Groups are balanced
# (half zeros, half mixed edges); bases carry ∞ (None) and close the count.
_GROUPS: list[tuple[tuple[int, ...], list[tuple[int, ...]]]] = [
    ((3, 5), [(1, 0, 0), (1, 1, 0, 0, 1)]),
    ((5, 5, 5, 5), [(1, 1, 1, 1, 0), (1, 1, 0, 0, 0), (1, 1, 0, 0, 0), (1, 0, 1, 0, 0)]),
    ((3,) * 8, [(0, 0, 0), (1, 0, 0), (1, 0, 0), (1, 1, 1), (1, 1, 0), (1, 1, 0), (1, 1, 0), (1, 0, 0)]),
    ((6, 6), [(1, 0, 0, 1, 1, 1), (0, 0, 1, 0, 0, 1)]),
    ((3, 3, 6), [(1, 0, 0), (1, 0, 0), (1, 0, 0, 1, 1, 1)]),
]
_BASES: list[tuple[tuple[int, ...], list[tuple]]] = [
    ((3,), [(1, None, 0)]),
    ((5, 6), [(None, 0, 0, 0, 1), (1, 1, 1, 0, 1, 0)]),
    ((3,) * 5, [(1, None, 0), (0, 0, 0), (1, 1, 0), (1, 1, 0), (1, 1, 0)]),
    ((5, 5, 5), [(1, None, 0, 1, 1), (1, 0, 0, 1, 0), (1, 1, 0, 0, 0)]),
]


def _residual(length: int) -> int:
    r = length
    while r >= 7:
        r -= 4
    return 0 if r == 4 else r


def _plan_residuals(residuals: Counter):
    """Greedy decomposition of the residual multiset into groups plus one base.

    Returns (list of (lengths, patterns)) with the base last, or None.
    """
    rem = Counter({r: c for r, c in residuals.items() if r and c})
    plan = []
    while True:
        for lengths, pats in _BASES:
            if rem == Counter(lengths):
                plan.append((lengths, pats))
                return plan
        for lengths, pats in _GROUPS:
            need = Counter(lengths)
            if all(rem[r] >= c for r, c in need.items()):
                rem -= need
                plan.append((lengths, pats))
                break
        else:
            return None


def _insert_block(bits: list, k: int) -> list:
    """Insert a 4-block after position k (both k and k+1 finite), adding 2 mixed edges."""
    a, b = bits[k], bits[(k + 1) % len(bits)]
    block = [0, 0, 1, 1] if (a, b) == (1, 0) else [1, 1, 0, 0]
    return bits[: k + 1] + block + bits[k + 1:]


def _finite_gap(bits: list) -> int:
    for k in range(len(bits)):
        if bits[k] is not None and bits[(k + 1) % len(bits)] is not None:
            return k
    raise ValueError("no finite edge to grow from")


def _move_inf_to_longest(cycles: list) -> None:
    """Swap ∞ with a vertex of cycles[0] (the longest) whose neighbours differ.

    Class sizes stay put, the old ∞-cycle gains one mixed edge and the
    longest cycle loses one, so the labeling stays valid.
    """
    host = next(ci for ci, c in enumerate(cycles) if None in c)
    if len(cycles[host]) == len(cycles[0]):
        return
    longest = cycles[0]
    L = len(longest)
    w = next((k for k in range(L) if longest[k - 1] != longest[(k + 1) % L]), None)
    if w is None:
        return  # period-2 bits: no vertex to trade
    old = list(cycles[host])
    old[old.index(None)] = longest[w]
    new = list(longest)
    new[w] = None
    cycles[host] = tuple(old)
    cycles[0] = tuple(new)


def blp_solve_patterns(ct: CycleType) -> BinaryLabeling:
    """Bits from the pattern table; the ∞-cycle is the longest cycle able to host the base."""
    _require_4t3(ct)
    lengths = sorted(ct.lengths, reverse=True)
    residuals = [_residual(length) for length in lengths]
    plan = _plan_residuals(Counter(residuals))
    if plan is None:
        raise PatternMiss(f"no pattern decomposition for {ct}")
    # hand out patterns to cycles; the ∞ entry goes to the longest matching cycle
    free: dict[int, list[int]] = {}
    for idx, r in enumerate(residuals):
        free.setdefault(r, []).append(idx)  # indices already in descending length
    assigned: dict[int, tuple] = {}
    base_lengths, base_pats = plan[-1]
    inf_entry = next(i for i, p in enumerate(base_pats) if None in p)
    host = free[base_lengths[inf_entry]].pop(0)
    assigned[host] = base_pats[inf_entry]
    for lens, pats in plan:
        for i, (r, pat) in enumerate(zip(lens, pats)):
            if pats is base_pats and i == inf_entry:
                continue
            assigned[free[r].pop(0)] = pat
    cycles = []
    for idx, length in enumerate(lengths):
        r = residuals[idx]
        if r == 0:
            cycles.append(tuple([1, 1, 0, 0] * (length // 4)))
            continue
        bits = list(assigned[idx])
        while len(bits) < length:
            bits = _insert_block(bits, _finite_gap(bits))
        cycles.append(tuple(bits))
    _move_inf_to_longest(cycles)
    labeling = BinaryLabeling(tuple(cycles))
    if not blp_check(ct, labeling):
        raise PatternMiss(f"pattern output for {ct} fails validation")
    return labeling


def blp_model(ct: CycleType, cycle_lengths: Sequence[int], *, require_mixed_in: Optional[int] = None):
    """Bits as a CSP. ∞ sits at position 0 of the first cycle.

    Returns (model, per-cycle lists of bit variable ids or None for ∞).
    """
    t = ct.order // 4
    model = CspModel()
    layout: list[list[Optional[int]]] = []
    for ci, length in enumerate(cycle_lengths):
        row: list[Optional[int]] = []
        for k in range(length):
            if ci == 0 and k == 0:
                row.append(None)
            else:
                row.append(model.add_var(f"c{ci}_{k}", (0, 1)))
        layout.append(row)
    bits = [v for row in layout for v in row if v is not None]
    flags = []
    per_cycle: list[list[int]] = []
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
    model.cardinality(flags, 1, 2 * t + 1)
    model.cardinality(bits, 0, 2 * t + 1)
    model.cardinality(bits, 1, 2 * t + 1)
    inf_row = layout[0]
    model.fix(inf_row[-1], 1)
    model.fix(inf_row[1], 0)
    if require_mixed_in is not None:
        model.cardinality(per_cycle[require_mixed_in], 1, 1, len(per_cycle[require_mixed_in]))
    return model, layout


def blp_solve_csp(ct: CycleType, *, require_mixed_length: Optional[int] = None, seed: int = 0,
                  budget: Optional[float] = None, host_length: Optional[int] = None) -> BinaryLabeling:
    """Bits via the constraint engine.

    ∞ goes into a cycle of ``host_length`` (default: the longest cycle).
    ``require_mixed_length`` asks for at least one mixed edge in a cycle of that length.
    """
    _require_4t3(ct)
    lengths = sorted(ct.lengths, reverse=True)
    if host_length is not None:
        if host_length not in lengths:
            raise Infeasible(f"no cycle of length {host_length} to hold ∞")
        lengths.remove(host_length)
        lengths.insert(0, host_length)
    req = None
    if require_mixed_length is not None:
        if require_mixed_length not in lengths:
            raise Infeasible(f"no cycle of length {require_mixed_length}")
        # prefer a cycle without ∞ when there is a choice
        req = max(i for i, length in enumerate(lengths) if length == require_mixed_length)
    model, layout = blp_model(ct, lengths, require_mixed_in=req)
    out = csp_solve(model, budget=budget, seed=seed, restart_base=100 if seed else 0)
    if out.status.name == "BUDGET_EXHAUSTED":
        raise BudgetExhausted(f"bit labeling for {ct} ran out of time")
    if not out.ok:
        raise Infeasible(f"no bit labeling for {ct}")
    cycles = tuple(tuple(None if v is None else out.assignment[v] for v in row) for row in layout)
    labeling = BinaryLabeling(cycles)
    if not blp_check(ct, labeling):
        raise AssertionError("constraint solution fails the bit-labeling check")
    return labeling


def _edges_by_kind(labeling: BinaryLabeling):
    """Split finite edges into same-bit and mixed; positions are (cycle, index)."""
    same0, same1, mixed = [], [], []
    for ci, c in enumerate(labeling.cycles):
        for k in range(len(c)):
            k2 = (k + 1) % len(c)
            a, b = c[k], c[k2]
            if a is None or b is None:
                continue
            if a == b:
                (same0 if a == 0 else same1).append(((ci, k), (ci, k2)))
            elif a == 0:
                mixed.append(((ci, k), (ci, k2)))
            else:
                mixed.append(((ci, k2), (ci, k)))  # bit-0 end first
    return same0, same1, mixed


def glp_build_model(ct: CycleType, labeling: BinaryLabeling):
    """Group labels over Z_n for fixed bits.

    Returns (model, {position: variable}) with positions (cycle, index).
    """
    n = ct.order // 2
    model = CspModel()
    pos_var = {}
    a_vars, b_vars = [], []
    for ci, c in enumerate(labeling.cycles):
        for k, bit in enumerate(c):
            if bit is None:
                continue
            v = model.add_var(f"{'AB'[bit]}{ci}_{k}", range(n))
            pos_var[(ci, k)] = v
            (a_vars if bit == 0 else b_vars).append(v)
    model.all_different(a_vars)
    model.all_different(b_vars)
    same0, same1, mixed = _edges_by_kind(labeling)
    nonzero = range(1, n)
    for name, edges in (("dA", same0), ("dB", same1)):
        dv = []
        for p, q in edges:
            for x, y in ((p, q), (q, p)):
                d = model.add_var(f"{name}{len(dv)}", nonzero)
                model.mod_diff(d, pos_var[x], pos_var[y], n)
                dv.append(d)
        if dv:
            model.all_different(dv)
    dab = []
    for p, q in mixed:
        d = model.add_var(f"dAB{len(dab)}", range(n))
        model.mod_diff(d, pos_var[p], pos_var[q], n)
        dab.append(d)
    if dab:
        model.all_different(dab)
    model.fix(a_vars[0], 0)
    return model, pos_var


def _glp_assignment(labeling: BinaryLabeling, labels: dict, n: int) -> list[int]:
    """Values for every variable of glp_build_model in declaration order."""
    vals = [labels[(ci, k)] for ci, c in enumerate(labeling.cycles) for k, b in enumerate(c) if b is not None]
    same0, same1, mixed = _edges_by_kind(labeling)
    for edges in (same0, same1):
        for p, q in edges:
            vals.append((labels[p] - labels[q]) % n)
            vals.append((labels[q] - labels[p]) % n)
    for p, q in mixed:
        vals.append((labels[p] - labels[q]) % n)
    return vals


def _search_order(labeling: BinaryLabeling) -> list[int]:
    """Cycles ascending by length with the ∞-cycle last."""
    inf_ci, _ = labeling.inf_position()
    rest = sorted((ci for ci in range(len(labeling.cycles)) if ci != inf_ci),
                  key=lambda ci: (len(labeling.cycles[ci]), ci))
    return rest + [inf_ci]


def _rotated_positions(labeling: BinaryLabeling, ci: int) -> list[tuple[int, int]]:
    c = labeling.cycles[ci]
    if None in c:
        k0 = c.index(None)
        return [(ci, (k0 + 1 + j) % len(c)) for j in range(len(c) - 1)]
    return [(ci, k) for k in range(len(c))]


def build_group_problem(labeling: BinaryLabeling, n: int, *, excluded=frozenset(), fixed=None,
                        allowed_same=None, allowed_mixed=None, anchor: bool = True):
    """Kernel problem for group labels.

    ``excluded`` edges (as position pairs) contribute nothing; ``fixed`` maps
    positions to labels and those vertices are searched first.
    Returns (problem, position -> search index).
    """
    fixed = fixed or {}
    prob = LabelingProblem(n)
    grp = [prob.add_group(n), prob.add_group(n)]
    same = list(allowed_same if allowed_same is not None else range(1, n))
    cls00 = prob.add_class(same)
    cls11 = prob.add_class(same)
    cls01 = prob.add_class(allowed_mixed if allowed_mixed is not None else range(n))
    order: list[tuple[int, int]] = list(fixed)
    for ci in _search_order(labeling):
        order += [p for p in _rotated_positions(labeling, ci) if p not in fixed]
    index = {}
    for p in order:
        bit = labeling.cycles[p[0]][p[1]]
        if p in fixed:
            val = fixed[p]
        elif anchor and not fixed and not index:
            val = 0
        else:
            val = -1
        index[p] = prob.add_vertex(grp[bit], val)
    same0, same1, mixed = _edges_by_kind(labeling)
    for cls, edges in ((cls00, same0), (cls11, same1)):
        for p, q in edges:
            if frozenset((p, q)) in excluded:
                continue
            prob.add_edge(index[p], index[q], 1, 0, cls, True)
    for p, q in mixed:
        if frozenset((p, q)) in excluded:
            continue
        prob.add_edge(index[p], index[q], 1, 0, cls01, False)
    return prob, index


def _factor_from(labeling: BinaryLabeling, labels: dict, n: int) -> TwoFactor:
    cycles = []
    for ci, c in enumerate(labeling.cycles):
        cycles.append(tuple(INF if b is None else (b, labels[(ci, k)] % n) for k, b in enumerate(c)))
    return TwoFactor(tuple(cycles), Scheme.two(n))


def glp_budget(ct: CycleType) -> float:
    return 5.0 * (1 + ct.order / 50.0)


def is_two_rotational_starter_odd(f: TwoFactor) -> bool:
    if f.scheme.kind != "two" or f.scheme.modulus % 2 == 0:
        return False
    n = f.scheme.modulus
    verts = f.vertices()
    want = {(b, x) for b in (0, 1) for x in range(n)} | {INF}
    if len(verts) != 2 * n + 1 or set(verts) != want:
        return False
    ci = f.cycle_with(INF)
    c = f.cycles[ci]
    k = c.index(INF)
    if c[k - 1][0] == c[(k + 1) % len(c)][0]:
        return False
    d00, d11, d01 = differences(f)
    return d00.covers_exactly(range(1, n)) and d11.covers_exactly(range(1, n)) and d01.covers_exactly(range(n))


def glp_solve(ct: CycleType, labeling: BinaryLabeling, budget: Optional[float] = None, seed: int = 0,
              backend: Optional[str] = None, info=None) -> TwoFactor:
    n = ct.order // 2
    prob, index = build_group_problem(labeling, n)
    if budget is None:
        budget = glp_budget(ct)
    res = solve_labeling(prob, seed=seed, budget=budget, backend=backend)
    if info is not None:
        info.nodes += res.nodes
        info.elapsed += res.elapsed
        info.backend = res.backend
    if res.status is LabelStatus.INFEASIBLE:
        raise Infeasible(f"no group labeling for these bits of {ct}")
    if res.status is LabelStatus.BUDGET:
        raise BudgetExhausted(f"group labeling for {ct} exceeded {budget:.2f}s")
    # translate so the first bit-0 vertex in model order gets 0
    model, pos_var = glp_build_model(ct, labeling)
    first = next(p for p in pos_var if labeling.cycles[p[0]][p[1]] == 0)
    shift = res.labels[index[first]]
    labels = {p: (res.labels[i] - shift) % n for p, i in index.items()}
    ok, why = csp_check(model, _glp_assignment(labeling, labels, n))
    if not ok:
        raise AssertionError(f"kernel labeling violates the group model: {why}")
    f = _factor_from(labeling, labels, n)
    if not is_two_rotational_starter_odd(f):
        raise AssertionError("group labeling does not give a 2-rotational starter")
    return f


def bit_labelings(ct: CycleType, require_mixed_length: Optional[int] = None, seed: int = 0,
                  per_host: int = 3):
    """Candidate bit labelings: the pattern table first, then the CSP with ∞ in
    each cycle length in turn (longest first), a few seeds each. Duplicates are skipped."""
    seen = set()
    try:
        lab = blp_solve_patterns(ct)
        if require_mixed_length is None or _has_mixed_in_length(lab, require_mixed_length):
            seen.add(lab.cycles)
            yield lab
    except PatternMiss:
        pass
    for host in sorted(set(ct.lengths), reverse=True):
        for k in range(per_host):
            try:
                lab = blp_solve_csp(ct, require_mixed_length=require_mixed_length, seed=seed + k,
                                    host_length=host)
            except Infeasible:
                break
            if lab.cycles not in seen:
                seen.add(lab.cycles)
                yield lab


# a group search first gets budget/SLICES before the next bit labeling is tried
SLICES = 8


def solve_two_rotational_odd(ct: CycleType, budget: Optional[float] = None, seed: int = 0, *,
                             require_mixed_length: Optional[int] = None, backend: Optional[str] = None,
                             per_host: int = 3, info=None) -> TwoFactor:
    """Bits first, then group labels.

    Each bit labeling gets a slice of ``budget``; one that proves infeasible or
    uses up its slice is set aside for the next. Labelings that timed out are
    retried with the full budget only after all candidates had a turn.
    """
    _require_4t3(ct)
    if ct in KNOWN_UNSOLVABLE:
        raise KnownUnsolvable(f"{ct} has no solution")
    if budget is None:
        budget = glp_budget(ct)
    slice_ = max(budget / SLICES, 0.2)
    slow = []
    tried = 0
    for k, lab in enumerate(bit_labelings(ct, require_mixed_length, seed, per_host)):
        tried += 1
        try:
            return glp_solve(ct, lab, budget=min(slice_, budget), seed=seed + 7919 * k, backend=backend,
                             info=info)
        except BudgetExhausted:
            slow.append((k, lab))
        except Infeasible:
            continue
    for k, lab in slow[:1]:
        try:
            return glp_solve(ct, lab, budget=budget, seed=seed + 7919 * k, backend=backend, info=info)
        except Infeasible:
            slow = slow[1:]
        except BudgetExhausted:
            pass
    if slow:
        raise BudgetExhausted(f"2-rotational search for {ct} ran out of time")
    raise Infeasible(f"no 2-rotational starter found for {ct} ({tried} bit labelings tried)")


def _has_mixed_in_length(lab: BinaryLabeling, length: int) -> bool:
    return any(len(c) == length and lab.mixed_edges(ci) > 0 for ci, c in enumerate(lab.cycles))


# Expansion and extension (both parities of n)

def find_critical_path(f: TwoFactor):
    """Locate P = (0,0),(0,n/2),(1,n/2),(1,0) in F as (cycle index, positions of the 4 vertices)."""
    n = f.scheme.modulus
    if n % 2:
        return None
    h = n // 2
    path = [(0, 0), (0, h), (1, h), (1, 0)]
    for ci, c in enumerate(f.cycles):
        L = len(c)
        for k in range(L):
            for step in (1, -1):
                idx = [(k + step * j) % L for j in range(4)]
                if [c[i] for i in idx] == path:
                    return ci, idx
    return None


def swap_critical_path(f: TwoFactor) -> TwoFactor:
    """F* : F with P replaced by P* (the two middle vertices exchanged)."""
    where = find_critical_path(f)
    if where is None:
        raise ValueError("factor does not contain the critical path")
    ci, idx = where
    c = list(f.cycles[ci])
    c[idx[1]], c[idx[2]] = c[idx[2]], c[idx[1]]
    return TwoFactor(f.cycles[:ci] + (tuple(c),) + f.cycles[ci + 1:], f.scheme)


def expand_two_rotational(f: TwoFactor) -> Factorization:
    n = f.scheme.modulus
    if n % 2:
        factors = tuple(translate(f, g) for g in range(1, n + 1))
    else:
        star = swap_critical_path(f)
        h = n // 2
        factors = tuple(translate(f, g) for g in range(1, h + 1)) + tuple(
            translate(star, h + g) for g in range(1, h + 1)
        )
    return Factorization(factors, None, 2 * n + 1)


def find_mixed_edge(f: TwoFactor, length: int):
    """(cycle index, position k) of a mixed edge c[k]-c[k+1] in an L-cycle, not on P."""
    n = f.scheme.modulus
    banned = set()
    if n % 2 == 0:
        where = find_critical_path(f)
        if where is None:
            raise ValueError("factor does not contain the critical path")
        ci, idx = where
        for a, b in zip(idx, idx[1:]):
            banned.add((ci, frozenset((a, b))))
    for ci, c in enumerate(f.cycles):
        if len(c) != length:
            continue
        for k in range(len(c)):
            k2 = (k + 1) % len(c)
            a, b = c[k], c[k2]
            if a is INF or b is INF or a[0] == b[0]:
                continue
            if (ci, frozenset((k, k2))) in banned:
                continue
            return ci, k
    return None


def _insert_after(f: TwoFactor, ci: int, k: int) -> TwoFactor:
    c = f.cycles[ci]
    return TwoFactor(f.cycles[:ci] + (c[: k + 1] + (INF2,) + c[k + 1:],) + f.cycles[ci + 1:], f.scheme)


def extend_two_rotational(f: TwoFactor, target: CycleType) -> Factorization:
    """Insert ∞′ into a mixed edge of the lengthened cycle; order 2n+1 -> 2n+2."""
    length = lengthened_cycle(f.cycle_type(), target)
    where = find_mixed_edge(f, length)
    if where is None:
        raise Infeasible(f"no {length}-cycle has a usable mixed edge")
    ci, k = where
    n = f.scheme.modulus
    c = f.cycles[ci]
    c0, c1 = c[k], c[(k + 1) % len(c)]
    h_fac = _insert_after(f, ci, k)
    if n % 2:
        factors = tuple(translate(h_fac, g) for g in range(1, n + 1))
    else:
        star = swap_critical_path(f)
        # the chosen edge is off P, so it sits at the same place in F*
        sc = star.cycles[ci]
        k_star = next(j for j in range(len(sc)) if {sc[j], sc[(j + 1) % len(sc)]} == {c0, c1})
        h_star = _insert_after(star, ci, k_star)
        h = n // 2
        factors = tuple(translate(h_fac, g) for g in range(1, h + 1)) + tuple(
            translate(h_star, h + g) for g in range(1, h + 1)
        )
    sch = f.scheme
    one = ((INF, INF2),) + tuple(
        (translate_vertex(c0, g, sch), translate_vertex(c1, g, sch)) for g in range(1, n + 1)
    )
    return Factorization(factors, one, 2 * n + 2)
