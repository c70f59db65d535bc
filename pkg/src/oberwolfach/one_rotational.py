"""1-rotational starters for orders 4t+1 and their extension to 4t+2.

The starter F lives on Z_{4t} plus ∞ with F + 2t = F, so only half of it
needs labels. That half (the reduced graph) consists of an open chain hanging
off ∞, one representative per pair of equal cycles, and for each unpaired even
cycle an open chain whose closing edge wraps around through +2t.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .csp import CspModel
from .csp import check as csp_check
from .errors import BudgetExhausted, Infeasible, WrongResidue
from .factors import (
    INF,
    INF2,
    Factorization,
    Scheme,
    TwoFactor,
    differences,
    element_order,
    same_factor,
    translate,
)
from .instances import CycleType, lengthened_cycle
from .kernels import LabelingProblem, LabelStatus, solve_labeling


@dataclass(frozen=True)
class Eligibility:
    ok: bool
    reason: Optional[str] = None  # "FailsParity" or "FailsMod4"

    def __bool__(self):
        return self.ok


def _require_4t1(ct: CycleType):
    if ct.order % 4 != 1:
        raise WrongResidue(f"order {ct.order} is not 1 mod 4")


def check_necessary(ct: CycleType) -> Eligibility:
    """Necessary conditions for a 1-rotational starter of order 4t+1."""
    _require_4t1(ct)
    odd_odd = [length for length, mult in ct.parts if length % 2 == 1 and mult % 2 == 1]
    if len(odd_odd) != 1:
        return Eligibility(False, "FailsParity")
    n = (ct.order - 1) // 2
    if odd_odd[0] == 3 and n % 4 != 0:
        return Eligibility(False, "FailsMod4")
    return Eligibility(True)


@dataclass(frozen=True)
class Component:
    kind: str  # "inf", "cycle" or "chain"
    length: int  # length of the cycle(s) of F it stands for
    size: int  # finite vertices in the reduced graph

    @property
    def internal_edges(self) -> int:
        return self.size if self.kind == "cycle" else max(self.size - 1, 0)


@dataclass(frozen=True)
class ReducedGraph:
    components: tuple[Component, ...]  # the ∞-chain first
    gamma: int

    @property
    def inf_chain(self) -> Component:
        return self.components[0]

    @property
    def cycles(self) -> list[Component]:
        return [c for c in self.components if c.kind == "cycle"]

    @property
    def chains(self) -> list[Component]:
        return [c for c in self.components if c.kind == "chain"]

    @property
    def num_vertices(self) -> int:
        return sum(c.size for c in self.components)

    @property
    def num_differences(self) -> int:
        """Both signs of every internal edge plus both signs of each chain closure."""
        return sum(2 * c.internal_edges + (2 if c.kind == "chain" else 0) for c in self.components)

    def signature(self) -> tuple:
        return tuple(sorted((c.kind, c.length, c.size) for c in self.components))


def reduce_to_fstar(ct: CycleType) -> ReducedGraph:
    elig = check_necessary(ct)
    if not elig:
        raise Infeasible(f"{ct} fails the 1-rotational condition ({elig.reason})")
    counts = Counter(dict(ct.parts))
    l1 = next(length for length, mult in ct.parts if length % 2 == 1 and mult % 2 == 1)
    comps = [Component("inf", l1, (l1 - 1) // 2)]
    counts[l1] -= 1
    for length in sorted(counts):
        mult = counts[length]
        comps += [Component("cycle", length, length)] * (mult // 2)
        if mult % 2:
            # only even lengths can be left over here
            comps.append(Component("chain", length, length // 2))
    gamma = (ct.order - 1) // 2
    return ReducedGraph(tuple(comps), gamma)


def _component_edges(comp: Component, verts: list[int]):
    """Yield (a, b, offset) meaning a difference ±(L[a] - L[b] + offset)."""
    for a, b in zip(verts, verts[1:]):
        yield b, a, 0
    if comp.kind == "cycle":
        yield verts[0], verts[-1], 0
    elif comp.kind == "chain":
        yield verts[0], verts[-1], None  # offset filled with gamma by the caller


def _edge_list(rg: ReducedGraph, positions: list[list[int]]):
    out = []
    for comp, verts in zip(rg.components, positions):
        for a, b, off in _component_edges(comp, verts):
            out.append((a, b, rg.gamma if off is None else off))
    return out


def _default_positions(rg: ReducedGraph) -> list[list[int]]:
    pos = []
    k = 0
    for comp in rg.components:
        pos.append(list(range(k, k + comp.size)))
        k += comp.size
    return pos


def build_fstar_model(rg: ReducedGraph) -> CspModel:
    """CSP over the reduced graph: vertex labels in Z_{2γ} and their differences."""
    g = rg.gamma
    m = 2 * g
    model = CspModel()
    pos = _default_positions(rg)
    names = []
    for ci, comp in enumerate(rg.components):
        for k in range(comp.size):
            names.append(f"{comp.kind}{ci}_{k}")
    verts = [model.add_var(name, range(m)) for name in names]
    model.all_different(verts)
    model.half_pair_use(verts, g, m)
    diff_dom = [d for d in range(1, m) if d != g]
    dvars = []
    for a, b, off in _edge_list(rg, pos):
        d1 = model.add_var(f"d{len(dvars)}", diff_dom)
        model.mod_diff(d1, a, b, m, off)
        dvars.append(d1)
        d2 = model.add_var(f"d{len(dvars)}", diff_dom)
        model.mod_diff(d2, b, a, m, -off)
        dvars.append(d2)
    model.all_different(dvars)
    if rg.inf_chain.size:
        model.fix(pos[0][0], 0)
    elif verts:
        model.fix(verts[0], 0)
    return model


def fstar_assignment(rg: ReducedGraph, labels: list[int]) -> list[int]:
    """Extend vertex labels (model order) with the implied difference values."""
    m = 2 * rg.gamma
    values = list(labels)
    for a, b, off in _edge_list(rg, _default_positions(rg)):
        values.append((labels[a] - labels[b] + off) % m)
        values.append((labels[b] - labels[a] - off) % m)
    return values


def eligible_differences(m: int) -> list[int]:
    """Residues of Z_m whose additive order is 2 mod 4."""
    return [x for x in range(1, m) if element_order(x, m) % 4 == 2]


def _kernel_problem(rg: ReducedGraph, host: Optional[int]):
    """Labeling problem with components ascending by size and the ∞-chain last.

    Returns (problem, model index -> search index, host component index).
    """
    g = rg.gamma
    m = 2 * g
    prob = LabelingProblem(m)
    grp = prob.add_group(g)
    cls = prob.add_class(d for d in range(1, m) if d != g)
    forced = None
    if host is not None:
        elig = [d for d in eligible_differences(m) if d != g]
        forced = prob.add_mask(elig)
    model_pos = _default_positions(rg)
    order = sorted(range(1, len(rg.components)), key=lambda i: (rg.components[i].size, i)) + [0]
    to_search = {}
    for ci in order:
        for v in model_pos[ci]:
            to_search[v] = prob.add_vertex(grp, 0 if not to_search else -1)
    host_comp = None
    if host is not None:
        host_comp = next(
            (ci for ci in order if ci != 0 and rg.components[ci].length == host and rg.components[ci].size >= 2),
            None,
        )
    for ci, (comp, verts) in enumerate(zip(rg.components, model_pos)):
        first = True
        for a, b, off in _component_edges(comp, verts):
            mask = forced if (ci == host_comp and first) else None
            first = False
            prob.add_edge(to_search[a], to_search[b], 1, rg.gamma if off is None else off, cls, True, mask)
    return prob, to_search, host_comp


def _lift(rg: ReducedGraph, labels: list[int]) -> TwoFactor:
    g = rg.gamma
    m = 2 * g
    cycles = []
    for comp, verts in zip(rg.components, _default_positions(rg)):
        lab = [labels[v] for v in verts]
        if comp.kind == "inf":
            cycles.append((INF,) + tuple(lab) + tuple((x + g) % m for x in reversed(lab)))
        elif comp.kind == "cycle":
            cycles.append(tuple(lab))
            cycles.append(tuple((x + g) % m for x in lab))
        else:
            cycles.append(tuple(lab) + tuple((x + g) % m for x in lab))
    return TwoFactor(tuple(cycles), Scheme.one(m))


def lift_fstar_labeling(rg: ReducedGraph, assignment) -> TwoFactor:
    """Rebuild the full starter from labels of the reduced graph (model variable order)."""
    labels = list(assignment)[: rg.num_vertices]
    return _lift(rg, labels)


def is_one_rotational_starter(f: TwoFactor) -> bool:
    """Starter conditions: vertex set Z_{2n} ∪ {∞}, every nonzero difference twice, F + n = F."""
    sch = f.scheme
    if sch.kind != "one" or sch.modulus % 2:
        return False
    m = sch.modulus
    verts = f.vertices()
    if len(verts) != m + 1 or set(verts) != set(range(m)) | {INF}:
        return False
    if not differences(f).covers_exactly(range(1, m), 2):
        return False
    return same_factor(translate(f, m // 2), f)


def fstar_budget(rg: ReducedGraph) -> float:
    return max(rg.num_vertices / 20.0, 0.05)


@dataclass
class SolveInfo:
    nodes: int = 0
    elapsed: float = 0.0
    backend: str = ""
    notes: list = field(default_factory=list)


def solve_one_rotational(ct: CycleType, budget: Optional[float] = None, seed: int = 0, *,
                         host_length: Optional[int] = None, backend: Optional[str] = None,
                         info: Optional[SolveInfo] = None, restart_base: int = 200) -> TwoFactor:
    """Find a 1-rotational starter for ``ct``.

    ``host_length`` asks for a cycle of that length whose differences contain
    an element of order 2 mod 4 other than 2t (the ∞-cycle always has 2t).
    Raises Infeasible or BudgetExhausted.
    """
    _require_4t1(ct)
    rg = reduce_to_fstar(ct)
    host = None
    if host_length is not None and host_length != rg.inf_chain.length:
        if not any(c.length == host_length and c.size >= 2 for c in rg.components[1:]):
            raise Infeasible(f"no cycle of length {host_length} to host the extension")
        if not [d for d in eligible_differences(2 * rg.gamma) if d != rg.gamma]:
            raise Infeasible(f"Z_{2 * rg.gamma} has no usable element of order 2 mod 4")
        host = host_length
    prob, to_search, _ = _kernel_problem(rg, host)
    if budget is None:
        budget = fstar_budget(rg)
    res = solve_labeling(prob, seed=seed, budget=budget, restart_base=restart_base, backend=backend)
    if info is not None:
        info.nodes += res.nodes
        info.elapsed += res.elapsed
        info.backend = res.backend
    if res.status is LabelStatus.INFEASIBLE:
        raise Infeasible(f"no labeling of the reduced graph for {ct}")
    if res.status is LabelStatus.BUDGET:
        raise BudgetExhausted(f"labeling search for {ct} exceeded {budget:.2f}s")
    m = 2 * rg.gamma
    shift = res.labels[to_search[0]] if rg.inf_chain.size else 0
    labels = [(res.labels[to_search[v]] - shift) % m for v in range(rg.num_vertices)]
    ok, why = csp_check(build_fstar_model(rg), fstar_assignment(rg, labels))
    if not ok:
        raise AssertionError(f"kernel labeling violates the reduced model: {why}")
    f = _lift(rg, labels)
    if not is_one_rotational_starter(f):
        raise AssertionError("lifted factor is not a 1-rotational starter")
    return f


def expand_one_rotational(f: TwoFactor) -> Factorization:
    n = f.scheme.modulus // 2
    return Factorization(tuple(translate(f, g) for g in range(n)), None, 2 * n + 1)


def find_extension_edge(f: TwoFactor, length: int):
    """Pick (cycle index, position) of an edge in an L-cycle with difference of order 2 mod 4.

    Prefers the difference n; otherwise scans in cycle order.
    """
    m = f.scheme.modulus
    n = m // 2
    fallback = None
    for ci, cyc in enumerate(f.cycles):
        if len(cyc) != length:
            continue
        for k in range(len(cyc)):
            a, b = cyc[k], cyc[(k + 1) % len(cyc)]
            if a is INF or b is INF:
                continue
            x = (a - b) % m
            if x == n:
                return ci, k
            if fallback is None and element_order(x, m) % 4 == 2:
                fallback = (ci, k)
    return fallback


def translate_set(x: int, m: int) -> list[int]:
    """The set {2x·i + j : 0 <= i < u/2, 0 <= j < m/u}, u the order of x."""
    u = element_order(x, m)
    return sorted({(2 * x * i + j) % m for i in range(u // 2) for j in range(m // u)})


def extend_to_even(f: TwoFactor, target: CycleType) -> Factorization:
    """Insert ∞′ into an edge of order-2-mod-4 difference and build K_{2n+2} - I."""
    base = f.cycle_type()
    length = lengthened_cycle(base, target)
    where = find_extension_edge(f, length)
    if where is None:
        raise Infeasible(f"no {length}-cycle has a difference of order 2 mod 4")
    ci, k = where
    m = f.scheme.modulus
    cyc = f.cycles[ci]
    c1, c2 = cyc[k], cyc[(k + 1) % len(cyc)]
    x = (c1 - c2) % m
    new_cycle = cyc[: k + 1] + (INF2,) + cyc[k + 1:]
    fprime = TwoFactor(f.cycles[:ci] + (new_cycle,) + f.cycles[ci + 1:], f.scheme)
    gset = translate_set(x, m)
    factors = tuple(translate(fprime, g) for g in gset)
    one = ((INF, INF2),) + tuple(((c1 + g) % m, (c2 + g) % m) for g in gset)
    return Factorization(factors, one, m + 2)

