"""Labeling search kernel used by the difference-method solvers.

A labeling problem assigns each vertex a residue mod ``m``. Vertices are in
groups whose labels must be distinct modulo a group key; edges turn pairs of
labels into differences that must fall in an allowed set and be used at most
once per difference class. The compiled backend is picked at import when it
was built; set OBERWOLFACH_PURE_PYTHON=1 to force the fallback.
"""
from __future__ import annotations

import enum
import os
import time
from dataclasses import dataclass
from typing import Iterable, Optional

from . import _labeling_py

try:
    if os.environ.get("OBERWOLFACH_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _labeling as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

BACKENDS = ("compiled", "python") if _compiled is not None else ("python",)
DEFAULT_BACKEND = BACKENDS[0]


class LabelStatus(enum.Enum):
    SOLUTION = 0
    INFEASIBLE = 1
    BUDGET = 2


@dataclass
class LabelingResult:
    status: LabelStatus
    labels: Optional[list[int]]
    nodes: int
    elapsed: float
    backend: str


class LabelingProblem:
    def __init__(self, modulus: int):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        self.m = modulus
        self.keymod: list[int] = []
        self.group: list[int] = []
        self.fixed: list[int] = []
        self.masks: list[list[int]] = []
        self.ncls = 0
        self.edges: list[list[tuple]] = []

    @property
    def num_vertices(self) -> int:
        return len(self.group)

    def add_group(self, keymod: Optional[int] = None) -> int:
        self.keymod.append(self.m if keymod is None else keymod)
        return len(self.keymod) - 1

    def add_vertex(self, group: int, fixed: int = -1) -> int:
        """Append a vertex; vertices are searched in insertion order."""
        self.group.append(group)
        self.fixed.append(fixed % self.m if fixed is not None and fixed >= 0 else -1)
        self.edges.append([])
        return len(self.group) - 1

    def add_class(self, allowed: Iterable[int]) -> int:
        """A difference class: its own usage table and default allowed set.

        Classes must be declared before any extra masks.
        """
        if len(self.masks) != self.ncls:
            raise ValueError("declare all classes before extra masks")
        self.masks.append(self._row(allowed))
        self.ncls += 1
        return self.ncls - 1

    def add_mask(self, allowed: Iterable[int]) -> int:
        self.masks.append(self._row(allowed))
        return len(self.masks) - 1

    def _row(self, allowed) -> list[int]:
        row = [0] * self.m
        for d in allowed:
            row[d % self.m] = 1
        return row

    def add_edge(self, a: int, b: int, sign: int, offset: int, cls: int,
                 symmetric: bool, mask: Optional[int] = None) -> None:
        """Constrain d = sign*(L[a] - L[b]) + offset (mod m).

        ``symmetric`` also consumes -d in the class and forbids d = -d.
        """
        if a == b:
            raise ValueError("self-loop")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not 0 <= cls < self.ncls:
            raise ValueError(f"unknown class {cls}")
        row = cls if mask is None else mask
        if a < b:
            # sign*(L[a]-L[b]) = (-sign)*(L[b]-L[a])
            a, b, sign = b, a, -sign
        self.edges[a].append((b, sign, offset % self.m, cls, 1 if symmetric else 0, row))

    def arrays(self):
        start = [0]
        bj, bs, bo, bc, bsym, bm = [], [], [], [], [], []
        for lst in self.edges:
            for j, s, o, c, sym, row in lst:
                bj.append(j)
                bs.append(s)
                bo.append(o)
                bc.append(c)
                bsym.append(sym)
                bm.append(row)
            start.append(len(bj))
        flat = [x for row in self.masks for x in row]
        return start, bj, bs, bo, bc, bsym, bm, flat


def solve_labeling(problem: LabelingProblem, seed: int = 0, budget: Optional[float] = None,
                   restart_base: int = 200, max_nodes: int = 0,
                   backend: Optional[str] = None) -> LabelingResult:
    """Search for labels. Complete: INFEASIBLE means a full run found nothing."""
    backend = backend or DEFAULT_BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        impl = _compiled
    elif backend == "python":
        impl = _labeling_py
    else:
        raise ValueError(f"unknown backend {backend!r}")
    start, bj, bs, bo, bc, bsym, bm, flat = problem.arrays()
    clock = time.perf_counter
    t0 = clock()
    deadline = t0 + budget if budget is not None else 0.0
    status, labels, nodes = impl.search(
        problem.m, problem.num_vertices, problem.group, problem.keymod, problem.fixed,
        start, bj, bs, bo, bc, bsym, bm, flat, problem.ncls,
        seed & _labeling_py.MASK64, restart_base, max_nodes, deadline, clock,
    )
    return LabelingResult(LabelStatus(status), labels, nodes, clock() - t0, backend)
