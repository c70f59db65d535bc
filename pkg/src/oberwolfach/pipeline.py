"""Route instances to a construction, derive even orders from cached bases, run batches.

Odd orders are solved directly: 4t+3 by the 2-rotational method, 4t+1 by the
1-rotational method when its necessary conditions hold and by the almost
2-rotational method otherwise. An even order is reached by solving the type
with one cycle shortened and inserting a second point at infinity.
"""
from __future__ import annotations

import logging
import os
import threading
import time
import zlib
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import BudgetExhausted, Infeasible, KnownUnsolvable, SolverError, Unsupported
from .factors import Factorization, TwoFactor, verify_factorization
from .instances import KNOWN_UNSOLVABLE, CycleType, enumerate_cycle_types, parse_cycle_type
from .one_rotational import check_necessary, expand_one_rotational, extend_to_even, solve_one_rotational
from .serialize import SolutionFile, serialize
from .two_rotational_even import solve_two_rotational_even
from .two_rotational_odd import expand_two_rotational, extend_two_rotational, solve_two_rotational_odd

log = logging.getLogger(__name__)

METHOD_CHOICES = ("auto", "1rot", "2rot")


class Failed(SolverError):
    """Every route ran out of budget or produced an unverifiable result."""


@dataclass
class SolutionRecord:
    cycle_type: CycleType
    method: str
    factorization: Factorization
    elapsed: float
    seed: int
    base: Optional[CycleType] = None

    @property
    def order(self) -> int:
        return self.cycle_type.order

    def to_file(self) -> SolutionFile:
        return SolutionFile(self.order, self.cycle_type, self.method, self.factorization)


def instance_seed(ct: CycleType, seed_base: int = 0) -> int:
    """Seed that depends only on the type and the batch seed, never on scheduling."""
    return zlib.crc32(f"{seed_base}:{ct}".encode())


class BaseCache:
    """Starters keyed by (cycle type, method, required cycle length); written once per key."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict[tuple, object] = {}

    def get_or_solve(self, key: tuple, solve):
        with self._lock:
            if key in self._data:
                hit = self._data[key]
                if isinstance(hit, Exception):
                    raise hit
                return hit
        try:
            value = solve()
        except (Infeasible, Unsupported, KnownUnsolvable) as exc:
            # budget failures are not cached: a later call may have more time
            with self._lock:
                self._data.setdefault(key, exc)
            raise
        with self._lock:
            return self._data.setdefault(key, value)

    def __len__(self):
        return len(self._data)


_DEFAULT_CACHE = BaseCache()


def solve_starter(ct: CycleType, method: str, *, seed_base: int = 0, budget: Optional[float] = None,
                  require_length: Optional[int] = None, cache: Optional[BaseCache] = None) -> TwoFactor:
    """Starter for an odd order, cached. ``require_length`` asks for an extension edge in that cycle."""
    cache = _DEFAULT_CACHE if cache is None else cache
    seed = instance_seed(ct, seed_base)

    def run():
        if method == "1rot":
            return solve_one_rotational(ct, budget, seed, host_length=require_length)
        if method == "2rot-odd":
            return solve_two_rotational_odd(ct, budget, seed, require_mixed_length=require_length)
        return solve_two_rotational_even(ct, budget, seed, require_mixed_length=require_length)

    return cache.get_or_solve((ct, method, require_length), run)


def _expand(f: TwoFactor) -> Factorization:
    return expand_one_rotational(f) if f.scheme.kind == "one" else expand_two_rotational(f)


def _extend(f: TwoFactor, target: CycleType) -> Factorization:
    return extend_to_even(f, target) if f.scheme.kind == "one" else extend_two_rotational(f, target)


def _verified(ct: CycleType, fz: Factorization) -> Factorization:
    fz = fz.canonical()
    report = verify_factorization(ct.order, ct, fz)
    if not report.ok:
        raise Failed(f"construction for {ct} failed verification: {report.violation}")
    return fz


def _base_methods(base: CycleType, method: str) -> list[str]:
    """Constructions to try for a derived-order base, preferred first."""
    if base.order % 4 == 3:
        return [] if method == "1rot" else ["2rot-odd"]
    if method == "1rot":
        return ["1rot"]
    if method == "2rot":
        return ["2rot-even"]
    # the 1-rotational insertion is preferred; the 2-rotational one covers cycles it cannot lengthen
    return ["1rot", "2rot-even"] if check_necessary(base).ok else ["2rot-even"]


def _derive(target: CycleType, method: str, seed_base: int, budget, cache) -> tuple[Factorization, str, CycleType]:
    """Even order: shorten one cycle (shortest first), solve that base, insert ∞′."""
    reasons = []
    timed_out = False
    candidates = sorted(L for L in set(target.lengths) if L >= 4)
    if not candidates:
        raise Unsupported(f"{target}: every cycle is a triangle, so no base of odd order exists")
    plans = []
    for L in candidates:
        base = target.replace_one(L, L - 1)
        if base in KNOWN_UNSOLVABLE:
            reasons.append(f"{base} has no solution")
            continue
        for rank, bm in enumerate(_base_methods(base, method)):
            plans.append((rank, L, base, bm))
    if not plans:
        reasons.append(f"no construction applies with method {method}")
    for _, L, base, bm in sorted(plans, key=lambda p: (p[0], p[1])):
        # a generic base first, then one forced to carry a usable edge in the (L-1)-cycle
        for req in (None, L - 1):
            try:
                f = solve_starter(base, bm, seed_base=seed_base, budget=budget, require_length=req, cache=cache)
                fz = _extend(f, target)
            except BudgetExhausted as exc:
                timed_out = True
                reasons.append(str(exc))
                break
            except (Infeasible, Unsupported) as exc:
                reasons.append(str(exc))
                continue
            tag = "derived-1rot" if bm == "1rot" else "derived-2rot"
            return _verified(target, fz), tag, base
    if timed_out:
        raise Failed(f"{target}: " + "; ".join(reasons))
    raise Unsupported(f"{target}: no base could be extended ({'; '.join(reasons)})")


def _solve_odd(ct: CycleType, method: str, seed_base: int, budget, cache) -> tuple[Factorization, str]:
    methods = _base_methods(ct, method)
    if not methods:
        raise Unsupported(f"order {ct.order} is not 1 mod 4; the 1-rotational method does not apply")
    reasons = []
    for tag in methods:
        try:
            f = solve_starter(ct, tag, seed_base=seed_base, budget=budget, cache=cache)
        except BudgetExhausted as exc:
            raise Failed(str(exc)) from exc
        except (Infeasible, Unsupported) as exc:
            reasons.append(str(exc))
            continue
        return _verified(ct, _expand(f)), tag
    raise Unsupported("; ".join(reasons))


def solve_instance(ct: CycleType, budget: Optional[float] = None, seed: int = 0, *, method: str = "auto",
                   cache: Optional[BaseCache] = None) -> SolutionRecord:
    """Solve and verify one instance.

    ``seed`` is the batch seed; the per-type seed is derived from it. Raises
    KnownUnsolvable, Unsupported or Failed.
    """
    if method not in METHOD_CHOICES:
        raise ValueError(f"unknown method {method!r}")
    if ct in KNOWN_UNSOLVABLE:
        raise KnownUnsolvable(f"{ct} is known to have no solution")
    cache = _DEFAULT_CACHE if cache is None else cache
    t0 = time.perf_counter()
    if ct.order % 2:
        fz, tag = _solve_odd(ct, method, seed, budget, cache)
        base = None
    else:
        fz, tag, base = _derive(ct, method, seed, budget, cache)
    return SolutionRecord(ct, tag, fz, time.perf_counter() - t0, instance_seed(ct, seed), base)


@dataclass
class InstanceOutcome:
    cycle_type: str
    status: str  # solved | unsupported | unsolvable | failed
    method: Optional[str]
    elapsed: float
    message: str = ""
    path: Optional[str] = None


@dataclass
class BatchReport:
    order: int
    min_cycles: int
    total: int = 0
    solved: Counter = field(default_factory=Counter)
    unsupported: int = 0
    known_unsolvable: int = 0
    failed: int = 0
    wall: float = 0.0
    solve_time: float = 0.0
    outcomes: list[InstanceOutcome] = field(default_factory=list)

    @property
    def num_solved(self) -> int:
        return sum(self.solved.values())

    @property
    def mean_time(self) -> float:
        return self.solve_time / self.total if self.total else 0.0

    def add(self, out: InstanceOutcome):
        self.total += 1
        self.solve_time += out.elapsed
        self.outcomes.append(out)
        if out.status == "solved":
            self.solved[out.method] += 1
        elif out.status == "unsupported":
            self.unsupported += 1
        elif out.status == "unsolvable":
            # counted with the unsupported ones so total = solved + unsupported + failed
            self.unsupported += 1
            self.known_unsolvable += 1
        else:
            self.failed += 1

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "min_cycles": self.min_cycles,
            "total": self.total,
            "solved": dict(self.solved),
            "unsupported": self.unsupported,
            "known_unsolvable": self.known_unsolvable,
            "failed": self.failed,
            "wall": round(self.wall, 3),
            "mean_time": round(self.mean_time, 4),
            "not_solved": [vars(o) for o in self.outcomes if o.status != "solved"],
        }

    def table_row(self) -> str:
        methods = " ".join(f"{k}={v}" for k, v in sorted(self.solved.items()))
        return (f"{self.order:>5} {self.total:>7} {self.num_solved:>7} {self.unsupported:>5} "
                f"{self.failed:>4} {self.mean_time:>9.3f}  {methods}")


TABLE_HEADER = f"{'order':>5} {'types':>7} {'solved':>7} {'unsup':>5} {'fail':>4} {'mean s':>9}  methods"


def _solve_and_write(ct: CycleType, budget, seed: int, method: str, out_dir: Optional[str],
                     cache: Optional[BaseCache] = None) -> InstanceOutcome:
    t0 = time.perf_counter()
    try:
        rec = solve_instance(ct, budget, seed, method=method, cache=cache)
    except KnownUnsolvable as exc:
        return InstanceOutcome(str(ct), "unsolvable", None, time.perf_counter() - t0, str(exc))
    except Unsupported as exc:
        return InstanceOutcome(str(ct), "unsupported", None, time.perf_counter() - t0, str(exc))
    except Failed as exc:
        return InstanceOutcome(str(ct), "failed", None, time.perf_counter() - t0, str(exc))
    elapsed = time.perf_counter() - t0
    path = None
    if out_dir is not None:
        try:
            path = write_record(rec, out_dir)
        except OSError as exc:
            return InstanceOutcome(str(ct), "failed", rec.method, elapsed, f"write failed: {exc}")
    return InstanceOutcome(str(ct), "solved", rec.method, elapsed, path=path)


def record_path(out_dir, ct: CycleType) -> Path:
    return Path(out_dir) / str(ct.order) / f"{ct}.obw"


def write_record(rec: SolutionRecord, out_dir) -> str:
    path = record_path(out_dir, rec.cycle_type)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize(rec.to_file()))
    return str(path)


def _worker(args) -> dict:
    text, budget, seed, method, out_dir = args
    return vars(_solve_and_write(parse_cycle_type(text), budget, seed, method, out_dir))


def solve_types(types, *, order: int, min_cycles: int = 1, jobs: int = 1, budget: Optional[float] = None,
                seed: int = 0, method: str = "auto", out_dir: Optional[str] = None,
                cache: Optional[BaseCache] = None, progress=None) -> BatchReport:
    """Solve a list of types of one order. Outcomes do not depend on ``jobs``."""
    report = BatchReport(order, min_cycles)
    t0 = time.perf_counter()
    types = list(types)
    if jobs <= 1:
        for ct in types:
            out = _solve_and_write(ct, budget, seed, method, out_dir, cache)
            report.add(out)
            if progress:
                progress(out)
    else:
        args = [(str(ct), budget, seed, method, out_dir) for ct in types]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for d in pool.map(_worker, args, chunksize=max(1, len(args) // (8 * jobs))):
                out = InstanceOutcome(**d)
                report.add(out)
                if progress:
                    progress(out)
    report.wall = time.perf_counter() - t0
    return report


def solve_order(v: int, min_cycles: int = 1, jobs: int = 1, budget: Optional[float] = None,
                seed_base: int = 0, *, out_dir: Optional[str] = None, method: str = "auto",
                cache: Optional[BaseCache] = None, progress=None) -> BatchReport:
    """Every cycle type of order ``v`` with at least ``min_cycles`` cycles."""
    if v < 9:
        raise ValueError("orders below 9 are not handled")
    types = list(enumerate_cycle_types(v, min_cycles))
    log.info("order %d: %d types", v, len(types))
    return solve_types(types, order=v, min_cycles=min_cycles, jobs=jobs, budget=budget, seed=seed_base,
                       method=method, out_dir=out_dir, cache=cache, progress=progress)


def default_out_dir() -> str:
    return os.environ.get("OBERWOLFACH_OUT", "solutions")
