"""Shared fixtures-by-function for the test modules."""
from __future__ import annotations

import random
from functools import lru_cache

from oberwolfach.factors import Factorization, Scheme, TwoFactor, same_factor
from oberwolfach.instances import parse_cycle_type
from oberwolfach.pipeline import BaseCache, solve_instance


@lru_cache(maxsize=None)
def solved(text: str):
    """A verified record for a type, solved once per test session."""
    return solve_instance(parse_cycle_type(text), seed=0, cache=BaseCache())


def naive_decomposes(v: int, lengths, fz: Factorization) -> bool:
    """Edge-count check written independently of the package verifier."""
    fz = fz.canonical()
    count = {}
    for f in fz.factors:
        if sorted(len(c) for c in f.cycles) != sorted(lengths):
            return False
        if sorted(x for c in f.cycles for x in c) != list(range(v)):
            return False
        for c in f.cycles:
            for i in range(len(c)):
                e = frozenset((c[i], c[(i + 1) % len(c)]))
                count[e] = count.get(e, 0) + 1
    if v % 2 == 0:
        if fz.one_factor is None:
            return False
        if sorted(x for e in fz.one_factor for x in e) != list(range(v)):
            return False
        for a, b in fz.one_factor:
            e = frozenset((a, b))
            count[e] = count.get(e, 0) + 1
    elif fz.one_factor is not None:
        return False
    want = {frozenset((a, b)) for a in range(v) for b in range(a + 1, v)}
    return set(count) == want and all(k == 1 for k in count.values())


def mutate(fz: Factorization, rng: random.Random) -> Factorization:
    """A change that must break a valid decomposition."""
    fz = fz.canonical()
    factors = list(fz.factors)
    v = fz.order
    kinds = ["drop", "duplicate", "swap", "relabel", "out-of-range"]
    if fz.one_factor is not None:
        kinds += ["matching-swap", "matching-drop"]
    kind = rng.choice(kinds)
    if kind == "drop":
        del factors[rng.randrange(len(factors))]
    elif kind == "duplicate":
        i, j = rng.sample(range(len(factors)), 2)
        factors[i] = factors[j]
    elif kind in ("swap", "relabel", "out-of-range"):
        i = rng.randrange(len(factors))
        f = factors[i]
        flat = [x for c in f.cycles for x in c]
        while True:
            a, b = rng.sample(range(len(flat)), 2)
            new = list(flat)
            if kind == "swap":
                new[a], new[b] = new[b], new[a]
            elif kind == "relabel":
                new[a] = new[b]
            else:
                new[a] = v + rng.randrange(3)
            g = _reshape(f, new)
            if kind != "swap" or not same_factor(g, f):
                break
        factors[i] = g
    elif kind == "matching-swap":
        one = list(fz.one_factor)
        i, j = rng.sample(range(len(one)), 2)
        (a, b), (c, d) = one[i], one[j]
        # rewire two matching edges into pairs that a 2-factor already covers
        one[i], one[j] = (a, c), (b, d)
        return Factorization(tuple(factors), tuple(one), fz.order)
    else:
        one = list(fz.one_factor)
        del one[rng.randrange(len(one))]
        return Factorization(tuple(factors), tuple(one), fz.order)
    return Factorization(tuple(factors), fz.one_factor, fz.order)


def _reshape(f: TwoFactor, flat) -> TwoFactor:
    out, k = [], 0
    for c in f.cycles:
        out.append(tuple(flat[k:k + len(c)]))
        k += len(c)
    return TwoFactor(tuple(out), Scheme.plain(f.order))


# (criterion, passed, detail) lines for the acceptance summary
ACCEPTANCE: list[tuple[str, bool, str]] = []
