import random

import pytest
from hypothesis import given, strategies as st

from oberwolfach.factors import (
    INF,
    INF2,
    Factorization,
    Scheme,
    SchemeError,
    TwoFactor,
    differences,
    element_order,
    same_factor,
    translate,
    verify_factorization,
)
from oberwolfach.instances import parse_cycle_type
from oberwolfach.serialize import FormatError, SolutionFile, deserialize, from_json, serialize, to_json

from helpers import mutate, naive_decomposes, solved


def one_rot(cycles, m):
    return TwoFactor.of(cycles, Scheme.one(m))


def test_single_edge_differences():
    f = one_rot([(INF, 2, 1)], 8)
    d = differences(f)
    assert dict(+d.counts) == {1: 1, 7: 1}


def test_infinity_edges_contribute_nothing():
    f = one_rot([(INF, 0, INF2)], 8)
    assert len(differences(f)) == 0


def test_three_six_starter_differences():
    rec = solved("3,6")
    assert rec.method == "1rot"
    # the first factor of a 1-rotational expansion is the starter itself (g = 0)
    assert verify_factorization(9, parse_cycle_type("3,6"), rec.factorization).ok


def test_scheme_mismatch():
    f = one_rot([(0, 1, 2)], 8)
    with pytest.raises(SchemeError):
        differences(f, Scheme.two(4))


def test_two_rot_orientation_is_bit0_minus_bit1():
    f = TwoFactor.of([((0, 1), (1, 3), (0, 0))], Scheme.two(5))
    d00, d11, d01 = differences(f)
    # mixed edges (0,1)-(1,3) and (1,3)-(0,0): 1-3 and 0-3 mod 5
    assert dict(+d01.counts) == {3: 1, 2: 1}
    assert dict(+d00.counts) == {1: 1, 4: 1}
    assert len(d11) == 0


@pytest.mark.parametrize("x,m,want", [(4, 8, 2), (3, 12, 4), (0, 7, 1), (5, 10, 2), (7, 10, 10)])
def test_element_order(x, m, want):
    assert element_order(x, m) == want


def test_element_order_half_modulus():
    for n in range(1, 30):
        assert element_order(n, 2 * n) == 2


def test_element_order_zero_modulus():
    with pytest.raises(ValueError):
        element_order(1, 0)


def _scan_order(x, m):
    return next(u for u in range(1, m + 1) if (u * x) % m == 0)


@given(st.integers(1, 200), st.integers(0, 400))
def test_element_order_matches_scan(m, x):
    assert element_order(x, m) == _scan_order(x, m)


cycles_one = st.integers(4, 30).flatmap(
    lambda m: st.tuples(st.just(m), st.permutations(list(range(m)) + [INF]))
)


def _chop(seq):
    """Cut a sequence into cycles of length >= 3 (the tail absorbs leftovers)."""
    out, k = [], 0
    while len(seq) - k >= 6:
        out.append(tuple(seq[k:k + 3]))
        k += 3
    out.append(tuple(seq[k:]))
    return out


@given(cycles_one, st.integers(0, 100), st.integers(0, 100))
def test_translation_invariance_one_rot(data, g, h):
    m, perm = data
    f = one_rot(_chop(perm), m)
    assert +differences(translate(f, g)).counts == +differences(f).counts
    assert same_factor(translate(translate(f, g), h), translate(f, g + h))
    assert translate(f, 0) == f


@given(cycles_one)
def test_one_rot_differences_are_symmetric(data):
    m, perm = data
    d = differences(one_rot(_chop(perm), m))
    for x, k in d.counts.items():
        assert d.multiplicity(-x) == k


@given(st.integers(3, 15).flatmap(lambda n: st.tuples(st.just(n), st.permutations(
    [(b, x) for b in (0, 1) for x in range(n)] + [INF]))), st.integers(0, 40))
def test_translation_invariance_two_rot(data, g):
    n, perm = data
    f = TwoFactor.of(_chop(perm), Scheme.two(n))
    before = [+d.counts for d in differences(f)]
    after = [+d.counts for d in differences(translate(f, g))]
    assert before == after


def test_verify_accepts_solver_output():
    rec = solved("3,6")
    assert len(rec.factorization.factors) == 4
    assert verify_factorization(9, rec.cycle_type, rec.factorization).ok


def test_verify_duplicate_factor():
    rec = solved("3,6")
    fz = rec.factorization
    bad = Factorization((fz.factors[0], fz.factors[0]) + fz.factors[2:], None, 9)
    rep = verify_factorization(9, rec.cycle_type, bad)
    assert not rep.ok and "pair covered twice" in rep.violation


def test_verify_requires_one_factor():
    hexagon = TwoFactor.of([(0, 1, 2, 3, 4, 5)], Scheme.plain(6))
    fz = Factorization((hexagon, hexagon), None, 6)
    rep = verify_factorization(6, parse_cycle_type("6"), fz)
    assert not rep.ok and "one-factor required" in rep.violation


def test_verify_handles_garbage():
    fz = Factorization((TwoFactor.of([("a", "b", "c")], Scheme.plain(3)),), None, 3)
    assert not verify_factorization(3, parse_cycle_type("3"), fz).ok


def test_verify_small_even_case():
    # K_6 - I as two hexagons plus a matching
    f1 = TwoFactor.of([(0, 1, 2, 3, 4, 5)], Scheme.plain(6))
    f2 = TwoFactor.of([(0, 2, 4, 1, 5, 3)], Scheme.plain(6))
    one = ((0, 3), (1, 4), (2, 5))
    fz = Factorization((f1, f2), one, 6)
    # 0-2,2-4,4-1,1-5,5-3,3-0: 0-3 clashes with the matching
    assert not verify_factorization(6, parse_cycle_type("6"), fz).ok
    assert not naive_decomposes(6, [6], fz)


RECORDS = ["3,6", "3^3", "9", "5,6", "3,4", "3,3,4", "4,6", "3,4,6", "5,8", "3,4,5"]


@pytest.mark.parametrize("text", RECORDS)
def test_verifier_agrees_with_naive_count(text):
    rec = solved(text)
    v = rec.order
    assert naive_decomposes(v, rec.cycle_type.lengths, rec.factorization)
    assert verify_factorization(v, rec.cycle_type, rec.factorization).ok


def test_verifier_rejects_hundred_mutations():
    rng = random.Random(20240611)
    rejected = 0
    for k in range(100):
        rec = solved(RECORDS[k % len(RECORDS)])
        bad = mutate(rec.factorization, rng)
        assert not naive_decomposes(rec.order, rec.cycle_type.lengths, bad)
        rejected += not verify_factorization(rec.order, rec.cycle_type, bad).ok
    assert rejected == 100


@given(st.sampled_from(RECORDS), st.randoms(use_true_random=False))
def test_mutations_always_rejected(text, rng):
    rec = solved(text)
    assert not verify_factorization(rec.order, rec.cycle_type, mutate(rec.factorization, rng)).ok


@pytest.mark.parametrize("text", ["3,6", "3,4", "5,6"])
def test_serialize_round_trip(text):
    rec = solved(text)
    out = serialize(rec.to_file())
    back = deserialize(out)
    assert back.order == rec.order and back.cycle_type == rec.cycle_type and back.method == rec.method
    assert back.factorization == rec.factorization.canonical()
    assert serialize(back) == out
    assert from_json(to_json(back)) == back
    assert verify_factorization(back.order, back.cycle_type, back.factorization).ok


def test_serialized_layout():
    text = serialize(solved("3,6").to_file())
    lines = text.splitlines()
    assert lines[:3] == ["obw 1", "order 9", "type 3,6"]
    assert lines[3].startswith("method ")
    assert sum(1 for l in lines if l.startswith("factor: ")) == 4


def test_serialize_empty():
    rec = SolutionFile(9, parse_cycle_type("3,6"), "1rot", Factorization((), None, 9))
    with pytest.raises(FormatError, match="no factors"):
        serialize(rec)


def test_deserialize_out_of_range_vertex():
    text = serialize(solved("3,6").to_file())
    lines = text.splitlines()
    i = next(k for k, l in enumerate(lines) if l.startswith("factor: "))
    lines[i] = lines[i].replace("(0,", "(9,", 1) if "(0," in lines[i] else lines[i].replace("(", "(9,", 1)
    with pytest.raises(FormatError) as err:
        deserialize("\n".join(lines))
    assert err.value.line == i + 1 and err.value.column > 0


@pytest.mark.parametrize("text", ["order 9\n", "obw 1\norder 9\ntype 3,6\nmethod magic\nfactor: (0,1,2)\n",
                                  "obw 1\norder 9\ntype 3,6\nmethod 1rot\nfactor: (0,1,x)\n",
                                  "obw 2\norder 9\ntype 3,6\nmethod 1rot\nfactor: (0,1,2)\n"])
def test_deserialize_rejects(text):
    with pytest.raises(FormatError):
        deserialize(text)
