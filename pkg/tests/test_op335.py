import io

import pytest

from oberwolfach.errors import BudgetExhausted
from oberwolfach.op335 import (
    canonical_cycle,
    day_stabilizer,
    emit_model,
    enumerate_five_cycles,
    enumerate_triplets,
    prove_infeasible,
    search_seating,
)

from oracles import resolvable_by_exact_cover


def _valid_seating(nlabels, shape, days):
    """Every day seats each label once in the given table sizes; every pair is adjacent once."""
    seen = {}
    for day in days:
        if sorted(len(b) for b in day) != sorted(shape):
            return False
        if sorted(x for b in day for x in b) != list(range(nlabels)):
            return False
        for b in day:
            for i in range(len(b)):
                pair = frozenset((b[i], b[(i + 1) % len(b)]))
                seen[pair] = seen.get(pair, 0) + 1
    return len(seen) == nlabels * (nlabels - 1) // 2 and set(seen.values()) == {1}


def test_block_counts():
    assert len(enumerate_triplets()) == 165
    fives = enumerate_five_cycles()
    assert len(fives) == 5544
    assert len({b.labels for b in fives}) == 5544


def test_twelve_arrangements_per_label_set():
    fives = enumerate_five_cycles()
    per_set = {}
    for b in fives:
        per_set.setdefault(frozenset(b.labels), set()).add(b.adjacency)
    assert len(per_set) == 462
    assert all(len(v) == 12 for v in per_set.values())


def test_adjacency_sizes():
    assert all(len(b.adjacency) == 3 for b in enumerate_triplets())
    assert all(len(b.adjacency) == 5 for b in enumerate_five_cycles(7))


def test_canonical_cycle():
    assert canonical_cycle([3, 1, 4, 0, 2]) == canonical_cycle([2, 0, 4, 1, 3])
    assert canonical_cycle([3, 1, 4, 0, 2])[0] == 0


def test_stabilizer_of_first_day():
    # dihedral 10 on the 5-cycle, 6 on each triplet, and the two triplets swap
    assert len(day_stabilizer([(0, 1, 2, 3, 4), (5, 6, 7), (8, 9, 10)], 11)) == 10 * 6 * 6 * 2


def test_prove_infeasible():
    cert = prove_infeasible(budget=60)
    assert cert.status == "infeasible"
    assert cert.solution is None
    assert cert.elapsed < 60
    assert "infeasible" in cert.summary()


@pytest.mark.parametrize("fix", [True, False])
def test_triangles_on_nine(fix):
    cert = search_seating(9, (3, 3, 3), fix_first_day=fix)
    assert cert.feasible
    assert _valid_seating(9, (3, 3, 3), cert.solution)


def test_three_four_on_seven():
    cert = search_seating(7, (3, 4), fix_first_day=False)
    assert cert.feasible and _valid_seating(7, (3, 4), cert.solution)


def test_four_five_infeasible():
    assert not search_seating(9, (4, 5)).feasible


@pytest.mark.parametrize("n,shape", [(7, (3, 4)), (7, (7,)), (9, (3, 3, 3)), (9, (4, 5)), (9, (3, 6))])
def test_agrees_with_exact_cover(n, shape):
    assert search_seating(n, shape).feasible == resolvable_by_exact_cover(n, shape)


@pytest.mark.slow
def test_op335_exact_cover_oracle():
    """Independent route: exact cover over all 55440 2-factors of K_11."""
    assert not resolvable_by_exact_cover(11, (3, 3, 5))


def test_day_ordering_does_not_change_answer():
    assert not search_seating(11, (5, 3, 3), order_days=False, budget=60).feasible


def test_emit_model():
    buf = io.StringIO()
    ncons = emit_model(buf)
    # per day: one 5-cycle, two triplets, each label seated once; then one row per pair
    assert ncons == 5 * (2 + 11) + 55
    text = buf.getvalue()
    assert text.count("pair_") == 55
    assert "binary" in text and text.rstrip().endswith("end")
    assert "F_5543_4" in text and "T_164_0" in text


def test_budget():
    with pytest.raises(BudgetExhausted):
        search_seating(11, (5, 3, 3), fix_first_day=False, order_days=False, budget=0.001)


def test_bad_shape():
    with pytest.raises(ValueError):
        search_seating(10, (5, 5))
    with pytest.raises(ValueError):
        search_seating(9, (3, 5))
