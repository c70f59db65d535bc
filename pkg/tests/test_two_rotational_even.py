from collections import Counter

import pytest

from oberwolfach.csp import check
from oberwolfach.errors import Infeasible, KnownUnsolvable, Unsupported, WrongResidue
from oberwolfach.factors import INF, INF2, differences, verify_factorization
from oberwolfach.instances import enumerate_cycle_types, parse_cycle_type
from oberwolfach.two_rotational_even import (
    PATH_BITS,
    CriticalPath,
    candidate_windows,
    critical_windows,
    eblp_check,
    eblp_solve,
    _eglp_assignment,
    eglp_build_model,
    eglp_solve,
    enumerate_bit_labelings,
    is_two_rotational_starter_even,
    solve_two_rotational_even,
)
from oberwolfach.two_rotational_odd import BinaryLabeling, expand_two_rotational, extend_two_rotational, find_critical_path

P = parse_cycle_type

# frozen from an exhaustive sweep: every bit labeling and window was tried
SOLVED_13 = ["13", "4,9", "5,8", "3,4,6", "4^2,5"]
NO_STARTER_13 = ["3,10", "6,7", "3^2,7", "3,5^2"]


def _path_labels(f):
    ci, idx = find_critical_path(f)
    return [f.cycles[ci][k] for k in idx]


def test_three_four_six():
    ct = P("3,4,6")
    f = solve_two_rotational_even(ct, seed=1)
    assert is_two_rotational_starter_even(f)
    t = ct.order // 4
    assert _path_labels(f) == [(0, 0), (0, t), (1, t), (1, 0)]
    fz = expand_two_rotational(f)
    assert len(fz.factors) == 6
    assert verify_factorization(13, ct, fz).ok


def test_differences_off_the_path():
    ct = P("4,9")
    f = solve_two_rotational_even(ct)
    n, t = 6, 3
    ci, idx = find_critical_path(f)
    cyc = f.cycles[ci]
    d00, d11, d01 = (Counter(d.counts) for d in differences(f))
    # take P's three edges back out
    for a, b in zip([cyc[k] for k in idx], [cyc[k] for k in idx[1:]]):
        if a[0] == b[0]:
            c = d00 if a[0] == 0 else d11
            c[(a[1] - b[1]) % n] -= 1
            c[(b[1] - a[1]) % n] -= 1
        else:
            x0, x1 = (a[1], b[1]) if a[0] == 0 else (b[1], a[1])
            d01[(x0 - x1) % n] -= 1
    want = {d: 1 for d in range(n) if d not in (0, t)}
    for c in (d00, d11, d01):
        assert {d: k for d, k in c.items() if k} == want


def test_half_turn_edges_covered_once():
    ct = P("5,8")
    fz = expand_two_rotational(solve_two_rotational_even(ct))
    t = ct.order // 4
    seen = Counter()
    for h in fz.factors:
        for a, b in h.edges():
            if INF in (a, b):
                continue
            if (a[1] - b[1]) % (2 * t) == t:
                seen[frozenset((a, b))] += 1
    # pairs {(i,a),(j,a+t)}: 2t same-side pairs per side halved, plus 2t mixed
    assert len(seen) == t + t + 2 * t
    assert set(seen.values()) == {1}


def test_eblp_solution_and_windows():
    ct = P("3,4,6")
    lab, windows = eblp_solve(ct, seed=0)
    assert eblp_check(ct, lab)
    assert windows
    for w in windows:
        assert tuple(lab.cycles[ci][k] for ci, k in w.positions) == PATH_BITS


def test_eblp_check_rejects():
    ct = P("3,4,6")
    lab, _ = eblp_solve(ct)
    # wrong class sizes
    ci, k = next((ci, k) for ci, c in enumerate(lab.cycles) for k, b in enumerate(c) if b == 0)
    cyc = list(lab.cycles[ci])
    cyc[k] = 1
    bad = BinaryLabeling(lab.cycles[:ci] + (tuple(cyc),) + lab.cycles[ci + 1:])
    assert not eblp_check(ct, bad)
    # right counts but no (0,0,1,1) window anywhere
    nowin = BinaryLabeling(((None, 0, 1, 0, 1, 1), (0, 1, 0, 1), (0, 1, 0)))
    assert not critical_windows(nowin)
    assert not eblp_check(ct, nowin)


def test_enumerated_labelings_all_check():
    ct = P("3,4,6")
    labs = list(enumerate_bit_labelings(ct, 6))
    assert labs
    assert all(eblp_check(ct, lab) and lab.cycles[0][0] is None for lab in labs)


def test_candidate_windows_skip_four_cycles():
    ws = candidate_windows([6, 4, 3])
    assert {w.cycle for w in ws} == {0}
    # ∞ at 0 of a 6-cycle leaves starts 1 and 2
    assert [w.positions[0] for w in ws] == [(0, 1), (0, 2)]
    assert candidate_windows([4, 4, 3]) == []


def _first_group_labeling(ct):
    for host in sorted(set(ct.lengths), reverse=True):
        for lab in enumerate_bit_labelings(ct, host):
            for w in critical_windows(lab):
                try:
                    return lab, w, eglp_solve(ct, lab, w)
                except Infeasible:
                    continue
    raise AssertionError("no labeling found")


def test_eglp_model_matches_kernel():
    ct = P("3,4,6")
    lab, w, f = _first_group_labeling(ct)
    assert is_two_rotational_starter_even(f)
    model, pos_var = eglp_build_model(ct, lab, w)
    assert len(pos_var) == 12
    labels = {pos: f.cycles[pos[0]][pos[1]][1] for pos in pos_var}
    assert check(model, _eglp_assignment(lab, w, labels, 6)) == (True, None)


def test_path_labels_are_fixed():
    ct = P("5,8")
    lab, windows = eblp_solve(ct)
    w = windows[0]
    assert isinstance(w, CriticalPath)
    assert list(w.labels(3).values()) == [0, 3, 3, 0]


@pytest.mark.parametrize("text", SOLVED_13)
def test_order_13_solved(text):
    ct = P(text)
    f = solve_two_rotational_even(ct, seed=1)
    assert is_two_rotational_starter_even(f)
    assert verify_factorization(13, ct, expand_two_rotational(f)).ok


@pytest.mark.parametrize("text", NO_STARTER_13)
def test_order_13_exhausted(text):
    with pytest.raises(Unsupported):
        solve_two_rotational_even(P(text), seed=1)


def test_no_window_host():
    with pytest.raises(Unsupported):
        solve_two_rotational_even(P("3^3,4"))
    with pytest.raises(KnownUnsolvable):
        solve_two_rotational_even(P("4,5"))
    with pytest.raises(WrongResidue):
        solve_two_rotational_even(P("5,6"))


@pytest.mark.parametrize("ct", [c for c in enumerate_cycle_types(17, 1)
                                if str(c) not in ("3^4,5", "3^3,4^2")], ids=str)
def test_order_17_sweep(ct):
    f = solve_two_rotational_even(ct, seed=1)
    assert is_two_rotational_starter_even(f)
    assert verify_factorization(17, ct, expand_two_rotational(f)).ok


def test_extend_from_even_modulus_base():
    base, target = P("3,4,6"), P("4^2,6")
    f = solve_two_rotational_even(base, require_mixed_length=3)
    fz = extend_two_rotational(f, target)
    assert verify_factorization(14, target, fz).ok
    assert (INF, INF2) in fz.one_factor


def test_required_length_missing():
    with pytest.raises(Infeasible):
        eblp_solve(P("3,4,6"), require_mixed_length=5)
