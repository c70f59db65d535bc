import pytest
from hypothesis import given, settings, strategies as st

from oberwolfach.csp import check
from oberwolfach.errors import Infeasible, WrongResidue
from oberwolfach.factors import INF, INF2, differences, same_factor, translate, verify_factorization
from oberwolfach.instances import KNOWN_UNSOLVABLE, CycleTypeError, enumerate_cycle_types, parse_cycle_type
from oberwolfach.one_rotational import (
    build_fstar_model,
    check_necessary,
    expand_one_rotational,
    extend_to_even,
    fstar_assignment,
    is_one_rotational_starter,
    lift_fstar_labeling,
    reduce_to_fstar,
    solve_one_rotational,
)

from oracles import fstar_labelings

P = parse_cycle_type


@pytest.mark.parametrize("text,reason", [("3,6", None), ("3^3,4", "FailsMod4"), ("3^2,7", None),
                                         ("4,5", None), ("3,5,9", "FailsParity"), ("3,5,6,7", "FailsParity"), ("3,14", None)])
def test_check_necessary(text, reason):
    e = check_necessary(P(text))
    assert e.ok == (reason is None)
    assert e.reason == reason


def test_check_necessary_wrong_residue():
    with pytest.raises(WrongResidue):
        check_necessary(P("3^2,5"))


def _shape(rg):
    return [(c.kind, c.length, c.size) for c in rg.components]


def test_reduce_mixed_type():
    rg = reduce_to_fstar(P("3^2,4^2,5,6"))
    assert rg.gamma == 12
    assert _shape(rg) == [("inf", 5, 2), ("cycle", 3, 3), ("cycle", 4, 4), ("chain", 6, 3)]
    assert rg.num_vertices == 12 and rg.num_differences == 22


def test_reduce_small():
    rg = reduce_to_fstar(P("3^3"))
    assert rg.gamma == 4 and _shape(rg) == [("inf", 3, 1), ("cycle", 3, 3)]
    rg = reduce_to_fstar(P("3,6"))
    assert _shape(rg) == [("inf", 3, 1), ("chain", 6, 3)]


def test_reduce_rejects_ineligible():
    with pytest.raises(Infeasible):
        reduce_to_fstar(P("3^3,4"))


@settings(max_examples=60)
@given(st.integers(2, 12).flatmap(lambda t: st.just(4 * t + 1)).flatmap(
    lambda v: st.sampled_from([c for c in enumerate_cycle_types(v, 1) if check_necessary(c).ok])))
def test_reduced_graph_counts(ct):
    rg = reduce_to_fstar(ct)
    assert rg.num_vertices == rg.gamma
    assert rg.num_differences == 2 * rg.gamma - 2


@pytest.mark.parametrize("text,nv,nd", [("3^2,4^2,5,6", 12, 22), ("3^3", 4, 6), ("5", 2, 2)])
def test_model_sizes(text, nv, nd):
    model = build_fstar_model(reduce_to_fstar(P(text)))
    assert model.num_vars == nv + nd


def test_lift_three_triangles():
    ct = P("3^3")
    rg = reduce_to_fstar(ct)
    f = solve_one_rotational(ct)
    assert f.cycle_type() == ct
    assert differences(f).covers_exactly(range(1, 8), 2)
    # the reduced graph of the lifted type matches the one we lifted from
    assert reduce_to_fstar(f.cycle_type()).signature() == rg.signature()


def test_lift_from_oracle_labeling():
    ct = P("3^2,5,6")
    rg = reduce_to_fstar(ct)
    labels = [x for comp in fstar_labelings(ct.lengths)[0] for x in comp]
    assert check(build_fstar_model(rg), fstar_assignment(rg, labels)) == (True, None)
    f = lift_fstar_labeling(rg, labels)
    assert f.cycle_type() == ct
    assert is_one_rotational_starter(f)


def test_three_six():
    f = solve_one_rotational(P("3,6"))
    assert same_factor(translate(f, 4), f)
    assert differences(f).covers_exactly(range(1, 8), 2)
    fz = expand_one_rotational(f)
    assert len(fz.factors) == 4
    assert verify_factorization(9, P("3,6"), fz).ok


def test_wrong_residue_and_necessary_condition():
    with pytest.raises(WrongResidue):
        solve_one_rotational(P("3^2,5"))
    with pytest.raises(Infeasible):
        solve_one_rotational(P("3^3,4"))


def test_expansion_is_an_orbit():
    f = solve_one_rotational(P("3^3"))
    fz = expand_one_rotational(f)
    assert verify_factorization(9, P("3^3"), fz).ok
    edge_sets = {frozenset(frozenset(e) for e in h.edges()) for h in fz.factors}
    shifted = {frozenset(frozenset(e) for e in translate(h, 1).edges()) for h in fz.factors}
    assert edge_sets == shifted


def _eligible_upto(v_max):
    return [ct for v in range(5, v_max + 1, 4) for ct in enumerate_cycle_types(v, 1) if check_necessary(ct).ok]


@pytest.mark.parametrize("ct", _eligible_upto(17), ids=str)
def test_starter_conditions_up_to_17(ct):
    if ct in KNOWN_UNSOLVABLE or ct == P("3^4,5"):
        pytest.skip("no labeling exists; covered by the oracle test")
    f = solve_one_rotational(ct, seed=1)
    n = (ct.order - 1) // 2
    assert set(f.vertices()) == set(range(2 * n)) | {INF}
    assert differences(f).covers_exactly(range(1, 2 * n), 2)
    assert same_factor(translate(f, n), f)
    assert verify_factorization(ct.order, ct, expand_one_rotational(f)).ok


@pytest.mark.parametrize("ct", [c for v in (9, 13, 17) for c in enumerate_cycle_types(v, 1)
                                if check_necessary(c).reason != "FailsParity"], ids=str)
def test_solver_agrees_with_oracle(ct):
    """A labeling exists exactly when the solver finds one (orders 9-17)."""
    exists = bool(fstar_labelings(ct.lengths))
    try:
        solve_one_rotational(ct, budget=30)
        solved = True
    except Infeasible:
        solved = False
    assert exists == solved
    if check_necessary(ct).reason == "FailsMod4":
        assert not exists


def test_extend_either_cycle():
    base = P("3,4,18")
    for target, host in ((P("3,4,19"), 18), (P("3,5,18"), 4)):
        f = solve_one_rotational(base, host_length=host)
        fz = extend_to_even(f, target)
        assert verify_factorization(26, target, fz).ok
        assert len(fz.one_factor) == 13
        ends = [x for e in fz.one_factor for x in e]
        assert len(set(ends)) == 26 and (INF, INF2) in fz.one_factor


def test_extend_default_uses_half_turn():
    f = solve_one_rotational(P("3,6"))
    fz = extend_to_even(f, P("4,6"))
    assert verify_factorization(10, P("4,6"), fz).ok
    # difference n in the ∞-cycle: 𝒢 = {0..n-1}
    assert len(fz.factors) == 4


def test_extend_rejects_bad_target():
    f = solve_one_rotational(P("3,6"))
    with pytest.raises(CycleTypeError):
        extend_to_even(f, P("3,8"))


def test_extend_without_eligible_edge():
    # Z_16 has a single element of order 2 mod 4 (8), and it sits in the ∞-cycle
    f = solve_one_rotational(P("3,14"))
    with pytest.raises(Infeasible):
        extend_to_even(f, P("3,15"))


def test_host_length_request():
    with pytest.raises(Infeasible):
        solve_one_rotational(P("3,14"), host_length=14)
    with pytest.raises(Infeasible):
        solve_one_rotational(P("3,6"), host_length=5)
