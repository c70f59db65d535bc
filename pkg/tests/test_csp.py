import random

import pytest
from hypothesis import given, settings, strategies as st

from oberwolfach.csp import CspModel, ModelError, Status, check, solve
from oberwolfach.csp.model import Cardinality
from oberwolfach.instances import parse_cycle_type
from oberwolfach.one_rotational import build_fstar_model, reduce_to_fstar

from oracles import random_micro_model, scan_solutions


def test_pigeonhole():
    m = CspModel()
    xs = m.add_vars("x", 3, [0, 1])
    m.all_different(xs)
    assert solve(m).status is Status.INFEASIBLE


def test_single_variable():
    m = CspModel()
    m.add_var("x", [5])
    out = solve(m)
    assert out.ok and out.assignment == [5]


def test_fstar_model_solves():
    model = build_fstar_model(reduce_to_fstar(parse_cycle_type("3^2,4^2,5,6")))
    out = solve(model, budget=60, seed=1, restart_base=100)
    assert out.ok
    assert check(model, out.assignment) == (True, None)


def test_check_names_violations():
    m = CspModel()
    xs = m.add_vars("x", 3, range(3))
    m.all_different(xs)
    ok, why = check(m, [1, 1, 2])
    assert not ok and "AllDifferent" in why
    m2 = CspModel()
    ys = m2.add_vars("y", 3, [0, 1])
    m2.cardinality(ys, 1, 3)
    ok, why = check(m2, [1, 1, 0])
    assert not ok and "Cardinality" in why


def test_check_rejects_partial():
    m = CspModel()
    m.add_vars("x", 2, [0, 1])
    with pytest.raises(ModelError):
        check(m, [0])
    with pytest.raises(ModelError):
        check(m, {0: 1})


def test_dangling_variable():
    m = CspModel()
    m.add_var("x", [0])
    with pytest.raises(ModelError):
        m.add(Cardinality((0, 3), 0, 1, 1))


def test_empty_domain():
    with pytest.raises(ModelError):
        CspModel().add_var("x", [])


def _agrees(model, seed, restart_base=0):
    sols = scan_solutions(model)
    out = solve(model, seed=seed, restart_base=restart_base)
    assert out.status is not Status.BUDGET_EXHAUSTED
    if len(sols) == 0:
        return out.status is Status.INFEASIBLE
    if not out.ok or not check(model, out.assignment)[0]:
        return False
    return bool((sols == out.assignment).all(axis=1).any())


def test_agreement_with_cartesian_scan():
    rng = random.Random(7)
    feasible = 0
    for i in range(500):
        model = random_micro_model(rng)
        assert _agrees(model, seed=i % 3, restart_base=(0, 0, 4)[i % 3]), model.dump()
        feasible += len(scan_solutions(model)) > 0
    # the generator must exercise both outcomes
    assert 50 < feasible < 450


@settings(max_examples=150)
@given(st.integers(0, 2**32 - 1))
def test_agreement_property(seed):
    model = random_micro_model(random.Random(seed))
    assert _agrees(model, seed=seed % 5)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(0, 50))
def test_determinism(model_seed, seed):
    model = random_micro_model(random.Random(model_seed))
    a = solve(model, seed=seed, restart_base=3)
    b = solve(model, seed=seed, restart_base=3)
    assert a.status == b.status and a.assignment == b.assignment
    assert a.stats.nodes == b.stats.nodes


def test_budget_is_respected():
    model = build_fstar_model(reduce_to_fstar(parse_cycle_type("3,4^2,5^2,6^2,7^2,10")))
    out = solve(model, budget=0.01)
    assert out.status is Status.BUDGET_EXHAUSTED
    assert out.assignment is None
    assert out.stats.elapsed < 1.0
