import pytest
from hypothesis import given, settings, strategies as st

from collatz_cycles import compose, core
from collatz_cycles.compose import ComposePlan, CycleShape
from collatz_cycles.errors import InvalidParams, NonPositive, ShapeMismatch
from collatz_cycles.suites import small_shapes

WORKED = [(1, 2, 2), (1, 1, 4), (2, 1, 3)]


@pytest.fixture
def worked_plan():
    return compose.make_plan(WORKED, j_delta=1)


def test_weight_sum_examples():
    assert compose.weight_sum(WORKED) == 1451
    assert compose.weight_sum([(1, 1, 2)]) == 1
    assert compose.weight_sum([(1, 1, 2), (1, 1, 2)]) == 7


def test_min_Q_examples():
    assert compose.min_Q(WORKED, 1) == 1_173_985
    assert compose.min_Q([(1, 1, 2)], 3) == 1
    assert compose.m_factor([(1, 1, 2), (1, 1, 2)], 3) == 57
    assert compose.min_Q([(1, 1, 2), (1, 1, 2)], 3) == 25


def test_worked_plan_values(worked_plan):
    assert worked_plan.Q == 1_173_985
    assert compose.compose_initial(worked_plan) == 1221
    assert compose.compose_final(worked_plan) == 49 == 81 * 1_173_985 - 65_536 * 1451


def test_worked_plan_verifies(worked_plan):
    report = compose.verify_plan(worked_plan)
    assert report.passed
    assert [c.actual for c in report.cycles] == [(1, 4), (1, 4), (2, 3)]
    assert report.actual_final == 49


@pytest.mark.parametrize("Q,initial,final", [(1, 1, 1), (29, 113, 85)])
def test_single_shape_plans(Q, initial, final):
    plan = ComposePlan([CycleShape(1, 1, 2)], 3, Q)
    assert compose.compose_initial(plan) == initial
    assert compose.compose_final(plan) == final
    assert compose.verify_plan(plan).passed


@pytest.mark.parametrize("k", range(1, 6))
def test_family_members_verify(worked_plan, k):
    plan = ComposePlan(worked_plan.shapes, 1, worked_plan.Q + 2 * k)
    assert compose.verify_plan(plan).passed


def test_shifted_family(worked_plan):
    assert compose.shifted_family(worked_plan, 0) == (1221, 49)
    # Σα = 11 here, so the shift is 2^11 per unit of K.
    assert compose.shifted_family(worked_plan, 2) == (1221 + 2 * 2**11, 49 + 2 * 81) == (5317, 211)
    assert core.run_cycles(5317, 3)[-1].a_F == 211
    single = ComposePlan([CycleShape(1, 1, 2)], 3, 1)
    assert compose.shifted_family(single, 28) == (113, 85)


def test_shifted_family_rejects_odd_K(worked_plan):
    with pytest.raises(InvalidParams):
        compose.shifted_family(worked_plan, 1)


def test_inadmissible_j_delta():
    with pytest.raises(InvalidParams):
        ComposePlan([CycleShape(1, 1, 2)], 1, 1)
    with pytest.raises(InvalidParams):
        ComposePlan([CycleShape(1, 1, 2)], 4, 1)


def test_even_Q_rejected():
    with pytest.raises(InvalidParams):
        ComposePlan([CycleShape(1, 1, 2)], 3, 2)


def test_negative_initial():
    plan = ComposePlan(WORKED, 1, 1)
    with pytest.raises(NonPositive):
        compose.compose_initial(plan)


def test_shape_mismatch_names_first_bad_cycle():
    with pytest.raises(ShapeMismatch) as info:
        compose.simulate_against(1221, [(1, 1, 4), (1, 1, 3), (2, 1, 3)], 49)
    assert info.value.index == 2


def test_default_j_delta_is_smallest_admissible():
    assert compose.min_j_delta(WORKED) == 1
    assert compose.min_j_delta([(1, 1, 2)]) == 3
    assert compose.min_j_delta([(1, 1, 2), (1, 1, 2)]) == 3


def test_canonical_shape():
    s = CycleShape(1, 1, 4)
    assert s.alpha == 4
    assert s.canonical() == CycleShape(1, 2, 2)


shape_st = st.sampled_from(small_shapes(n_max=2, j_max=2))


@settings(max_examples=150, deadline=None)
@given(st.lists(shape_st, min_size=1, max_size=3), st.integers(0, 5))
def test_random_plans_verify(shapes, step):
    base = compose.make_plan(shapes)
    plan = ComposePlan(base.shapes, base.j_delta, base.Q + 2 * step)
    a0, aF = compose.compose_initial(plan), compose.compose_final(plan)
    assert a0 % 2 == 1
    assert 3**plan.sum_n * a0 - 2**plan.sum_alpha * aF == -compose.weight_sum(plan.shapes)
    assert compose.verify_plan(plan).passed
    assert core.shape_identity_check(a0, len(shapes))


@settings(max_examples=100)
@given(st.lists(shape_st, min_size=1, max_size=3), st.integers(1, 50))
def test_family_shift_is_linear(shapes, K):
    plan = compose.make_plan(shapes)
    a0, aF = compose.compose_initial(plan), compose.compose_final(plan)
    assert compose.shifted_family(plan, 2 * K) == (a0 + 2 * K * 2**plan.sum_alpha, aF + 2 * K * 3**plan.sum_n)
