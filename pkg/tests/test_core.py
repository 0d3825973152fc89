import pytest
from hypothesis import given, settings, strategies as st

from collatz_cycles import core
from collatz_cycles.core import Kind
from collatz_cycles.errors import BitCapExceeded, InvalidParams, ReachedOneEarly, StepCapExceeded
from collatz_cycles.limits import caps

from oracles import naive_cycles, naive_trajectory

odd_a = st.integers(min_value=0, max_value=50_000).map(lambda k: 2 * k + 1)


@pytest.mark.parametrize("x,y", [(1, 4), (739, 2218), (3328, 1664)])
def test_collatz_step(x, y):
    assert core.collatz_step(x) == y


@pytest.mark.parametrize("a,up,final,n,alpha", [
    (739, 3328, 13, 2, 9),
    (1, 4, 1, 1, 2),
    (27, 124, 31, 2, 3),
])
def test_run_cycle_examples(a, up, final, n, alpha):
    t = core.run_cycle(a)
    assert (t.a_up, t.a_F, t.n, t.alpha) == (up, final, n, alpha)


def test_run_cycles_1221():
    traces = core.run_cycles(1221, 3)
    assert [t.shape for t in traces] == [(1, 4), (1, 4), (2, 3)]
    assert traces[-1].a_F == 49


def test_run_cycles_single_delegates():
    assert core.run_cycles(739, 1) == [core.run_cycle(739)]


def test_run_cycles_113_lands_then_terminates():
    first, second = core.run_cycles(113, 2)
    assert first.a_F == 85 and second.a_F == 1


def test_reached_one_early_carries_partial_run():
    with pytest.raises(ReachedOneEarly) as info:
        core.run_cycles(113, 3)
    assert [t.a_F for t in info.value.traces] == [85, 1]
    assert info.value.requested == 3


def test_run_to_one_single_cycle_seed():
    traj, traces = core.run_to_one(39_768_215)
    assert len(traces) == 1
    t = traces[0]
    assert t.n == 3 and t.a_up == 268_435_456 == 2**28
    assert t.tail == 27
    assert traj.reached_one


def test_run_to_one_from_one():
    traj, traces = core.run_to_one(1)
    assert len(traces) == 1 and len(traj.steps) == 3
    assert traj.kinds() == "UDD"


def test_37_follows_32805_for_three_cycles():
    _, mine = core.run_to_one(37)
    other = core.run_cycles(32805, 4)
    assert [t.shape for t in mine[:3]] == [t.shape for t in other[:3]]
    assert mine[3].a_F == 1


@pytest.mark.parametrize("a,i", [(1221, 3), (1, 1), (57, 5)])
def test_shape_identity_examples(a, i):
    assert core.shape_identity_check(a, i)


def test_identity_sides_for_one():
    assert core.identity_sides(1, [core.run_cycle(1)]) == (3, 3)


def test_step_cap_makes_long_runs_observable():
    with caps(steps=10):
        with pytest.raises(StepCapExceeded):
            core.run_to_one(27)


def test_bit_cap_applies_to_simulation():
    with caps(bits=8):
        with pytest.raises(BitCapExceeded):
            core.run_cycle(255)


@pytest.mark.parametrize("bad", [0, -3, 4])
def test_rejects_non_odd_start(bad):
    with pytest.raises(InvalidParams):
        core.run_cycle(bad)


def test_rejects_zero_cycles():
    with pytest.raises(InvalidParams):
        core.run_cycles(7, 0)


@settings(max_examples=200)
@given(odd_a)
def test_segmentation_reproduces_raw_trajectory(a):
    traj, traces = core.run_to_one(a)
    expected = [1, 4, 2, 1] if a == 1 else naive_trajectory(a)
    assert traj.values() == expected
    if a != 1:
        assert [(t.n, t.alpha, t.a_F) for t in traces] == naive_cycles(a)
    # Cycles chain: each final is the next start.
    for prev, nxt in zip(traces, traces[1:]):
        assert prev.a_F == nxt.a_O


@settings(max_examples=200)
@given(odd_a)
def test_upper_bound_definition(a):
    traj, traces = core.run_to_one(a)
    for t in traces:
        assert t.a_up % 4 == 0
        assert t.a_F % 3 != 0
    steps = traj.steps
    assert sum(1 for _, k in steps if k is Kind.UP) == sum(t.n for t in traces)
    assert sum(1 for _, k in steps if k is Kind.DOWN) == sum(t.alpha for t in traces)


@settings(max_examples=200)
@given(odd_a)
def test_identity_holds_for_every_prefix(a):
    _, traces = core.run_to_one(a)
    for i in range(1, len(traces) + 1):
        lhs, rhs = core.identity_sides(a, traces[:i])
        assert lhs == rhs


def test_weight_sum_examples():
    assert core.weight_sum_of([(1, 4), (1, 4), (2, 3)]) == 1451
    assert core.weight_sum_of([(1, 2)]) == 1
    assert core.weight_sum_of([(1, 2), (1, 2)]) == 7


def test_shape_string():
    assert core.shape_string(core.run_cycles(1221, 3)) == "1/4 1/4 2/3"


def test_shadow_vectors_reach_one_a_cycle_earlier():
    """70699045 follows 32805 for two cycles and 37 for three, each then reaching 1."""
    from collatz_cycles.parallel import check_parallel

    ref = [t.shape for t in core.run_cycles(32805, 4)]
    _, big = core.run_to_one(70_699_045)
    _, small = core.run_to_one(37)
    assert [t.shape for t in big][:2] == ref[:2] and len(big) == 3 and big[2].shape != ref[2]
    assert [t.shape for t in small][:3] == ref[:3] and len(small) == 4
    # Both are shadows of 32805 in the parallel-path sense.
    assert 32805 - 37 == 2**15 and check_parallel(37, 15, 1).halvings_matched == 15
    assert 70_699_045 - 32805 == 2**11 * 34505 and check_parallel(32805, 11, 34505).halvings_matched == 11
