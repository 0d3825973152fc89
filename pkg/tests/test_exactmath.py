import pytest
from hypothesis import given, settings, strategies as st

from collatz_cycles import exactmath
from collatz_cycles.errors import BitCapExceeded, InvalidParams, NonDivisible
from collatz_cycles.limits import caps

from oracles import long_divide, power_of_three

odd = st.integers(min_value=0, max_value=60).map(lambda k: 2 * k + 1)
even = st.integers(min_value=1, max_value=60).map(lambda k: 2 * k)


def test_div3_plus_examples():
    assert exactmath.div3_plus(2, 5) == 1_303_124_892_179
    assert exactmath.div3_plus(0, 1) == 1


def test_div3_plus_matches_long_division_oracle():
    q, r = long_divide(2**189 + 1, 81)
    assert r == 0
    assert exactmath.div3_plus(3, 7) == q


def test_div3_minus_examples():
    assert exactmath.div3_minus(0, 2) == 1
    assert exactmath.div3_minus(1, 2) == 7
    q, r = long_divide(2**36 - 1, 27)
    assert r == 0 and exactmath.div3_minus(2, 4) == q


def test_f_value_examples():
    assert exactmath.f_value(1) == 1
    assert exactmath.f_value(3) == 19
    assert exactmath.f_value(4) == 1_657_009 == (2**27 + 1) // 81


def test_cyclotomic_examples():
    assert exactmath.cyclotomic_quotient(1, 7) == 43
    assert exactmath.cyclotomic_quotient(1, 1) == 1
    assert exactmath.cyclotomic_quotient(2, 3) == 57 and 57 % 9 == 3


def test_even_quotient_examples():
    assert exactmath.even_quotient(1, 2) == 1
    assert exactmath.even_quotient(1, 4) == 5
    assert exactmath.even_quotient(2, 4) == 455


@pytest.mark.parametrize("j,q", [(0, 3), (0, 1), (1, 3)])
def test_trinomial_split_examples(j, q):
    assert exactmath.verify_trinomial_split(j, q)


def test_trinomial_split_lhs_values():
    assert exactmath.trinomial_split_sides(0, 3)[0] == 19
    assert exactmath.trinomial_split_sides(0, 1) == (1, 1)


@pytest.mark.parametrize("n,K", [(1, 1), (2, 5), (3, 3)])
def test_factorization_examples(n, K):
    assert exactmath.verify_cube_tower_factorization(n, K)


def test_pure_power_of_3_examples():
    assert exactmath.pure_power_of_3(1) == 0
    assert exactmath.pure_power_of_3(19) is None
    assert exactmath.pure_power_of_3(243) == 5


@given(st.integers(min_value=1, max_value=10**12))
def test_pure_power_of_3_agrees_with_oracle(x):
    assert exactmath.pure_power_of_3(x) == power_of_three(x)


@given(st.integers(min_value=0, max_value=5), odd)
def test_div3_plus_product(m, K):
    assert 3 ** (m + 1) * exactmath.div3_plus(m, K) == 2 ** (3**m * K) + 1


@given(st.integers(min_value=0, max_value=5), even)
def test_div3_minus_product(m, K):
    assert 3 ** (m + 1) * exactmath.div3_minus(m, K) == 2 ** (3**m * K) - 1


@settings(max_examples=60)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=24).map(lambda k: 2 * k + 1))
def test_cyclotomic_two_routes_and_congruence(n, q):
    g = exactmath.cyclotomic_quotient(n, q)
    assert g == exactmath.cyclotomic_alternating_sum(n, q)
    assert (g - q) % 3**n == 0


@settings(max_examples=60)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=1, max_value=24).map(lambda k: 2 * k))
def test_even_quotient_two_routes(n, qe):
    assert exactmath.even_quotient(n, qe) == exactmath.even_alternating_sum(n, qe)


@pytest.mark.parametrize("n", range(1, 7))
def test_f_minus_one_divisible_by_9(n):
    assert (exactmath.f_value(n) - 1) % 9 == 0


def test_only_nontrivial_power_of_three_is_n1_k3():
    hits = {(n, K): exactmath.pure_power_of_3(exactmath.div3_plus(n - 1, K))
            for n in range(1, 5) for K in range(1, 28, 2)}
    assert {k for k, e in hits.items() if e} == {(1, 3)}
    assert hits[(1, 3)] == 1
    # 1 = 3^0 also appears; see the ledger.
    assert {k for k, e in hits.items() if e == 0} == {(1, 1), (2, 1)}


def test_exact_div_reports_remainder():
    with pytest.raises(NonDivisible) as info:
        exactmath.exact_div(10, 3, "ctx")
    assert info.value.remainder == 1
    assert "ctx" in str(info.value)


def test_exact_quotient_record():
    q = exactmath.exact_quotient(12, 4)
    assert q.quotient == 3
    with pytest.raises(NonDivisible):
        exactmath.ExactQuotient(13, 4, 3)


def test_bit_cap_refuses_huge_power():
    with caps(bits=1000):
        with pytest.raises(BitCapExceeded) as info:
            exactmath.div3_plus(6, 5)
    assert info.value.required_bits > 1000


def test_invalid_parity_is_rejected():
    with pytest.raises(InvalidParams):
        exactmath.div3_plus(1, 2)
    with pytest.raises(InvalidParams):
        exactmath.div3_minus(1, 3)
    with pytest.raises(InvalidParams):
        exactmath.cyclotomic_quotient(1, 4)
