"""Exact big-integer kernels for the powers-of-two-plus-or-minus-one quotients.

Every quotient computed here is an exact division. A non-zero remainder is a
counterexample to the divisibility identity being exercised and raises
:class:`~collatz_cycles.errors.NonDivisible`.

Index convention: ``div3_plus(m, K)`` and ``div3_minus(m, K)`` take ``m`` as the
power of three in the *exponent* (``2^(3^m K) ± 1``) and divide by ``3^(m+1)``.
Helpers indexed by cycle grade ``n`` (``f_value``, ``cyclotomic_quotient``)
use exponent ``3^(n-1)`` and therefore call through with ``m = n - 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import BitCapExceeded, InvalidParams, NonDivisible
from .limits import bit_cap

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExactQuotient:
    numerator: int
    divisor: int
    quotient: int

    def __post_init__(self):
        if self.divisor * self.quotient != self.numerator:
            raise NonDivisible(self.numerator, self.divisor)


def check_bits(bits: int) -> None:
    cap = bit_cap()
    if bits > cap:
        raise BitCapExceeded(bits, cap)


def pow2(e: int) -> int:
    """``2**e`` guarded by the active bit cap."""
    if e < 0:
        raise InvalidParams(f"negative exponent {e}")
    check_bits(e + 1)
    return 1 << e


def exact_div(numerator: int, divisor: int, context: str = "") -> int:
    if divisor == 0:
        raise ZeroDivisionError(context or "exact_div")
    q, r = divmod(numerator, divisor)
    if r:
        raise NonDivisible(numerator, divisor, context)
    return q


def exact_quotient(numerator: int, divisor: int, context: str = "") -> ExactQuotient:
    return ExactQuotient(numerator, divisor, exact_div(numerator, divisor, context))


def _require_odd(value: int, name: str) -> None:
    if value % 2 != 1:
        raise InvalidParams(f"{name} must be odd, got {value}")


def div3_plus(m: int, K_O: int) -> int:
    """(2^(3^m K_O) + 1) / 3^(m+1) for odd K_O."""
    if m < 0:
        raise InvalidParams(f"m must be >= 0, got {m}")
    _require_odd(K_O, "K_O")
    if K_O < 1:
        raise InvalidParams(f"K_O must be positive, got {K_O}")
    return exact_div(pow2(3**m * K_O) + 1, 3 ** (m + 1), f"div3_plus(m={m}, K_O={K_O})")


def div3_minus(m: int, K_E: int) -> int:
    """(2^(3^m K_E) - 1) / 3^(m+1) for even K_E >= 2."""
    if m < 0:
        raise InvalidParams(f"m must be >= 0, got {m}")
    if K_E < 2 or K_E % 2:
        raise InvalidParams(f"K_E must be even and >= 2, got {K_E}")
    return exact_div(pow2(3**m * K_E) - 1, 3 ** (m + 1), f"div3_minus(m={m}, K_E={K_E})")


def f_value(n: int) -> int:
    """F = (2^(3^(n-1)) + 1) / 3^n."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    return div3_plus(n - 1, 1)


def cyclotomic_quotient(n: int, q: int) -> int:
    """(2^(3^(n-1) q) + 1) / (2^(3^(n-1)) + 1) for odd q, by direct division."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    _require_odd(q, "q")
    if q < 1:
        raise InvalidParams(f"q must be positive, got {q}")
    step = 3 ** (n - 1)
    return exact_div(pow2(step * q) + 1, pow2(step) + 1, f"cyclotomic_quotient(n={n}, q={q})")


def cyclotomic_alternating_sum(n: int, q: int) -> int:
    """The same quotient as :func:`cyclotomic_quotient`, as a signed power sum.

    sum_{even i in [0, q-1]} 2^(3^(n-1) i)  -  sum_{odd i in [1, q-2]} 2^(3^(n-1) i)
    """
    _require_odd(q, "q")
    step = 3 ** (n - 1)
    check_bits(step * q)
    total = 0
    for i in range(q):
        term = 1 << (step * i)
        total += -term if i % 2 else term
    return total


def even_quotient(n: int, q_E: int) -> int:
    """(2^(3^(n-1) q_E) - 1) / (2^(3^(n-1)) + 1) for even q_E >= 2."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    if q_E < 2 or q_E % 2:
        raise InvalidParams(f"q_E must be even and >= 2, got {q_E}")
    step = 3 ** (n - 1)
    return exact_div(pow2(step * q_E) - 1, pow2(step) + 1, f"even_quotient(n={n}, q_E={q_E})")


def even_alternating_sum(n: int, q_E: int) -> int:
    """sum_{odd i in [1, q_E-1]} 2^(3^(n-1) i)  -  sum_{even i in [0, q_E-2]} 2^(3^(n-1) i)"""
    if q_E < 2 or q_E % 2:
        raise InvalidParams(f"q_E must be even and >= 2, got {q_E}")
    step = 3 ** (n - 1)
    check_bits(step * q_E)
    total = 0
    for i in range(q_E):
        term = 1 << (step * i)
        total += term if i % 2 else -term
    return total


def trinomial_split_sides(j: int, q_O: int) -> tuple[int, int]:
    """Both sides of (2^(2t) - 2^t + 1)/3 = 2*3^(j+1)*[(2^t+1)/3^(j+1)]*[(2^(t-1)-1)/3] + 1, t = 3^j q_O."""
    if j < 0:
        raise InvalidParams(f"j must be >= 0, got {j}")
    _require_odd(q_O, "q_O")
    t = 3**j * q_O
    p = pow2(t)
    lhs = exact_div(p * p - p + 1, 3, "trinomial left side")
    rhs = 2 * 3 ** (j + 1) * div3_plus(j, q_O) * exact_div(pow2(t - 1) - 1, 3, "trinomial right factor") + 1
    return lhs, rhs


def verify_trinomial_split(j: int, q_O: int) -> bool:
    try:
        lhs, rhs = trinomial_split_sides(j, q_O)
    except NonDivisible as exc:
        log.warning("trinomial split: inexact division at j=%d q_O=%d: %s", j, q_O, exc)
        return False
    if lhs != rhs:
        log.warning("trinomial split mismatch at j=%d q_O=%d: %d != %d", j, q_O, lhs, rhs)
    return lhs == rhs


def cube_tower_factors(n: int, K_O: int) -> list[int]:
    """The cofactors of 3^(n+1) in the product expansion of 2^(3^n K_O) + 1.

    [(2^K_O + 1)/3] followed by [(2^(2*3^j K_O) - 2^(3^j K_O) + 1)/3] for j = 0..n-1.
    """
    _require_odd(K_O, "K_O")
    check_bits(3**n * K_O + 1)
    factors = [exact_div((1 << K_O) + 1, 3, "leading tower factor")]
    for j in range(n):
        t = 1 << (3**j * K_O)
        factors.append(exact_div(t * t - t + 1, 3, f"tower factor j={j}"))
    return factors


def verify_cube_tower_factorization(n: int, K_O: int) -> bool:
    if n < 0:
        raise InvalidParams(f"n must be >= 0, got {n}")
    target = pow2(3**n * K_O) + 1
    try:
        factors = cube_tower_factors(n, K_O)
    except NonDivisible as exc:
        log.warning("inexact tower factor at n=%d K_O=%d: %s", n, K_O, exc)
        return False
    product = 3 ** (n + 1)
    for f in factors:
        product *= f
    return product == target


def pure_power_of_3(x: int) -> int | None:
    """Return e with 3**e == x, or None."""
    if x < 1:
        raise InvalidParams(f"x must be >= 1, got {x}")
    e = 0
    while x % 3 == 0:
        x //= 3
        e += 1
    return e if x == 1 else None
