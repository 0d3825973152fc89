"""Odd numbers <-> (n, k_n, j, K_O) parameters.

Every odd a is written as

    a = 2^alpha * K_O - 2^n * (2^(2*3^(n-1)*j) - 1) / 3^n - 1

with alpha = 2*3^(n-1)*(j-1) + k_n, k_n in [1, 2*3^(n-1)], K_O odd and
alpha > n. The cycle starting at a then ends at 3^n * K_O - 2^beta with
beta = 2*3^(n-1) - k_n + n.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import exactmath
from .core import run_cycle
from .errors import ConsistencyError, DivisibleBy3, InvalidParams, LemmaViolation, NoSolution, show_int
from .exactmath import exact_div, pow2


def period(n: int) -> int:
    """2*3^(n-1): the k_n window size (and the order of 2 modulo 3^n)."""
    return 2 * 3 ** (n - 1)


def alpha_of(n: int, j: int, k_n: int) -> int:
    return period(n) * (j - 1) + k_n


def beta_of(n: int, k_n: int) -> int:
    return period(n) - k_n + n


def check_shape(n: int, j: int, k_n: int) -> None:
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    if j < 1:
        raise InvalidParams(f"j must be >= 1, got {j}")
    if not 1 <= k_n <= period(n):
        raise InvalidParams(f"k_n must lie in [1, {period(n)}] for n={n}, got {k_n}")
    if alpha_of(n, j, k_n) <= n:
        raise InvalidParams(f"grade restriction violated: alpha={alpha_of(n, j, k_n)} <= n={n}")


def shape_from_alpha(n: int, alpha: int) -> tuple[int, int]:
    """(j, k_n) for a cycle with ``n`` Ups and ``alpha`` Downs."""
    if alpha <= n:
        raise InvalidParams(f"alpha={alpha} must exceed n={n}")
    p = period(n)
    j = (alpha - 1) // p + 1
    return j, alpha - p * (j - 1)


@dataclass(frozen=True)
class OddParams:
    n: int
    k_n: int
    j: int
    K_O: int

    def __post_init__(self):
        check_shape(self.n, self.j, self.k_n)
        if self.K_O % 2 != 1:
            raise InvalidParams(f"K_O must be odd, got {self.K_O}")
        if 3**self.n * self.K_O - pow2(self.beta) <= 0:
            raise InvalidParams(
                f"positivity violated: 3^{self.n}*{self.K_O} - 2^{self.beta} <= 0"
            )

    @property
    def alpha(self) -> int:
        return alpha_of(self.n, self.j, self.k_n)

    @property
    def beta(self) -> int:
        return beta_of(self.n, self.k_n)


def grade(a: int) -> int:
    """2-adic valuation of a + 1."""
    if a < 1 or a % 2 == 0:
        raise InvalidParams(f"grade needs an odd positive integer, got {a}")
    b = a + 1
    return (b & -b).bit_length() - 1


def upper_bound_of(a: int) -> int:
    n = grade(a)
    K = (a + 1) >> n
    return 3**n * 2 * K - 2


def encode(p: OddParams) -> int:
    tail = exactmath.div3_minus(p.n - 1, 2 * p.j)
    a = pow2(p.alpha) * p.K_O - (tail << p.n) - 1
    if a < 1 or a % 2 == 0:
        raise ConsistencyError(f"encode({p}) produced {show_int(a)}")
    return a


def decode(a: int) -> OddParams:
    """Unique parameters of ``a``, read off the simulated cycle."""
    trace = run_cycle(a)
    j, k_n = shape_from_alpha(trace.n, trace.alpha)
    K_O = exact_div(trace.a_F + pow2(beta_of(trace.n, k_n)), 3**trace.n, f"decode({a}) K_O")
    p = OddParams(n=trace.n, k_n=k_n, j=j, K_O=K_O)
    if encode(p) != a:
        raise ConsistencyError(f"encode(decode({a})) = {show_int(encode(p))}")
    return p


def final_of(p: OddParams) -> int:
    return 3**p.n * p.K_O - pow2(p.beta)


def initial_from_final(n: int, k_n: int, j: int, a_F: int) -> int:
    """a_O = 2^n * (a_F * 2^(alpha-n) + 1) / 3^n - 1.

    Only alpha enters, so k_n may lie outside [1, 2*3^(n-1)].
    """
    if n < 1 or j < 1 or k_n < 1:
        raise InvalidParams(f"n, j, k_n must be >= 1, got {(n, j, k_n)}")
    if alpha_of(n, j, k_n) <= n:
        raise InvalidParams(f"grade restriction violated: alpha={alpha_of(n, j, k_n)} <= n={n}")
    if a_F < 1 or a_F % 2 == 0:
        raise InvalidParams(f"a_F must be odd and positive, got {a_F}")
    alpha = alpha_of(n, j, k_n)
    num = a_F * pow2(alpha - n) + 1
    return (exact_div(num, 3**n, f"no (n={n}, alpha={alpha}) preimage of {a_F}") << n) - 1


def single_cycle_seed(n: int, q: int) -> int:
    """2^n * (2^(3^(n-1) q) + 1) / 3^n - 1, whose single cycle ends at 1."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    return (exactmath.div3_plus(n - 1, q) << n) - 1


@dataclass(frozen=True)
class Nd3Decomp:
    n: int
    k_n: int
    K_O: int

    @property
    def beta(self) -> int:
        return beta_of(self.n, self.k_n)

    @property
    def value(self) -> int:
        return 3**self.n * self.K_O - pow2(self.beta)


def nd3_decode(v: int, n: int) -> Nd3Decomp:
    """Write v (odd, 3 ∤ v) as 3^n K_O - 2^beta with beta in [n, 2*3^(n-1) + n - 1]."""
    if v < 1 or v % 2 == 0:
        raise InvalidParams(f"v must be odd and positive, got {v}")
    if v % 3 == 0:
        raise DivisibleBy3(f"{v} is divisible by 3")
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    mod = 3**n
    p = period(n)
    hits = [beta for beta in range(n, p + n) if (v + pow(2, beta, mod)) % mod == 0]
    if not hits:
        raise NoSolution(f"no exponent in [{n}, {p + n - 1}] for v={v}, n={n}")
    if len(hits) > 1:
        raise LemmaViolation(f"{len(hits)} exponents {hits} decompose v={v} at n={n}")
    beta = hits[0]
    K_O = exact_div(v + pow2(beta), mod)
    if K_O % 2 != 1:
        raise ConsistencyError(f"K_O={K_O} is even for v={v}")
    return Nd3Decomp(n=n, k_n=p - beta + n, K_O=K_O)


def bound_check(p: OddParams) -> bool:
    """3^n * a_O < a_F * 2^alpha."""
    return 3**p.n * encode(p) < final_of(p) * pow2(p.alpha)
