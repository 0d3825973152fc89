"""Terminal-cycle construction.

Given i cycle shapes, build a sequence B that realizes them and whose cycle
i+1 starts at a single-cycle seed, so B reaches 1 right after the prescribed
cycles. The construction picks q_O (the seed's odd multiplier) from one of two
closed forms depending on how Σn compares with the final cycle's grade n_L,
then recovers Q from

    3^Σn * Q = B + 2^n_L * (2^(3^(n_L-1) q_O) + 1) / 3^n_L

which must be an exact division. That exactness is the claim under test: a
remainder raises :class:`NonDivisible` and is reported as a counterexample.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from . import exactmath
from .codec import single_cycle_seed
from .compose import (
    ComposePlan,
    CycleShape,
    _as_shapes,
    admissible,
    compose_final,
    compose_initial,
    delta_exponent,
    min_j_delta,
    simulate_against,
    sum_n,
    weight_sum,
)
from .core import run_cycle
from .errors import (
    Infeasible,
    InvalidParams,
    LandingMismatch,
    LemmaViolation,
    NoConvergence,
    NonPositive,
    NotOdd,
    WrongCase,
    show_int,
)
from .exactmath import exact_div, pow2

DEFAULT_K_BOUND = 999
DEFAULT_J_BETA_TRIES = 16


@dataclass(frozen=True)
class TerminalPlan:
    shapes: tuple[CycleShape, ...]
    j_delta: int
    n_L: int
    K_O: int
    a_E: int
    j_beta: int
    gamma_O: int | None = None
    B: int | None = None
    F_L: int | None = None
    q_O: int | None = None
    Q: int | None = None
    b_initial: int | None = None
    b_landing: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "shapes", _as_shapes(self.shapes))

    @property
    def sum_n(self) -> int:
        return sum_n(self.shapes)

    @property
    def regime(self) -> str:
        return regime(self.sum_n, self.n_L)

    @property
    def landing_k_n(self) -> int:
        """k_n of the final cycle, forced to 3^(n_L-1) + n_L."""
        return 3 ** (self.n_L - 1) + self.n_L


def regime(total_n: int, n_L: int) -> str:
    return "gt" if total_n > n_L else "le"


def b_term(shapes, j_delta: int) -> int:
    """B = 2^(3^(Σn-1) j_delta - Σα) * S - 1."""
    shapes = _as_shapes(shapes)
    if not admissible(shapes, j_delta):
        raise InvalidParams(f"j_delta={j_delta} is not admissible")
    return pow2(delta_exponent(shapes, j_delta)) * weight_sum(shapes) - 1


def _landing_ratio(F_L: int, a_E: int) -> int:
    """((F_L - 1)^a_E - 1) / F_L."""
    return exact_div((F_L - 1) ** a_E - 1, F_L, "((F-1)^a_E - 1)/F")


def min_a_E(total_n: int) -> int:
    a = max(1, -(-total_n // 2))
    return a if a % 2 == 0 else a + 1


def min_gamma(total_n: int, n_L: int) -> int:
    d = total_n - n_L
    g = -(-total_n // d)
    return g if g % 2 else g + 1


def j_beta_ok(total_n: int, n_L: int, j_beta: int) -> bool:
    if j_beta < 1 or j_beta % 2 == 0:
        return False
    if total_n > n_L:
        return 3 ** (total_n - 1) * j_beta - n_L >= 3 ** (total_n - n_L - 1)
    return 3 ** (total_n - 1) * j_beta >= n_L


def check_free_params(tp: TerminalPlan) -> None:
    sn = tp.sum_n
    if tp.n_L < 1:
        raise InvalidParams(f"n_L must be >= 1, got {tp.n_L}")
    if not admissible(tp.shapes, tp.j_delta):
        raise InvalidParams(f"j_delta={tp.j_delta} is not admissible")
    if tp.a_E % 2 or 2 * tp.a_E < sn:
        raise InvalidParams(f"a_E must be even and >= Σn/2 = {sn}/2, got {tp.a_E}")
    if tp.K_O % 2 != 1:
        raise InvalidParams(f"K_O must be odd, got {tp.K_O}")
    if not j_beta_ok(sn, tp.n_L, tp.j_beta):
        raise InvalidParams(f"j_beta={tp.j_beta} violates its constraint for Σn={sn}, n_L={tp.n_L}")
    if sn > tp.n_L:
        if tp.gamma_O is None or tp.gamma_O % 2 != 1 or (sn - tp.n_L) * tp.gamma_O < sn:
            raise InvalidParams(f"gamma_O must be odd with (Σn - n_L)*gamma_O >= Σn, got {tp.gamma_O}")


def _offset_gt(tp: TerminalPlan) -> int:
    sn, nL = tp.sum_n, tp.n_L
    x = 3 ** (sn - nL - 1)
    F_L = exactmath.f_value(nL)
    # (1 - 2^(x m)) / (1 + 2^x) with m = 3^n_L j_beta - 1 even.
    boxed = -exactmath.even_quotient(sn - nL, 3**nL * tp.j_beta - 1)
    B = b_term(tp.shapes, tp.j_delta)
    return pow2(x) * pow2(3 ** (sn - 1) - nL) * _landing_ratio(F_L, tp.a_E) * boxed * B


def _offset_le(tp: TerminalPlan) -> int:
    sn, nL = tp.sum_n, tp.n_L
    F_L = exactmath.f_value(nL)
    B = b_term(tp.shapes, tp.j_delta)
    return pow2(3 ** (sn - 1) * tp.j_beta - nL) * _landing_ratio(F_L, tp.a_E) * B


def q_offset(tp: TerminalPlan) -> int:
    """The K_O-independent part T in q_O = 3^Σn K_O - T."""
    check_free_params(tp)
    return _offset_gt(tp) if tp.regime == "gt" else _offset_le(tp)


def smallest_K(offset: int, total_n: int) -> int:
    """Smallest odd K > 0 with 3^Σn K - offset > 0."""
    K = max(offset // 3**total_n + 1, 1)
    return K if K % 2 else K + 1


def _finish_q(tp: TerminalPlan, offset: int) -> int:
    q = 3**tp.sum_n * tp.K_O - offset
    if q <= 0:
        raise NonPositive(q, "q_O", suggestion=smallest_K(offset, tp.sum_n))
    if q % 2 == 0:
        raise NotOdd(q, "q_O")
    return q


def q_case_gt(tp: TerminalPlan) -> int:
    if tp.regime != "gt":
        raise WrongCase(f"Σn={tp.sum_n} <= n_L={tp.n_L}; use q_case_le")
    check_free_params(tp)
    return _finish_q(tp, _offset_gt(tp))


def q_case_le(tp: TerminalPlan) -> int:
    if tp.regime != "le":
        raise WrongCase(f"Σn={tp.sum_n} > n_L={tp.n_L}; use q_case_gt")
    check_free_params(tp)
    return _finish_q(tp, _offset_le(tp))


def q_O_for(tp: TerminalPlan) -> int:
    return q_case_gt(tp) if tp.regime == "gt" else q_case_le(tp)


def required_bits(n_L: int, q_O: int) -> int:
    """Bit length needed to materialize the landing seed."""
    return 3 ** (n_L - 1) * q_O + n_L + 1


def q_big(tp: TerminalPlan) -> int:
    """Q = (B + 2^n_L (2^(3^(n_L-1) q_O) + 1)/3^n_L) / 3^Σn, both divisions exact."""
    if tp.q_O is None:
        raise InvalidParams("q_O must be computed before Q")
    exactmath.check_bits(required_bits(tp.n_L, tp.q_O))
    B = b_term(tp.shapes, tp.j_delta)
    seed_part = exactmath.div3_plus(tp.n_L - 1, tp.q_O) << tp.n_L
    ctx = f"Q for shapes={[s.as_pair() for s in tp.shapes]} n_L={tp.n_L} q_O={show_int(tp.q_O)}"
    Q = exact_div(B + seed_part, 3**tp.sum_n, ctx)
    if Q % 2 != 1:
        raise LemmaViolation(f"{ctx}: Q={show_int(Q)} is even")
    return Q


def q_closed_form_le(tp: TerminalPlan) -> int:
    """Q from the Σn <= n_L closed form; must agree with :func:`q_big`.

    Q = 2^n_L F K_O + { 2^n_L F [G(q_O) - q_O] - 2^e (F-1)^a_E B + (1 + 2^e) B } / 3^Σn
    with G the cyclotomic quotient and e = 3^(Σn-1) j_beta.
    """
    if tp.regime != "le":
        raise WrongCase("closed form applies to Σn <= n_L only")
    if tp.q_O is None:
        raise InvalidParams("q_O must be computed first")
    nL, sn = tp.n_L, tp.sum_n
    F = exactmath.f_value(nL)
    B = b_term(tp.shapes, tp.j_delta)
    pow_e = pow2(3 ** (sn - 1) * tp.j_beta)
    G = exactmath.cyclotomic_quotient(nL, tp.q_O)
    brace = (F * (G - tp.q_O) << nL) - pow_e * (F - 1) ** tp.a_E * B + (1 + pow_e) * B
    return (F * tp.K_O << nL) + exact_div(brace, 3**sn, "closed-form brace")


def _complete(tp: TerminalPlan) -> TerminalPlan:
    q_O = q_O_for(tp)
    tp = dataclasses.replace(tp, q_O=q_O)
    Q = q_big(tp)
    plan = ComposePlan(tp.shapes, tp.j_delta, Q)
    b_landing = single_cycle_seed(tp.n_L, q_O)
    final = compose_final(plan)
    if final != b_landing:
        raise LemmaViolation(f"composed final {show_int(final)} != landing seed {show_int(b_landing)}")
    return dataclasses.replace(
        tp,
        B=b_term(tp.shapes, tp.j_delta),
        F_L=exactmath.f_value(tp.n_L),
        Q=Q,
        b_initial=compose_initial(plan),
        b_landing=b_landing,
    )


def build_terminal(
    shapes,
    n_L: int,
    *,
    j_delta: int | None = None,
    j_beta: int | None = None,
    gamma_O: int | None = None,
    a_E: int | None = None,
    K_O: int | None = None,
    k_bound: int = DEFAULT_K_BOUND,
) -> TerminalPlan:
    """Fully populated plan; unspecified free parameters take their smallest admissible values.

    With ``K_O`` unset it is the smallest odd positive value (at most ``k_bound``)
    giving a positive q_O. With ``j_beta`` unset, successive odd admissible values
    are tried until q_O can be made odd.
    """
    shapes = _as_shapes(shapes)
    if n_L < 1:
        raise InvalidParams(f"n_L must be >= 1, got {n_L}")
    sn = sum_n(shapes)
    if j_delta is None:
        j_delta = min_j_delta(shapes)
    if a_E is None:
        a_E = min_a_E(sn)
    if gamma_O is None and sn > n_L:
        gamma_O = min_gamma(sn, n_L)

    if j_beta is not None:
        candidates = [j_beta]
    else:
        first = 1
        while not j_beta_ok(sn, n_L, first):
            first += 2
        candidates = [first + 2 * t for t in range(DEFAULT_J_BETA_TRIES)]

    last_error: Exception | None = None
    for jb in candidates:
        base = TerminalPlan(shapes, j_delta, n_L, K_O if K_O is not None else 1, a_E, jb, gamma_O)
        try:
            if K_O is None:
                offset = q_offset(base)
                if offset % 2:
                    raise NotOdd(3**sn - offset, "q_O")
                k = smallest_K(offset, sn)
                if k > k_bound:
                    raise Infeasible(f"j_beta={jb}: smallest K_O is {k} > bound {k_bound}")
                base = dataclasses.replace(base, K_O=k)
            else:
                q_O_for(base)
        except (NotOdd, NonPositive, Infeasible) as exc:
            if j_beta is not None:
                raise
            last_error = exc
            continue
        return _complete(base)
    raise Infeasible(f"no admissible j_beta in {candidates[0]}..{candidates[-1]}: {last_error}")


@dataclass
class TerminalReport:
    initial: int
    landing_expected: int | None
    landing_actual: int | None = None
    converged: bool = False
    cycles: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        landing_ok = self.landing_expected is None or self.landing_actual == self.landing_expected
        return landing_ok and self.converged and all(c.ok for c in self.cycles)


def check_terminal_sequence(b_initial: int, shapes, landing: int | None = None) -> TerminalReport:
    """Simulate: the prescribed cycles, optionally the landing value, then one cycle to 1."""
    plan_report = simulate_against(b_initial, shapes, landing)
    report = TerminalReport(
        initial=b_initial,
        landing_expected=landing,
        landing_actual=plan_report.actual_final,
        cycles=plan_report.cycles,
    )
    if landing is not None and plan_report.actual_final != landing:
        raise LandingMismatch(f"landed on {show_int(plan_report.actual_final)}, expected {show_int(landing)}", report)
    last = run_cycle(plan_report.actual_final)
    report.converged = last.a_F == 1
    if not report.converged:
        raise NoConvergence(f"cycle after landing ends at {show_int(last.a_F)}", report)
    return report


def verify_terminal(tp: TerminalPlan) -> TerminalReport:
    if tp.b_initial is None:
        raise InvalidParams("plan is not populated; call build_terminal")
    return check_terminal_sequence(tp.b_initial, tp.shapes, tp.b_landing)
