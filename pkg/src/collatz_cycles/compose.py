"""Closed-form construction of a sequence with a prescribed list of cycle shapes.

For shapes s = 1..i with Σn ups and Σα halvings in total:

    initial = 2^Σα * Q - M * S
    final   = 3^Σn * Q - 2^(3^(Σn-1) * j_delta - Σα) * S

where M = (2^(3^(Σn-1) * j_delta) + 1) / 3^Σn and S is the weight sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import exactmath
from .codec import alpha_of, shape_from_alpha
from .core import run_cycles, weight_sum_of
from .errors import InvalidParams, NonPositive, ShapeMismatch
from .exactmath import pow2


@dataclass(frozen=True)
class CycleShape:
    n: int
    j: int
    k_n: int

    # k_n may exceed 2*3^(n-1): only alpha enters the closed forms.
    def __post_init__(self):
        if self.n < 1 or self.j < 1 or self.k_n < 1:
            raise InvalidParams(f"n, j, k_n must be >= 1, got {(self.n, self.j, self.k_n)}")
        if self.alpha <= self.n:
            raise InvalidParams(f"grade restriction violated: alpha={self.alpha} <= n={self.n}")

    @property
    def alpha(self) -> int:
        return alpha_of(self.n, self.j, self.k_n)

    def canonical(self) -> "CycleShape":
        return CycleShape.from_alpha(self.n, self.alpha)

    @classmethod
    def from_alpha(cls, n: int, alpha: int) -> "CycleShape":
        j, k_n = shape_from_alpha(n, alpha)
        return cls(n=n, j=j, k_n=k_n)

    def as_pair(self) -> tuple[int, int]:
        return (self.n, self.alpha)


def _as_shapes(shapes) -> tuple[CycleShape, ...]:
    out = tuple(s if isinstance(s, CycleShape) else CycleShape(*s) for s in shapes)
    if not out:
        raise InvalidParams("at least one cycle shape is required")
    return out


def sum_n(shapes) -> int:
    return sum(s.n for s in shapes)


def sum_alpha(shapes) -> int:
    return sum(s.alpha for s in shapes)


def admissible(shapes, j_delta: int) -> bool:
    return j_delta % 2 == 1 and j_delta >= 1 and 3 ** (sum_n(shapes) - 1) * j_delta > sum_alpha(shapes)


def min_j_delta(shapes) -> int:
    shapes = _as_shapes(shapes)
    base = 3 ** (sum_n(shapes) - 1)
    jd = sum_alpha(shapes) // base + 1
    return jd if jd % 2 else jd + 1


def weight_sum(shapes) -> int:
    return weight_sum_of([s.as_pair() for s in _as_shapes(shapes)])


def m_factor(shapes, j_delta: int) -> int:
    """(2^(3^(Σn-1) j_delta) + 1) / 3^Σn."""
    return exactmath.div3_plus(sum_n(_as_shapes(shapes)) - 1, j_delta)


def delta_exponent(shapes, j_delta: int) -> int:
    shapes = _as_shapes(shapes)
    return 3 ** (sum_n(shapes) - 1) * j_delta - sum_alpha(shapes)


def min_Q(shapes, j_delta: int) -> int:
    """Smallest odd Q with 2^Σα Q > M S."""
    shapes = _as_shapes(shapes)
    if not admissible(shapes, j_delta):
        raise InvalidParams(f"j_delta={j_delta} is not admissible for {shapes}")
    target = m_factor(shapes, j_delta) * weight_sum(shapes)
    Q = (target >> sum_alpha(shapes)) + 1
    return Q if Q % 2 else Q + 1


@dataclass(frozen=True)
class ComposePlan:
    shapes: tuple[CycleShape, ...]
    j_delta: int
    Q: int

    def __post_init__(self):
        object.__setattr__(self, "shapes", _as_shapes(self.shapes))
        if not admissible(self.shapes, self.j_delta):
            raise InvalidParams(
                f"3^(Σn-1)*j_delta must exceed Σα with odd j_delta; got j_delta={self.j_delta}"
            )
        if self.Q % 2 != 1:
            raise InvalidParams(f"Q must be odd, got {self.Q}")

    @property
    def sum_n(self) -> int:
        return sum_n(self.shapes)

    @property
    def sum_alpha(self) -> int:
        return sum_alpha(self.shapes)


def make_plan(shapes, j_delta: int | None = None, Q: int | None = None) -> ComposePlan:
    shapes = _as_shapes(shapes)
    if j_delta is None:
        j_delta = min_j_delta(shapes)
    if Q is None:
        Q = min_Q(shapes, j_delta)
    return ComposePlan(shapes, j_delta, Q)


def compose_initial(plan: ComposePlan) -> int:
    value = pow2(plan.sum_alpha) * plan.Q - m_factor(plan.shapes, plan.j_delta) * weight_sum(plan.shapes)
    if value <= 0:
        raise NonPositive(value, "initial element")
    return value


def compose_final(plan: ComposePlan) -> int:
    value = 3**plan.sum_n * plan.Q - pow2(delta_exponent(plan.shapes, plan.j_delta)) * weight_sum(plan.shapes)
    if value <= 0:
        raise NonPositive(value, "final element")
    return value


@dataclass
class CycleCheck:
    index: int
    expected: tuple[int, int]
    actual: tuple[int, int] | None

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class PlanReport:
    initial: int
    expected_final: int
    actual_final: int | None = None
    cycles: list[CycleCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.cycles) and self.actual_final == self.expected_final


def simulate_against(initial: int, shapes, expected_final: int | None) -> PlanReport:
    """Run ``len(shapes)`` cycles from ``initial`` and compare with the request."""
    shapes = _as_shapes(shapes)
    report = PlanReport(initial=initial, expected_final=expected_final)
    # A plan may legitimately ride the 1-loop, e.g. two (1, 2) cycles from 1.
    traces = run_cycles(initial, len(shapes), through_one=True)
    for idx, s in enumerate(shapes, start=1):
        actual = traces[idx - 1].shape if idx <= len(traces) else None
        report.cycles.append(CycleCheck(idx, s.as_pair(), actual))
    if len(traces) == len(shapes):
        report.actual_final = traces[-1].a_F
    for c in report.cycles:
        if not c.ok:
            raise ShapeMismatch(c.index, c.expected, c.actual, report)
    return report


def verify_plan(plan: ComposePlan) -> PlanReport:
    report = simulate_against(compose_initial(plan), plan.shapes, compose_final(plan))
    if not report.passed:
        raise ShapeMismatch(len(plan.shapes), report.expected_final, report.actual_final, report)
    return report


def shifted_family(plan: ComposePlan, K: int) -> tuple[int, int]:
    """(initial, final) of the member whose Q is shifted by K; K must be even to keep Q odd."""
    if K % 2:
        raise InvalidParams(f"K must be even so that Q + K stays odd, got {K}")
    initial = compose_initial(plan) + pow2(plan.sum_alpha) * K
    final = compose_final(plan) + 3**plan.sum_n * K
    if initial <= 0:
        raise NonPositive(initial, "shifted initial element")
    if final <= 0:
        raise NonPositive(final, "shifted final element")
    return initial, final
