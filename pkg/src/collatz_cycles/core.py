"""Brute-force 3x+1 simulation and cycle segmentation.

This module is the ground truth every constructed formula is compared with. It
knows nothing about the parametrizations built on top of it.

A cycle starts at an odd value and repeats (Up, Down). The first Up whose
result halves to an even number marks the upper bound; from there the value is
halved until it is odd again. ``alpha`` counts every Down step in the cycle,
including the ones interleaved with the Ups.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import BitCapExceeded, InvalidParams, ReachedOneEarly, StepCapExceeded
from .limits import bit_cap, step_cap


class Kind(str, enum.Enum):
    UP = "U"
    DOWN = "D"


@dataclass(frozen=True)
class CycleTrace:
    a_O: int
    a_up: int
    a_F: int
    n: int
    alpha: int

    @property
    def terminal(self) -> bool:
        return self.a_F == 1

    @property
    def tail(self) -> int:
        """alpha - n: halvings left once the first n have been paired with the n Ups."""
        return self.alpha - self.n

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.alpha)


@dataclass
class Trajectory:
    start: int
    steps: list[tuple[int, Kind]] = field(default_factory=list)
    reached_one: bool = False

    def values(self) -> list[int]:
        return [self.start] + [v for v, _ in self.steps]

    def kinds(self) -> str:
        return "".join(k.value for _, k in self.steps)

    @property
    def ups(self) -> int:
        return sum(1 for _, k in self.steps if k is Kind.UP)

    @property
    def downs(self) -> int:
        return sum(1 for _, k in self.steps if k is Kind.DOWN)


def collatz_step(x: int) -> int:
    if x < 1:
        raise InvalidParams(f"collatz_step needs x >= 1, got {x}")
    return 3 * x + 1 if x & 1 else x >> 1


def _require_odd_start(a: int) -> None:
    if a < 1 or a % 2 == 0:
        raise InvalidParams(f"cycle start must be an odd positive integer, got {a}")


class _Budget:
    __slots__ = ("left", "cap", "start")

    def __init__(self, start: int):
        self.cap = step_cap()
        self.left = self.cap
        self.start = start

    def spend(self, k: int = 1) -> None:
        self.left -= k
        if self.left < 0:
            raise StepCapExceeded(self.cap, self.start)


def _simulate_cycle(a: int, budget: _Budget, record: list | None) -> CycleTrace:
    cap = bit_cap()
    x = a
    n = 0
    alpha = 0
    while True:
        x = 3 * x + 1
        n += 1
        budget.spend()
        if record is not None:
            record.append((x, Kind.UP))
        if x.bit_length() > cap:
            raise BitCapExceeded(x.bit_length(), cap)
        half = x >> 1
        if half & 1 == 0:
            break
        x = half
        alpha += 1
        budget.spend()
        if record is not None:
            record.append((x, Kind.DOWN))
    a_up = x
    # Consecutive halvings down to the next odd value.
    tz = (x & -x).bit_length() - 1
    budget.spend(tz)
    if record is not None:
        for _ in range(tz):
            x >>= 1
            record.append((x, Kind.DOWN))
    else:
        x >>= tz
    alpha += tz
    return CycleTrace(a_O=a, a_up=a_up, a_F=x, n=n, alpha=alpha)


def run_cycle(a_O: int) -> CycleTrace:
    _require_odd_start(a_O)
    return _simulate_cycle(a_O, _Budget(a_O), None)


def run_cycles(a_O: int, i: int, record: list | None = None, *, through_one: bool = False) -> list[CycleTrace]:
    """Exactly ``i`` chained cycles from ``a_O``.

    Raises :class:`ReachedOneEarly` (carrying the partial list) when a cycle
    other than the last one ends at 1, unless ``through_one`` asks to keep
    going round the 1 -> 4 -> 2 -> 1 loop. Steps are appended to ``record``.
    """
    _require_odd_start(a_O)
    if i < 1:
        raise InvalidParams(f"number of cycles must be >= 1, got {i}")
    budget = _Budget(a_O)
    traces: list[CycleTrace] = []
    a = a_O
    while len(traces) < i:
        t = _simulate_cycle(a, budget, record)
        traces.append(t)
        if t.terminal and len(traces) < i and not through_one:
            raise ReachedOneEarly(traces, i)
        a = t.a_F
    return traces


def run_to_one(a_O: int) -> tuple[Trajectory, list[CycleTrace]]:
    """Full trajectory until the value 1, segmented into cycles."""
    _require_odd_start(a_O)
    budget = _Budget(a_O)
    traj = Trajectory(start=a_O)
    traces: list[CycleTrace] = []
    a = a_O
    while True:
        t = _simulate_cycle(a, budget, traj.steps)
        traces.append(t)
        a = t.a_F
        if a == 1:
            break
    traj.reached_one = True
    return traj, traces


def weight_sum_of(pairs: list[tuple[int, int]]) -> int:
    """sum_s 3^(n after s) * 2^(alpha before s) * (3^n_s - 2^n_s) over (n, alpha) pairs."""
    total = 0
    n_after = sum(n for n, _ in pairs)
    alpha_before = 0
    for n, alpha in pairs:
        n_after -= n
        total += 3**n_after * (1 << alpha_before) * (3**n - 2**n)
        alpha_before += alpha
    return total


def identity_sides(a_O: int, traces: list[CycleTrace]) -> tuple[int, int]:
    """(3^Σn a_O, 2^Σα a_F - S) for a chain of cycle traces."""
    pairs = [t.shape for t in traces]
    sum_n = sum(n for n, _ in pairs)
    sum_alpha = sum(a for _, a in pairs)
    lhs = 3**sum_n * a_O
    rhs = (traces[-1].a_F << sum_alpha) - weight_sum_of(pairs)
    return lhs, rhs


def shape_identity_check(a_O: int, i: int) -> bool:
    lhs, rhs = identity_sides(a_O, run_cycles(a_O, i, through_one=True))
    return lhs == rhs


def shape_string(traces: list[CycleTrace]) -> str:
    return " ".join(f"{t.n}/{t.alpha}" for t in traces)
