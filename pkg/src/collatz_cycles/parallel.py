"""Shadow sequences b = a + 2^beta * K and the step at which they part ways.

While fewer than beta halvings have happened, b - a = 2^(beta - d) * 3^u * K
(d halvings and u Ups so far) is even, so both values share parity and take
the same step. Right after the beta-th halving the difference is 3^u * K, odd,
and the two paths split.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import InvalidParams, LemmaViolation, PrematureDivergence, StepCapExceeded
from .limits import step_cap

log = logging.getLogger(__name__)

DEFAULT_MAX_BETA = 12


def pattern_of(a: int, d_halvings: int) -> str:
    """Up/Down kinds ('U'/'D') from ``a`` through the ``d_halvings``-th Down inclusive."""
    if a < 1:
        raise InvalidParams(f"a must be positive, got {a}")
    if d_halvings < 0:
        raise InvalidParams(f"d_halvings must be >= 0, got {d_halvings}")
    cap = step_cap()
    out = []
    x = a
    downs = 0
    while downs < d_halvings:
        if len(out) >= cap:
            raise StepCapExceeded(cap, a)
        if x & 1:
            x = 3 * x + 1
            out.append("U")
        else:
            x >>= 1
            downs += 1
            out.append("D")
    return "".join(out)


@dataclass(frozen=True)
class ParallelReport:
    a_start: int
    b_start: int
    beta: int
    K: int
    halvings_matched: int
    ups_at_divergence: int
    a_at_divergence: int
    b_at_divergence: int
    steps_matched: int


def check_parallel(a: int, beta: int, K: int) -> ParallelReport:
    """Walk a and a + 2^beta K in lockstep, checking the shadow difference at every step."""
    if a < 1 or a % 2 == 0:
        raise InvalidParams(f"a must be odd and positive, got {a}")
    if beta < 0:
        raise InvalidParams(f"beta must be >= 0, got {beta}")
    if K < 1 or K % 2 == 0:
        raise InvalidParams(f"K must be odd and positive, got {K}")
    cap = step_cap()
    b_start = a + (K << beta)
    x, y = a, b_start
    d = u = steps = 0
    while True:
        expected = 3**u * K << (beta - d)
        if y - x != expected:
            raise LemmaViolation(
                f"shadow difference after {d} halvings, {u} ups: {y - x} != {expected}"
            )
        if d == beta:
            break
        if (x ^ y) & 1:
            raise PrematureDivergence(f"parity split after only {d} of {beta} halvings (a={a}, K={K})")
        if steps >= cap:
            raise StepCapExceeded(cap, a)
        if x & 1:
            x, y = 3 * x + 1, 3 * y + 1
            u += 1
        else:
            x, y = x >> 1, y >> 1
            d += 1
        steps += 1
    if not (x ^ y) & 1:
        raise LemmaViolation(f"no parity split after {beta} halvings (a={a}, K={K})")
    return ParallelReport(
        a_start=a,
        b_start=b_start,
        beta=beta,
        K=K,
        halvings_matched=d,
        ups_at_divergence=u,
        a_at_divergence=x,
        b_at_divergence=y,
        steps_matched=steps,
    )


def _patterns(args: tuple[int, int, int]) -> tuple[dict[str, int], list[tuple[int, int]]]:
    lo, hi, beta = args
    seen: dict[str, int] = {}
    collisions = []
    for a in range(lo | 1, hi, 2):
        p = pattern_of(a, beta)
        if p in seen:
            collisions.append((seen[p], a))
        else:
            seen[p] = a
    return seen, collisions


def collisions_below(beta: int, jobs: int = 1) -> list[tuple[int, int]]:
    """Pairs of odd a < 2^beta sharing a pattern through beta halvings."""
    top = 1 << beta
    if jobs <= 1:
        chunks = [_patterns((1, top, beta))]
    else:
        edges = [top * i // jobs for i in range(jobs + 1)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_patterns, [(edges[i], edges[i + 1], beta) for i in range(jobs)]))
    merged: dict[str, int] = {}
    collisions = []
    for seen, local in chunks:
        collisions.extend(local)
        for p, a in seen.items():
            if p in merged:
                collisions.append((merged[p], a))
            else:
                merged[p] = a
    for pair in collisions:
        log.warning("pattern collision below 2^%d: %s", beta, pair)
    return collisions


def uniqueness_scan(beta: int, jobs: int = 1, max_beta: int = DEFAULT_MAX_BETA) -> bool:
    """True iff all odd a < 2^beta have pairwise distinct patterns through beta halvings."""
    if beta < 1:
        raise InvalidParams(f"beta must be >= 1, got {beta}")
    if beta > max_beta:
        raise InvalidParams(f"beta={beta} exceeds the configured limit {max_beta}")
    return not collisions_below(beta, jobs)
