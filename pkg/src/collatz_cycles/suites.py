"""Bounded exhaustive and randomized sweeps over the identities.

Each suite returns a :class:`Tally`; a suite passes iff it found no
counterexample. Range-based suites split their range across worker processes
when ``jobs > 1``; merging tallies is plain addition, so the result does not
depend on the worker count.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import codec, compose, core, exactmath, parallel, terminal
from .errors import CollatzError, Infeasible, LemmaViolation, ResourceCapExceeded
from .limits import bit_cap, caps


@dataclass
class Tally:
    suite: str
    cases: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    skipped: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, reason: str, **inputs) -> None:
        self.counterexamples.append({"reason": reason, **{k: str(v) for k, v in inputs.items()}})

    def skip(self, why: str) -> None:
        self.skipped[why] = self.skipped.get(why, 0) + 1

    def merge(self, other: "Tally") -> "Tally":
        self.cases += other.cases
        self.counterexamples.extend(other.counterexamples)
        for k, v in other.skipped.items():
            self.skipped[k] = self.skipped.get(k, 0) + v
        return self

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "cases": self.cases,
            "counterexamples": self.counterexamples,
            "skipped": self.skipped,
        }


def _split(lo: int, hi: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, jobs)
    edges = [lo + (hi - lo) * i // jobs for i in range(jobs + 1)]
    return [(edges[i], edges[i + 1]) for i in range(jobs) if edges[i] < edges[i + 1]]


def _fan_out(name: str, worker, lo: int, hi: int, jobs: int) -> Tally:
    total = Tally(name)
    parts = _split(lo, hi, jobs)
    if jobs <= 1 or len(parts) == 1:
        results = [worker(p) for p in parts]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, parts))
    for r in results:
        total.merge(r)
    return total


# -- divisibility kernels ---------------------------------------------------


def suite_a4(n_max: int = 5, k_max: int = 99, fact_n_max: int = 3, fact_k_max: int = 9,
             pow_n_max: int = 4, pow_k_max: int = 27) -> Tally:
    t = Tally("a4")
    for m in range(n_max + 1):
        for K in range(1, k_max + 1, 2):
            t.cases += 1
            try:
                q = exactmath.div3_plus(m, K)
                if 3 ** (m + 1) * q != (1 << (3**m * K)) + 1:
                    t.fail("div3_plus product mismatch", m=m, K=K)
            except LemmaViolation as exc:
                t.fail(f"div3_plus: {exc}", m=m, K=K)
        for K in range(2, k_max + 1, 2):
            t.cases += 1
            try:
                q = exactmath.div3_minus(m, K)
                if 3 ** (m + 1) * q != (1 << (3**m * K)) - 1:
                    t.fail("div3_minus product mismatch", m=m, K=K)
            except LemmaViolation as exc:
                t.fail(f"div3_minus: {exc}", m=m, K=K)
    for n in range(1, fact_n_max + 1):
        for K in range(1, fact_k_max + 1, 2):
            t.cases += 1
            if not exactmath.verify_cube_tower_factorization(n, K):
                t.fail("tower factorization", n=n, K=K)
    for n in range(1, pow_n_max + 1):
        for K in range(1, pow_k_max + 1, 2):
            t.cases += 1
            e = exactmath.pure_power_of_3(exactmath.div3_plus(n - 1, K))
            # The quotient is 1 = 3^0 at (1, 1) and (2, 1); only e >= 1 counts as a hit.
            if e == 0:
                t.skip("trivial 3^0")
                e = None
            if (e is not None) != ((n, K) == (1, 3)):
                t.fail("unexpected power of 3" if e is not None else "missing power of 3", n=n, K=K)
    return t


def suite_a7(n_max: int = 5, q_max: int = 49, f_n_max: int = 6, j_max: int = 3, q1_max: int = 15) -> Tally:
    t = Tally("a7")
    for j in range(j_max + 1):
        for q in range(1, q1_max + 1, 2):
            t.cases += 1
            if not exactmath.verify_trinomial_split(j, q):
                t.fail("trinomial split", j=j, q=q)
    for n in range(1, n_max + 1):
        for q in range(1, q_max + 1, 2):
            t.cases += 1
            try:
                g = exactmath.cyclotomic_quotient(n, q)
            except LemmaViolation as exc:
                t.fail(f"cyclotomic quotient: {exc}", n=n, q=q)
                continue
            if g != exactmath.cyclotomic_alternating_sum(n, q):
                t.fail("cyclotomic alternating sum differs from division", n=n, q=q)
            if (g - q) % 3**n:
                t.fail("cyclotomic congruence mod 3^n", n=n, q=q)
        for qe in range(2, q_max + 1, 2):
            t.cases += 1
            try:
                g = exactmath.even_quotient(n, qe)
            except LemmaViolation as exc:
                t.fail(f"even quotient: {exc}", n=n, q_E=qe)
                continue
            if g != exactmath.even_alternating_sum(n, qe):
                t.fail("even alternating sum differs from division", n=n, q_E=qe)
    for n in range(1, f_n_max + 1):
        t.cases += 1
        if (exactmath.f_value(n) - 1) % 9:
            t.fail("(F-1) mod 9", n=n)
    return t


def suite_a5(n_max: int = 4, v_max: int = 2000) -> Tally:
    t = Tally("a5")
    for n in range(1, n_max + 1):
        for v in range(1, v_max + 1, 2):
            if v % 3 == 0:
                continue
            t.cases += 1
            try:
                d = codec.nd3_decode(v, n)
            except LemmaViolation as exc:
                t.fail(str(exc), v=v, n=n)
                continue
            if d.value != v or d.K_O % 2 != 1 or not 1 <= d.k_n <= codec.period(n):
                t.fail("reconstruction", v=v, n=n, k_n=d.k_n, K_O=d.K_O)
    for v, n, beta, K in ((1, 3, 9, 19), (5, 3, 14, 607)):
        t.cases += 1
        d = codec.nd3_decode(v, n)
        if (d.beta, d.K_O) != (beta, K):
            t.fail("table row", v=v, n=n, beta=d.beta, K_O=d.K_O)
    return t


# -- codec round trips ------------------------------------------------------


def roundtrip_bits(a_max: int) -> int:
    """Bit budget for encoding every odd a <= a_max: grade g needs about 2*3^(g-1) bits."""
    g = max(1, (a_max + 1).bit_length() - 1)
    return 4 * 3 ** (g - 1) + 1024


def _roundtrip_range(bounds: tuple[int, int]) -> Tally:
    lo, hi = bounds
    with caps(bits=max(bit_cap(), roundtrip_bits(hi))):
        return _roundtrip_checks(lo, hi)


def _roundtrip_checks(lo: int, hi: int) -> Tally:
    t = Tally("roundtrip")
    for a in range(lo | 1, hi, 2):
        t.cases += 1
        try:
            p = codec.decode(a)
            trace = core.run_cycle(a)
            if codec.encode(p) != a:
                t.fail("encode(decode(a)) != a", a=a)
            if codec.final_of(p) != trace.a_F:
                t.fail("final_of != simulated a_F", a=a)
            if codec.grade(a) != trace.n:
                t.fail("grade != simulated n", a=a)
            if codec.upper_bound_of(a) != trace.a_up:
                t.fail("upper_bound_of != simulated a_up", a=a)
            if not codec.bound_check(p):
                t.fail("bound_check false", a=a)
        except LemmaViolation as exc:
            t.fail(str(exc), a=a)
    return t


def param_grid(n_max: int = 3, j_max: int = 3, K_max: int = 99):
    for n in range(1, n_max + 1):
        for j in range(1, j_max + 1):
            for k in range(1, codec.period(n) + 1):
                if codec.alpha_of(n, j, k) <= n:
                    continue
                for K in range(1, K_max + 1, 2):
                    if 3**n * K <= 1 << codec.beta_of(n, k):
                        continue
                    yield codec.OddParams(n=n, k_n=k, j=j, K_O=K)


def suite_roundtrip(a_max: int = 100_000, n_max: int = 3, j_max: int = 3, K_max: int = 99, jobs: int = 1) -> Tally:
    t = _fan_out("roundtrip", _roundtrip_range, 1, a_max + 1, jobs)
    for p in param_grid(n_max, j_max, K_max):
        t.cases += 1
        try:
            a = codec.encode(p)
            if codec.decode(a) != p:
                t.fail("decode(encode(p)) != p", n=p.n, k_n=p.k_n, j=p.j, K_O=p.K_O)
        except LemmaViolation as exc:
            t.fail(str(exc), n=p.n, k_n=p.k_n, j=p.j, K_O=p.K_O)
    for n in range(1, 4):
        for q in range(1, 6, 2):
            t.cases += 1
            seed = codec.single_cycle_seed(n, q)
            traj, traces = core.run_to_one(seed)
            if len(traces) != 1 or traces[0].alpha - (n - 1) != 3 ** (n - 1) * q + 1:
                t.fail("single-cycle seed", n=n, q=q)
    return t


# -- simulation identity ----------------------------------------------------


def _identity_range(bounds: tuple[int, int]) -> Tally:
    lo, hi = bounds
    t = Tally("identity")
    for a in range(lo | 1, hi, 2):
        _, traces = core.run_to_one(a)
        for i in range(1, len(traces) + 1):
            t.cases += 1
            lhs, rhs = core.identity_sides(a, traces[:i])
            if lhs != rhs:
                t.fail("3^Σn a_O != 2^Σα a_F - S", a=a, i=i, lhs=lhs, rhs=rhs)
            if traces[i - 1].a_F % 3 == 0:
                t.fail("cycle final divisible by 3", a=a, i=i)
    return t


def suite_identity(a_max: int = 10_000, jobs: int = 1) -> Tally:
    return _fan_out("identity", _identity_range, 1, a_max + 1, jobs)


# -- composition ------------------------------------------------------------


def small_shapes(n_max: int = 2, j_max: int = 2) -> list[compose.CycleShape]:
    out = []
    for n in range(1, n_max + 1):
        for j in range(1, j_max + 1):
            for k in range(1, codec.period(n) + 1):
                if codec.alpha_of(n, j, k) > n:
                    out.append(compose.CycleShape(n, j, k))
    return out


def suite_compose(count: int = 100, seed: int = 0, i_max: int = 3, increments: int = 5) -> Tally:
    t = Tally("compose")
    rng = random.Random(seed)
    pool = small_shapes()
    for _ in range(count):
        shapes = [rng.choice(pool) for _ in range(rng.randint(1, i_max))]
        base = compose.make_plan(shapes)
        for step in range(increments + 1):
            plan = compose.ComposePlan(base.shapes, base.j_delta, base.Q + 2 * step)
            t.cases += 1
            try:
                compose.verify_plan(plan)
            except CollatzError as exc:
                t.fail(str(exc), shapes=[s.as_pair() for s in shapes], j_delta=plan.j_delta, Q=plan.Q)
                continue
            a0, aF = compose.compose_initial(plan), compose.compose_final(plan)
            if 3**plan.sum_n * a0 - (aF << plan.sum_alpha) != -compose.weight_sum(plan.shapes):
                t.fail("initial/final coupling", shapes=[s.as_pair() for s in shapes], Q=plan.Q)
    return t


# -- terminal construction ----------------------------------------------------


def terminal_shape_lists(sum_n_max: int = 3, i_max: int = 3, n_max: int = 2, j_max: int = 2):
    pool = small_shapes(n_max, j_max)
    for i in range(1, i_max + 1):
        for combo in itertools.product(pool, repeat=i):
            if sum(s.n for s in combo) <= sum_n_max:
                yield combo


def suite_terminal(sum_n_max: int = 3, n_L_max: int = 2, i_max: int = 3) -> Tally:
    t = Tally("terminal")
    for shapes in terminal_shape_lists(sum_n_max, i_max):
        for n_L in range(1, n_L_max + 1):
            ctx = {"shapes": [s.as_pair() for s in shapes], "n_L": n_L}
            try:
                tp = terminal.build_terminal(shapes, n_L)
            except Infeasible:
                t.skip("infeasible")
                continue
            except ResourceCapExceeded:
                t.skip("bit cap")
                continue
            except LemmaViolation as exc:
                t.cases += 1
                t.fail(f"{type(exc).__name__}: {exc}", regime=terminal.regime(sum(s.n for s in shapes), n_L), **ctx)
                continue
            t.cases += 1
            try:
                terminal.verify_terminal(tp)
                if tp.regime == "le" and terminal.q_closed_form_le(tp) != tp.Q:
                    t.fail("closed form disagrees with division route", **ctx)
            except ResourceCapExceeded:
                t.skip("bit cap during simulation")
            except CollatzError as exc:
                t.fail(f"{type(exc).__name__}: {exc}", regime=tp.regime, **ctx)
    return t


# -- parallel paths -----------------------------------------------------------


def suite_uniqueness(beta_max: int = 12, jobs: int = 1) -> Tally:
    t = Tally("uniqueness")
    for beta in range(1, beta_max + 1):
        t.cases += 1
        for pair in parallel.collisions_below(beta, jobs):
            t.fail("shared pattern", beta=beta, a=pair[0], c=pair[1])
    return t


def suite_shadow(count: int = 200, seed: int = 0, a_max: int = 1_000_000, beta_max: int = 40, K_max: int = 999) -> Tally:
    t = Tally("shadow")
    rng = random.Random(seed)
    for _ in range(count):
        a = rng.randrange(1, a_max, 2)
        beta = rng.randint(1, beta_max)
        K = rng.randrange(1, K_max + 1, 2)
        t.cases += 1
        try:
            r = parallel.check_parallel(a, beta, K)
            if r.b_at_divergence - r.a_at_divergence != 3**r.ups_at_divergence * K:
                t.fail("difference at divergence", a=a, beta=beta, K=K)
        except LemmaViolation as exc:
            t.fail(str(exc), a=a, beta=beta, K=K)
    return t


SUITES = {
    "a4": suite_a4,
    "a5": suite_a5,
    "a7": suite_a7,
    "roundtrip": suite_roundtrip,
    "identity": suite_identity,
    "uniqueness": suite_uniqueness,
    "compose": suite_compose,
    "terminal": suite_terminal,
    "shadow": suite_shadow,
}
