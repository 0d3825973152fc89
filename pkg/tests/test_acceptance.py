"""One test per acceptance criterion, each at its stated tolerance.

Every test records a single PASS/FAIL line, printed in the terminal summary.
Sub-millisecond budgets are judged on the best of a few warm repeats.
"""

import time

from conftest import ACCEPTANCE_LINES

from collatz_cycles import codec, compose, core, exactmath, parallel, suites, terminal


def timed(fn, repeats=1):
    best, result = None, None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return result, best


def record(n, ok, seconds, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({seconds * 1000:.1f} ms) {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_single_cycle_example():
    def work():
        return codec.decode(739), core.run_cycle(739)

    (p, t), dt = timed(work, repeats=5)
    ok = (p.n, p.k_n, p.j, p.K_O) == (2, 3, 2, 5) and (t.a_up, t.a_F, t.n, t.alpha) == (3328, 13, 2, 9)
    record(1, ok and dt < 1e-3, dt, f"params=({p.n},{p.k_n},{p.j},{p.K_O}) upper={t.a_up} final={t.a_F} "
                                    f"ups={t.n} halvings={t.alpha}")


def test_criterion_2_single_cycle_seed():
    def work():
        seed = codec.single_cycle_seed(3, 3)
        return seed, core.run_to_one(seed)[1]

    (seed, traces), dt = timed(work, repeats=5)
    t = traces[0]
    ok = seed == 39_768_215 and len(traces) == 1 and t.a_up == 268_435_456 and t.tail == 27 and t.a_F == 1
    record(2, ok and dt < 10e-3, dt, f"seed={seed} cycles={len(traces)} upper={t.a_up} trailing halvings={t.tail}")


def test_criterion_3_composition_example():
    shapes = [(1, 2, 2), (1, 1, 4), (2, 1, 3)]

    def work():
        Q = compose.min_Q(shapes, 1)
        plan = compose.ComposePlan(shapes, 1, Q)
        return Q, compose.compose_initial(plan), compose.compose_final(plan), compose.verify_plan(plan)

    (Q, a0, aF, report), dt = timed(work, repeats=5)
    downs = [c.actual[1] for c in report.cycles]
    ok = (Q, a0, aF) == (1_173_985, 1221, 49) and report.passed and downs == [4, 4, 3]
    record(3, ok and dt < 10e-3, dt, f"Q={Q} initial={a0} final={aF} downs={downs}")


def test_criterion_4_div3_plus_instance():
    v, dt = timed(lambda: exactmath.div3_plus(2, 5))
    record(4, v == 1_303_124_892_179, dt, f"div3_plus(2,5)={v}")


def test_criterion_5_divisibility_suites():
    t, dt = timed(lambda: suites.suite_a4(n_max=5, k_max=99, fact_n_max=3, fact_k_max=9, pow_n_max=4, pow_k_max=27))
    record(5, t.passed and dt < 60, dt,
           f"cases={t.cases} counterexamples={len(t.counterexamples)} skipped={t.skipped}")


def test_criterion_6_not_div3_decomposition():
    t, dt = timed(lambda: suites.suite_a5(n_max=4, v_max=2000))
    record(6, t.passed and dt < 10, dt, f"cases={t.cases} counterexamples={len(t.counterexamples)}")


def test_criterion_7_codec_roundtrips():
    t, dt = timed(lambda: suites.suite_roundtrip(a_max=100_000, n_max=3, j_max=3, K_max=99))
    record(7, t.passed and dt < 60, dt, f"cases={t.cases} counterexamples={len(t.counterexamples)}")


def test_criterion_8_shape_identity():
    t, dt = timed(lambda: suites.suite_identity(a_max=10_000))
    record(8, t.passed and dt < 60, dt, f"prefixes={t.cases} counterexamples={len(t.counterexamples)}")


def test_criterion_9_terminal_construction():
    def chain():
        tp = terminal.build_terminal([(1, 1, 2)], 1, j_delta=3, j_beta=3, K_O=1)
        return tp, terminal.verify_terminal(tp)

    (tp, report), dt_chain = timed(chain, repeats=5)
    chain_ok = (tp.q_O, tp.Q, tp.b_initial, tp.b_landing) == (7, 29, 113, 85) and report.passed and dt_chain < 10e-3
    sweep, dt_sweep = timed(lambda: suites.suite_terminal(sum_n_max=3, n_L_max=2))
    nondiv = [c for c in sweep.counterexamples if c["reason"].startswith("NonDivisible")]
    sweep_ok = sweep.passed and not nondiv and dt_sweep < 300
    first = nondiv[0] if nondiv else {}
    record(9, chain_ok and sweep_ok, dt_chain + dt_sweep,
           f"worked chain {'ok' if chain_ok else 'BAD'} (q_O={tp.q_O} Q={tp.Q} {tp.b_initial}->{tp.b_landing}); "
           f"sweep {sweep.cases} feasible plans, {len(nondiv)} NonDivisible, "
           f"{sweep.skipped.get('infeasible', 0)} infeasible; first: {first.get('shapes')} n_L={first.get('n_L')}")


def test_criterion_10_parallel_paths():
    def work():
        r = parallel.check_parallel(57, 14, 1)
        uniq = suites.suite_uniqueness(beta_max=12)
        shadow = suites.suite_shadow(count=200, seed=0)
        return r, uniq, shadow

    (r, uniq, shadow), dt = timed(work)
    ok = ((r.a_at_divergence, r.b_at_divergence) == (26, 6587)
          and r.b_at_divergence - r.a_at_divergence == 3**8
          and uniq.passed and uniq.cases == 12 and shadow.passed and shadow.cases == 200)
    record(10, ok and dt < 120, dt, f"split at {r.a_at_divergence}/{r.b_at_divergence}; "
                                    f"uniqueness {uniq.cases} betas; shadow {shadow.cases} triples")


def _parallel_then_one(a, ref, k):
    """a shares its first k cycle shapes with ref and its cycle k+1 ends at 1."""
    _, mine = core.run_to_one(a)
    theirs = core.run_cycles(ref, k)
    return (len(mine) == k + 1 and [t.shape for t in mine[:k]] == [t.shape for t in theirs]), mine


def test_criterion_11_behavioral_vectors():
    def work():
        return _parallel_then_one(70_699_045, 32805, 3), _parallel_then_one(37, 32805, 4)

    ((ok_a, cyc_a), (ok_b, cyc_b)), dt = timed(work)
    _, ref = core.run_to_one(32805)
    record(11, ok_a and ok_b and dt < 1, dt,
           f"70699045: {core.shape_string(cyc_a)} | 37: {core.shape_string(cyc_b)} | "
           f"32805: {core.shape_string(ref[:5])} ...")
