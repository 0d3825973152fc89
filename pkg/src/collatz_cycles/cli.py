"""Command-line entry point.

Exit codes: 0 success, 1 a check came out false (counterexample), 2 usage or
parameter error, 3 a resource cap was hit.

Structural parameters (n, j, k_n, j_delta, ...) are JSON integers; every
arbitrary-size value is a decimal string.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any

from . import codec, compose, core, parallel, suites, terminal
from .errors import (
    CollatzError,
    InvalidParams,
    LemmaViolation,
    ReachedOneEarly,
    ResourceCapExceeded,
    VerificationFailure,
)
from .limits import DEFAULT_STEP_CAP, bit_cap, caps

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("collatz_cycles.cli")


@dataclass(frozen=True)
class RunConfig:
    step_cap: int = DEFAULT_STEP_CAP
    bit_cap: int = 1 << 20
    output_format: str = "json"
    seed: int | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.step_cap <= 0 or self.bit_cap <= 0:
            raise InvalidParams("caps must be positive")
        if self.output_format not in ("json", "csv"):
            raise InvalidParams(f"unknown format {self.output_format!r}")
        if self.jobs < 1:
            raise InvalidParams("--jobs must be >= 1")


class UsageError(CollatzError):
    pass


# -- argument types -----------------------------------------------------------


def _int(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}") from None


def positive_int(text: str) -> int:
    v = _int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def odd_positive(text: str) -> int:
    v = positive_int(text)
    if v % 2 == 0:
        raise argparse.ArgumentTypeError(f"must be odd: {text}")
    return v


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise UsageError(f"{name} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            pass
    raise UsageError(f"{name} must be an integer or decimal string, got {value!r}")


# -- serialization ------------------------------------------------------------


def shape_json(s: compose.CycleShape) -> dict:
    return {"n": s.n, "j": s.j, "k_n": s.k_n, "alpha": s.alpha}


def parse_shapes(raw) -> list[compose.CycleShape]:
    if not isinstance(raw, list) or not raw:
        raise UsageError("'shapes' must be a non-empty list")
    out = []
    for item in raw:
        if isinstance(item, dict):
            try:
                out.append(compose.CycleShape(_as_int(item["n"], "n"), _as_int(item["j"], "j"),
                                              _as_int(item["k_n"], "k_n")))
            except KeyError as exc:
                raise UsageError(f"shape is missing field {exc}") from None
        elif isinstance(item, list) and len(item) == 3:
            out.append(compose.CycleShape(*(_as_int(x, "shape entry") for x in item)))
        else:
            raise UsageError(f"cannot read shape {item!r}; use {{'n','j','k_n'}}")
    return out


def trace_json(index: int, t: core.CycleTrace) -> dict:
    return {"index": index, "n": t.n, "alpha": t.alpha, "tail": t.tail,
            "start": str(t.a_O), "upper": str(t.a_up), "final": str(t.a_F)}


def checks_json(cycles) -> list[dict]:
    return [{"index": c.index, "expected": list(c.expected),
             "actual": list(c.actual) if c.actual else None, "ok": c.ok} for c in cycles]


def terminal_json(tp: terminal.TerminalPlan) -> dict:
    def opt(v):
        return None if v is None else str(v)

    return {
        "shapes": [shape_json(s) for s in tp.shapes],
        "j_delta": tp.j_delta,
        "n_L": tp.n_L,
        "j_beta": tp.j_beta,
        "a_E": tp.a_E,
        "gamma_O": tp.gamma_O,
        "regime": tp.regime,
        "K_O": str(tp.K_O),
        "B": opt(tp.B),
        "F_L": opt(tp.F_L),
        "q_O": opt(tp.q_O),
        "Q": opt(tp.Q),
        "initial": opt(tp.b_initial),
        "landing": opt(tp.b_landing),
    }


def _load_plan(path: str) -> dict:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read plan file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"plan file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("plan file must hold a JSON object")
    return data


def _emit(obj: Any, cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    if cfg.output_format == "csv" and isinstance(obj, dict):
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["field", "value"])
        for k, v in obj.items():
            w.writerow([k, v if isinstance(v, (str, int)) or v is None else json.dumps(v)])
    else:
        out.write(json.dumps(obj, indent=2) + "\n")


# -- commands -----------------------------------------------------------------


def cmd_simulate(args, cfg: RunConfig) -> int:
    steps: list = []
    if args.cycles is None:
        traj, traces = core.run_to_one(args.a)
        steps = traj.steps
        reached_one = True
    else:
        try:
            traces = core.run_cycles(args.a, args.cycles, record=steps)
        except ReachedOneEarly as exc:
            traces = exc.traces
        reached_one = traces[-1].terminal
    summary = {
        "start": str(args.a),
        "cycles": [trace_json(i, t) for i, t in enumerate(traces, start=1)],
        "ups": sum(t.n for t in traces),
        "downs": sum(t.alpha for t in traces),
        "reached_one": reached_one,
        "shape_string": core.shape_string(traces),
    }
    rows = [(0, "start", args.a)] + [(i, k.value, v) for i, (v, k) in enumerate(steps, start=1)]
    if cfg.output_format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["step_index", "kind", "value"] + (["bits"] if args.log2 else []))
        for i, kind, v in rows:
            w.writerow([i, kind, v] + ([v.bit_length()] if args.log2 else []))
        sys.stderr.write(json.dumps(summary) + "\n")
    else:
        summary["steps"] = [
            {"step_index": i, "kind": kind, "value": str(v), **({"bits": v.bit_length()} if args.log2 else {})}
            for i, kind, v in rows
        ]
        _emit(summary, cfg)
    return EXIT_OK


def cmd_decompose(args, cfg: RunConfig) -> int:
    p = codec.decode(args.a)
    _emit({"n": p.n, "k_n": p.k_n, "j": p.j, "K_O": str(p.K_O), "a_F": str(codec.final_of(p))}, cfg)
    return EXIT_OK


def cmd_encode(args, cfg: RunConfig) -> int:
    p = codec.OddParams(n=args.n, k_n=args.k_n, j=args.j, K_O=args.K_O)
    _emit(str(codec.encode(p)), cfg)
    return EXIT_OK


def cmd_seed(args, cfg: RunConfig) -> int:
    _emit(str(codec.single_cycle_seed(args.n, args.q)), cfg)
    return EXIT_OK


def cmd_compose(args, cfg: RunConfig) -> int:
    data = _load_plan(args.plan)
    shapes = parse_shapes(data.get("shapes"))
    j_delta = _as_int(data["j_delta"], "j_delta") if data.get("j_delta") is not None else None
    Q = _as_int(data["Q"], "Q") if data.get("Q") is not None else None
    plan = compose.make_plan(shapes, j_delta, Q)
    out = {
        "shapes": [shape_json(s) for s in plan.shapes],
        "j_delta": plan.j_delta,
        "Q": str(plan.Q),
        "S": str(compose.weight_sum(plan.shapes)),
        "initial": str(compose.compose_initial(plan)),
        "final": str(compose.compose_final(plan)),
    }
    code = EXIT_OK
    if args.verify:
        try:
            report = compose.verify_plan(plan)
            out["verified"] = True
        except VerificationFailure as exc:
            report = exc.report
            out["verified"] = False
            out["error"] = str(exc)
            code = EXIT_FALSE
        if report is not None:
            out["cycles"] = checks_json(report.cycles)
            out["simulated_final"] = None if report.actual_final is None else str(report.actual_final)
    _emit(out, cfg)
    return code


_TERMINAL_FIELDS = ("j_delta", "j_beta", "gamma_O", "a_E", "K_O")


def cmd_terminal(args, cfg: RunConfig) -> int:
    data = _load_plan(args.plan)
    shapes = parse_shapes(data.get("shapes"))
    if "n_L" not in data:
        raise UsageError("terminal plan needs 'n_L'")
    frees = {k: _as_int(data[k], k) for k in _TERMINAL_FIELDS if data.get(k) is not None}
    tp = terminal.build_terminal(shapes, _as_int(data["n_L"], "n_L"), **frees)
    out = terminal_json(tp)
    code = EXIT_OK
    if args.verify:
        try:
            report = terminal.verify_terminal(tp)
            out["verified"] = True
        except VerificationFailure as exc:
            report = exc.report
            out["verified"] = False
            out["error"] = str(exc)
            code = EXIT_FALSE
        if report is not None:
            out["cycles"] = checks_json(report.cycles)
            out["converged"] = report.converged
    _emit(out, cfg)
    return code


def cmd_parallel(args, cfg: RunConfig) -> int:
    r = parallel.check_parallel(args.a, args.beta, args.K)
    _emit({
        "a": str(r.a_start),
        "b": str(r.b_start),
        "beta": r.beta,
        "K": str(r.K),
        "halvings_matched": r.halvings_matched,
        "steps_matched": r.steps_matched,
        "divergence": {
            "a": str(r.a_at_divergence),
            "b": str(r.b_at_divergence),
            "ups": r.ups_at_divergence,
            "difference": str(r.b_at_divergence - r.a_at_divergence),
        },
    }, cfg)
    return EXIT_OK


# suite name -> {cli attribute: suite keyword}
_SUITE_ARGS = {
    "a4": {"n_max": "n_max", "k_max": "k_max"},
    "a5": {"n_max": "n_max", "max": "v_max"},
    "a7": {"n_max": "n_max", "max": "q_max"},
    "roundtrip": {"max": "a_max", "jobs": "jobs"},
    "identity": {"max": "a_max", "jobs": "jobs"},
    "uniqueness": {"beta_max": "beta_max", "jobs": "jobs"},
    "compose": {"count": "count", "seed": "seed"},
    "terminal": {"n_max": "sum_n_max", "nl_max": "n_L_max"},
    "shadow": {"count": "count", "seed": "seed", "beta_max": "beta_max"},
}


def run_suite(name: str, args, cfg: RunConfig) -> suites.Tally:
    values = vars(args) | {"jobs": cfg.jobs, "seed": cfg.seed}
    kwargs = {kw: values[attr] for attr, kw in _SUITE_ARGS[name].items() if values.get(attr) is not None}
    return suites.SUITES[name](**kwargs)


def cmd_verify(args, cfg: RunConfig) -> int:
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)} or all")
    tallies = [run_suite(n, args, cfg) for n in names]
    if cfg.output_format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["suite", "passed", "cases", "counterexamples"])
        for t in tallies:
            w.writerow([t.suite, t.passed, t.cases, len(t.counterexamples)])
    else:
        body = tallies[0].to_json() if len(tallies) == 1 else [t.to_json() for t in tallies]
        sys.stdout.write(json.dumps(body, indent=2) + "\n")
    return EXIT_OK if all(t.passed for t in tallies) else EXIT_FALSE


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--step-cap", type=positive_int, default=DEFAULT_STEP_CAP)
    common.add_argument("--bit-cap", type=positive_int, default=None,
                        help="bit cap for 2^e constructions (default: COLLATZ_BIT_CAP or 1048576)")
    common.add_argument("--jobs", type=positive_int, default=1)
    common.add_argument("--seed", type=_int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="collatz-cycles", description="Collatz cycle algebra toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="trajectory rows and per-cycle summary")
    s.add_argument("a", type=odd_positive)
    s.add_argument("--cycles", type=positive_int, default=None, help="stop after N cycles")
    s.add_argument("--log2", action="store_true", help="add a bit-length column")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("decompose", parents=[common], help="(n, k_n, j, K_O) of an odd number")
    s.add_argument("a", type=odd_positive)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("encode", parents=[common], help="odd number from (n, k_n, j, K_O)")
    s.add_argument("n", type=positive_int)
    s.add_argument("k_n", type=positive_int)
    s.add_argument("j", type=positive_int)
    s.add_argument("K_O", type=odd_positive)
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("seed", parents=[common], help="single-cycle seed for (n, q)")
    s.add_argument("n", type=positive_int)
    s.add_argument("q", type=odd_positive)
    s.set_defaults(func=cmd_seed)

    for name, func, text in (("compose", cmd_compose, "build a sequence from a shape plan"),
                             ("terminal", cmd_terminal, "build a sequence that lands on a seed")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("plan", help="plan JSON file, or - for stdin")
        s.add_argument("--verify", action="store_true", help="cross-check against the simulator")
        s.set_defaults(func=func)

    s = sub.add_parser("parallel", parents=[common], help="follow a and a + 2^beta K to their split")
    s.add_argument("a", type=odd_positive)
    s.add_argument("beta", type=_int)
    s.add_argument("K", type=odd_positive)
    s.set_defaults(func=cmd_parallel)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", help=f"one of {', '.join(suites.SUITES)}, or all")
    s.add_argument("--n-max", type=positive_int)
    s.add_argument("--k-max", type=positive_int)
    s.add_argument("--max", type=positive_int)
    s.add_argument("--beta-max", type=positive_int)
    s.add_argument("--nl-max", type=positive_int)
    s.add_argument("--count", type=positive_int)
    s.set_defaults(func=cmd_verify)
    return p


def _fail(code: int, exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(step_cap=args.step_cap, bit_cap=args.bit_cap or bit_cap(),
                        output_format=args.format, seed=args.seed, jobs=args.jobs)
        with caps(bits=cfg.bit_cap, steps=cfg.step_cap):
            return args.func(args, cfg)
    except ResourceCapExceeded as exc:
        return _fail(EXIT_CAP, exc)
    except LemmaViolation as exc:
        return _fail(EXIT_FALSE, exc)
    except (CollatzError, ValueError) as exc:
        return _fail(EXIT_USAGE, exc)


if __name__ == "__main__":
    sys.exit(main())
