"""Exact cycle algebra for the 3x+1 map.

The simulator in :mod:`.core` is the reference; every closed form in
:mod:`.codec`, :mod:`.compose` and :mod:`.terminal` is checked against it.
"""

from .codec import OddParams, decode, encode, final_of, grade, nd3_decode, single_cycle_seed
from .compose import ComposePlan, CycleShape, compose_final, compose_initial, make_plan, min_Q, verify_plan
from .core import CycleTrace, Kind, Trajectory, run_cycle, run_cycles, run_to_one, shape_identity_check
from .errors import (
    BitCapExceeded,
    CollatzError,
    InvalidParams,
    LemmaViolation,
    NonDivisible,
    ResourceCapExceeded,
    StepCapExceeded,
    VerificationFailure,
)
from .limits import caps
from .parallel import check_parallel, uniqueness_scan
from .terminal import TerminalPlan, build_terminal, verify_terminal

__version__ = "0.1.0"

__all__ = [
    "BitCapExceeded",
    "CollatzError",
    "ComposePlan",
    "CycleShape",
    "CycleTrace",
    "InvalidParams",
    "Kind",
    "LemmaViolation",
    "NonDivisible",
    "OddParams",
    "ResourceCapExceeded",
    "StepCapExceeded",
    "TerminalPlan",
    "Trajectory",
    "VerificationFailure",
    "build_terminal",
    "caps",
    "check_parallel",
    "compose_final",
    "compose_initial",
    "decode",
    "encode",
    "final_of",
    "grade",
    "make_plan",
    "min_Q",
    "nd3_decode",
    "run_cycle",
    "run_cycles",
    "run_to_one",
    "shape_identity_check",
    "single_cycle_seed",
    "uniqueness_scan",
    "verify_plan",
    "verify_terminal",
]
