"""Resource caps shared by every module.

Caps live in context variables so a sweep (or a CLI invocation) can tighten or
relax them locally without threading arguments through every call.
"""

from __future__ import annotations

import contextlib
import contextvars
import os

DEFAULT_BIT_CAP = 1 << 20
DEFAULT_STEP_CAP = 10_000_000


def _env_bit_cap() -> int:
    raw = os.environ.get("COLLATZ_BIT_CAP")
    if raw is None:
        return DEFAULT_BIT_CAP
    value = int(raw)
    if value <= 0:
        raise ValueError("COLLATZ_BIT_CAP must be positive")
    return value


_bit_cap: contextvars.ContextVar[int] = contextvars.ContextVar("bit_cap", default=_env_bit_cap())
_step_cap: contextvars.ContextVar[int] = contextvars.ContextVar("step_cap", default=DEFAULT_STEP_CAP)


def bit_cap() -> int:
    return _bit_cap.get()


def step_cap() -> int:
    return _step_cap.get()


@contextlib.contextmanager
def caps(*, bits: int | None = None, steps: int | None = None):
    """Temporarily override the bit and/or step cap."""
    tokens = []
    if bits is not None:
        if bits <= 0:
            raise ValueError("bit cap must be positive")
        tokens.append((_bit_cap, _bit_cap.set(bits)))
    if steps is not None:
        if steps <= 0:
            raise ValueError("step cap must be positive")
        tokens.append((_step_cap, _step_cap.set(steps)))
    try:
        yield
    finally:
        for var, token in reversed(tokens):
            var.reset(token)
