"""Exception hierarchy.

Errors split into three families:

* ``LemmaViolation`` - an identity the toolkit exercises did not hold. These are
  counterexamples and are reported, never swallowed.
* ``ResourceCapExceeded`` - a configured bit or step cap would be exceeded.
* ``InvalidParams`` and friends - caller supplied inputs outside a contract.
"""

from __future__ import annotations


def show_int(x: int, limit: int = 4000) -> str:
    """Decimal form of ``x``, or a bit-length placeholder when it is huge."""
    if isinstance(x, int) and x.bit_length() > limit:
        return f"<{x.bit_length()}-bit integer>"
    return str(x)


class CollatzError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(CollatzError, ValueError):
    pass


class WrongCase(InvalidParams):
    """A terminal-plan routine was called for the other Σn-vs-n_L regime."""


class DivisibleBy3(InvalidParams):
    pass


class ResourceCapExceeded(CollatzError):
    pass


class BitCapExceeded(ResourceCapExceeded):
    def __init__(self, required_bits: int, cap: int):
        self.required_bits = required_bits
        self.cap = cap
        super().__init__(f"operation needs {required_bits} bits, cap is {cap}")


class StepCapExceeded(ResourceCapExceeded):
    def __init__(self, cap: int, start: int | None = None):
        self.cap = cap
        self.start = start
        where = f" starting from {start}" if start is not None else ""
        super().__init__(f"step cap {cap} exhausted{where}")


class LemmaViolation(CollatzError):
    """An identity that should hold exactly did not."""


class NonDivisible(LemmaViolation):
    def __init__(self, numerator: int, divisor: int, context: str = ""):
        self.numerator = numerator
        self.divisor = divisor
        self.remainder = numerator % divisor
        self.context = context
        msg = f"division by {show_int(divisor)} leaves remainder {show_int(self.remainder)}"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class NoSolution(LemmaViolation):
    pass


class ConsistencyError(LemmaViolation):
    pass


class PrematureDivergence(LemmaViolation):
    pass


class NotOdd(CollatzError):
    def __init__(self, value: int, what: str = "value"):
        self.value = value
        super().__init__(f"{what} = {show_int(value)} is not odd")


class NonPositive(CollatzError):
    def __init__(self, value: int, what: str = "value", suggestion: int | None = None):
        self.value = value
        self.suggestion = suggestion
        msg = f"{what} = {show_int(value)} is not positive"
        if suggestion is not None:
            msg += f" (try K_O = {show_int(suggestion)})"
        super().__init__(msg)


class Infeasible(CollatzError):
    pass


class ReachedOneEarly(CollatzError):
    """1 was reached before the requested number of cycles. Carries the partial run."""

    def __init__(self, traces: list, requested: int):
        self.traces = traces
        self.requested = requested
        super().__init__(f"reached 1 after {len(traces)} of {requested} cycles")


class VerificationFailure(CollatzError):
    """Simulation disagreed with a constructed prediction."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class ShapeMismatch(VerificationFailure):
    def __init__(self, index: int, expected, actual, report=None):
        self.index = index
        self.expected = expected
        self.actual = actual
        super().__init__(f"cycle {index}: expected shape {expected}, simulated {actual}", report)


class LandingMismatch(VerificationFailure):
    pass


class NoConvergence(VerificationFailure):
    pass
