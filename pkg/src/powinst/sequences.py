"""Closed-form nondecreasing scalar sequences, evaluated in log domain.

These carry the sequence-valued constants of the instability criteria:
the growth envelope N(m) of a nonuniform certificate, the phi/tau pair of
the two-sequence characterization, the theta bound of the weighted-sum
criteria and the beta bound of the Lyapunov characterization.

Supported forms (k is the integer argument):

    constant        kappa
    geometric       scale * b**k
    exp_linear      scale * exp(alpha * k)
    exp_quadratic   scale * exp(alpha * k**2)
    table           explicit log values per index

The optional positive ``scale`` factor exists because bounds produced by
the equivalence proofs are scaled closed forms (e.g. 2**(m+1), or
N(m)/(1 - d*r)); without it every such bound would degrade to a table.

Monotonicity and lower-bound requirements are validated numerically at
the integer points of the window in use, never symbolically: table forms
admit no symbolic check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_FORMS = ("constant", "geometric", "exp_linear", "exp_quadratic", "table")

# Slack for float noise when checking nondecreasingness / lower bounds
# pointwise in log domain.
_CHECK_TOL = 1e-12


@dataclass(frozen=True)
class SequenceSpec:
    """A scalar sequence with log-domain evaluation at integer arguments."""

    form: str
    kappa: float | None = None
    base: float | None = None
    alpha: float | None = None
    scale: float = 1.0
    log_table: tuple[float, ...] | None = None
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.form not in _FORMS:
            raise ValueError(f"unknown sequence form {self.form!r}")
        if self.scale <= 0:
            raise ValueError(f"sequence scale must be > 0, got {self.scale}")
        if self.form == "constant" and (self.kappa is None or self.kappa <= 0):
            raise ValueError("constant sequence needs kappa > 0")
        if self.form == "geometric" and (self.base is None or self.base <= 0):
            raise ValueError("geometric sequence needs base > 0")
        if self.form in ("exp_linear", "exp_quadratic") and self.alpha is None:
            raise ValueError(f"{self.form} sequence needs alpha")
        if self.form == "table" and not self.log_table:
            raise ValueError("table sequence needs at least one log value")

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, kappa: float) -> "SequenceSpec":
        return cls("constant", kappa=float(kappa))

    @classmethod
    def geometric(cls, base: float, scale: float = 1.0) -> "SequenceSpec":
        return cls("geometric", base=float(base), scale=float(scale))

    @classmethod
    def exp_linear(cls, alpha: float, scale: float = 1.0) -> "SequenceSpec":
        return cls("exp_linear", alpha=float(alpha), scale=float(scale))

    @classmethod
    def exp_quadratic(cls, alpha: float, scale: float = 1.0) -> "SequenceSpec":
        return cls("exp_quadratic", alpha=float(alpha), scale=float(scale))

    @classmethod
    def from_log_table(cls, log_values, label: str | None = None) -> "SequenceSpec":
        return cls("table", log_table=tuple(float(v) for v in log_values), label=label)

    @classmethod
    def from_values(cls, values) -> "SequenceSpec":
        logs = []
        for v in values:
            if v < 0:
                raise ValueError("table values must be nonnegative")
            logs.append(math.log(v) if v > 0 else float("-inf"))
        return cls("table", log_table=tuple(logs))

    # -- evaluation -------------------------------------------------------

    def log_at(self, k: int) -> float:
        if k < 0:
            raise ValueError(f"sequence argument must be >= 0, got {k}")
        if self.form == "constant":
            return math.log(self.kappa)
        log_scale = math.log(self.scale)
        if self.form == "geometric":
            return log_scale + k * math.log(self.base)
        if self.form == "exp_linear":
            return log_scale + self.alpha * k
        if self.form == "exp_quadratic":
            return log_scale + self.alpha * (k * k)
        if k >= len(self.log_table):
            raise ValueError(
                f"table sequence has {len(self.log_table)} entries, index {k} requested"
            )
        return self.log_table[k]

    def value_at(self, k: int) -> float:
        try:
            return math.exp(self.log_at(k))
        except OverflowError:
            return float("inf")

    def log_values(self, upto: int) -> np.ndarray:
        """Log values at 0..upto inclusive."""
        if self.form == "table":
            if upto >= len(self.log_table):
                raise ValueError(
                    f"table sequence has {len(self.log_table)} entries, window needs {upto + 1}"
                )
            return np.asarray(self.log_table[: upto + 1], dtype=float)
        k = np.arange(upto + 1, dtype=float)
        if self.form == "constant":
            return np.full(upto + 1, math.log(self.kappa))
        log_scale = math.log(self.scale)
        if self.form == "geometric":
            return log_scale + k * math.log(self.base)
        if self.form == "exp_linear":
            return log_scale + self.alpha * k
        return log_scale + self.alpha * k * k

    def scaled(self, factor: float) -> "SequenceSpec":
        """The same sequence multiplied pointwise by a positive factor."""
        if factor <= 0:
            raise ValueError(f"scale factor must be > 0, got {factor}")
        if self.form == "constant":
            return SequenceSpec.constant(self.kappa * factor)
        if self.form == "geometric":
            return SequenceSpec.geometric(self.base, self.scale * factor)
        if self.form == "exp_linear":
            return SequenceSpec.exp_linear(self.alpha, self.scale * factor)
        if self.form == "exp_quadratic":
            return SequenceSpec.exp_quadratic(self.alpha, self.scale * factor)
        shift = math.log(factor)
        return SequenceSpec.from_log_table([v + shift for v in self.log_table])

    # -- validation -------------------------------------------------------

    def check_nondecreasing(self, upto: int, what: str = "sequence") -> None:
        vals = self.log_values(upto)
        if np.any(np.diff(vals) < -_CHECK_TOL):
            k = int(np.argmax(np.diff(vals) < -_CHECK_TOL))
            raise ValueError(f"{what} is decreasing between indices {k} and {k + 1}")

    def check_at_least_one(self, upto: int, what: str = "sequence") -> None:
        vals = self.log_values(upto)
        if np.any(vals < -_CHECK_TOL):
            k = int(np.argmax(vals < -_CHECK_TOL))
            raise ValueError(f"{what} drops below 1 at index {k}")

    def check_positive(self, upto: int, what: str = "sequence") -> None:
        vals = self.log_values(upto)
        if np.any(np.isneginf(vals)) or np.any(np.isnan(vals)):
            raise ValueError(f"{what} must be strictly positive on the window")

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.form == "constant":
            return f"constant({self.kappa:g})"
        if self.form == "geometric":
            if self.scale != 1.0:
                return f"geometric({self.base:g},{self.scale:g})"
            return f"geometric({self.base:g})"
        if self.form == "exp_linear":
            if self.scale != 1.0:
                return f"exp_linear({self.alpha:g},{self.scale:g})"
            return f"exp_linear({self.alpha:g})"
        if self.form == "exp_quadratic":
            if self.scale != 1.0:
                return f"exp_quadratic({self.alpha:g},{self.scale:g})"
            return f"exp_quadratic({self.alpha:g})"
        return f"table[{len(self.log_table)}]"
