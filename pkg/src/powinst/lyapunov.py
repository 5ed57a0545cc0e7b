"""Lyapunov sequences and the nonuniform-instability equivalence.

A Lyapunov sequence for a system assigns a nonnegative value L(m, n, x)
to every window pair n <= m and state x such that

    L(n, n, x) = |x|                               (boundary)
    L(m, n, x) - a L(m-1, n, x) >= |T(m, n) x|     (growth step, a > 1)

The canonical construction is the weighted tail sum

    L(m, n, x) = sum_{k=n}^{m} d**(m-k) |T(k, n) x|,   d > 1,

which satisfies the recurrence L(m) = d L(m-1) + |T(m,n)x| exactly, and
therefore the growth step for every a in (1, d).  If the system carries
a nonuniform certificate {N(m), r} and d < 1/r, the canonical sequence
is bounded by beta(m) |T(m,n)x| with beta(m) = N(m) / (1 - d r); in the
other direction, a Lyapunov sequence with bound beta yields the
two-sequence characterization with phi = beta and tau(k) = a**k, closing
the loop through the chaining converter.

User-supplied sequences are tables over the window (the definition
imposes only pointwise conditions), read from CSV rows
(m, n, vector_id, log_value).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .logmag import NEG_INF, LogMagnitude, log_add, log_sub
from .report import MarginCollector, VerificationReport, test_set_note, window_note
from .sequences import SequenceSpec
from .system import System
from .certificates import _resolve_window  # shared window guard


@dataclass(frozen=True)
class LyapunovSequence:
    """Canonical (weighted tail sum with weight d) or explicit table."""

    kind: str  # "canonical" | "table"
    d: float | None = None
    table: dict = field(default_factory=dict)  # (m, n, vector_id) -> log value

    @classmethod
    def canonical(cls, d: float) -> "LyapunovSequence":
        if d <= 1:
            raise ValueError(f"canonical sequence needs d > 1, got {d}")
        return cls(kind="canonical", d=d)

    @classmethod
    def from_table(cls, table: dict) -> "LyapunovSequence":
        return cls(kind="table", table=dict(table))

    @classmethod
    def from_csv(cls, path) -> "LyapunovSequence":
        table = {}
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            for row in reader:
                if not row or row[0].strip().lower() == "m":
                    continue  # header or blank
                m, n, vid = int(row[0]), int(row[1]), int(row[2])
                table[(m, n, vid)] = float(row[3])
        if not table:
            raise ValueError(f"no Lyapunov table rows found in {path}")
        return cls.from_table(table)

    def values_along(self, system: System, n: int, vector_id: int, upto: int) -> np.ndarray:
        """Log values L(m, n, x) for m = n..upto."""
        if self.kind == "canonical":
            logs = system.trajectory_logs(n)[vector_id, n : upto + 1]
            log_d = math.log(self.d)
            out = np.empty(upto + 1 - n)
            running = NEG_INF
            for i, state_log in enumerate(logs):
                running = log_add(running + (log_d if i > 0 else 0.0), float(state_log))
                out[i] = running
            return out
        out = np.empty(upto + 1 - n)
        for i, m in enumerate(range(n, upto + 1)):
            try:
                out[i] = self.table[(m, n, vector_id)]
            except KeyError:
                raise ValueError(f"Lyapunov table is missing entry (m={m}, n={n}, vector={vector_id})")
        return out


def canonical_lyapunov(
    system: System,
    d: float,
    m: int,
    n: int,
    vector_id: int = 0,
) -> LogMagnitude:
    """sum_{k=n}^{m} d**(m-k) |T(k,n) x| via a single log-sum-exp.

    Equals the p = 1 weighted power sum; the per-step recurrence
    L(m) = d L(m-1) + |T(m,n)x| reproduces it to float precision.
    """
    if d <= 1:
        raise ValueError(f"need d > 1, got {d}")
    if n > m:
        raise ValueError(f"need n <= m, got n={n}, m={m}")
    logs = system.trajectory_logs(n)[vector_id, n : m + 1]
    k = np.arange(n, m + 1)
    terms = (m - k) * math.log(d) + logs
    return LogMagnitude(float(np.logaddexp.reduce(terms)))


def verify_lyapunov_definition(
    system: System,
    L: LyapunovSequence,
    a: float,
    window: int | None = None,
) -> VerificationReport:
    """Check the boundary condition and the growth step (with factor a)
    for all n < m <= window and test vectors.

    Boundary misses are reported as negative margins -|log L(n,n,x)|
    with witness (n, n, n, x); growth-step margins compare
    log(L(m) - a L(m-1)) against log |T(m,n)x| (-inf when the difference
    is not positive).
    """
    if a <= 1:
        raise ValueError(f"Lyapunov factor a must be > 1, got {a}")
    M = _resolve_window(system, window)
    collector = MarginCollector()
    V = len(system.vectors)
    log_a = math.log(a)
    for n in range(M + 1):
        state_logs = system.trajectory_logs(n)
        for v in range(V):
            vals = L.values_along(system, n, v, M)
            # boundary: L(n, n, x) = |x| (unit test vectors)
            collector.offer(-abs(vals[0] - 0.0), n, n, n, v)
            for i, m in enumerate(range(n + 1, M + 1), start=1):
                diff = log_sub(vals[i], log_a + vals[i - 1])
                target = float(state_logs[v, m])
                if diff == NEG_INF and target == NEG_INF:
                    margin = 0.0
                else:
                    margin = diff - target
                collector.offer(margin, m, n, n, v)
    pairs = (M + 1) * (M + 2) // 2
    return _finalize(collector, M, pairs * V, system)


def verify_lyapunov_bound(
    system: System,
    L: LyapunovSequence,
    beta: SequenceSpec,
    window: int | None = None,
) -> VerificationReport:
    """Check L(m, n, x) <= beta(m) |T(m, n) x| over the window."""
    M = _resolve_window(system, window)
    beta.check_nondecreasing(M, "beta")
    beta.check_at_least_one(M, "beta")
    beta_log = beta.log_values(M)
    collector = MarginCollector()
    V = len(system.vectors)
    for n in range(M + 1):
        state_logs = system.trajectory_logs(n)
        for v in range(V):
            vals = L.values_along(system, n, v, M)
            margins = beta_log[n:] + state_logs[v, n:] - vals
            collector.offer_row_over_m(margins, n, n, n, v)
    pairs = (M + 1) * (M + 2) // 2
    return _finalize(collector, M, pairs * V, system)


def lyapunov_to_npis(a: float, beta: SequenceSpec) -> tuple[SequenceSpec, SequenceSpec]:
    """Two-sequence characterization implied by a passing Lyapunov pair.

    Telescoping the growth step gives
    a**(m-n) |x| <= sum_j a**(m-j) |T(j,n)x| <= L(m,n,x) <= beta(m) |T(m,n)x|,
    i.e. phi = beta and tau(k) = a**k; feed these to verify_phi_tau or
    phi_tau_to_npis to finish the route to a nonuniform certificate.
    """
    if a <= 1:
        raise ValueError(f"need a > 1, got {a}")
    return beta, SequenceSpec.exp_linear(math.log(a))


def verify_unweighted_sum(
    system: System,
    theta: SequenceSpec,
    window: int | None = None,
) -> VerificationReport:
    """Check sum_{k=n}^{m} |T(k,n)x| <= theta(m) |T(m,n)x| on the window."""
    M = _resolve_window(system, window)
    theta.check_nondecreasing(M, "theta")
    theta.check_at_least_one(M, "theta")
    theta_log = theta.log_values(M)
    collector = MarginCollector()
    V = len(system.vectors)
    for n in range(M + 1):
        state_logs = system.trajectory_logs(n)
        for v in range(V):
            running = NEG_INF
            margins = np.empty(M + 1 - n)
            for i, m in enumerate(range(n, M + 1)):
                running = log_add(running, float(state_logs[v, m]))
                margins[i] = theta_log[m] + state_logs[v, m] - running
            collector.offer_row_over_m(margins, n, n, n, v)
    pairs = (M + 1) * (M + 2) // 2
    return _finalize(collector, M, pairs * V, system)


def _finalize(collector: MarginCollector, M: int, checked: int, system) -> VerificationReport:
    notes = [window_note(M), test_set_note(system)]
    return collector.finalize(M, checked, notes)
