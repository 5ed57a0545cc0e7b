"""Instability certificates and their window verifiers.

A certificate is a concrete parameter tuple claimed to witness one of
the power-instability properties of a system.  The four gain-based
certificates assert, for all p <= n <= m and all x,

    |T(n,p) x| <= N r**(m-n) |T(m,p) x|            uniform (UPIS)
    |T(n,p) x| <= N(m) r**(m-n) |T(m,p) x|         nonuniform (NPIS)
    |T(n,p) x| <= N r**(m-n) s**n |T(m,p) x|       PIS (s >= 1)
    |T(n,p) x| <= N r**(m-n) s**n |T(m,p) x|       SPIS (1 <= s < 1/r)

with N >= 1 and r in (0, 1).  The s**n factor uses the middle index n,
exactly as the definitions state.  Two equivalent characterizations are
also verifiable:

* the two-sequence form  tau(m-n) |x| <= phi(m) |T(m,n) x|  with
  nondecreasing phi, tau >= 1 (tau unbounded in the limit), plus the
  uniform variant  phi(m) |x| <= |T(m+n, n) x|;
* weighted power sums  sum_k d**(p(m-k)) |T(k,n)x|**p  bounded by
  theta(m)**p, D**p, or D**p c**(pm) times |T(m,n)x|**p.

Converters implement the constructive directions of the equivalences;
each converter's output passes its target verifier on any window where
the source check passes (exactly for scalar systems, per test vector
for matrix systems).

All sweeps run in log domain with tolerance MARGIN_EPS and report the
lexicographically first violating (m, n, p, vector) tuple.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .logmag import NEG_INF, LogMagnitude, log_add
from .report import MarginCollector, VerificationReport, test_set_note, window_note
from .sequences import SequenceSpec
from .system import System


class NoGrowthError(ValueError):
    """tau never exceeds 1 on the window, so no rate can be extracted."""


# ---------------------------------------------------------------------------
# certificate types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UpisCert:
    N: float
    r: float

    def validate(self, window: int) -> None:
        if self.N < 1:
            raise ValueError(f"uniform certificate needs N >= 1, got {self.N}")
        _check_rate(self.r)


@dataclass(frozen=True)
class NpisCert:
    N: SequenceSpec
    r: float

    def validate(self, window: int) -> None:
        _check_rate(self.r)
        self.N.check_nondecreasing(window, "N(m)")
        self.N.check_at_least_one(window, "N(m)")


@dataclass(frozen=True)
class PisCert:
    N: float
    r: float
    s: float

    def validate(self, window: int) -> None:
        if self.N < 1:
            raise ValueError(f"certificate needs N >= 1, got {self.N}")
        _check_rate(self.r)
        if self.s < 1:
            raise ValueError(f"certificate needs s >= 1, got {self.s}")


@dataclass(frozen=True)
class SpisCert:
    N: float
    r: float
    s: float

    def validate(self, window: int) -> None:
        if self.N < 1:
            raise ValueError(f"certificate needs N >= 1, got {self.N}")
        _check_rate(self.r)
        if not 1 <= self.s < 1 / self.r:
            raise ValueError(
                f"strong certificate needs s in [1, 1/r) = [1, {1 / self.r:g}), got {self.s}"
            )


@dataclass(frozen=True)
class PhiTauCert:
    phi: SequenceSpec
    tau: SequenceSpec

    def validate(self, window: int) -> None:
        self.phi.check_nondecreasing(window, "phi")
        self.phi.check_at_least_one(window, "phi")
        self.tau.check_nondecreasing(window, "tau")
        self.tau.check_at_least_one(window, "tau")


@dataclass(frozen=True)
class SumCriterion:
    """Weighted power-sum bound; ``kind`` selects the right-hand side."""

    kind: str  # npis | upis | pis | spis
    p: float
    d: float
    theta: SequenceSpec | None = None  # npis
    D: float | None = None  # upis / pis / spis
    c: float | None = None  # pis / spis

    def validate(self, window: int) -> None:
        if self.p <= 0:
            raise ValueError(f"sum criterion needs p > 0, got {self.p}")
        if self.d <= 1:
            raise ValueError(f"sum criterion needs d > 1, got {self.d}")
        if self.kind == "npis":
            if self.theta is None:
                raise ValueError("npis sum criterion needs theta")
            self.theta.check_nondecreasing(window, "theta")
            self.theta.check_at_least_one(window, "theta")
        elif self.kind in ("upis", "pis", "spis"):
            if self.D is None or self.D < 1:
                raise ValueError(f"sum criterion needs D >= 1, got {self.D}")
            if self.kind != "upis":
                if self.c is None or self.c <= 1:
                    raise ValueError(f"{self.kind} sum criterion needs c > 1, got {self.c}")
                if self.kind == "pis" and not self.c < self.d:
                    raise ValueError(f"pis sum criterion needs c in (1, d), got c={self.c}, d={self.d}")
                if self.kind == "spis" and not self.c * self.c < self.d:
                    raise ValueError(f"spis sum criterion needs c**2 < d, got c={self.c}, d={self.d}")
        else:
            raise ValueError(f"unknown sum criterion kind {self.kind!r}")


Certificate = UpisCert | NpisCert | PisCert | SpisCert


def _check_rate(r: float) -> None:
    if not 0 < r < 1:
        raise ValueError(f"rate must lie in (0, 1), got {r}")


def worker_count(threads: int | None = None) -> int:
    """Requested sweep parallelism (flag beats POWINST_THREADS beats 1)."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("POWINST_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return 1


def covered_triples(window: int) -> int:
    """Number of (m, n, p) tuples with p <= n <= m <= window."""
    return (window + 1) * (window + 2) * (window + 3) // 6


def _resolve_window(system: System, window: int | None) -> int:
    if window is None:
        return system.horizon
    if window > system.horizon:
        raise ValueError(f"window {window} exceeds system horizon {system.horizon}")
    if window < 0:
        raise ValueError("window must be >= 0")
    return window


# ---------------------------------------------------------------------------
# gain-based certificates (UPIS / NPIS / PIS / SPIS)
# ---------------------------------------------------------------------------

def _rhs_logs(cert: Certificate, window: int) -> tuple[np.ndarray, float, float]:
    """(per-m log N, log r, log s) for the right-hand side."""
    if isinstance(cert, UpisCert):
        return np.full(window + 1, math.log(cert.N)), math.log(cert.r), 0.0
    if isinstance(cert, NpisCert):
        return cert.N.log_values(window), math.log(cert.r), 0.0
    if isinstance(cert, (PisCert, SpisCert)):
        return np.full(window + 1, math.log(cert.N)), math.log(cert.r), math.log(cert.s)
    raise TypeError(f"not a gain-based certificate: {type(cert).__name__}")


def verify_certificate(
    system: System,
    cert: Certificate,
    window: int | None = None,
    threads: int | None = None,
) -> VerificationReport:
    """Check the defining gain inequality over all p <= n <= m <= window.

    Scalar systems collapse the base index p (the gain is p-free), so the
    sweep touches each (m, n) pair once while still covering every triple.
    """
    M = _resolve_window(system, window)
    cert.validate(M)
    n_log, log_r, log_s = _rhs_logs(cert, M)
    collector = MarginCollector()
    notes = [window_note(M), test_set_note(system)]

    if system.is_scalar:
        ps = system.prefix_logs
        for m in range(M + 1):
            n = np.arange(m + 1)
            gains = ps[: m + 1] - ps[m]
            gains = np.where(np.isnan(gains), NEG_INF, gains)
            margins = n_log[m] + (m - n) * log_r + n * log_s - gains
            collector.offer_row_over_n(margins, m, 0, 0, 0)
        checked = covered_triples(M)
        notes.append("base index p collapsed: scalar gains are p-independent")
    else:
        workers = worker_count(threads)
        any_sampled = _matrix_gain_sweep(system, M, n_log, log_r, log_s, collector, workers)
        checked = covered_triples(M)
        if any_sampled:
            notes.append("matrix gains are sampled lower bounds (maximum over the test set)")
        else:
            notes.append("matrix gains are exact (two-norm operator-norm reduction)")
    if collector.worst == -math.inf:
        notes.append("INFINITE_GAIN: a tested state reached zero while an earlier one did not")
    return collector.finalize(M, checked, notes)


def _matrix_gain_sweep(system, M, n_log, log_r, log_s, collector, workers) -> bool:
    def scan_base(p: int):
        local = MarginCollector()
        gains, exact = system.gains_for_base(p)
        for m in range(p, M + 1):
            n = np.arange(p, m + 1)
            margins = n_log[m] + (m - n) * log_r + n * log_s - gains[m, p : m + 1]
            local.offer_row_over_n(margins, m, p, p, None)
        return local, exact

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan_base, range(M + 1)))
    else:
        results = [scan_base(p) for p in range(M + 1)]
    any_sampled = False
    for local, exact in results:  # fixed order: deterministic reduction
        any_sampled |= not exact
        collector.merge(local)
    return any_sampled


@dataclass(frozen=True)
class RefutationEntry:
    N: float
    r: float
    witness: object  # Witness | None
    worst_margin: float


def refute_uniform(
    system: System,
    N_grid,
    r_grid,
    window: int | None = None,
) -> list[RefutationEntry]:
    """Grid search for uniform-certificate counterexamples.

    A witness for every grid point is evidence (not proof) that no
    uniform certificate exists; absence of witnesses says nothing beyond
    the window.
    """
    N_values = [float(v) for v in N_grid]
    r_values = [float(v) for v in r_grid]
    if not N_values or not r_values:
        raise ValueError("refutation grids must be nonempty")
    out = []
    for N in N_values:
        for r in r_values:
            report = verify_certificate(system, UpisCert(N=N, r=r), window)
            out.append(
                RefutationEntry(N=N, r=r, witness=report.witness, worst_margin=report.worst_margin)
            )
    return out


# ---------------------------------------------------------------------------
# two-sequence characterization (phi / tau)
# ---------------------------------------------------------------------------

def verify_phi_tau(
    system: System,
    phi: SequenceSpec,
    tau: SequenceSpec,
    window: int | None = None,
) -> VerificationReport:
    """Check tau(m-n) |x| <= phi(m) |T(m,n) x| over pairs n <= m <= window.

    This characterization quantifies pairs (m, n) with the vector planted
    at the base n; the reported witness stores p = n.
    """
    M = _resolve_window(system, window)
    PhiTauCert(phi, tau).validate(M)
    phi_log = phi.log_values(M)
    tau_log = tau.log_values(M)
    collector = MarginCollector()
    V = len(system.vectors)
    for n in range(M + 1):
        logs = system.trajectory_logs(n)  # (V, M+1)
        lags = np.arange(M + 1 - n)
        for v in range(V):
            margins = phi_log[n:] + logs[v, n:] - tau_log[lags]
            collector.offer_row_over_m(margins, n, n, n, v)
    return _finalize_pairs(collector, M, (M + 1) * (M + 2) // 2 * V, system)


def _finalize_pairs(collector: MarginCollector, M: int, checked: int, system) -> VerificationReport:
    notes = [window_note(M), test_set_note(system)]
    return collector.finalize(M, checked, notes)


def npis_to_phi_tau(cert: NpisCert) -> tuple[SequenceSpec, SequenceSpec]:
    """phi = N, tau(k) = r**-k: the direct reading of the nonuniform
    inequality at p = n.  If the certificate passes on a window, the
    two-sequence check passes on the same window."""
    _check_rate(cert.r)
    tau = SequenceSpec.exp_linear(-math.log(cert.r))
    return cert.N, tau


def phi_tau_to_npis(
    phi: SequenceSpec,
    tau: SequenceSpec,
    window: int,
) -> NpisCert:
    """Extract a nonuniform certificate from a passing two-sequence check.

    Uses the smallest step c with tau(c) > 1 (the smallest c gives the
    tightest rate), sets r = tau(c)**(-1/c), and takes the m-worst-case
    chaining envelope

        N(m) = phi(m)**(floor(m/c) + 1) / (tau(0) * r**(c-1)),

    clamped to >= 1, as a table over the window.
    """
    phi.check_nondecreasing(window, "phi")
    phi.check_at_least_one(window, "phi")
    tau.check_nondecreasing(window, "tau")
    tau.check_at_least_one(window, "tau")
    c = None
    for k in range(1, window + 1):
        if tau.log_at(k) > 0.0:
            c = k
            break
    if c is None:
        raise NoGrowthError(
            f"NO_GROWTH: tau never exceeds 1 up to the window ({window}); no rate is extractable"
        )
    log_r = -tau.log_at(c) / c
    tau0 = tau.log_at(0)
    n_logs = []
    for m in range(window + 1):
        chain = (m // c + 1) * phi.log_at(m) - tau0 - (c - 1) * log_r
        n_logs.append(max(0.0, chain))
    N = SequenceSpec.from_log_table(n_logs, label=f"chained[{phi.describe()}]")
    return NpisCert(N=N, r=math.exp(log_r))


def verify_upis_phi(
    system: System,
    phi: SequenceSpec,
    window: int | None = None,
) -> VerificationReport:
    """Uniform variant: phi(g) |x| <= |T(g+n, n) x| for all g + n <= window.

    phi must be positive and nondecreasing with actual growth on the
    window (phi(M) > phi(0) stands in for an unbounded limit).  Witnesses
    record the absolute target index m = g + n.
    """
    M = _resolve_window(system, window)
    phi.check_positive(M, "phi")
    phi.check_nondecreasing(M, "phi")
    if not phi.log_at(M) > phi.log_at(0):
        raise ValueError("phi must grow on the window (phi(M) > phi(0))")
    phi_log = phi.log_values(M)
    collector = MarginCollector()
    V = len(system.vectors)
    for n in range(M + 1):
        logs = system.trajectory_logs(n)
        top = M - n  # largest shift g with g + n inside the window
        for v in range(V):
            margins = logs[v, n:] - phi_log[: top + 1]
            collector.offer_row_over_m(margins, n, n, n, v)
    pairs = (M + 1) * (M + 2) // 2
    return _finalize_pairs(collector, M, pairs * V, system)


# ---------------------------------------------------------------------------
# weighted power sums
# ---------------------------------------------------------------------------

def sum_statistic(
    system: System,
    p: float,
    d: float,
    m: int,
    n: int,
    vector_id: int = 0,
) -> LogMagnitude:
    """sum_{k=n}^{m} d**(p(m-k)) |T(k,n) x|**p via log-sum-exp."""
    if p <= 0:
        raise ValueError(f"need p > 0, got {p}")
    if d <= 1:
        raise ValueError(f"need d > 1, got {d}")
    if n > m:
        raise ValueError(f"need n <= m, got n={n}, m={m}")
    logs = system.trajectory_logs(n)[vector_id, n : m + 1]
    k = np.arange(n, m + 1)
    terms = p * (m - k) * math.log(d) + p * logs
    return LogMagnitude(float(np.logaddexp.reduce(terms)))


def verify_sum_criterion(
    system: System,
    cert: SumCriterion,
    window: int | None = None,
) -> VerificationReport:
    """Check the weighted-sum inequality over all n <= m <= window and
    test vectors.

    The report's extras carry ``min_bound_log_per_m``: for each m the log
    of the smallest bound value that would make the inequality hold
    ((max over n, x of LHS / |T(m,n)x|**p) ** (1/p)); it is always >= 1
    because the k = m term alone contributes d**0 |T(m,n)x|**p.
    """
    M = _resolve_window(system, window)
    cert.validate(M)
    p, d = cert.p, cert.d
    log_d = math.log(d)
    if cert.kind == "npis":
        rhs_m = p * cert.theta.log_values(M)
    elif cert.kind == "upis":
        rhs_m = np.full(M + 1, p * math.log(cert.D))
    else:
        rhs_m = p * math.log(cert.D) + p * np.arange(M + 1) * math.log(cert.c)
    collector = MarginCollector()
    V = len(system.vectors)
    min_bound = np.full(M + 1, NEG_INF)
    for n in range(M + 1):
        logs = system.trajectory_logs(n)
        for v in range(V):
            running = NEG_INF
            for m in range(n, M + 1):
                running = log_add(running + (p * log_d if m > n else 0.0), p * logs[v, m])
                margin = rhs_m[m] + p * logs[v, m] - running
                collector.offer(margin, m, n, n, v)
                need = (running - p * logs[v, m]) / p
                if need > min_bound[m]:
                    min_bound[m] = need
    pairs = (M + 1) * (M + 2) // 2
    report = _finalize_pairs(collector, M, pairs * V, system)
    report.extras["min_bound_log_per_m"] = min_bound.tolist()
    return report


def sum_to_certificate(cert: SumCriterion) -> Certificate:
    """Constructive direction of the sum criteria.

    Keeping only the k = n term of the sum gives the gain inequality
    directly: npis -> NPIS{theta, 1/d}; upis -> UPIS{D, 1/d};
    pis/spis -> {D, c/d, s=c} (c**2 < d makes s < 1/r automatically).
    """
    cert.validate(0)
    if cert.kind == "npis":
        return NpisCert(N=cert.theta, r=1.0 / cert.d)
    if cert.kind == "upis":
        return UpisCert(N=cert.D, r=1.0 / cert.d)
    if cert.kind == "pis":
        return PisCert(N=cert.D, r=cert.c / cert.d, s=cert.c)
    return SpisCert(N=cert.D, r=cert.c / cert.d, s=cert.c)
