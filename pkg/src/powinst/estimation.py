"""Best-feasible certificate constants from finite-window growth data.

Certificates are uniform bounds, so every estimator here fits by
domination (Chebyshev-style max over the data), never least squares: a
fitted constant must cover every observed gain, not the trend.

The growth profile collapses the triple sweep to the lag envelope

    g(k) = max over {p <= n <= m <= M, m - n = k} of gain(m, n, p),

which is exact for scalar systems and a sampled lower bound for matrix
systems.  A uniform certificate {N, r} holds on the window iff
g(k) <= N r**k for every lag k.

Window caveat, stated once and attached to every estimate: a finite
window cannot distinguish a rate that tends to 1 from rate 1, so rate
estimates come with the feasibility cut and window they were made on.
Every "feasible" answer is self-certifying -- bumped by a relative
slack, it passes the corresponding verifier on the same window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .logmag import NEG_INF
from .report import Witness
from .sequences import SequenceSpec
from .system import System
from .certificates import PisCert, SpisCert, UpisCert, _resolve_window

DEFAULT_K_MIN = 5
RATE_FEASIBILITY_CUT = 1e-3  # infeasible when r_hat >= 1 - cut
SPIS_ADMISSIBILITY_MARGIN = 1e-6  # need s_hat < 1/r - margin
SELF_CERT_SLACK = 1e-6  # relative bump applied before self-verification
BASE_RATE_SLACK = 1e-2  # scan accepts r >= (1 - slack) * base-slice rate


@dataclass(frozen=True)
class GrowthProfile:
    """Lag envelope of pair gains with per-lag witnesses."""

    window: int
    g_log: np.ndarray  # (window+1,) log of g(k)
    argmax: tuple  # per-lag Witness attaining g(k)
    exact: bool
    notes: tuple = ()


def growth_profile(system: System, window: int | None = None) -> GrowthProfile:
    """Compute the lag envelope g(k) over the window.

    For scalar systems the base index p is collapsed (gains are p-free)
    and the envelope is the exact supremum; matrix envelopes take the
    maximum over all bases and are flagged when gains were sampled.
    """
    M = _resolve_window(system, window)
    if system.is_scalar:
        ps = system.prefix_logs
        g = np.empty(M + 1)
        arg = []
        for k in range(M + 1):
            diffs = ps[: M + 1 - k] - ps[k : M + 1]
            diffs = np.where(np.isnan(diffs), NEG_INF, diffs)
            i = int(np.argmax(diffs))
            g[k] = diffs[i]
            arg.append(Witness(m=i + k, n=i, p=0, vector_id=0))
        return GrowthProfile(
            window=M,
            g_log=g,
            argmax=tuple(arg),
            exact=True,
            notes=("scalar envelope: exact supremum, base index collapsed",),
        )
    g = np.full(M + 1, NEG_INF)
    best: list[Witness | None] = [None] * (M + 1)
    all_exact = True
    for p in range(M + 1):
        gains, exact = system.gains_for_base(p)
        all_exact &= exact
        for m in range(p, M + 1):
            row = gains[m, p : m + 1]
            for idx, n in enumerate(range(p, m + 1)):
                k = m - n
                val = row[idx]
                cand = Witness(m=m, n=n, p=p, vector_id=None)
                if val > g[k] or (val == g[k] and best[k] is not None and cand.sort_key() < best[k].sort_key()):
                    g[k] = val
                    best[k] = cand
    notes = ("matrix envelope: sampled lower bound",) if not all_exact else (
        "matrix envelope: exact two-norm gains",
    )
    return GrowthProfile(window=M, g_log=g, argmax=tuple(best), exact=all_exact, notes=notes)


@dataclass(frozen=True)
class UpisEstimate:
    feasible: bool
    N: float | None
    r: float | None
    reason: str | None
    window: int
    k_min: int

    def certificate(self, slack: float = SELF_CERT_SLACK) -> UpisCert:
        """Slack-bumped certificate; passes verification on the window."""
        if not self.feasible:
            raise ValueError(f"estimate is infeasible ({self.reason})")
        r = min(self.r * (1 + slack), 1 - 1e-12)
        return UpisCert(N=max(1.0, self.N * (1 + slack)), r=r)


def estimate_upis(
    profile: GrowthProfile,
    k_min: int = DEFAULT_K_MIN,
    feasibility_cut: float = RATE_FEASIBILITY_CUT,
) -> UpisEstimate:
    """Fit the smallest dominating {N, r} to a growth profile.

    r_hat is the worst per-lag geometric rate g(k)**(1/k) over lags
    >= k_min (small lags are transient-dominated); N_hat then dominates
    every lag including the excluded ones.  Rates within the feasibility
    cut of 1 are reported infeasible (NO_DECAY): the window cannot
    support a uniform rate claim.
    """
    M = profile.window
    if M < k_min + 2:
        raise ValueError(f"window {M} too small for k_min={k_min} (need >= k_min + 2)")
    k = np.arange(k_min, M + 1)
    rates = profile.g_log[k_min:] / k
    log_r = float(np.max(rates))
    if log_r == math.inf:
        return UpisEstimate(False, None, None, "INFINITE_GAIN", M, k_min)
    r_hat = math.exp(log_r)
    if r_hat >= 1 - feasibility_cut:
        return UpisEstimate(False, None, r_hat, "NO_DECAY", M, k_min)
    all_k = np.arange(M + 1)
    log_n = float(np.max(profile.g_log - all_k * log_r))
    return UpisEstimate(True, math.exp(max(0.0, log_n)), r_hat, None, M, k_min)


def estimate_npis_envelope(
    system: System,
    r: float,
    window: int | None = None,
) -> SequenceSpec:
    """Minimal nondecreasing N(m) >= 1 making {N(m), r} pass on the window.

    Pointwise requirement max_{p <= n <= m} gain * r**-(m-n), then the
    nondecreasing hull (running max).  The result is a table sequence;
    {result, r} passes verification on the same window by construction.
    """
    if not 0 < r < 1:
        raise ValueError(f"rate must lie in (0, 1), got {r}")
    M = _resolve_window(system, window)
    log_r = math.log(r)
    need = np.full(M + 1, NEG_INF)
    if system.is_scalar:
        ps = system.prefix_logs
        for m in range(M + 1):
            n = np.arange(m + 1)
            gains = ps[: m + 1] - ps[m]
            gains = np.where(np.isnan(gains), NEG_INF, gains)
            vals = gains - (m - n) * log_r
            need[m] = np.max(vals)
    else:
        for p in range(M + 1):
            gains, _ = system.gains_for_base(p)
            for m in range(p, M + 1):
                n = np.arange(p, m + 1)
                vals = gains[m, p : m + 1] - (m - n) * log_r
                need[m] = max(need[m], float(np.max(vals)))
    hull = np.maximum.accumulate(np.maximum(need, 0.0))
    return SequenceSpec.from_log_table(hull.tolist(), label=f"envelope(r={r:g})")


@dataclass(frozen=True)
class ScanEntry:
    """Feasibility result for one rate value."""

    r: float
    feasible_at_r: bool
    s_hat: float | None
    N_hat: float | None
    admissible: bool
    reason: str | None = None

    def certificate(self, kind: str, slack: float = SELF_CERT_SLACK):
        if not self.feasible_at_r:
            raise ValueError(f"scan found r={self.r} infeasible ({self.reason})")
        N = max(1.0, self.N_hat * (1 + slack))
        if kind == "spis":
            return SpisCert(N=N, r=self.r, s=self.s_hat)
        return PisCert(N=N, r=self.r, s=self.s_hat)


def feasibility_scan(
    system: System,
    kind: str,
    r_grid,
    window: int | None = None,
    k_min: int = DEFAULT_K_MIN,
    base_rate_slack: float = BASE_RATE_SLACK,
    spis_margin: float = SPIS_ADMISSIBILITY_MARGIN,
) -> list[ScanEntry]:
    """Minimal s >= 1 (and matching N) for the s**n-weighted inequality,
    per rate r, with admissibility flags.

    The n = 0 slice of the inequality gets no help from s**n, so it must
    admit a stable envelope on its own: rates below (1 - slack) times
    the observed base-slice rate are reported infeasible outright
    (BASE_RATE: the required N would diverge with the window).  For the
    accepted rates, N is pinned to the n = 0 envelope and s_hat is the
    smallest log-linear slope in n dominating the remaining triples;
    SPIS additionally demands s_hat < 1/r by a strict margin.
    """
    if kind not in ("pis", "spis"):
        raise ValueError(f"scan kind must be pis or spis, got {kind!r}")
    M = _resolve_window(system, window)
    r_values = [float(v) for v in r_grid]
    if not r_values:
        raise ValueError("rate grid must be nonempty")
    for r in r_values:
        if not 0 < r < 1:
            raise ValueError(f"rate must lie in (0, 1), got {r}")

    base_gains = _base_slice_gains(system, M)  # g0[m] = gain(m, 0, 0), log
    k = np.arange(k_min, M + 1)
    base_rate_log = float(np.max(base_gains[k_min:] / k))

    entries = []
    for r in r_values:
        log_r = math.log(r)
        if log_r < base_rate_log + math.log1p(-base_rate_slack):
            entries.append(
                ScanEntry(
                    r=r,
                    feasible_at_r=False,
                    s_hat=None,
                    N_hat=None,
                    admissible=False,
                    reason=f"BASE_RATE: n=0 slice decays no faster than {math.exp(base_rate_log):.6g}",
                )
            )
            continue
        n0_log = max(0.0, float(np.max(base_gains - np.arange(M + 1) * log_r)))
        s_log = _min_slope(system, M, log_r, n0_log)
        n_hat_log = _pinned_envelope(system, M, log_r, s_log)
        s_hat = math.exp(s_log)
        admissible = kind == "pis" or s_hat < 1.0 / r - spis_margin
        entries.append(
            ScanEntry(
                r=r,
                feasible_at_r=True,
                s_hat=s_hat,
                N_hat=math.exp(max(0.0, n_hat_log)),
                admissible=admissible,
                reason=None if admissible else "s_hat >= 1/r (strict-variant bound violated)",
            )
        )
    return entries


def _base_slice_gains(system: System, M: int) -> np.ndarray:
    if system.is_scalar:
        ps = system.prefix_logs
        g = ps[0] - ps[: M + 1]
        return np.where(np.isnan(g), NEG_INF, g)
    gains, _ = system.gains_for_base(0)
    return gains[: M + 1, 0]


def _iter_gain_rows(system: System, M: int):
    """Yield (m, n_array, gain_log_array) covering all triples; scalar
    systems yield each (m, n) once (p collapsed)."""
    if system.is_scalar:
        ps = system.prefix_logs
        for m in range(M + 1):
            n = np.arange(m + 1)
            gains = ps[: m + 1] - ps[m]
            yield m, n, np.where(np.isnan(gains), NEG_INF, gains)
    else:
        for p in range(M + 1):
            gains, _ = system.gains_for_base(p)
            for m in range(p, M + 1):
                n = np.arange(p, m + 1)
                yield m, n, gains[m, p : m + 1]


def _min_slope(system: System, M: int, log_r: float, n0_log: float) -> float:
    s_log = 0.0
    for m, n, gains in _iter_gain_rows(system, M):
        excess = gains - (m - n) * log_r - n0_log
        pos = n >= 1
        if np.any(pos):
            vals = excess[pos] / n[pos]
            v = float(np.max(vals))
            if v > s_log:
                s_log = v
    return s_log


def _pinned_envelope(system: System, M: int, log_r: float, s_log: float) -> float:
    n_log = 0.0
    for m, n, gains in _iter_gain_rows(system, M):
        vals = gains - (m - n) * log_r - n * s_log
        v = float(np.max(vals))
        if v > n_log:
            n_log = v
    return n_log
