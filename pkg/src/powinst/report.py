"""Verification verdicts, margins and witnesses.

Every verifier reduces a sweep of log-domain inequality margins
(log RHS - log LHS per checked instance) to:

* a verdict -- PASS unless some margin drops below -MARGIN_EPS,
* the worst margin seen,
* the lexicographically first violating index tuple (m, n, p, vector),
* the count of index tuples covered.

Margins within MARGIN_EPS of zero count as passes: closed-form examples
hit exact ties, and long products carry float rounding.

Verdicts are always relative to the window and the finite test-vector
set; the notes of each report say so explicitly.  A PASS is "no
violation up to M", never a proof over the unbounded index set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MARGIN_EPS = 1e-9


@dataclass(frozen=True, order=True)
class Witness:
    """Index tuple violating an inequality; vector_id None means the
    violation holds for the exact supremum over all directions."""

    m: int
    n: int
    p: int
    vector_id: int | None = 0

    def sort_key(self) -> tuple:
        vid = -1 if self.vector_id is None else self.vector_id
        return (self.m, self.n, self.p, vid)

    def as_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "p": self.p, "vector_id": self.vector_id}


@dataclass
class VerificationReport:
    verdict: str  # "PASS" | "FAIL"
    window: int
    triples_checked: int
    worst_margin: float
    witness: Witness | None
    notes: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "window": self.window,
            "triples_checked": self.triples_checked,
            "worst_margin": _float_str(self.worst_margin),
            "witness": self.witness.as_dict() if self.witness else None,
            "notes": list(self.notes),
        }

    def render_text(self) -> str:
        lines = [
            f"verdict        {self.verdict} (window M={self.window})",
            f"worst margin   {_float_str(self.worst_margin)} (log domain)",
            f"witness        {self._witness_text()}",
            f"checked        {self.triples_checked} index tuples",
        ]
        for note in self.notes:
            lines.append(f"note           {note}")
        return "\n".join(lines)

    def _witness_text(self) -> str:
        if self.witness is None:
            return "none"
        w = self.witness
        vid = "sup" if w.vector_id is None else str(w.vector_id)
        return f"(m={w.m}, n={w.n}, p={w.p}, vector={vid})"


def _float_str(x: float) -> str:
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    if math.isnan(x):
        return "nan"
    return repr(float(x))


class MarginCollector:
    """Accumulates margins and picks the deterministic witness.

    The witness is the lexicographic minimum over (m, n, p, vector) of
    all violations, independent of sweep order, so threaded sweeps
    reduce to identical reports.
    """

    def __init__(self, eps: float = MARGIN_EPS):
        self.eps = eps
        self.worst = math.inf
        self.witness: Witness | None = None
        self._witness_key: tuple | None = None

    def offer(self, margin: float, m: int, n: int, p: int, vector_id: int | None) -> None:
        if margin < self.worst:
            self.worst = margin
        if margin < -self.eps:
            w = Witness(m, n, p, vector_id)
            key = w.sort_key()
            if self._witness_key is None or key < self._witness_key:
                self._witness_key = key
                self.witness = w

    def offer_row_over_n(
        self,
        margins: np.ndarray,
        m: int,
        n_start: int,
        p: int,
        vector_id: int | None,
    ) -> None:
        """Margins for n = n_start, n_start+1, ... at fixed (m, p, vector)."""
        if margins.size == 0:
            return
        row_min = float(np.min(margins))
        if row_min < self.worst:
            self.worst = row_min
        if row_min < -self.eps:
            i = int(np.nonzero(margins < -self.eps)[0][0])
            self.offer(float(margins[i]), m, n_start + i, p, vector_id)

    def offer_row_over_m(
        self,
        margins: np.ndarray,
        m_start: int,
        n: int,
        p: int,
        vector_id: int | None,
    ) -> None:
        """Margins for m = m_start, m_start+1, ... at fixed (n, p, vector)."""
        if margins.size == 0:
            return
        row_min = float(np.min(margins))
        if row_min < self.worst:
            self.worst = row_min
        if row_min < -self.eps:
            i = int(np.nonzero(margins < -self.eps)[0][0])
            self.offer(float(margins[i]), m_start + i, n, p, vector_id)

    def merge(self, other: "MarginCollector") -> None:
        """Fold another collector in; lexicographic witness order makes the
        result independent of merge order."""
        if other.worst < self.worst:
            self.worst = other.worst
        if other._witness_key is not None:
            if self._witness_key is None or other._witness_key < self._witness_key:
                self._witness_key = other._witness_key
                self.witness = other.witness

    def finalize(self, window: int, checked: int, notes: list[str]) -> VerificationReport:
        worst = self.worst if self.worst != math.inf else 0.0
        verdict = "FAIL" if self.witness is not None else "PASS"
        return VerificationReport(
            verdict=verdict,
            window=window,
            triples_checked=checked,
            worst_margin=worst,
            witness=self.witness,
            notes=notes,
        )


def window_note(window: int) -> str:
    return f"verdict covers indices up to M={window} only (window evidence, not a proof)"


def test_set_note(system) -> str:
    if system.is_scalar:
        return "scalar system: single test vector, supremum over x is exact by homogeneity"
    v = len(system.vectors)
    return (
        f"test set: {system.dim} basis + {v - system.dim} random unit vectors "
        f"(seed={system.vectors.seed}, norm={system.spec.norm})"
    )
