"""Brute-force plain-float re-implementations of the verifiers.

Independent oracles for cross-checking the log-domain sweeps at small
windows: products are formed by ordinary multiplication, sums by
ordinary addition, and every index tuple is visited by explicit loops.
Usable only where ordinary doubles survive (M <= ~200 for gentle
factors); the packaged implementation exists precisely because these
loops overflow on the real workloads.
"""

from __future__ import annotations

import math

# Multiplicative mirror of the log-domain tolerance: a check fails when
# lhs exceeds rhs by more than a 1e-9 relative slack.
REL = 1e-9


def products(factors: list[float], M: int) -> list[list[float]]:
    """P[n][m] = |T(m, n) x| for unit x, as plain floats."""
    P = [[1.0] * (M + 1) for _ in range(M + 1)]
    for n in range(M + 1):
        acc = 1.0
        for m in range(n + 1, M + 1):
            acc *= factors[m - 1]
            P[n][m] = acc
    return P


def check_gain_certificate(factors, M, N_at, r, s=1.0):
    """Triple-loop gain check; N_at(m) evaluates the bound sequence.

    Returns (verdict, witness) with witness the first violating
    (m, n, p) in lexicographic order.
    """
    P = products(factors, M)
    for m in range(M + 1):
        for n in range(m + 1):
            rhs_base = N_at(m) * r ** (m - n) * s**n
            for p in range(n + 1):
                lhs = P[p][n]
                rhs = rhs_base * P[p][m]
                if lhs > rhs * (1 + REL):
                    return "FAIL", (m, n, p)
    return "PASS", None


def check_phi_tau(factors, M, phi_at, tau_at):
    P = products(factors, M)
    for m in range(M + 1):
        for n in range(m + 1):
            if tau_at(m - n) > phi_at(m) * P[n][m] * (1 + REL):
                return "FAIL", (m, n)
    return "PASS", None


def check_sum_criterion(factors, M, p_exp, d, bound_at):
    """Weighted power sum against bound_at(m) ** p_exp * |T(m,n)x| ** p_exp."""
    P = products(factors, M)
    for m in range(M + 1):
        for n in range(m + 1):
            s = 0.0
            for k in range(n, m + 1):
                s += d ** (p_exp * (m - k)) * P[n][k] ** p_exp
            rhs = bound_at(m) ** p_exp * P[n][m] ** p_exp
            if s > rhs * (1 + REL):
                return "FAIL", (m, n)
    return "PASS", None


def canonical_values(factors, M, d, n):
    """L(m, n, x) for m = n..M via the plain recurrence."""
    P = products(factors, M)
    vals = []
    running = 0.0
    for m in range(n, M + 1):
        running = d * running + P[n][m] if m > n else P[n][n]
        vals.append(running)
    return vals


def check_lyapunov_definition(factors, M, d, a):
    for n in range(M + 1):
        vals = canonical_values(factors, M, d, n)
        P_row = products(factors, M)[n]
        if abs(vals[0] - 1.0) > REL:
            return "FAIL", (n, n)
        for i, m in enumerate(range(n + 1, M + 1), start=1):
            diff = vals[i] - a * vals[i - 1]
            if diff < P_row[m] * (1 - REL):
                return "FAIL", (m, n)
    return "PASS", None


def check_lyapunov_bound(factors, M, d, beta_at):
    for n in range(M + 1):
        vals = canonical_values(factors, M, d, n)
        P_row = products(factors, M)[n]
        for i, m in enumerate(range(n, M + 1)):
            if vals[i] > beta_at(m) * P_row[m] * (1 + REL):
                return "FAIL", (m, n)
    return "PASS", None


def check_unweighted_sum(factors, M, theta_at):
    P = products(factors, M)
    for m in range(M + 1):
        for n in range(m + 1):
            s = sum(P[n][k] for k in range(n, m + 1))
            if s > theta_at(m) * P[n][m] * (1 + REL):
                return "FAIL", (m, n)
    return "PASS", None


def growth_envelope(factors, M):
    """g(k) = max over pairs with lag k of the plain-float gain."""
    P = products(factors, M)
    out = []
    for k in range(M + 1):
        best = 0.0
        for n in range(M + 1 - k):
            best = max(best, P[0][n] / P[0][n + k] if P[0][n + k] else math.inf)
        out.append(best)
    return out
