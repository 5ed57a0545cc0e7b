"""Fitting certificate constants from window data.

Estimators never least-squares-fit: a certificate is a uniform bound,
so the fitted constants must dominate every observed gain.  All
estimates are self-certifying -- bumped by a relative slack, they pass
the corresponding verifier on the same window -- and always carry the
window they were made on, because a finite window cannot distinguish
a rate drifting to 1 from rate exactly 1.
"""

import math

from powinst import (
    NpisCert,
    build_system,
    estimate_npis_envelope,
    estimate_upis,
    feasibility_scan,
    growth_profile,
    make_example,
    verify_certificate,
)

# Uniform fit: the doubling system has g(k) = 2**-k, so the estimator
# recovers N = 1, r = 1/2 exactly.
doubling = build_system(make_example("constant", 40, c=2))
est = estimate_upis(growth_profile(doubling, 40))
print(f"doubling system: feasible={est.feasible}, N={est.N:.6f}, r={est.r:.6f}")
print("self-check:", verify_certificate(doubling, est.certificate(), 40).verdict)

# Unbounded growth is necessary but not sufficient: the polynomial
# family (m+2)/(n+2) blows up, yet its lag rates crawl to 1 as the
# window grows, and the fit refuses once they cross the cut.
for M in (40, 2000):
    system = build_system(make_example("example28", M))
    est = estimate_upis(growth_profile(system, M))
    status = f"infeasible ({est.reason})" if not est.feasible else f"N={est.N:.3g}"
    print(f"polynomial family at M={M:<5}: r_hat={est.r:.6f} -> {status}")

# Nonuniform envelope: fix a rate, fit the smallest nondecreasing N(m).
# For the decaying family at r = e**-2 the answer is exactly e**(3m):
# the correction to a first guess of e**(m^2), which fails instantly.
decaying = build_system(make_example("example29", 60))
r = math.exp(-2)
envelope = estimate_npis_envelope(decaying, r, 60)
print(f"\ndecaying family at r=e^-2: envelope log N(m) = "
      f"{[round(envelope.log_at(m), 3) for m in (0, 1, 5, 10)]} (= 3m)")
print("self-check:", verify_certificate(decaying, NpisCert(N=envelope, r=r), 60).verdict)

# s-weighted feasibility: the alternating family with b=2 admits the
# strict variant only once c reaches b.  The scan screens rates whose
# base slice (n = 0) cannot decay geometrically at all, then fits the
# smallest s per surviving rate.
grid = [round(0.02 * i, 4) for i in range(1, 50)] + [0.496, 0.498]
for c in (2.0, 1.5):
    system = build_system(make_example("example25", 60, b=2, c=c))
    entries = feasibility_scan(system, "spis", sorted(grid), 60)
    admissible = [e.r for e in entries if e.admissible]
    feasible = [e.r for e in entries if e.feasible_at_r]
    print(f"\nalternating b=2, c={c}: strict-admissible rates: {admissible or 'none'}")
    print(f"  (rates with any finite fit: {len(feasible)} of {len(entries)})")
