"""Lyapunov sequences: the summation characterization of instability.

A Lyapunov sequence L assigns each window pair (m, n) and state x a
value with L(n,n,x) = |x| and L(m,n,x) - a L(m-1,n,x) >= |T(m,n)x| for
some a > 1.  Existence of such a sequence with an upper bound
L <= beta(m) |T(m,n)x| is equivalent to a nonuniform certificate; both
directions are constructive and checkable.
"""

import numpy as np

from powinst import (
    LyapunovSequence,
    SequenceSpec,
    build_system,
    canonical_lyapunov,
    lyapunov_to_npis,
    make_example,
    phi_tau_to_npis,
    verify_certificate,
    verify_lyapunov_bound,
    verify_lyapunov_definition,
    verify_phi_tau,
    verify_unweighted_sum,
)

M = 30
system = build_system(make_example("example25", M, b=2, c=2))

# Forward direction: from the certificate {2**m, r=1/4} pick any weight
# d in (1, 1/r); the canonical sequence is the d-weighted tail sum and
# satisfies the recurrence L(m) = d L(m-1) + |T(m,n)x| on the nose.
r = 0.25
d = (1 + 1 / r) / 2  # midpoint of the admissible interval
L = LyapunovSequence.canonical(d)
print(f"canonical weight d = {d}")
print(f"L(3,0,x) log = {canonical_lyapunov(system, d, 3, 0).log_value:.4f}")

# The growth step holds for every a in (1, d)...
for a in np.linspace(1.0, d, 5)[1:-1]:
    rep = verify_lyapunov_definition(system, L, float(a), M)
    print(f"  growth step with a = {a:.3f}: {rep.verdict}")

# ...and fails once a passes d (here on the doubling system, where the
# failure is immediate and easy to read off).
doubling = build_system(make_example("constant", M, c=2))
Ld = LyapunovSequence.canonical(1.5)
rep = verify_lyapunov_definition(doubling, Ld, 2.0, M)
print(f"doubling system, a = 2.0 > d = 1.5: {rep.verdict} at "
      f"(m={rep.witness.m}, n={rep.witness.n})")

# The upper bound beta(m) = N(m)/(1 - d r) completes the forward leg.
beta = SequenceSpec.geometric(2).scaled(1 / (1 - d * r))
print(f"bound with beta = {beta.describe()}:",
      verify_lyapunov_bound(system, L, beta, M).verdict)

# Reverse direction: telescoping the growth step gives the two-sequence
# pair (phi, tau) = (beta, a**k), which chains back to a certificate.
a = (1 + d) / 2
phi, tau = lyapunov_to_npis(a, beta)
print("two-sequence check:", verify_phi_tau(system, phi, tau, M).verdict)
chained = phi_tau_to_npis(phi, tau, M)
print("chained certificate:", verify_certificate(system, chained, M).verdict)

# Corollary form: an unweighted running sum bounded by theta(m) times
# the terminal norm is an equivalent test.
print("\nunweighted sums:")
print("  doubling, theta = 2:",
      verify_unweighted_sum(doubling, SequenceSpec.constant(2), M).verdict)
identity = build_system(make_example("identity", M))
theta = SequenceSpec.from_values([m + 1 for m in range(M + 1)])
print("  identity, theta = m+1:",
      verify_unweighted_sum(identity, theta, M).verdict, "(margin 0 at n = 0)")
