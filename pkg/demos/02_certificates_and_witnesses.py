"""Certificate verification and counterexample witnesses.

A certificate claims |T(n,p)x| <= N(m) r**(m-n) |T(m,p)x| for every
p <= n <= m and every state x.  Verification sweeps the whole window in
log domain and reports either the worst margin or the first violating
index tuple.
"""

import math

from powinst import (
    NpisCert,
    SequenceSpec,
    UpisCert,
    build_system,
    make_example,
    refute_uniform,
    verify_certificate,
)

# Positive case: the alternating family (b=2, c=2) carries the
# nonuniform certificate N(m) = 2**m, r = 1/4.  The margin is exactly
# zero along the odd-even index pairs, so the verdict rides on the
# 1e-9 log tolerance.
system = build_system(make_example("example25", 40, b=2, c=2))
cert = NpisCert(N=SequenceSpec.geometric(2), r=0.25)
report = verify_certificate(system, cert, 40)
print("alternating family, N(m)=2^m, r=1/4:")
print(report.render_text())

# Negative case: no constant N works for this system.  A grid of
# uniform certificates is refuted point by point; every witness lands
# in one of the two coefficient cases that drive the divergence
# arguments (a_mn = b**-n with n even, or a_mn = 1 on odd pairs).
print("\nuniform refutation grid (N x r):")
entries = refute_uniform(system, [1.0, 1e2, 1e6], [0.1, 0.5, 0.9], 200)
for e in entries:
    w = e.witness
    shape = "odd-odd" if w.n % 2 == 1 else ("m=n+1" if w.m == w.n + 1 else "b**-n case")
    print(f"  N={e.N:<8g} r={e.r:<4g} witness (m={w.m}, n={w.n})  [{shape}]")

# The identity system grows not at all, so even a generous uniform
# certificate fails as soon as N r**(m-n) dips below 1.
identity = build_system(make_example("identity", 20))
report = verify_certificate(identity, UpisCert(N=4, r=0.5), 20)
print(f"\nidentity system vs N=4, r=1/2: {report.verdict} at "
      f"(m={report.witness.m}, n={report.witness.n}); need 4 * 2**-(m-n) >= 1")

# The decaying family e**(n-m) is stable, yet still nonuniformly power
# instable -- with the right envelope.  The quadratic envelope e**(m^2)
# fails immediately; the linear-exponent envelope e**(3m) is the
# smallest one that works at r = e**-2 (see demo 05).
decaying = build_system(make_example("example29", 60))
bad = NpisCert(N=SequenceSpec.exp_quadratic(1.0), r=math.exp(-2))
good = NpisCert(N=SequenceSpec.exp_linear(3.0), r=math.exp(-2))
print(f"\ndecaying family, envelope e**(m^2): "
      f"{verify_certificate(decaying, bad, 60).verdict} "
      f"(witness {verify_certificate(decaying, bad, 60).witness.m, 0, 0})")
print(f"decaying family, envelope e**(3m):  "
      f"{verify_certificate(decaying, good, 60).verdict}")
