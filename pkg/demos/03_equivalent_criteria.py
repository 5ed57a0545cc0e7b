"""Equivalent characterizations: two-sequence form and weighted sums.

The gain inequality has two reformulations that are often easier to
check or to produce:

* two sequences phi, tau with tau(m-n) |x| <= phi(m) |T(m,n)x|;
* a weighted power sum sum_k d**(p(m-k)) |T(k,n)x|**p bounded by
  theta(m)**p |T(m,n)x|**p.

Converters move between the forms constructively, and a conversion of
a passing check always passes its target check on the same window.
"""

from powinst import (
    NpisCert,
    SequenceSpec,
    SumCriterion,
    build_system,
    make_example,
    npis_to_phi_tau,
    phi_tau_to_npis,
    sum_to_certificate,
    verify_certificate,
    verify_phi_tau,
    verify_sum_criterion,
)

M = 30
system = build_system(make_example("example25", M, b=2, c=2))
cert = NpisCert(N=SequenceSpec.geometric(2), r=0.25)
print("start: certificate N(m)=2^m, r=1/4 ->", verify_certificate(system, cert, M).verdict)

# certificate -> (phi, tau): phi = N, tau(k) = r**-k
phi, tau = npis_to_phi_tau(cert)
print(f"two-sequence form: phi={phi.describe()}, tau={tau.describe()} ->",
      verify_phi_tau(system, phi, tau, M).verdict)

# (phi, tau) -> certificate: chaining with the smallest step where tau
# exceeds 1.  The produced envelope is a worst-case table, so it is far
# larger than the original N(m) -- correct, just not tight.
back = phi_tau_to_npis(phi, tau, M)
print(f"chained back: r={back.r:.4f}, N(10) has log {back.N.log_at(10):.2f} "
      f"(original: {cert.N.log_at(10):.2f}) ->",
      verify_certificate(system, back, M).verdict)

# certificate -> weighted sum: for any d in (1, 1/r) the sum telescopes
# into theta(m) = N(m) / (1 - (r d)**p)**(1/p).
r, d, p = 0.25, 2.0, 1.0
theta = cert.N.scaled(1.0 / (1.0 - (r * d) ** p))
sum_cert = SumCriterion(kind="npis", p=p, d=d, theta=theta)
print(f"\nweighted sum with d={d}, p={p}, theta={theta.describe()} ->",
      verify_sum_criterion(system, sum_cert, M).verdict)

# weighted sum -> certificate: keep only the k = n term.
converted = sum_to_certificate(sum_cert)
print(f"sum converted back: N={converted.N.describe()}, r={converted.r} ->",
      verify_certificate(system, converted, M).verdict)

# The s-weighted variants insert a factor s**n; their sum criteria use a
# growth base c, and c**2 < d makes the strict variant's s < 1/r bound
# automatic after conversion.
strong_sum = SumCriterion(kind="spis", p=1.0, d=5.0, c=2.0, D=3.0)
strong = sum_to_certificate(strong_sum)
print(f"\nstrict variant from sums: N={strong.N}, r={strong.r}, s={strong.s} "
      f"(s < 1/r = {1 / strong.r})")
