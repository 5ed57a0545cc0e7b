"""Transition operators and growth profiles.

Builds the catalog systems, evaluates state norms in log domain, and
computes the lag envelope g(k) = max gain at lag k, the summary that
every estimator downstream consumes.
"""

import math

from powinst import build_system, growth_profile, make_example

# A system is a coefficient sequence A(n); states evolve by
# x_{m} = A(m-1) ... A(n) x_n.  The "constant" family with c = 2 doubles
# every step, so |T(m, 0) x| = 2**m.
doubling = build_system(make_example("constant", 40, c=2))
print("doubling system, |T(m,0)x|:")
for m in (0, 10, 40):
    print(f"  m={m:<3}  log|T| = {doubling.state_norm(m, 0).log_value:.4f}"
          f"  (= {m} * log 2 = {m * math.log(2):.4f})")

# The alternating family grows like b**m on even steps and collapses on
# odd ones; its one-step coefficients reach 2**41 on this window, which
# is why norms are carried as logs rather than raw floats.
alternating = build_system(make_example("example25", 40, b=2, c=2))
print("\nalternating system, one-step coefficient sizes:")
for j in (0, 1, 39):
    print(f"  A({j}): log = {alternating.state_norm(j + 1, j).log_value:+.4f}")

# Pair gains compare an intermediate state against a later one:
# gain(m, n, p) = sup_x |T(n,p)x| / |T(m,p)x|.  Small gains mean strong
# growth between n and m; gains above 1 mean the state shrank.
print("\npair gains:")
print(f"  doubling   gain(5,3,0)  = {doubling.pair_gain(5, 3, 0).value:.4f}  (2**-2)")
decaying = build_system(make_example("example29", 40))
print(f"  decaying   gain(3,1,0)  = {decaying.pair_gain(3, 1, 0).value:.4f}  (e**2)")

# The growth profile folds the whole triple sweep into one curve per lag.
print("\nlag envelopes g(k), k = 0..6:")
for name, system in (("doubling", doubling), ("alternating", alternating)):
    profile = growth_profile(system, 40)
    row = "  ".join(f"{v:+.2f}" for v in profile.g_log[:7])
    print(f"  {name:<12} log g = {row}")
print("\nthe alternating profile grows with k: no uniform rate exists,")
print("even though the system itself grows without bound.")
