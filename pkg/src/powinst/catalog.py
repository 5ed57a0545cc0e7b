"""Built-in scalar coefficient families with known closed-form products.

Five families cover the standard positive and negative cases of power
instability analysis:

* ``constant``  -- A(n) = c:       T(m, n) = c**(m-n).  Uniformly power
  instable for c > 1 with rate 1/c.
* ``identity``  -- A(n) = 1:       no growth at all; refutes everything.
* ``example25`` -- A(n) = c * a_n with a_n alternating between b**(-n)
  (even n) and b**(n+1) (odd n), b >= 2, c > 0.  Grows without bound yet
  is never uniformly power instable; nonuniformly so when c > 1.  "Even"
  means n = 2k, so a_0 = b**0 = 1.
* ``example28`` -- A(n) = (n+3)/(n+2), i.e. T(m, n) = (m+2)/(n+2).
  Unbounded growth is necessary but not sufficient for uniform power
  instability: growth here is only polynomial.
* ``example29`` -- A(n) = e**-1, i.e. T(m, n) = e**(n-m).  Uniformly
  exponentially stable, yet still nonuniformly power instable with a
  fast-growing envelope.

``closed_form_log`` returns the analytically known log of |T(m, n)| so
tests can cross-check the product evaluation of the System against an
independent formula.
"""

from __future__ import annotations

import math

from .system import SystemSpec, formula_names

EXAMPLE_NAMES = formula_names()


def make_example(name: str, horizon: int, **params) -> SystemSpec:
    """SystemSpec for a named family, with parameter-range validation."""
    if name not in EXAMPLE_NAMES:
        raise ValueError(f"unknown example {name!r}; choose one of {EXAMPLE_NAMES}")
    if name == "constant":
        c = float(params.pop("c", 2.0))
        if c <= 0:
            raise ValueError(f"constant family needs c > 0, got {c}")
        used = {"c": c}
    elif name == "example25":
        b = float(params.pop("b", 2.0))
        c = float(params.pop("c", 2.0))
        if b < 2:
            raise ValueError(f"alternating family needs b >= 2, got {b}")
        if c <= 0:
            raise ValueError(f"alternating family needs c > 0, got {c}")
        used = {"b": b, "c": c}
    else:
        used = {}
    if params:
        raise ValueError(f"example {name!r} does not take parameters {sorted(params)}")
    return SystemSpec(kind="scalar_formula", horizon=horizon, formula=name, params=used)


def closed_form_log(name: str, params: dict, m: int, n: int) -> float:
    """log |T(m, n)| from the closed form, independent of the step product."""
    if m < n:
        raise ValueError(f"need m >= n, got m={m}, n={n}")
    if name == "constant":
        return (m - n) * math.log(params["c"])
    if name == "identity":
        return 0.0
    if name == "example28":
        return math.log(m + 2) - math.log(n + 2)
    if name == "example29":
        return float(n - m)
    if name == "example25":
        b, c = params["b"], params["c"]
        log_b = math.log(b)
        if m == n:
            amn = 0.0
        elif m % 2 == 0 and n % 2 == 0:
            amn = (m - n) * log_b
        elif m % 2 == 0 and n % 2 == 1:
            amn = m * log_b
        elif m % 2 == 1 and n % 2 == 0:
            amn = -n * log_b
        else:
            amn = 0.0
        return (m - n) * math.log(c) + amn
    raise ValueError(f"unknown example {name!r}")
