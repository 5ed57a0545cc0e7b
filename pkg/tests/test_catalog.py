import math

import pytest

from powinst import build_system, closed_form_log, make_example


def test_parameter_validation():
    with pytest.raises(ValueError, match="b >= 2"):
        make_example("example25", 10, b=1.5, c=1)
    with pytest.raises(ValueError, match="c > 0"):
        make_example("example25", 10, b=2, c=0)
    with pytest.raises(ValueError, match="c > 0"):
        make_example("constant", 10, c=-1)
    with pytest.raises(ValueError, match="unknown example"):
        make_example("mystery", 10)
    with pytest.raises(ValueError, match="parameters"):
        make_example("example28", 10, c=2)


def test_alternating_closed_form_point():
    # b=2, c=2 at (m, n) = (5, 2): m odd, n even -> c**3 * b**-2 = 2
    system = build_system(make_example("example25", 10, b=2, c=2))
    assert system.state_norm(5, 2).value == pytest.approx(2.0, abs=1e-12)


def test_polynomial_closed_form_point():
    system = build_system(make_example("example28", 20))
    assert system.state_norm(10, 0).value == pytest.approx(6.0, abs=1e-12)


def test_identity_is_flat():
    system = build_system(make_example("identity", 20))
    for m, n in ((0, 0), (7, 3), (20, 0)):
        assert system.state_norm(m, n).value == 1.0


def test_decaying_family_steps_are_exact():
    system = build_system(make_example("example29", 30))
    assert system.state_norm(17, 4).log_value == -13.0  # sums of exact -1.0 steps


@pytest.mark.parametrize("b", [2, 3])
@pytest.mark.parametrize("c", [0.5, 1, 1.5, 2, 3])
def test_product_matches_closed_form_alternating(b, c):
    system = build_system(make_example("example25", 25, b=b, c=c))
    for n in range(26):
        for m in range(n, 26):
            closed = closed_form_log("example25", {"b": b, "c": c}, m, n)
            assert system.state_norm_log(m, n) == pytest.approx(closed, abs=1e-10)


@pytest.mark.parametrize("name,params", [
    ("constant", {"c": 2}),
    ("identity", {}),
    ("example28", {}),
    ("example29", {}),
])
def test_product_matches_closed_form_other_families(name, params):
    system = build_system(make_example(name, 25, **params))
    for n in range(26):
        for m in range(n, 26):
            closed = closed_form_log(name, params, m, n)
            assert system.state_norm_log(m, n) == pytest.approx(closed, abs=1e-10)
