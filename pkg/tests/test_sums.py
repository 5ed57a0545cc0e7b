import math

import numpy as np
import pytest

from powinst import (
    NpisCert,
    PisCert,
    SequenceSpec,
    SpisCert,
    SumCriterion,
    UpisCert,
    build_system,
    make_example,
    sum_statistic,
    sum_to_certificate,
    verify_certificate,
    verify_sum_criterion,
)


def system_of(name, horizon, **params):
    return build_system(make_example(name, horizon, **params))


# -- sum_statistic -----------------------------------------------------------

def test_single_term_at_equal_indices():
    system = system_of("example28", 10)
    assert sum_statistic(system, 1.0, 2.0, 4, 4).value == pytest.approx(1.0)


def test_weighted_sum_constant_system():
    system = system_of("constant", 10, c=2)
    # 1.5**2 * 1 + 1.5 * 2 + 1 * 4 = 9.25
    assert sum_statistic(system, 1.0, 1.5, 2, 0).value == pytest.approx(9.25, rel=1e-12)


def test_weighted_sum_decaying_system_squared():
    system = system_of("example29", 10)
    expected = 4.0 + math.exp(-2)
    assert sum_statistic(system, 2.0, 2.0, 1, 0).value == pytest.approx(expected, rel=1e-12)


def test_sum_statistic_rejects_bad_parameters():
    system = system_of("constant", 10, c=2)
    with pytest.raises(ValueError):
        sum_statistic(system, 0.0, 2.0, 3, 1)
    with pytest.raises(ValueError):
        sum_statistic(system, 1.0, 1.0, 3, 1)
    with pytest.raises(ValueError):
        sum_statistic(system, 1.0, 2.0, 1, 3)


# -- verify_sum_criterion ------------------------------------------------------

def test_uniform_sum_pass_constant_system():
    # geometric tail sum_j (1.5/2)**j < 4
    cert = SumCriterion(kind="upis", p=1.0, d=1.5, D=4.0)
    rep = verify_sum_criterion(system_of("constant", 30, c=2), cert, 30)
    assert rep.passed


def test_nonuniform_sum_pass_alternating_family():
    # envelope theta(m) = 2**(m+1) from the passing {2**m, 1/4} certificate at d=2
    cert = SumCriterion(kind="npis", p=1.0, d=2.0, theta=SequenceSpec.geometric(2, scale=2))
    rep = verify_sum_criterion(system_of("example25", 30, b=2, c=2), cert, 30)
    assert rep.passed


def test_uniform_sum_fail_identity():
    cert = SumCriterion(kind="upis", p=1.0, d=2.0, D=4.0)
    rep = verify_sum_criterion(system_of("identity", 5), cert, 5)
    assert not rep.passed
    # first failure where the weighted count exceeds D: sum at (m, n) = (2, 0)
    # is 4 + 2 + 1 = 7 > 4; at (1, 0) it is 3 <= 4
    assert (rep.witness.m, rep.witness.n) == (2, 0)


def test_min_bound_per_m_at_least_one():
    cert = SumCriterion(kind="upis", p=1.0, d=1.5, D=4.0)
    for name, params in (("constant", {"c": 2}), ("example25", {"b": 2, "c": 2}), ("identity", {})):
        rep = verify_sum_criterion(system_of(name, 20, **params), cert, 20)
        bounds = np.array(rep.extras["min_bound_log_per_m"])
        assert np.all(bounds >= -1e-12)


def test_sum_parameter_rejection():
    system = system_of("constant", 10, c=2)
    with pytest.raises(ValueError):
        verify_sum_criterion(system, SumCriterion(kind="upis", p=-1.0, d=2.0, D=2.0), 10)
    with pytest.raises(ValueError):
        verify_sum_criterion(system, SumCriterion(kind="upis", p=1.0, d=0.9, D=2.0), 10)
    with pytest.raises(ValueError):
        verify_sum_criterion(system, SumCriterion(kind="pis", p=1.0, d=2.0, D=2.0, c=2.5), 10)
    with pytest.raises(ValueError):
        verify_sum_criterion(system, SumCriterion(kind="spis", p=1.0, d=3.0, D=2.0, c=2.0), 10)
    with pytest.raises(ValueError):
        verify_sum_criterion(system, SumCriterion(kind="npis", p=1.0, d=2.0), 10)


# -- sum_to_certificate -----------------------------------------------------------

def test_conversion_values():
    npis = sum_to_certificate(
        SumCriterion(kind="npis", p=1.0, d=2.0, theta=SequenceSpec.geometric(2, scale=2))
    )
    assert isinstance(npis, NpisCert)
    assert npis.r == pytest.approx(0.5)
    assert npis.N.log_at(3) == pytest.approx(4 * math.log(2))

    upis = sum_to_certificate(SumCriterion(kind="upis", p=1.0, d=1.5, D=4.0))
    assert isinstance(upis, UpisCert)
    assert (upis.N, upis.r) == (4.0, pytest.approx(2 / 3))

    spis = sum_to_certificate(SumCriterion(kind="spis", p=1.0, d=5.0, c=2.0, D=3.0))
    assert isinstance(spis, SpisCert)
    assert (spis.N, spis.r, spis.s) == (3.0, pytest.approx(0.4), 2.0)
    assert spis.s < 1 / spis.r  # c**2 < d forces the strict bound

    pis = sum_to_certificate(SumCriterion(kind="pis", p=1.0, d=3.0, c=2.0, D=2.0))
    assert isinstance(pis, PisCert)
    assert (pis.r, pis.s) == (pytest.approx(2 / 3), 2.0)


def test_conversion_guarantee_on_passing_sums():
    cases = [
        ("constant", {"c": 2}, SumCriterion(kind="upis", p=1.0, d=1.5, D=4.0)),
        (
            "example25",
            {"b": 2, "c": 2},
            SumCriterion(kind="npis", p=1.0, d=2.0, theta=SequenceSpec.geometric(2, scale=2)),
        ),
        ("constant", {"c": 8}, SumCriterion(kind="spis", p=1.0, d=3.0, c=1.5, D=4.0)),
        ("constant", {"c": 8}, SumCriterion(kind="pis", p=0.5, d=3.0, c=2.0, D=9.0)),
    ]
    for name, params, cert in cases:
        system = system_of(name, 25, **params)
        assert verify_sum_criterion(system, cert, 25).passed, (name, cert)
        converted = sum_to_certificate(cert)
        assert verify_certificate(system, converted, 25).passed, (name, converted)
