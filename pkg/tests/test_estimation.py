import math

import numpy as np
import pytest

from powinst import (
    SequenceSpec,
    NpisCert,
    build_system,
    estimate_npis_envelope,
    estimate_upis,
    feasibility_scan,
    growth_profile,
    make_example,
    verify_certificate,
)

from naive_oracle import growth_envelope


def system_of(name, horizon, **params):
    return build_system(make_example(name, horizon, **params))


# -- growth profile ------------------------------------------------------------

def test_profile_constant_system():
    profile = growth_profile(system_of("constant", 20, c=2), 20)
    for k in range(21):
        assert profile.g_log[k] == pytest.approx(-k * math.log(2), abs=1e-12)
    assert profile.g_log[0] == 0.0
    assert profile.exact


def test_profile_identity():
    profile = growth_profile(system_of("identity", 20), 20)
    assert np.allclose(profile.g_log, 0.0)


def test_profile_polynomial_growth_attains_at_window_edge():
    M = 40
    profile = growth_profile(system_of("example28", M), M)
    for k in (1, 5, 20):
        expected = math.log((M - k + 2) / (M + 2))
        assert profile.g_log[k] == pytest.approx(expected, abs=1e-12)
        assert profile.argmax[k].n == M - k


def test_profile_matches_naive_envelope():
    system = system_of("example25", 15, b=2, c=1.5)
    factors = np.exp(system._step_logs).tolist()
    naive = growth_envelope(factors, 15)
    profile = growth_profile(system, 15)
    for k in range(16):
        assert profile.g_log[k] == pytest.approx(math.log(naive[k]), rel=1e-9)


# -- uniform estimation ------------------------------------------------------------

def test_estimate_constant_system():
    est = estimate_upis(growth_profile(system_of("constant", 20, c=2), 20))
    assert est.feasible
    assert est.r == pytest.approx(0.5, rel=1e-12)
    assert est.N == pytest.approx(1.0, rel=1e-9)


def test_estimate_identity_no_decay():
    est = estimate_upis(growth_profile(system_of("identity", 20), 20))
    assert not est.feasible
    assert est.reason == "NO_DECAY"


def test_estimate_alternating_family_no_decay():
    est = estimate_upis(growth_profile(system_of("example25", 40, b=2, c=2), 40))
    assert not est.feasible  # gains grow with the window edge


def test_estimate_window_too_small():
    with pytest.raises(ValueError, match="too small"):
        estimate_upis(growth_profile(system_of("constant", 6, c=2), 6), k_min=5)


def test_estimates_self_certify():
    for name, params in (("constant", {"c": 2}), ("constant", {"c": 1.3}), ("example29", {})):
        system = system_of(name, 30, **params)
        est = estimate_upis(growth_profile(system, 30))
        if name == "example29":
            assert not est.feasible  # gains grow: no uniform rate
            continue
        assert est.feasible
        assert verify_certificate(system, est.certificate(), 30).passed


def test_estimate_rerun_is_bit_identical():
    system = system_of("example28", 40)
    a = estimate_upis(growth_profile(system, 40))
    b = estimate_upis(growth_profile(system, 40))
    assert (a.feasible, a.N, a.r, a.reason) == (b.feasible, b.N, b.r, b.reason)


# -- nonuniform envelope --------------------------------------------------------------

def test_envelope_decaying_family_exact_linear():
    system = system_of("example29", 20)
    env = estimate_npis_envelope(system, math.exp(-2), 20)
    for m in range(21):
        assert env.log_at(m) == pytest.approx(3.0 * m, abs=1e-9)


def test_envelope_identity():
    env = estimate_npis_envelope(system_of("identity", 10), 0.5, 10)
    for m in range(11):
        assert env.log_at(m) == pytest.approx(m * math.log(2), abs=1e-12)


def test_envelope_constant_system_is_flat_one():
    env = estimate_npis_envelope(system_of("constant", 10, c=2), 0.5, 10)
    for m in range(11):
        assert env.log_at(m) == pytest.approx(0.0, abs=1e-12)


def test_envelope_is_nondecreasing_and_at_least_one():
    for name, params, r in (
        ("example25", {"b": 2, "c": 2}, 0.25),
        ("example28", {}, 0.5),
        ("example29", {}, math.exp(-2)),
    ):
        env = estimate_npis_envelope(system_of(name, 30, **params), r, 30)
        env.check_nondecreasing(30)
        env.check_at_least_one(30)


def test_envelope_monotone_in_rate():
    # shrinking r can only raise the required envelope, pointwise
    system = system_of("example25", 25, b=2, c=2)
    env_lo = estimate_npis_envelope(system, 0.2, 25)
    env_hi = estimate_npis_envelope(system, 0.3, 25)
    for m in range(26):
        assert env_lo.log_at(m) >= env_hi.log_at(m) - 1e-12


def test_envelope_self_certifies():
    for name, params, r in (
        ("example25", {"b": 2, "c": 2}, 0.25),
        ("example28", {}, 0.5),
        ("example29", {}, math.exp(-2)),
    ):
        system = system_of(name, 25, **params)
        env = estimate_npis_envelope(system, r, 25)
        assert verify_certificate(system, NpisCert(N=env, r=r), 25).passed


def test_envelope_rejects_bad_rate():
    with pytest.raises(ValueError):
        estimate_npis_envelope(system_of("identity", 10), 1.0, 10)


# -- feasibility scan ------------------------------------------------------------------

def test_scan_constant_system_unit_s():
    entries = feasibility_scan(system_of("constant", 40, c=2), "spis", [0.5, 0.6, 0.9], 40)
    for e in entries:
        assert e.feasible_at_r
        assert e.s_hat == pytest.approx(1.0, abs=1e-9)
        assert e.N_hat == pytest.approx(1.0, rel=1e-9)
        assert e.admissible


def test_scan_screens_rates_below_base_slice_decay():
    # the n = 0 slice of the constant system decays exactly at rate 1/2
    entries = feasibility_scan(system_of("constant", 40, c=2), "pis", [0.2], 40)
    assert not entries[0].feasible_at_r
    assert "BASE_RATE" in entries[0].reason


def test_scan_rejects_bad_inputs():
    system = system_of("constant", 20, c=2)
    with pytest.raises(ValueError):
        feasibility_scan(system, "upis", [0.5], 20)
    with pytest.raises(ValueError):
        feasibility_scan(system, "pis", [], 20)
    with pytest.raises(ValueError):
        feasibility_scan(system, "pis", [1.5], 20)


def test_scan_outputs_self_certify():
    system = system_of("example25", 60, b=2, c=2)
    entries = feasibility_scan(system, "spis", [0.496, 0.498], 60)
    for e in entries:
        assert e.feasible_at_r and e.admissible
        cert = e.certificate("spis")
        assert verify_certificate(system, cert, 60).passed
    pis_entries = feasibility_scan(system_of("example25", 60, b=2, c=1.5), "pis", [0.7, 0.8], 60)
    for e in pis_entries:
        assert e.feasible_at_r
        assert verify_certificate(system_of("example25", 60, b=2, c=1.5), e.certificate("pis"), 60).passed
