import math

import numpy as np
import pytest

from powinst import (
    NoGrowthError,
    NpisCert,
    PisCert,
    SequenceSpec,
    SpisCert,
    UpisCert,
    build_system,
    make_example,
    npis_to_phi_tau,
    phi_tau_to_npis,
    refute_uniform,
    verify_certificate,
    verify_phi_tau,
    verify_upis_phi,
)

from naive_oracle import check_gain_certificate


def system_of(name, horizon, **params):
    return build_system(make_example(name, horizon, **params))


# -- verify_certificate --------------------------------------------------------

def test_uniform_pass_with_zero_margin():
    rep = verify_certificate(system_of("constant", 20, c=2), UpisCert(N=1, r=0.5), 20)
    assert rep.passed
    assert abs(rep.worst_margin) < 1e-9
    assert rep.witness is None


def test_nonuniform_pass_alternating_family():
    rep = verify_certificate(
        system_of("example25", 40, b=2, c=2),
        NpisCert(N=SequenceSpec.geometric(2), r=0.25),
        40,
    )
    assert rep.passed
    assert rep.worst_margin >= -1e-9


def test_nonuniform_fail_decaying_family():
    # envelope e**(m**2) with rate e**-2 misses at the very first step
    rep = verify_certificate(
        system_of("example29", 10),
        NpisCert(N=SequenceSpec.exp_quadratic(1.0), r=math.exp(-2)),
        10,
    )
    assert not rep.passed
    assert (rep.witness.m, rep.witness.n, rep.witness.p) == (1, 0, 0)


def test_identity_fails_uniform_at_lag_three():
    rep = verify_certificate(system_of("identity", 20), UpisCert(N=4, r=0.5), 20)
    assert not rep.passed
    assert (rep.witness.m, rep.witness.n, rep.witness.p) == (3, 0, 0)


def test_parameter_rejection_before_sweep():
    system = system_of("constant", 10, c=2)
    with pytest.raises(ValueError):
        verify_certificate(system, UpisCert(N=0.5, r=0.5), 10)
    with pytest.raises(ValueError):
        verify_certificate(system, UpisCert(N=2, r=1.0), 10)
    with pytest.raises(ValueError):
        verify_certificate(system, SpisCert(N=2, r=0.5, s=2.0), 10)  # s >= 1/r
    with pytest.raises(ValueError):
        verify_certificate(system, PisCert(N=2, r=0.5, s=0.5), 10)
    with pytest.raises(ValueError):
        verify_certificate(
            system, NpisCert(N=SequenceSpec.geometric(0.5), r=0.5), 10
        )  # decreasing N


def test_window_exceeding_horizon_rejected():
    with pytest.raises(ValueError, match="horizon"):
        verify_certificate(system_of("constant", 10, c=2), UpisCert(N=1, r=0.5), 11)


def test_window_monotonicity_same_witness():
    for M in (10, 20, 35):
        rep = verify_certificate(system_of("identity", 40), UpisCert(N=4, r=0.5), M)
        assert not rep.passed
        assert (rep.witness.m, rep.witness.n, rep.witness.p) == (3, 0, 0)


def test_implication_lattice():
    system = system_of("constant", 25, c=2)
    # uniform pass -> nonuniform with constant envelope passes
    assert verify_certificate(system, UpisCert(N=1, r=0.5), 25).passed
    assert verify_certificate(system, NpisCert(N=SequenceSpec.constant(1), r=0.5), 25).passed
    # strong pass -> plain s-weighted pass -> nonuniform with N * s**m
    strong = SpisCert(N=1, r=0.5, s=1.5)
    assert verify_certificate(system, strong, 25).passed
    assert verify_certificate(system, PisCert(N=1, r=0.5, s=1.5), 25).passed
    assert verify_certificate(
        system, NpisCert(N=SequenceSpec.geometric(1.5, scale=1.0), r=0.5), 25
    ).passed


def test_oracle_agreement_on_catalog_systems():
    cases = [
        ("constant", {"c": 2}, UpisCert(N=2, r=0.6)),
        ("example28", {}, UpisCert(N=1, r=0.9)),
        ("example25", {"b": 2, "c": 2}, NpisCert(N=SequenceSpec.geometric(2), r=0.25)),
        ("example29", {}, NpisCert(N=SequenceSpec.exp_quadratic(1.0), r=math.exp(-2))),
    ]
    for name, params, cert in cases:
        system = system_of(name, 15, **params)
        factors = np.exp(system._step_logs).tolist()
        if isinstance(cert, UpisCert):
            n_at, r, s = (lambda m, N=cert.N: N), cert.r, 1.0
        else:
            n_at, r, s = (lambda m, seq=cert.N: math.exp(seq.log_at(m))), cert.r, 1.0
        verdict, witness = check_gain_certificate(factors, 15, n_at, r, s)
        rep = verify_certificate(system, cert, 15)
        assert rep.verdict == verdict
        if witness is not None:
            assert (rep.witness.m, rep.witness.n, rep.witness.p) == witness


# -- refute_uniform ---------------------------------------------------------------

def test_refute_polynomial_growth_family():
    entries = refute_uniform(system_of("example28", 40), [1.0], [0.9], 40)
    assert len(entries) == 1
    w = entries[0].witness
    # u(j) = (j+2) * 0.9**j peaks at j=7 and u(8) = u(7) exactly; the first
    # strict drop is at m=9 against n=7
    assert (w.m, w.n, w.p) == (9, 7, 0)


def test_refute_alternating_c_one():
    # c = 1: the pure rate mechanism (a_mn = 1 cases) fires first
    entries = refute_uniform(system_of("example25", 60, b=2, c=1), [1e6], [0.5], 60)
    w = entries[0].witness
    assert (w.m, w.n, w.p) == (21, 0, 0)


def test_refute_uniform_none_for_truly_uniform_system():
    entries = refute_uniform(system_of("constant", 60, c=2), [1.0, 100.0], [0.5, 0.6, 0.9], 60)
    assert all(e.witness is None for e in entries)


def test_refute_requires_nonempty_grids():
    with pytest.raises(ValueError):
        refute_uniform(system_of("constant", 10, c=2), [], [0.5], 10)


# -- phi / tau ---------------------------------------------------------------------

def test_phi_tau_pass_constant_system():
    rep = verify_phi_tau(
        system_of("constant", 20, c=2),
        SequenceSpec.constant(1),
        SequenceSpec.geometric(2),
        20,
    )
    assert rep.passed
    assert abs(rep.worst_margin) < 1e-9


def test_phi_tau_pass_identity_with_growing_phi():
    rep = verify_phi_tau(
        system_of("identity", 20),
        SequenceSpec.geometric(2),
        SequenceSpec.geometric(2),
        20,
    )
    assert rep.passed


def test_phi_tau_fail_identity_flat_phi():
    rep = verify_phi_tau(
        system_of("identity", 5),
        SequenceSpec.constant(1),
        SequenceSpec.geometric(2),
        5,
    )
    assert not rep.passed
    assert (rep.witness.m, rep.witness.n) == (1, 0)


def test_npis_to_phi_tau_values():
    phi, tau = npis_to_phi_tau(NpisCert(N=SequenceSpec.geometric(2), r=0.25))
    assert phi.log_at(3) == pytest.approx(3 * math.log(2))
    assert tau.log_at(3) == pytest.approx(3 * math.log(4))
    phi2, tau2 = npis_to_phi_tau(NpisCert(N=SequenceSpec.constant(1), r=0.5))
    assert phi2.log_at(5) == 0.0
    assert tau2.log_at(5) == pytest.approx(5 * math.log(2))


def test_npis_to_phi_tau_guarantee():
    cases = [
        ("example25", {"b": 2, "c": 2}, NpisCert(N=SequenceSpec.geometric(2), r=0.25)),
        ("constant", {"c": 2}, NpisCert(N=SequenceSpec.constant(1), r=0.5)),
        ("example29", {}, NpisCert(N=SequenceSpec.exp_linear(3.0), r=math.exp(-2))),
    ]
    for name, params, cert in cases:
        system = system_of(name, 25, **params)
        assert verify_certificate(system, cert, 25).passed
        phi, tau = npis_to_phi_tau(cert)
        assert verify_phi_tau(system, phi, tau, 25).passed


def test_phi_tau_to_npis_simple():
    cert = phi_tau_to_npis(SequenceSpec.constant(1), SequenceSpec.geometric(2), 20)
    assert cert.r == pytest.approx(0.5)
    for m in range(21):
        assert cert.N.log_at(m) == 0.0  # clamped at 1


def test_phi_tau_to_npis_no_growth():
    with pytest.raises(NoGrowthError):
        phi_tau_to_npis(SequenceSpec.constant(1), SequenceSpec.constant(1), 20)


def test_phi_tau_to_npis_quadratic_envelope():
    cert = phi_tau_to_npis(SequenceSpec.geometric(2), SequenceSpec.geometric(4), 20)
    assert cert.r == pytest.approx(0.25)
    for m in (0, 3, 10):
        assert cert.N.log_at(m) == pytest.approx(m * (m + 1) * math.log(2), rel=1e-12)


def test_phi_tau_to_npis_guarantee():
    # system where the pair (phi, tau) = (2**m, 4**k) passes: constant c=4
    system = system_of("constant", 20, c=4)
    phi, tau = SequenceSpec.geometric(2), SequenceSpec.geometric(4)
    assert verify_phi_tau(system, phi, tau, 20).passed
    cert = phi_tau_to_npis(phi, tau, 20)
    assert verify_certificate(system, cert, 20).passed


# -- uniform phi variant --------------------------------------------------------------

def test_upis_phi_pass_constant_system():
    rep = verify_upis_phi(system_of("constant", 20, c=2), SequenceSpec.geometric(2), 20)
    assert rep.passed
    assert abs(rep.worst_margin) < 1e-9


def test_upis_phi_zero_shift_never_witnesses():
    # at shift 0 the inequality reads phi(0) <= 1; phi starting at 1 ties
    system = system_of("constant", 20, c=2)
    rep = verify_upis_phi(system, SequenceSpec.geometric(2), 20)
    assert rep.passed


def test_upis_phi_fail_slow_phi_on_polynomial_growth():
    # phi(g) = 1 + g/100 outruns (g+n+2)/(n+2) only once n > 98
    system = system_of("example28", 140)
    phi = SequenceSpec.from_log_table([math.log(1 + g / 100) for g in range(141)])
    rep = verify_upis_phi(system, phi, 140)
    assert not rep.passed
    assert (rep.witness.m, rep.witness.n) == (100, 99)


def test_upis_phi_requires_growth():
    with pytest.raises(ValueError, match="grow"):
        verify_upis_phi(system_of("constant", 10, c=2), SequenceSpec.constant(1), 10)
