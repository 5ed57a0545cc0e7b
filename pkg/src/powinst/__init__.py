"""Power-instability analysis for linear discrete-time systems.

Evaluates transition-operator growth for coefficient sequences
x_{n+1} = A(n) x_n, verifies instability certificates over finite
windows, converts between equivalent characterizations (two-sequence,
weighted power sums, Lyapunov sequences), searches for counterexample
witnesses, and fits best-feasible constants from window data.  All
magnitudes live in log domain.
"""

__version__ = "0.1.0"

from .logmag import LogMagnitude, log_add, log_sub
from .sequences import SequenceSpec
from .system import (
    System,
    SystemSpec,
    TestVectorSet,
    build_system,
    conorm,
)
from .catalog import EXAMPLE_NAMES, closed_form_log, make_example
from .report import MARGIN_EPS, VerificationReport, Witness
from .certificates import (
    Certificate,
    NoGrowthError,
    NpisCert,
    PhiTauCert,
    PisCert,
    RefutationEntry,
    SpisCert,
    SumCriterion,
    UpisCert,
    npis_to_phi_tau,
    phi_tau_to_npis,
    refute_uniform,
    sum_statistic,
    sum_to_certificate,
    verify_certificate,
    verify_phi_tau,
    verify_sum_criterion,
    verify_upis_phi,
)
from .lyapunov import (
    LyapunovSequence,
    canonical_lyapunov,
    lyapunov_to_npis,
    verify_lyapunov_bound,
    verify_lyapunov_definition,
    verify_unweighted_sum,
)
from .estimation import (
    GrowthProfile,
    ScanEntry,
    UpisEstimate,
    estimate_npis_envelope,
    estimate_upis,
    feasibility_scan,
    growth_profile,
)

__all__ = [
    "LogMagnitude",
    "log_add",
    "log_sub",
    "SequenceSpec",
    "System",
    "SystemSpec",
    "TestVectorSet",
    "build_system",
    "conorm",
    "EXAMPLE_NAMES",
    "closed_form_log",
    "make_example",
    "MARGIN_EPS",
    "VerificationReport",
    "Witness",
    "Certificate",
    "NoGrowthError",
    "NpisCert",
    "PhiTauCert",
    "PisCert",
    "RefutationEntry",
    "SpisCert",
    "SumCriterion",
    "UpisCert",
    "npis_to_phi_tau",
    "phi_tau_to_npis",
    "refute_uniform",
    "sum_statistic",
    "sum_to_certificate",
    "verify_certificate",
    "verify_phi_tau",
    "verify_sum_criterion",
    "verify_upis_phi",
    "LyapunovSequence",
    "canonical_lyapunov",
    "lyapunov_to_npis",
    "verify_lyapunov_bound",
    "verify_lyapunov_definition",
    "verify_unweighted_sum",
    "GrowthProfile",
    "ScanEntry",
    "UpisEstimate",
    "estimate_npis_envelope",
    "estimate_upis",
    "feasibility_scan",
    "growth_profile",
    "__version__",
]
