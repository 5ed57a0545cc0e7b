"""JSON and CSV wire formats.

Conventions:

* System specs mirror the SystemSpec fields.  Scalar tables store their
  per-step log magnitudes as decimal strings so a round trip loses no
  precision; matrix steps store row-major real entries.
* Certificates are tagged with a "kind" discriminator and carry every
  real parameter as a decimal string.
* Reports serialize via VerificationReport.as_dict (margins as decimal
  strings, witnesses as index objects).
* Growth profiles and envelopes export to CSV for plotting.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math

import numpy as np

from .certificates import (
    NpisCert,
    PhiTauCert,
    PisCert,
    SpisCert,
    SumCriterion,
    UpisCert,
)
from .lyapunov import LyapunovSequence
from .sequences import SequenceSpec
from .system import SystemSpec


def _num(x: float) -> str:
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return repr(float(x))


def _parse_num(s) -> float:
    return float(s)


# ---------------------------------------------------------------------------
# system specs
# ---------------------------------------------------------------------------

def system_spec_to_dict(spec: SystemSpec) -> dict:
    out = {"kind": spec.kind, "horizon": spec.horizon}
    if spec.kind == "scalar_formula":
        out["formula"] = spec.formula
        out["params"] = {k: float(v) for k, v in sorted(spec.params.items())}
    elif spec.kind == "scalar_table":
        out["log_table"] = [_num(v) for v in spec.log_table]
    else:
        mats = np.asarray(spec.matrices, dtype=float)
        out["dimension"] = spec.dimension
        out["norm"] = spec.norm
        out["sample_count"] = spec.sample_count
        out["seed"] = spec.seed
        out["matrices"] = [m.reshape(-1).tolist() for m in mats]
    return out


def system_spec_from_dict(doc: dict) -> SystemSpec:
    kind = doc.get("kind")
    horizon = int(doc.get("horizon", 0))
    if kind == "scalar_formula":
        return SystemSpec(
            kind=kind,
            horizon=horizon,
            formula=doc["formula"],
            params={k: float(v) for k, v in doc.get("params", {}).items()},
        )
    if kind == "scalar_table":
        table = tuple(_parse_num(v) for v in doc["log_table"])
        return SystemSpec(kind=kind, horizon=horizon, log_table=table)
    if kind == "matrix_table":
        dim = int(doc["dimension"])
        mats = tuple(
            tuple(tuple(float(row[i * dim + j]) for j in range(dim)) for i in range(dim))
            for row in doc["matrices"]
        )
        return SystemSpec(
            kind=kind,
            horizon=horizon,
            matrices=mats,
            dimension=dim,
            norm=doc.get("norm", "two"),
            sample_count=int(doc.get("sample_count", 8)),
            seed=int(doc.get("seed", 0)),
        )
    raise ValueError(f"unknown system kind {kind!r}")


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

def sequence_to_dict(seq: SequenceSpec) -> dict:
    out = {"form": seq.form}
    if seq.form == "constant":
        out["kappa"] = _num(seq.kappa)
    elif seq.form == "geometric":
        out["base"] = _num(seq.base)
        out["scale"] = _num(seq.scale)
    elif seq.form in ("exp_linear", "exp_quadratic"):
        out["alpha"] = _num(seq.alpha)
        out["scale"] = _num(seq.scale)
    else:
        out["log_values"] = [_num(v) for v in seq.log_table]
    return out


def sequence_from_dict(doc: dict) -> SequenceSpec:
    form = doc.get("form")
    if form == "constant":
        return SequenceSpec.constant(_parse_num(doc["kappa"]))
    if form == "geometric":
        return SequenceSpec.geometric(_parse_num(doc["base"]), _parse_num(doc.get("scale", 1.0)))
    if form == "exp_linear":
        return SequenceSpec.exp_linear(_parse_num(doc["alpha"]), _parse_num(doc.get("scale", 1.0)))
    if form == "exp_quadratic":
        return SequenceSpec.exp_quadratic(_parse_num(doc["alpha"]), _parse_num(doc.get("scale", 1.0)))
    if form == "table":
        return SequenceSpec.from_log_table([_parse_num(v) for v in doc["log_values"]])
    raise ValueError(f"unknown sequence form {form!r}")


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def certificate_to_dict(cert) -> dict:
    if isinstance(cert, UpisCert):
        return {"kind": "upis", "N": _num(cert.N), "r": _num(cert.r)}
    if isinstance(cert, NpisCert):
        return {"kind": "npis", "N": sequence_to_dict(cert.N), "r": _num(cert.r)}
    if isinstance(cert, PisCert):
        return {"kind": "pis", "N": _num(cert.N), "r": _num(cert.r), "s": _num(cert.s)}
    if isinstance(cert, SpisCert):
        return {"kind": "spis", "N": _num(cert.N), "r": _num(cert.r), "s": _num(cert.s)}
    if isinstance(cert, PhiTauCert):
        return {
            "kind": "phi_tau",
            "phi": sequence_to_dict(cert.phi),
            "tau": sequence_to_dict(cert.tau),
        }
    if isinstance(cert, SumCriterion):
        out = {"kind": "sum", "sum_kind": cert.kind, "p": _num(cert.p), "d": _num(cert.d)}
        if cert.theta is not None:
            out["theta"] = sequence_to_dict(cert.theta)
        if cert.D is not None:
            out["D"] = _num(cert.D)
        if cert.c is not None:
            out["c"] = _num(cert.c)
        return out
    raise TypeError(f"cannot serialize {type(cert).__name__}")


def certificate_from_dict(doc: dict):
    kind = doc.get("kind")
    if kind == "upis":
        return UpisCert(N=_parse_num(doc["N"]), r=_parse_num(doc["r"]))
    if kind == "npis":
        n_doc = doc["N"]
        seq = sequence_from_dict(n_doc) if isinstance(n_doc, dict) else SequenceSpec.constant(_parse_num(n_doc))
        return NpisCert(N=seq, r=_parse_num(doc["r"]))
    if kind == "pis":
        return PisCert(N=_parse_num(doc["N"]), r=_parse_num(doc["r"]), s=_parse_num(doc["s"]))
    if kind == "spis":
        return SpisCert(N=_parse_num(doc["N"]), r=_parse_num(doc["r"]), s=_parse_num(doc["s"]))
    if kind == "phi_tau":
        return PhiTauCert(phi=sequence_from_dict(doc["phi"]), tau=sequence_from_dict(doc["tau"]))
    if kind == "sum":
        theta = sequence_from_dict(doc["theta"]) if "theta" in doc else None
        return SumCriterion(
            kind=doc["sum_kind"],
            p=_parse_num(doc["p"]),
            d=_parse_num(doc["d"]),
            theta=theta,
            D=_parse_num(doc["D"]) if "D" in doc else None,
            c=_parse_num(doc["c"]) if "c" in doc else None,
        )
    raise ValueError(f"unknown certificate kind {kind!r}")


# ---------------------------------------------------------------------------
# lyapunov tables / csv exports
# ---------------------------------------------------------------------------

def lyapunov_table_to_csv(L: LyapunovSequence, path) -> None:
    if L.kind != "table":
        raise ValueError("only table Lyapunov sequences are exportable")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "n", "vector_id", "log_value"])
        for (m, n, vid), val in sorted(L.table.items()):
            writer.writerow([m, n, vid, _num(val)])


def profile_to_csv(profile, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "g_log", "m", "n", "p"])
        for k, (g, w) in enumerate(zip(profile.g_log, profile.argmax)):
            writer.writerow([k, _num(float(g)), w.m, w.n, w.p])


def envelope_to_csv(seq: SequenceSpec, path) -> None:
    if seq.form != "table":
        raise ValueError("envelope export expects a table sequence")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "N_log"])
        for m, v in enumerate(seq.log_table):
            writer.writerow([m, _num(v)])


# ---------------------------------------------------------------------------
# canonical dumps / digests
# ---------------------------------------------------------------------------

def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()
