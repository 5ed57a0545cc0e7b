"""Command-line front end.

Subcommands mirror the library surface:

    verify     check a certificate (uniform / nonuniform / s-weighted /
               two-sequence / weighted-sum) against a system
    refute     grid search for uniform-certificate counterexamples
    estimate   fit constants from window data (upis | npis | pis | spis)
    lyapunov   check a Lyapunov sequence (canonical or CSV table)
    sum        check a weighted power-sum criterion, with bound export
    profile    growth profile g(k) with per-lag witnesses
    catalog    list built-in systems or emit one as JSON

Exit codes: 0 = PASS / estimation success, 1 = FAIL verdict or
infeasible estimate, 2 = invalid input.  Reports go to stdout (JSON by
default), diagnostics to stderr.  Identical configuration and seed give
byte-identical JSON except for the timestamp field, which is excluded
from the content digest.  POWINST_THREADS (or --threads) sets sweep
parallelism for matrix systems.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .catalog import EXAMPLE_NAMES, make_example
from .certificates import (
    NoGrowthError,
    NpisCert,
    PhiTauCert,
    PisCert,
    SpisCert,
    SumCriterion,
    UpisCert,
    verify_certificate,
    verify_phi_tau,
    verify_sum_criterion,
    refute_uniform,
    worker_count,
)
from .estimation import (
    DEFAULT_K_MIN,
    RATE_FEASIBILITY_CUT,
    SPIS_ADMISSIBILITY_MARGIN,
    estimate_npis_envelope,
    estimate_upis,
    feasibility_scan,
    growth_profile,
)
from .lyapunov import (
    LyapunovSequence,
    verify_lyapunov_bound,
    verify_lyapunov_definition,
)
from .sequences import SequenceSpec
from .serialization import (
    certificate_from_dict,
    certificate_to_dict,
    digest,
    envelope_to_csv,
    profile_to_csv,
    sequence_to_dict,
    system_spec_from_dict,
    system_spec_to_dict,
)
from .system import build_system


class InputError(Exception):
    """Malformed command input; maps to exit code 2."""


# ---------------------------------------------------------------------------
# small parsers
# ---------------------------------------------------------------------------

def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    return parts


def parse_sequence(text: str) -> SequenceSpec:
    text = text.strip()
    if "(" not in text:
        try:
            return SequenceSpec.constant(float(text))
        except ValueError as exc:
            raise InputError(f"cannot parse sequence {text!r}: {exc}") from None
    name, _, rest = text.partition("(")
    if not rest.endswith(")"):
        raise InputError(f"unbalanced parentheses in sequence {text!r}")
    args = [a.strip() for a in rest[:-1].split(",") if a.strip()]
    try:
        if name == "constant":
            return SequenceSpec.constant(float(args[0]))
        if name == "geometric":
            return SequenceSpec.geometric(float(args[0]), float(args[1]) if len(args) > 1 else 1.0)
        if name == "exp_linear":
            return SequenceSpec.exp_linear(float(args[0]), float(args[1]) if len(args) > 1 else 1.0)
        if name == "exp_quadratic":
            return SequenceSpec.exp_quadratic(float(args[0]), float(args[1]) if len(args) > 1 else 1.0)
        if name == "table":
            doc = json.loads(Path(args[0]).read_text())
            return SequenceSpec.from_log_table([float(v) for v in doc])
        raise InputError(f"unknown sequence form {name!r}")
    except (IndexError, ValueError, OSError) as exc:
        raise InputError(f"cannot parse sequence {text!r}: {exc}") from None


def parse_inline_certificate(text: str):
    kind, sep, rest = text.partition(":")
    if not sep:
        raise InputError(f"inline certificate needs kind:key=value,... got {text!r}")
    fields = {}
    for part in _split_top_level(rest):
        key, sep, value = part.partition("=")
        if not sep:
            raise InputError(f"bad certificate field {part!r}")
        fields[key.strip()] = value.strip()

    def num(key):
        if key not in fields:
            raise InputError(f"certificate kind {kind!r} needs field {key!r}")
        try:
            return float(fields[key])
        except ValueError:
            raise InputError(f"field {key!r} must be a number, got {fields[key]!r}") from None

    def seq(key):
        if key not in fields:
            raise InputError(f"certificate kind {kind!r} needs field {key!r}")
        return parse_sequence(fields[key])

    try:
        if kind == "upis":
            return UpisCert(N=num("N"), r=num("r"))
        if kind == "npis":
            return NpisCert(N=seq("N"), r=num("r"))
        if kind == "pis":
            return PisCert(N=num("N"), r=num("r"), s=num("s"))
        if kind == "spis":
            return SpisCert(N=num("N"), r=num("r"), s=num("s"))
        if kind == "phi_tau":
            return PhiTauCert(phi=seq("phi"), tau=seq("tau"))
        if kind == "sum":
            return SumCriterion(
                kind=fields.get("kind", ""),
                p=num("p"),
                d=num("d"),
                theta=seq("theta") if "theta" in fields else None,
                D=num("D") if "D" in fields else None,
                c=num("c") if "c" in fields else None,
            )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    raise InputError(f"unknown certificate kind {kind!r}")


def load_certificate(source: str):
    if ":" in source and not Path(source).exists():
        return parse_inline_certificate(source)
    try:
        doc = json.loads(Path(source).read_text())
        return certificate_from_dict(doc)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot load certificate from {source!r}: {exc}") from None


def parse_grid(text: str) -> list[float]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InputError(f"grid range needs start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise InputError("grid step must be positive")
        out = []
        v = start
        while v <= stop + 1e-12:
            out.append(round(v, 12))
            v += step
        return out
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse grid {text!r}: {exc}") from None


def parse_params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise InputError(f"--param needs key=value, got {pair!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"parameter {key!r} must be numeric, got {value!r}") from None
    return out


def build_cli_system(args, window: int):
    if getattr(args, "example", None) and getattr(args, "system", None):
        raise InputError("give exactly one system source (--example or --system)")
    if getattr(args, "example", None):
        horizon = max(window, 1)
        try:
            spec = make_example(args.example, horizon, **parse_params(args.param or []))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    elif getattr(args, "system", None):
        try:
            spec = system_spec_from_dict(json.loads(Path(args.system).read_text()))
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot load system from {args.system!r}: {exc}") from None
        if window > spec.horizon:
            raise InputError(f"window {window} exceeds system horizon {spec.horizon}")
        if getattr(args, "seed", None) is not None and spec.kind == "matrix_table":
            spec = dataclasses.replace(spec, seed=args.seed)
    else:
        raise InputError("a system source is required (--example or --system)")
    try:
        return build_system(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def emit(args, command: str, payload: dict, extra_inputs: dict | None = None) -> None:
    if getattr(args, "format", "json") == "text" and "report_text" in payload:
        print(payload["report_text"])
        return
    payload = {k: v for k, v in payload.items() if k != "report_text"}
    doc = {
        "tool": "powinst",
        "version": __version__,
        "command": command,
        "window": getattr(args, "window", None),
        "seed": getattr(args, "seed", None),
        "inputs": extra_inputs or {},
    }
    doc.update(payload)
    doc["digest"] = digest(doc)
    doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    print(json.dumps(doc, indent=2))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    system = build_cli_system(args, args.window)
    cert = load_certificate(args.cert)
    threads = worker_count(args.threads)
    try:
        if isinstance(cert, PhiTauCert):
            report = verify_phi_tau(system, cert.phi, cert.tau, args.window)
        elif isinstance(cert, SumCriterion):
            report = verify_sum_criterion(system, cert, args.window)
        else:
            report = verify_certificate(system, cert, args.window, threads=threads)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    payload = {
        "certificate": certificate_to_dict(cert),
        "report": report.as_dict(),
        "report_text": report.render_text(),
    }
    emit(args, "verify", payload, _input_digests(system, cert))
    return 0 if report.passed else 1


def cmd_refute(args) -> int:
    system = build_cli_system(args, args.window)
    try:
        entries = refute_uniform(system, parse_grid(args.n_grid), parse_grid(args.r_grid), args.window)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rows = [
        {
            "N": e.N,
            "r": e.r,
            "witness": e.witness.as_dict() if e.witness else None,
            "worst_margin": repr(e.worst_margin),
        }
        for e in entries
    ]
    refuted = sum(1 for e in entries if e.witness is not None)
    text = "\n".join(
        f"N={row['N']:<12g} r={row['r']:<6g} witness={row['witness']}" for row in rows
    )
    payload = {
        "grid_points": len(rows),
        "refuted": refuted,
        "entries": rows,
        "report_text": text,
    }
    emit(args, "refute", payload, _input_digests(system, None))
    return 0


def cmd_estimate(args) -> int:
    system = build_cli_system(args, args.window)
    provenance = {
        "window": args.window,
        "k_min": args.k_min,
        "feasibility_cut": RATE_FEASIBILITY_CUT,
        "spis_margin": SPIS_ADMISSIBILITY_MARGIN,
        "flags": list(growth_profile(system, min(args.window, system.horizon)).notes),
    }
    if args.kind == "upis":
        profile = growth_profile(system, args.window)
        try:
            est = estimate_upis(profile, k_min=args.k_min)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if args.csv:
            profile_to_csv(profile, args.csv)
        if est.feasible:
            payload = {
                "feasible": True,
                "certificate": certificate_to_dict(UpisCert(N=est.N, r=est.r)),
                "provenance": provenance,
                "report_text": f"feasible: N={est.N:.12g} r={est.r:.12g} (window {est.window})",
            }
            emit(args, "estimate", payload, _input_digests(system, None))
            return 0
        payload = {
            "feasible": False,
            "reason": est.reason,
            "r_hat": None if est.r is None else repr(est.r),
            "provenance": provenance,
            "report_text": f"infeasible: {est.reason} (r_hat={est.r})",
        }
        emit(args, "estimate", payload, _input_digests(system, None))
        return 1
    if args.kind == "npis":
        if args.r is None:
            raise InputError("estimate --kind npis needs --r")
        try:
            envelope = estimate_npis_envelope(system, args.r, args.window)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if args.csv:
            envelope_to_csv(envelope, args.csv)
        cert = NpisCert(N=envelope, r=args.r)
        payload = {
            "feasible": True,
            "certificate": certificate_to_dict(cert),
            "provenance": provenance,
            "report_text": f"envelope with {len(envelope.log_table)} entries at r={args.r:g}",
        }
        emit(args, "estimate", payload, _input_digests(system, None))
        return 0
    # pis / spis feasibility scan
    if not args.r_grid:
        raise InputError(f"estimate --kind {args.kind} needs --r-grid")
    try:
        entries = feasibility_scan(system, args.kind, parse_grid(args.r_grid), args.window, k_min=args.k_min)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rows = [
        {
            "r": e.r,
            "feasible_at_r": e.feasible_at_r,
            "s_hat": None if e.s_hat is None else repr(e.s_hat),
            "N_hat": None if e.N_hat is None else repr(e.N_hat),
            "admissible": bool(e.admissible),
            "reason": e.reason,
        }
        for e in entries
    ]
    admissible = [r for r in rows if r["admissible"]]
    payload = {
        "kind": args.kind,
        "entries": rows,
        "admissible_count": len(admissible),
        "provenance": provenance,
        "report_text": "\n".join(
            f"r={row['r']:<8g} feasible={row['feasible_at_r']} s_hat={row['s_hat']} admissible={row['admissible']}"
            for row in rows
        ),
    }
    emit(args, "estimate", payload, _input_digests(system, None))
    return 0 if admissible else 1


def cmd_lyapunov(args) -> int:
    system = build_cli_system(args, args.window)
    if args.table:
        try:
            L = LyapunovSequence.from_csv(args.table)
        except (OSError, ValueError) as exc:
            raise InputError(str(exc)) from None
    else:
        if args.d is None:
            raise InputError("lyapunov needs --d for the canonical sequence (or --table)")
        if args.d <= args.a:
            raise InputError(f"canonical sequence needs d > a, got d={args.d}, a={args.a}")
        try:
            L = LyapunovSequence.canonical(args.d)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        definition = verify_lyapunov_definition(system, L, args.a, args.window)
        bound = None
        if args.beta:
            beta = parse_sequence(args.beta)
            bound = verify_lyapunov_bound(system, L, beta, args.window)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    passed = definition.passed and (bound is None or bound.passed)
    payload = {
        "definition": definition.as_dict(),
        "bound": bound.as_dict() if bound else None,
        "report_text": definition.render_text()
        + ("\n--- bound ---\n" + bound.render_text() if bound else ""),
    }
    emit(args, "lyapunov", payload, _input_digests(system, None))
    return 0 if passed else 1


def cmd_sum(args) -> int:
    system = build_cli_system(args, args.window)
    cert = SumCriterion(
        kind=args.kind,
        p=args.p,
        d=args.d,
        theta=parse_sequence(args.theta) if args.theta else None,
        D=args.D_const,
        c=args.c,
    )
    try:
        report = verify_sum_criterion(system, cert, args.window)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.export_bounds:
        import csv as _csv

        with open(args.export_bounds, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["m", "min_bound_log"])
            for m, v in enumerate(report.extras["min_bound_log_per_m"]):
                writer.writerow([m, repr(v)])
    payload = {
        "certificate": certificate_to_dict(cert),
        "report": report.as_dict(),
        "report_text": report.render_text(),
    }
    emit(args, "sum", payload, _input_digests(system, cert))
    return 0 if report.passed else 1


def cmd_profile(args) -> int:
    system = build_cli_system(args, args.window)
    profile = growth_profile(system, args.window)
    if args.csv:
        profile_to_csv(profile, args.csv)
    rows = [
        {"k": k, "g_log": repr(float(g)), "witness": w.as_dict()}
        for k, (g, w) in enumerate(zip(profile.g_log, profile.argmax))
    ]
    payload = {
        "exact": profile.exact,
        "profile": rows,
        "notes": list(profile.notes),
        "report_text": "\n".join(f"k={r['k']:<5} g_log={r['g_log']}" for r in rows),
    }
    emit(args, "profile", payload, _input_digests(system, None))
    return 0


def cmd_catalog(args) -> int:
    if not args.example:
        listing = {
            "examples": {
                "constant": {"params": {"c": "> 0"}},
                "identity": {"params": {}},
                "example25": {"params": {"b": ">= 2", "c": "> 0"}},
                "example28": {"params": {}},
                "example29": {"params": {}},
            }
        }
        print(json.dumps(listing, indent=2))
        return 0
    try:
        spec = make_example(args.example, args.horizon, **parse_params(args.param or []))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(json.dumps(system_spec_to_dict(spec), indent=2))
    return 0


def _input_digests(system, cert) -> dict:
    out = {"system": digest(system_spec_to_dict(system.spec))}
    if cert is not None:
        out["certificate"] = digest(certificate_to_dict(cert))
    return out


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_system_args(sub) -> None:
    sub.add_argument("--example", choices=sorted(EXAMPLE_NAMES), help="built-in system")
    sub.add_argument("--param", action="append", metavar="KEY=VALUE", help="system parameter")
    sub.add_argument("--system", help="SystemSpec JSON file")
    sub.add_argument("--window", type=int, default=40, help="index bound M (default 40)")
    sub.add_argument("--seed", type=int, default=None, help="test-vector seed override (matrix)")
    sub.add_argument("--format", choices=["json", "text"], default="json")
    sub.add_argument("--threads", type=int, default=None, help="sweep workers (default POWINST_THREADS or 1)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powinst",
        description="Power-instability analysis of linear discrete-time systems.",
    )
    parser.add_argument("--version", action="version", version=f"powinst {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify", help="verify a certificate on a window")
    _add_system_args(p)
    p.add_argument("--cert", required=True, help="inline kind:key=value,... or JSON file")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("refute", help="grid search for uniform counterexamples")
    _add_system_args(p)
    p.add_argument("--n-grid", required=True, help="N values: comma list or start:stop:step")
    p.add_argument("--r-grid", required=True, help="r values: comma list or start:stop:step")
    p.set_defaults(func=cmd_refute)

    p = subs.add_parser("estimate", help="fit certificate constants from window data")
    _add_system_args(p)
    p.add_argument("--kind", choices=["upis", "npis", "pis", "spis"], required=True)
    p.add_argument("--r", type=float, default=None, help="rate for the npis envelope")
    p.add_argument("--r-grid", default=None, help="rates for pis/spis feasibility scan")
    p.add_argument("--k-min", type=int, default=DEFAULT_K_MIN, help="smallest lag used for rate fits")
    p.add_argument("--csv", default=None, help="export g(k) or N(m) to CSV")
    p.set_defaults(func=cmd_estimate)

    p = subs.add_parser("lyapunov", help="verify a Lyapunov sequence")
    _add_system_args(p)
    p.add_argument("--a", type=float, required=True, help="growth-step factor (> 1)")
    p.add_argument("--d", type=float, default=None, help="canonical weight (> a)")
    p.add_argument("--beta", default=None, help="upper-bound sequence")
    p.add_argument("--table", default=None, help="CSV table (m, n, vector_id, log_value)")
    p.set_defaults(func=cmd_lyapunov)

    p = subs.add_parser("sum", help="verify a weighted power-sum criterion")
    _add_system_args(p)
    p.add_argument("--kind", choices=["npis", "upis", "pis", "spis"], required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--theta", default=None, help="bound sequence (npis kind)")
    p.add_argument("--D-const", type=float, default=None, dest="D_const", help="constant bound D")
    p.add_argument("--c", type=float, default=None, help="growth base for pis/spis kinds")
    p.add_argument("--export-bounds", default=None, help="CSV of per-m minimal feasible bounds")
    p.set_defaults(func=cmd_sum)

    p = subs.add_parser("profile", help="growth profile g(k)")
    _add_system_args(p)
    p.add_argument("--csv", default=None, help="export profile to CSV")
    p.set_defaults(func=cmd_profile)

    p = subs.add_parser("catalog", help="list built-in systems or emit one as JSON")
    p.add_argument("--example", choices=sorted(EXAMPLE_NAMES), default=None)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--horizon", type=int, default=40)
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoGrowthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
