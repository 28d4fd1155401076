"""Command-line interface: state files in, JSON reports out.

State files are UTF-8 JSON with exactly one of two forms::

    {"lambda": [l0, l1, l2, l3, l4], "phi": 0.0, "label": "optional"}
    {"amplitudes": [[re, im], ...8 pairs...], "label": "optional"}

Normalization is enforced; pass --normalize to rescale (the applied factor
is echoed in the report).  All commands print a single JSON report to
stdout (``scan`` prints one JSON record per line) and communicate failure
through exit codes:

    0  success
    2  parse error (unreadable file, malformed JSON, invalid values)
    3  classification gap
    4  wrong input form for the command
    5  witness expectation mismatch
    6  internal construction failure
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, linalg
from .bell import (
    BellReport,
    SampleStatistics,
    bell_value,
    lhv_assignments,
    lhv_bell_value,
    lhv_hardy_pattern_assignments,
    lhv_minimum,
    sample_statistics,
)
from .errors import (
    ClassificationGapError,
    ConstructionFailureError,
    Hardy3QError,
    NoWitnessError,
)
from .hardy import HardyCertificate, WitnessConstruction, build_witness
from .observables import MeasurementSettings
from .states import CanonicalState, classify, normalized_canonical
from .visibility import FAMILIES, GridAxis, OptimizationResult, minimize_bell, scan_family

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_GAP = 3
EXIT_FORM = 4
EXIT_EXPECTATION = 5
EXIT_CONSTRUCTION = 6

SEED_ENV_VAR = "HARDY3Q_SEED"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class StateSpec:
    """Parsed state file: raw echo plus the realized state objects."""

    raw: dict
    canonical: CanonicalState | None
    ket: np.ndarray
    label: str | None
    normalization_factor: float | None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def load_state_spec(path: str, normalize: bool = False) -> StateSpec:
    """Read and validate a state file ('-' reads stdin)."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path!r}: {exc}", EXIT_PARSE) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON in {path!r}: {exc}", EXIT_PARSE) from exc
    if not isinstance(raw, dict):
        raise CliError("state file must contain a JSON object", EXIT_PARSE)

    has_canonical = "lambda" in raw
    has_amplitudes = "amplitudes" in raw
    if has_canonical == has_amplitudes:
        raise CliError(
            "state file must contain exactly one of 'lambda' or 'amplitudes'",
            EXIT_PARSE,
        )
    label = raw.get("label")
    if label is not None and not isinstance(label, str):
        raise CliError("'label' must be a string", EXIT_PARSE)

    factor: float | None = None
    if has_canonical:
        lams = raw["lambda"]
        phi = raw.get("phi", 0.0)
        if not isinstance(lams, list) or len(lams) != 5:
            raise CliError("'lambda' must be a list of five numbers", EXIT_PARSE)
        try:
            if normalize:
                state, factor = normalized_canonical([float(x) for x in lams], float(phi))
            else:
                state = CanonicalState(tuple(float(x) for x in lams), float(phi))
        except (ValueError, Hardy3QError) as exc:
            raise CliError(f"invalid canonical parameters: {exc}", EXIT_PARSE) from exc
        return StateSpec(raw, state, state.to_ket(), label, factor)

    amps = raw["amplitudes"]
    if not isinstance(amps, list) or len(amps) != 8:
        raise CliError("'amplitudes' must be a list of eight [re, im] pairs", EXIT_PARSE)
    try:
        vec = np.array([complex(float(p[0]), float(p[1])) for p in amps])
    except (TypeError, ValueError, IndexError) as exc:
        raise CliError(f"invalid amplitude entry: {exc}", EXIT_PARSE) from exc
    nrm = float(np.linalg.norm(vec))
    if normalize:
        if nrm <= 0.0 or not math.isfinite(nrm):
            raise CliError("cannot normalize all-zero amplitudes", EXIT_PARSE)
        vec = vec / nrm
        factor = nrm
    elif abs(nrm - 1.0) > 1e-9:
        raise CliError(
            f"amplitudes are not normalized (norm {nrm!r}); pass --normalize to rescale",
            EXIT_PARSE,
        )
    return StateSpec(raw, None, linalg.ket(vec), label, factor)


def require_canonical(spec: StateSpec, command: str) -> CanonicalState:
    if spec.canonical is None:
        raise CliError(f"{command} requires canonical form input", EXIT_FORM)
    return spec.canonical


# ---------------------------------------------------------------------------
# payload builders
# ---------------------------------------------------------------------------

def _ket_payload(k: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in k]


def _settings_payload(settings: MeasurementSettings) -> dict:
    return {
        "pairs": [
            {
                "u_plus": _ket_payload(pair.u.plus_ket),
                "d_plus": _ket_payload(pair.d.plus_ket),
            }
            for pair in settings.pairs
        ]
    }


def _certificate_payload(cert: HardyCertificate) -> dict:
    return {
        "probabilities": [float(p) for p in cert.probabilities],
        "satisfied": bool(cert.satisfied),
        "zero_tolerance": float(cert.zero_tolerance),
        "settings": _settings_payload(cert.settings),
    }


def _bell_payload(report: BellReport) -> dict:
    return {
        "probabilities": [float(p) for p in report.probabilities],
        "bell_value": float(report.bell_value),
        "lhv_bound_satisfied": bool(report.lhv_bound_satisfied),
    }


def _optimization_payload(result: OptimizationResult) -> dict:
    return {
        "best_value": float(result.best_value),
        "threshold_visibility": (
            None
            if result.threshold_visibility is None
            else float(result.threshold_visibility)
        ),
        "violation_found": bool(result.violation_found),
        "starts": int(result.starts),
        "converged": bool(result.converged),
        "seed": int(result.seed),
        "best_settings": _settings_payload(result.best_settings),
        "best_angles": [float(a) for a in result.best_angles],
    }


def _sample_payload(stats: SampleStatistics) -> dict:
    return {
        "frequencies": [float(f) for f in stats.frequencies],
        "standard_errors": [float(e) for e in stats.standard_errors],
        "shots": int(stats.shots),
        "seed": int(stats.seed),
    }


def _base_report(command: str, args: argparse.Namespace, spec: StateSpec | None) -> dict:
    report: dict = {
        "command": command,
        "version": __version__,
        "seed": int(getattr(args, "seed", 0)),
        "options": {
            key: value
            for key, value in sorted(vars(args).items())
            if key not in ("func", "path") and value is not None
        },
    }
    if spec is not None:
        report["input"] = spec.raw
        report["label"] = spec.label
        if spec.normalization_factor is not None:
            report["normalization_factor"] = float(spec.normalization_factor)
    return report


def _witness_payload(built: WitnessConstruction, psi: np.ndarray) -> dict:
    report = bell_value(psi, built.settings)
    return {
        "class": built.state_class.value,
        "certificate": _certificate_payload(built.certificate),
        "bell": _bell_payload(report),
        "used_fallback": bool(built.used_fallback),
        "note": built.note,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_classify(args: argparse.Namespace) -> tuple[dict, int]:
    spec = load_state_spec(args.path, normalize=args.normalize)
    if spec.canonical is None:
        raise CliError("classification requires canonical form", EXIT_FORM)
    try:
        cls = classify(spec.canonical, eps=args.eps)
    except ClassificationGapError as exc:
        raise CliError(str(exc), EXIT_GAP) from exc
    report = _base_report("classify", args, spec)
    report["class"] = cls.value
    report["major_class"] = cls.major
    return report, EXIT_OK


def _cmd_witness(args: argparse.Namespace) -> tuple[dict, int]:
    spec = load_state_spec(args.path, normalize=args.normalize)
    state = require_canonical(spec, "witness")
    cls = classify(state)
    report = _base_report("witness", args, spec)
    report["class"] = cls.value
    if cls.major == "A":
        report["witness"] = None
        report["note"] = "no witness: fully product state"
        report["expectation_met"] = True
        return report, EXIT_OK
    try:
        built = build_witness(state, cls, zero_tol=args.tol, seed=args.seed)
    except ConstructionFailureError as exc:
        raise CliError(str(exc), EXIT_CONSTRUCTION) from exc
    payload = _witness_payload(built, spec.ket)
    report.update(payload)
    violated = payload["bell"]["bell_value"] < 0.0
    if cls.major == "C":
        expectation_met = (not built.certificate.satisfied) and violated
    else:
        expectation_met = built.certificate.satisfied and violated
    report["expectation_met"] = bool(expectation_met)
    return report, EXIT_OK if expectation_met else EXIT_EXPECTATION


def _cmd_optimize(args: argparse.Namespace) -> tuple[dict, int]:
    spec = load_state_spec(args.path, normalize=args.normalize)
    result = minimize_bell(spec.ket, starts=args.starts, seed=args.seed, tol=args.tol)
    report = _base_report("optimize", args, spec)
    if spec.canonical is not None:
        report["class"] = classify(spec.canonical).value
    report["optimization"] = _optimization_payload(result)
    if not result.violation_found:
        report["note"] = "no violation found"
    return report, EXIT_OK


def _cmd_lhv(args: argparse.Namespace) -> tuple[dict, int]:
    minimum, argmins = lhv_minimum()
    pattern_hits = lhv_hardy_pattern_assignments()
    report = _base_report("lhv", args, None)
    report["assignment_count"] = 64
    report["minimum"] = int(minimum)
    report["minimizer_count"] = len(argmins)
    report["hardy_pattern_possible"] = bool(pattern_hits)
    if args.verbose:
        report["assignments"] = [
            {"assignment": list(a), "bell_value": int(lhv_bell_value(a))}
            for a in lhv_assignments()
        ]
        report["minimizers"] = [list(a) for a in argmins]
    return report, EXIT_OK


def _cmd_sample(args: argparse.Namespace) -> tuple[dict, int]:
    spec = load_state_spec(args.path, normalize=args.normalize)
    state = require_canonical(spec, "sample")
    cls = classify(state)
    report = _base_report("sample", args, spec)
    report["class"] = cls.value
    if cls.major == "A":
        report["sample"] = None
        report["note"] = "no witness settings: fully product state"
        return report, EXIT_OK
    try:
        built = build_witness(state, cls, seed=args.seed)
    except ConstructionFailureError as exc:
        raise CliError(str(exc), EXIT_CONSTRUCTION) from exc
    stats = sample_statistics(spec.ket, built.settings, shots=args.shots, seed=args.seed)
    report["certificate"] = _certificate_payload(built.certificate)
    report["sample"] = _sample_payload(stats)
    return report, EXIT_OK


def _parse_grid(values: list[str]) -> list[GridAxis]:
    axes = []
    for spec in values:
        try:
            name, rest = spec.split("=", 1)
            start, stop, steps = rest.split(":")
            axes.append(GridAxis(name.strip(), float(start), float(stop), int(steps)))
        except ValueError as exc:
            raise CliError(
                f"grid spec {spec!r} must look like name=start:stop:steps", EXIT_PARSE
            ) from exc
    return axes


def _cmd_scan(args: argparse.Namespace) -> tuple[dict | None, int]:
    if args.family not in FAMILIES:
        raise CliError(
            f"unknown family {args.family!r}; choose from {sorted(FAMILIES)}",
            EXIT_PARSE,
        )
    axes = _parse_grid(args.grid)
    for record in scan_family(
        FAMILIES[args.family],
        axes,
        optimize=args.optimize,
        starts=args.starts,
        seed=args.seed,
    ):
        record["family"] = args.family
        print(json.dumps(record))
    return None, EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardy3q",
        description=(
            "Classify three-qubit pure states, build Hardy-type nonlocality "
            "witnesses, and quantify Bell-inequality violation."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_seed=True):
        p.add_argument("path", help="state file path, or '-' for stdin")
        p.add_argument(
            "--normalize",
            action="store_true",
            help="rescale unnormalized input (the factor is echoed)",
        )
        if with_seed:
            p.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("classify", help="print the classification-table row")
    add_common(p, with_seed=False)
    p.add_argument("--eps", type=float, default=1e-9, help="zero/equality tolerance")
    p.set_defaults(func=_cmd_classify, seed=0)

    p = sub.add_parser("witness", help="class-appropriate settings and certificate")
    add_common(p)
    p.add_argument("--tol", type=float, default=1e-9, help="zero-probability tolerance")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("optimize", help="minimize B and report threshold visibility")
    add_common(p)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-10, help="optimizer convergence tolerance")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("lhv", help="enumerate all 64 deterministic assignments")
    p.add_argument("--verbose", action="store_true", help="list every assignment")
    p.set_defaults(func=_cmd_lhv, seed=0)

    p = sub.add_parser("sample", help="finite-shot frequencies at the witness settings")
    add_common(p)
    p.add_argument("--shots", type=int, default=100000)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("scan", help="scan a named state family over a grid")
    p.add_argument("--family", required=True, help=f"one of {sorted(FAMILIES)}")
    p.add_argument(
        "--grid",
        action="append",
        required=True,
        help="axis spec name=start:stop:steps (repeatable)",
    )
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--starts", type=int, default=16)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=_cmd_scan)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except CliError as exc:
        print(json.dumps({"error": str(exc), "exit_code": exc.code}), file=sys.stderr)
        return exc.code
    except NoWitnessError as exc:  # pragma: no cover - defensive
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_OK
    except Hardy3QError as exc:
        print(json.dumps({"error": str(exc), "exit_code": EXIT_CONSTRUCTION}), file=sys.stderr)
        return EXIT_CONSTRUCTION
    if report is not None:
        print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
