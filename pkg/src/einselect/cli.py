"""Command-line surface.

Subcommands:
  sweep      drive a state through a channel family and emit the trajectory
  emergence  closed-form emergence time and strength for an X state
  maximize   maximal classical correlation and argmax basis of one state
  verify     run the randomized property suites
  analyze    ingest a matrix file, sweep it, optionally add Monte Carlo bands

Exit codes: 0 success, 1 invalid input, 2 data-quality failure (ingested
matrix too unphysical), 3 verification suite reported failures.

All outputs are deterministic for a fixed command line (and seed, where one
applies): no timestamps, no machine identifiers, stable float formatting.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from .correlations import (
    ProjectiveBasis,
    classical_correlation,
    clamp_discord,
    maximize_classical_correlation,
    mutual_information,
)
from .dynamics import CHANNEL_FAMILIES, emergence_time, sweep
from .errors import (
    DataQualityError,
    InvalidInputError,
    InvalidStateError,
    OptimizationError,
)
from .matrixio import (
    emergence_payload,
    emit_report,
    outcome_payload,
    parse_matrix_file,
    trajectory_payload,
)
from .montecarlo import RunConfig, monte_carlo_bands
from .qstate import DensityMatrix, XStateParams, make_x_state, x_state_params
from .verify import SUITES, verify_lemma1, verify_remark, verify_theorem1, verify_theorem2

SUITE_CHOICES = ("theorem1", "theorem2", "lemma1", "remark", "all")


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; this surface uses 1."""

    def error(self, message):
        raise InvalidInputError(message)


def _parse_state_flag(text: str) -> DensityMatrix:
    parts = text.split(",")
    if len(parts) != 4:
        raise InvalidInputError(
            f"--state needs four comma-separated numbers c,b,z,w; got {text!r}"
        )
    try:
        c, b, z, w = (float(tok) for tok in parts)
    except ValueError as exc:
        raise InvalidInputError(f"--state contains a non-number: {text!r}") from exc
    return make_x_state(XStateParams(c=c, b=b, z=z, w=w))


def _load_state(args) -> DensityMatrix:
    if getattr(args, "state", None) and getattr(args, "matrix_file", None):
        raise InvalidInputError("give either --state or --matrix-file, not both")
    if getattr(args, "state", None):
        return _parse_state_flag(args.state)
    if getattr(args, "matrix_file", None):
        return parse_matrix_file(args.matrix_file).state
    raise InvalidInputError("one of --state or --matrix-file is required")


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_state_flags(sub) -> None:
    sub.add_argument("--state", help="X-state parameters as c,b,z,w (e.g. 0.4,0.1,0.1,0.4)")
    sub.add_argument("--matrix-file", help="structured-text density matrix file")


def _add_output_flags(sub) -> None:
    sub.add_argument("--out", help="output path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_channel_flags(sub) -> None:
    sub.add_argument("--channel", choices=CHANNEL_FAMILIES, default="pd")
    sub.add_argument(
        "--theta", type=float, default=0.0,
        help="pointer-basis polar angle for --channel pointer (default sigma_z)",
    )
    sub.add_argument(
        "--phi", type=float, default=0.0,
        help="pointer-basis azimuthal angle for --channel pointer",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="einselect",
        description=(
            "Classical correlations, quantum discord, and pointer-basis "
            "emergence for a decohering two-qubit system-apparatus pair."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sw = subs.add_parser("sweep", help="trajectory over channel strength")
    _add_state_flags(sw)
    _add_channel_flags(sw)
    sw.add_argument("--gamma", type=float, default=1.0)
    sw.add_argument("--grid", type=int, default=201, help="number of strength points")
    sw.add_argument("--seed", type=int, default=0, help="accepted for interface uniformity; sweeps are deterministic")
    _add_output_flags(sw)
    sw.set_defaults(func=_cmd_sweep)

    em = subs.add_parser("emergence", help="closed-form emergence time of an X state")
    _add_state_flags(em)
    em.add_argument("--gamma", type=float, default=1.0)
    _add_output_flags(em)
    em.set_defaults(func=_cmd_emergence)

    mx = subs.add_parser("maximize", help="maximal classical correlation of one state")
    _add_state_flags(mx)
    _add_output_flags(mx)
    mx.set_defaults(func=_cmd_maximize)

    vf = subs.add_parser("verify", help="randomized property suites")
    vf.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    vf.add_argument("--trials", type=int, default=None, help="override the suite's default trial count")
    vf.add_argument("--seed", type=int, default=None, help="override the suite's default seed")
    vf.add_argument("--grid", type=int, default=201, help="strength points for the remark suite")
    _add_output_flags(vf)
    vf.set_defaults(func=_cmd_verify)

    an = subs.add_parser("analyze", help="full report for an ingested matrix file")
    an.add_argument("--matrix-file", required=True)
    _add_channel_flags(an)
    an.add_argument("--gamma", type=float, default=1.0)
    an.add_argument("--grid", type=int, default=201)
    an.add_argument(
        "--samples", type=int, default=0,
        help="Monte Carlo samples for uncertainty bands (0 = point estimate only; "
        "needs a std block in the matrix file)",
    )
    an.add_argument("--seed", type=int, default=0)
    _add_output_flags(an)
    an.set_defaults(func=_cmd_analyze)

    return parser


def _grid_from_count(count: int) -> np.ndarray:
    if count < 2:
        raise InvalidInputError(f"--grid needs at least 2 points, got {count}")
    return np.linspace(0.0, 1.0, count)


def _pointer_basis(args) -> Optional[ProjectiveBasis]:
    if getattr(args, "channel", None) == "pointer":
        return ProjectiveBasis(args.theta, args.phi)
    return None


def _cmd_sweep(args) -> int:
    rho = _load_state(args)
    report = sweep(
        rho,
        args.channel,
        _grid_from_count(args.grid),
        gamma=args.gamma,
        pointer_basis=_pointer_basis(args),
    )
    _write_or_print(emit_report(report, args.format), args.out)
    return 0


def _cmd_emergence(args) -> int:
    rho = _load_state(args)
    params = x_state_params(rho)
    if params is None:
        raise InvalidInputError(
            "emergence needs an X-form state (diagonal plus anti-diagonal entries)"
        )
    payload = emergence_payload(emergence_time(params, args.gamma), args.gamma)
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        keys = ("gamma", "tau_d", "tau_e", "p_e", "p_at_tau_d", "transition")
        vals = [
            "" if payload[k] is None else (f"{payload[k]:.12g}" if isinstance(payload[k], float) else str(payload[k]).lower())
            for k in keys
        ]
        text = ",".join(keys) + "\n" + ",".join(vals) + "\n"
    _write_or_print(text, args.out)
    return 0


def _cmd_maximize(args) -> int:
    rho = _load_state(args)
    j_max, basis = maximize_classical_correlation(rho)
    mi = mutual_information(rho)
    payload = {
        "j_z": classical_correlation(rho, ProjectiveBasis.sigma_z()),
        "j_x": classical_correlation(rho, ProjectiveBasis.sigma_x()),
        "j_max": j_max,
        "opt_theta": basis.theta,
        "opt_phi": basis.phi,
        "mutual_info": mi,
        "discord": clamp_discord(mi - j_max),
    }
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        keys = list(payload)
        text = (
            ",".join(keys)
            + "\n"
            + ",".join(f"{payload[k]:.12g}" for k in keys)
            + "\n"
        )
    _write_or_print(text, args.out)
    return 0


def _run_suite(name: str, args):
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if name == "remark":
        return verify_remark(np.linspace(0.0, 1.0, args.grid))
    if name == "theorem1":
        return verify_theorem1(**overrides)
    if name == "theorem2":
        return verify_theorem2(**overrides)
    if name == "lemma1":
        return verify_lemma1(**overrides)
    raise InvalidInputError(f"unknown suite {name!r}")


def _cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    outcomes = [_run_suite(name, args) for name in names]
    if args.format == "json":
        payload = [outcome_payload(o) for o in outcomes]
        text = json.dumps(payload if len(payload) > 1 else payload[0], indent=2) + "\n"
    else:
        header = "theorem_id,trials,failures,worst_violation,seed"
        rows = [
            f"{o.theorem_id},{o.trials},{o.failures},{o.worst_violation:.12g},{o.seed}"
            for o in outcomes
        ]
        text = "\n".join([header] + rows) + "\n"
    _write_or_print(text, args.out)
    return 3 if any(o.failures > 0 for o in outcomes) else 0


def _cmd_analyze(args) -> int:
    matrix = parse_matrix_file(args.matrix_file)
    grid = _grid_from_count(args.grid)
    report = sweep(
        matrix.state,
        args.channel,
        grid,
        gamma=args.gamma,
        pointer_basis=_pointer_basis(args),
    )
    bands = None
    if args.samples:
        config = RunConfig(
            channel=args.channel,
            gamma=args.gamma,
            grid_points=args.grid,
            samples=args.samples,
            seed=args.seed,
            pointer_theta=args.theta if args.channel == "pointer" else 0.0,
            pointer_phi=args.phi if args.channel == "pointer" else 0.0,
        )
        bands = monte_carlo_bands(matrix, config)
    if args.format == "json":
        payload = {
            "deviations": {
                "hermiticity": matrix.deviations.hermiticity_deviation,
                "trace": matrix.deviations.trace_deviation,
                "min_eigenvalue": matrix.deviations.min_eigenvalue,
                "projection_distance": matrix.deviations.projection_distance,
            },
            "report": trajectory_payload(report),
            "bands": bands.to_payload() if bands is not None else None,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        # CSV keeps the exact trajectory table; bands live in the JSON format.
        text = emit_report(report, "csv")
    _write_or_print(text, args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except DataQualityError as exc:
        print(f"einselect: data quality: {exc}", file=sys.stderr)
        return 2
    except (InvalidInputError, InvalidStateError, OptimizationError) as exc:
        print(f"einselect: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"einselect: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
