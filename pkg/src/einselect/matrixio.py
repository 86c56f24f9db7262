"""Matrix-file ingestion, physicality projection, and report serialization.

Matrix files carry externally reconstructed density matrices (typically from
state tomography) as structured text, so they stay inspectable by eye:

    # free-form comments
    dim 4
    real
    0.4  0    0    0.4
    0    0.1  0.1  0
    0    0.1  0.1  0
    0.4  0    0    0.4
    imag
    ... four rows ...
    std
    ... four rows, optional per-entry standard deviations ...

Reconstructed matrices are rarely exactly physical. Ingestion measures the
Hermiticity, trace, and positivity deviations of the raw matrix, then projects:
symmetrize, renormalize the trace, clip negative eigenvalues to zero, and
renormalize again. If the projected state differs from the raw matrix by more
than 0.05 in max-norm the data is too unphysical to trust and ingestion aborts.

Report serialization writes sweep trajectories and verification outcomes as
CSV (12 significant digits) or JSON; matrix files are written at 17
significant digits so a write/parse round trip is exact well beyond the
12-digit requirement. Nothing time- or machine-dependent is ever emitted, so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import TrajectoryReport
from .errors import DataQualityError, InvalidInputError
from .qstate import DensityMatrix
from .verify import VerificationOutcome

MAX_PROJECTION_DISTANCE = 0.05

CSV_COLUMNS = ("p", "j_z", "j_x", "j_max", "opt_theta", "opt_phi", "mutual_info", "discord")


@dataclass(frozen=True)
class PhysicalityReport:
    """How far a raw matrix was from a valid state, and how far projection moved it."""

    hermiticity_deviation: float
    trace_deviation: float
    min_eigenvalue: float
    projection_distance: float


@dataclass(frozen=True)
class MatrixFile:
    """A parsed matrix file: raw blocks, optional uncertainties, projected state."""

    dim: int
    real: np.ndarray
    imag: np.ndarray
    std: Optional[np.ndarray]
    state: DensityMatrix
    deviations: PhysicalityReport

    @property
    def raw(self) -> np.ndarray:
        return self.real + 1j * self.imag


def project_to_physical(
    raw: np.ndarray, max_distance: Optional[float] = MAX_PROJECTION_DISTANCE
) -> tuple[DensityMatrix, PhysicalityReport]:
    """Project an approximately physical matrix onto a valid density matrix.

    Symmetrizes, renormalizes the trace, clips negative eigenvalues, and
    renormalizes once more. Reports the raw deviations and the max-norm
    distance moved; a move beyond max_distance raises DataQualityError
    (pass max_distance=None to project unconditionally, as the Monte Carlo
    resampler does).
    """
    m = np.asarray(raw, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
        raise InvalidInputError(f"expected a 2x2 or 4x4 matrix, got shape {m.shape}")
    hermiticity = float(np.max(np.abs(m - m.conj().T)))
    sym = 0.5 * (m + m.conj().T)
    trace = float(sym.trace().real)
    trace_dev = abs(trace - 1.0)
    if trace < 0.1:
        raise DataQualityError(
            f"trace {trace:.6g} is too small to renormalize into a state"
        )
    sym = sym / trace
    vals, vecs = np.linalg.eigh(sym)
    min_eig = float(vals[0])
    clipped = np.clip(vals, 0.0, None)
    total = float(clipped.sum())
    if total <= 0.0:
        raise DataQualityError("matrix has no positive spectral weight")
    clipped /= total
    physical = (vecs * clipped) @ vecs.conj().T
    distance = float(np.max(np.abs(m - physical)))
    report = PhysicalityReport(
        hermiticity_deviation=hermiticity,
        trace_deviation=trace_dev,
        min_eigenvalue=min_eig,
        projection_distance=distance,
    )
    if max_distance is not None and distance > max_distance:
        raise DataQualityError(
            f"projected state is {distance:.4g} away from the input in max-norm "
            f"(limit {max_distance}); data too unphysical to analyze"
        )
    return DensityMatrix(physical), report


def _parse_block(lines: list, start: int, dim: int, label: str) -> tuple[np.ndarray, int]:
    rows = []
    idx = start
    while len(rows) < dim:
        if idx >= len(lines):
            raise InvalidInputError(
                f"matrix file ended inside the {label!r} block "
                f"(needs {dim} rows, found {len(rows)})"
            )
        text = lines[idx]
        idx += 1
        parts = text.split()
        try:
            row = [float(tok) for tok in parts]
        except ValueError as exc:
            raise InvalidInputError(
                f"bad number in {label!r} block: {text!r}"
            ) from exc
        if len(row) != dim:
            raise InvalidInputError(
                f"{label!r} block row has {len(row)} entries, expected {dim}: {text!r}"
            )
        rows.append(row)
    return np.array(rows, dtype=float), idx


def parse_matrix_file(path) -> MatrixFile:
    """Parse, validate, and physically project a matrix file.

    Raises InvalidInputError for malformed structure and DataQualityError when
    the contents are too far from a physical state (see project_to_physical).
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise InvalidInputError(f"cannot read matrix file {path}: {exc}") from exc
    lines = [
        stripped
        for stripped in (line.strip() for line in raw_lines)
        if stripped and not stripped.startswith("#")
    ]
    if not lines or not lines[0].startswith("dim"):
        raise InvalidInputError("matrix file must start with a 'dim N' line")
    parts = lines[0].split()
    if len(parts) != 2 or not parts[1].isdigit():
        raise InvalidInputError(f"bad dim line: {lines[0]!r}")
    dim = int(parts[1])
    if dim not in (2, 4):
        raise InvalidInputError(f"dim must be 2 or 4, got {dim}")

    idx = 1
    blocks = {}
    order = []
    while idx < len(lines):
        label = lines[idx]
        if label not in ("real", "imag", "std"):
            raise InvalidInputError(f"unexpected line in matrix file: {label!r}")
        if label in blocks:
            raise InvalidInputError(f"duplicate {label!r} block")
        block, idx = _parse_block(lines, idx + 1, dim, label)
        blocks[label] = block
        order.append(label)
    for required in ("real", "imag"):
        if required not in blocks:
            raise InvalidInputError(f"matrix file is missing the {required!r} block")

    std = blocks.get("std")
    if std is not None and np.any(std < 0.0):
        raise InvalidInputError("uncertainty entries must be nonnegative")

    raw = blocks["real"] + 1j * blocks["imag"]
    state, deviations = project_to_physical(raw)
    return MatrixFile(
        dim=dim,
        real=blocks["real"],
        imag=blocks["imag"],
        std=std,
        state=state,
        deviations=deviations,
    )


def write_matrix_file(path, matrix, std: Optional[np.ndarray] = None, comment: str = "") -> None:
    """Write a matrix (DensityMatrix or complex array) in the structured format."""
    m = np.asarray(getattr(matrix, "entries", matrix), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
        raise InvalidInputError(f"expected a 2x2 or 4x4 matrix, got shape {m.shape}")
    dim = m.shape[0]
    if std is not None:
        std = np.asarray(std, dtype=float)
        if std.shape != m.shape:
            raise InvalidInputError(
                f"uncertainty block shape {std.shape} does not match matrix {m.shape}"
            )
        if np.any(std < 0.0):
            raise InvalidInputError("uncertainty entries must be nonnegative")

    def rows(block: np.ndarray) -> list:
        return [" ".join(f"{v:.17g}" for v in row) for row in block]

    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(f"dim {dim}")
    lines.append("real")
    lines.extend(rows(m.real))
    lines.append("imag")
    lines.extend(rows(m.imag))
    if std is not None:
        lines.append("std")
        lines.extend(rows(std))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.12g}"


def _trajectory_csv(report: TrajectoryReport) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in report.records:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.p,
                    r.j_z,
                    r.j_x,
                    r.j_max,
                    r.opt_theta,
                    r.opt_phi,
                    r.mutual_info,
                    r.discord,
                )
            )
        )
    return "\n".join(lines) + "\n"


def trajectory_payload(report: TrajectoryReport) -> dict:
    """JSON-ready dict mirroring a trajectory's records and metadata."""
    return {
        "regime": report.regime,
        "transition_p": report.transition_p,
        "emergence_time": report.emergence_time,
        "p_e": report.p_e,
        "tau_d": report.tau_d,
        "gamma": report.gamma,
        "records": [
            {
                "p": r.p,
                "j_z": r.j_z,
                "j_x": r.j_x,
                "j_max": r.j_max,
                "opt_theta": r.opt_theta,
                "opt_phi": r.opt_phi,
                "mutual_info": r.mutual_info,
                "discord": r.discord,
            }
            for r in report.records
        ],
    }


def outcome_payload(outcome: VerificationOutcome) -> dict:
    """JSON-ready dict for a verification outcome."""
    return {
        "theorem_id": outcome.theorem_id,
        "trials": outcome.trials,
        "failures": outcome.failures,
        "worst_violation": outcome.worst_violation,
        "seed": outcome.seed,
        "passed": outcome.passed,
    }


def _trajectory_json(report: TrajectoryReport) -> str:
    return json.dumps(trajectory_payload(report), indent=2) + "\n"


def _outcome_csv(outcome: VerificationOutcome) -> str:
    header = "theorem_id,trials,failures,worst_violation,seed"
    row = ",".join(
        [
            outcome.theorem_id,
            str(outcome.trials),
            str(outcome.failures),
            _fmt(outcome.worst_violation),
            str(outcome.seed),
        ]
    )
    return header + "\n" + row + "\n"


def _outcome_json(outcome: VerificationOutcome) -> str:
    return json.dumps(outcome_payload(outcome), indent=2) + "\n"


def emit_report(report, fmt: str = "csv", path=None) -> str:
    """Serialize a trajectory or verification outcome; optionally write it.

    Returns the serialized text. CSV trajectory columns are exactly
    p, j_z, j_x, j_max, opt_theta, opt_phi, mutual_info, discord at 12
    significant digits; JSON mirrors the records and adds the regime,
    transition, and emergence metadata.
    """
    if fmt not in ("csv", "json"):
        raise InvalidInputError(f"format must be 'csv' or 'json', got {fmt!r}")
    if isinstance(report, TrajectoryReport):
        if not report.records:
            raise InvalidInputError("refusing to emit an empty trajectory")
        text = _trajectory_csv(report) if fmt == "csv" else _trajectory_json(report)
    elif isinstance(report, VerificationOutcome):
        text = _outcome_csv(report) if fmt == "csv" else _outcome_json(report)
    else:
        raise InvalidInputError(
            f"cannot emit a report of type {type(report).__name__}"
        )
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def emergence_payload(result, gamma: float) -> dict:
    """JSON-ready summary of a closed-form emergence computation.

    result may be None (no transition: the pointer-basis value dominates from
    the start); the payload then carries nulls and transition = false.
    """
    if result is None:
        return {
            "gamma": gamma,
            "tau_d": 1.0 / gamma,
            "tau_e": None,
            "p_e": None,
            "p_at_tau_d": 1.0 - math.exp(-1.0),
            "transition": False,
        }
    return {
        "gamma": result.gamma,
        "tau_d": result.tau_d,
        "tau_e": result.tau_e,
        "p_e": result.p_e,
        "p_at_tau_d": 1.0 - math.exp(-1.0),
        "transition": True,
    }
