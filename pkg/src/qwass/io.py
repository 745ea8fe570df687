"""File formats: matrix JSON, observable sets, channels, CSV tables, manifests.

Matrix JSON schema, used everywhere a matrix crosses a file boundary:

    {"dim": n, "entries": [[[re, im], ...], ...]}   (row-major)

Observable sets are JSON arrays of matrix objects; channels are
``{"kraus": [<matrix>, ...]}``.  CSV cells hold ``repr(float(x))`` so reruns
are byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .channels import (
    ChannelSpec,
    dephasing_channel,
    depolarizing_channel,
    identity_channel,
    unitary_channel,
)
from .cost import CostOperator, build_cost, pauli_product_set, symmetric_cost
from .divergence import GAP_CSV_COLUMNS, gap_record_row
from .errors import InputError
from .experiments import LatticeResult, SurfaceResult, SweepResult
from .linalg import RngStream, random_observable, require_density, require_hermitian


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "dim": m.shape[0],
        "entries": [[[float(v.real), float(v.imag)] for v in row] for row in m],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        entries = obj["entries"]
        m = np.array([[complex(c[0], c[1]) for c in row] for row in entries], dtype=complex)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from exc
    if m.shape != (dim, dim):
        raise InputError(f"matrix JSON declares dim {dim} but entries have shape {m.shape}")
    return m


def save_matrix(path, m: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(m)))


def load_matrix(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}") from exc
    return matrix_from_json(obj)


def load_density(path) -> np.ndarray:
    return require_density(load_matrix(path), name=str(path))


def load_observables(path) -> list[np.ndarray]:
    try:
        arr = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read observables file {path}: {exc}") from exc
    if not isinstance(arr, list) or not arr:
        raise InputError(f"observables file {path} must hold a nonempty JSON array")
    return [require_hermitian(matrix_from_json(o), name=f"{path}[{i}]") for i, o in enumerate(arr)]


def parse_cost_selector(selector: str, dim: int | None = None, seed: int = 0, stream: int = 0) -> CostOperator:
    """Build a cost operator from a selector string.

    Selectors: ``symmetric``, ``pauli-products:<n>``, ``random:<k>`` (needs the
    target dimension and a seed), ``file:<path>``.
    """
    if selector == "symmetric":
        return symmetric_cost()
    if selector.startswith("pauli-products:"):
        n = _positive_int(selector.split(":", 1)[1], "pauli-products count")
        return build_cost(pauli_product_set(n))
    if selector.startswith("random:"):
        k = _positive_int(selector.split(":", 1)[1], "random observable count")
        if dim is None:
            raise InputError("random:<k> cost needs a state dimension")
        observables = [random_observable(dim, RngStream(seed, stream + i)) for i in range(k)]
        return build_cost(observables)
    if selector.startswith("file:"):
        return build_cost(load_observables(selector.split(":", 1)[1]))
    raise InputError(
        f"unknown cost selector {selector!r}; expected symmetric, pauli-products:<n>, random:<k>, or file:<path>"
    )


def parse_channel_selector(selector: str, dim: int | None = None) -> ChannelSpec:
    """Build a channel from a selector string.

    Selectors: ``identity`` (needs --dim), ``unitary:<matrix file>``,
    ``depolarizing:<p>``, ``dephasing:<p>``, ``file:<path>`` with
    ``{"kraus": [...]}``.
    """
    if selector == "identity":
        if dim is None:
            raise InputError("identity channel needs a dimension")
        return identity_channel(dim)
    if selector.startswith("unitary:"):
        return unitary_channel(load_matrix(selector.split(":", 1)[1]))
    if selector.startswith("depolarizing:"):
        return depolarizing_channel(_strength(selector))
    if selector.startswith("dephasing:"):
        return dephasing_channel(_strength(selector))
    if selector.startswith("file:"):
        path = selector.split(":", 1)[1]
        try:
            obj = json.loads(Path(path).read_text())
            kraus = obj["kraus"]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read channel file {path}: {exc}") from exc
        return ChannelSpec(kraus=tuple(matrix_from_json(k) for k in kraus))
    raise InputError(
        f"unknown channel selector {selector!r}; expected identity, unitary:<file>, "
        f"depolarizing:<p>, dephasing:<p>, or file:<path>"
    )


def _positive_int(text: str, label: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise InputError(f"{label} must be an integer, got {text!r}") from exc
    if value < 1:
        raise InputError(f"{label} must be >= 1, got {value}")
    return value


def _strength(selector: str) -> float:
    text = selector.split(":", 1)[1]
    try:
        return float(text)
    except ValueError as exc:
        raise InputError(f"channel strength must be a number, got {text!r}") from exc


def _cell(value) -> str:
    if isinstance(value, float) or isinstance(value, np.floating):
        return repr(float(value))
    return str(value)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_gap_csv(path, records) -> None:
    _write_csv(path, GAP_CSV_COLUMNS, (gap_record_row(r) for r in records))


def write_lattice_csv(path, result: LatticeResult) -> None:
    header = GAP_CSV_COLUMNS + ("j", "k", "l")
    rows = (gap_record_row(p.record) + [p.j, p.k, p.l] for p in result.points)
    _write_csv(path, header, rows)


def write_sweep_csv(path, result: SweepResult) -> None:
    header = GAP_CSV_COLUMNS + ("sample-index",)
    rows = (gap_record_row(r.record) + [r.sample_index] for r in result.records)
    _write_csv(path, header, rows)


def write_surface_csv(path, result: SurfaceResult) -> None:
    rows = ((p.x, p.y, "" if p.gap is None else _cell(p.gap)) for p in result.points)
    _write_csv(path, ("x", "y", "gap"), rows)


def write_manifest(path, command: str, parameters: dict, seed: int, tool_version: str, wall_time_s: float) -> None:
    manifest = {
        "command": command,
        "parameters": {k: parameters[k] for k in sorted(parameters)},
        "seed": seed,
        "tool_version": tool_version,
        "wall_time_s": wall_time_s,
    }
    Path(path).write_text(json.dumps(manifest, indent=2) + "\n")
