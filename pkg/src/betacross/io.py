"""File formats shared by the CLI and tests.

All text outputs use '.' decimals, ',' separators, one header line, and
LF endings, with floats printed through repr-faithful %.17g so that
rewriting a file from parsed values is byte-identical.  JSON documents
are sorted and indented for the same reason.

The matrix snapshot is binary: an 8-byte magic tag, the dimension as a
little-endian int64, the time as a little-endian float64, then the
row-major float64 entries.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .eigen_sde import SpectrumSample
from .matrix_process import SymMatrixState

FORMAT_VERSION = "0.1.0"
_SNAPSHOT_MAGIC = b"BXMS0001"


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def write_samples_csv(path, samples: list[SpectrumSample]) -> None:
    """One row per sample: t, then the ascending eigenvalues."""
    if len(samples) == 0:
        raise ValueError("no samples to write")
    n = len(samples[0].lam)
    lines = ["t," + ",".join(f"lambda_{i + 1}" for i in range(n))]
    for s in samples:
        if len(s.lam) != n:
            raise ValueError("samples have inconsistent dimensions")
        lines.append(",".join([format_float(s.t)] + [format_float(v) for v in s.lam]))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_samples_csv(path) -> list[SpectrumSample]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] < 2:
        raise ValueError("samples CSV needs a time column and at least one eigenvalue")
    out = []
    for row in data:
        lam = row[1:]
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalue rows must be ascending")
        out.append(SpectrumSample(t=float(row[0]), lam=lam.copy()))
    return out


def write_nnsd_csv(path, s_grid, p_empirical, p_reference) -> None:
    s_grid = np.asarray(s_grid, dtype=float)
    p_empirical = np.asarray(p_empirical, dtype=float)
    p_reference = np.asarray(p_reference, dtype=float)
    if not (s_grid.shape == p_empirical.shape == p_reference.shape):
        raise ValueError("nnsd columns must have matching lengths")
    lines = ["s,p_empirical,p_reference"]
    for s, pe, pr in zip(s_grid, p_empirical, p_reference):
        lines.append(",".join(format_float(v) for v in (s, pe, pr)))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                          newline="\n")


def write_manifest(path, command: str, config: dict, counters: dict) -> None:
    """Every CLI run records its fully resolved configuration here."""
    write_json(path, {
        "version": FORMAT_VERSION,
        "command": command,
        "config": config,
        "seed": config.get("seed"),
        "counters": counters,
    })


def read_config_json(path) -> dict:
    """Load a config file; a manifest is accepted and unwrapped."""
    with open(path) as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("config file must hold a JSON object")
    if isinstance(obj.get("config"), dict):
        return obj["config"]
    return obj


def write_matrix_snapshot(path, state: SymMatrixState) -> None:
    m = np.ascontiguousarray(state.m, dtype="<f8")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("snapshot needs a square matrix")
    with open(path, "wb") as fh:
        fh.write(_SNAPSHOT_MAGIC)
        fh.write(struct.pack("<qd", m.shape[0], float(state.t)))
        fh.write(m.tobytes(order="C"))


def read_matrix_snapshot(path) -> SymMatrixState:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _SNAPSHOT_MAGIC:
            raise ValueError("not a matrix snapshot file")
        n, t = struct.unpack("<qd", fh.read(16))
        body = fh.read(8 * n * n)
    if len(body) != 8 * n * n:
        raise ValueError("snapshot file is truncated")
    m = np.frombuffer(body, dtype="<f8").reshape(n, n).copy()
    return SymMatrixState(t=t, m=m)
