"""File formats: binary signal blocks, trajectory/report CSVs, run manifests.

Block files are little-endian: magic b"SSE1", then u32 K, u32 M, then K*M
float64 samples in row-major (gate-major) order.  All writers go through a
temp-file + rename so readers never observe partial files.
"""

from __future__ import annotations

import csv
import json
import os
import struct
import subprocess
import tempfile
import time

import numpy as np

MAGIC = b"SSE1"
_HEADER = struct.Struct("<4sII")


def _atomic_write(path, payload: bytes) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_block(path, block: np.ndarray) -> None:
    block = np.ascontiguousarray(block, dtype="<f8")
    if block.ndim != 2:
        raise ValueError("block must be 2-D (gates x signals)")
    header = _HEADER.pack(MAGIC, block.shape[0], block.shape[1])
    _atomic_write(path, header + block.tobytes())


def read_block(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, num_gates, num_signals = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a block file (bad magic {magic!r})")
        data = np.fromfile(fh, dtype="<f8", count=num_gates * num_signals)
    if data.size != num_gates * num_signals:
        raise ValueError(f"{path}: truncated payload")
    return data.reshape(num_gates, num_signals)


def block_to_csv(path, block: np.ndarray) -> None:
    """Inspection export: one row per gate, one column per signal."""
    block = np.asarray(block, dtype=float)
    lines = ["gate," + ",".join(f"signal_{m}" for m in range(block.shape[1]))]
    for k in range(block.shape[0]):
        lines.append(f"{k + 1}," + ",".join(repr(float(x)) for x in block[k]))
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def write_trajectory_csv(path, traj) -> None:
    lines = ["index,swh_m,tau_m,pu"]
    for i in range(len(traj)):
        lines.append(
            f"{i},{float(traj.swh[i])!r},{float(traj.tau[i])!r},{float(traj.pu[i])!r}"
        )
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_trajectory_csv(path):
    """Returns (swh, tau, pu) arrays from a trajectory CSV."""
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"swh_m", "tau_m", "pu"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: trajectory CSV missing columns {missing}")
        rows = [(float(r["swh_m"]), float(r["tau_m"]), float(r["pu"])) for r in reader]
    if not rows:
        raise ValueError(f"{path}: empty trajectory CSV")
    arr = np.asarray(rows, dtype=float)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def write_report_csv(path, fieldnames, rows) -> None:
    """CSV with a header row; values are emitted with repr-level precision."""
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(_format_cell(row[name]) for name in fieldnames))
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def _format_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _build_identifier() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            capture_output=True, text=True, timeout=5,
            cwd=os.path.dirname(os.path.abspath(__file__)),
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return "unknown"


def write_manifest(path, subcommand: str, args: dict, outputs: dict,
                   started: float, seeds: dict | None = None) -> None:
    """Record everything needed to reproduce a run next to its outputs."""
    from . import __version__

    payload = {
        "subcommand": subcommand,
        "args": args,
        "seeds": seeds or {},
        "outputs": outputs,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "build": _build_identifier(),
        "started_unix": started,
        "wallclock_seconds": time.time() - started,
    }
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True).encode() + b"\n")


def read_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
