"""CSV tables and flat-binary matrix dumps.

CSV: comma-delimited, header row, '.' decimal, floats with 17 significant
digits, booleans as ``true``/``false``.

Binary matrices are raw row-major little-endian float64 in ``<path>`` with a
``key=value`` text header in ``<path>.hdr`` holding ``n``, ``lo``, ``hi``,
``dims`` and ``kind``.
"""
from __future__ import annotations

import csv
import enum
import io
import os
from typing import Iterable, Mapping, Sequence

import numpy as np

from .grids import GridSpec, WignerGrid
from .tomography import MarginalSet, QuadratureMarginal
from .weyl_kernel import KernelMatrix

__all__ = [
    "format_value",
    "parse_value",
    "write_csv",
    "read_csv",
    "save_kernel",
    "load_kernel",
    "save_wigner",
    "load_wigner",
    "write_marginals",
    "read_marginals",
]


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def parse_value(s: str):
    if s == "true":
        return True
    if s == "false":
        return False
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def write_csv(rows: Iterable[Mapping], columns: Sequence[str], path=None) -> str:
    """Write ``rows`` as CSV to ``path`` (or return the text when ``path`` is None)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: parse_value(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def _write_header(path, fields: Mapping):
    with open(f"{path}.hdr", "w") as fh:
        for k, v in fields.items():
            fh.write(f"{k}={format_value(v)}\n")


def _read_header(path) -> dict:
    hdr = f"{path}.hdr"
    if not os.path.exists(hdr):
        raise FileNotFoundError(hdr)
    out = {}
    with open(hdr) as fh:
        for line in fh:
            line = line.strip()
            if line:
                k, _, v = line.partition("=")
                out[k.strip()] = parse_value(v.strip())
    return out


def save_kernel(path, k: KernelMatrix) -> None:
    entries = np.asarray(k.entries)
    if np.iscomplexobj(entries):
        raise ValueError("only real kernels can be exported")
    entries.astype("<f8").tofile(path)
    g = k.grid
    _write_header(path, {"kind": "kernel", "n": g.n, "lo": float(g.lo), "hi": float(g.hi), "dims": g.dims})


def load_kernel(path) -> KernelMatrix:
    h = _read_header(path)
    g = GridSpec(float(h["lo"]), float(h["hi"]), int(h["n"]), int(h["dims"]))
    M = g.size
    data = np.fromfile(path, dtype="<f8")
    if data.size != M * M:
        raise ValueError(f"{path}: expected {M * M} values, found {data.size}")
    return KernelMatrix(data.reshape(M, M), g)


def save_wigner(path, w: WignerGrid) -> None:
    q, p = w.q_axis, w.p_axis
    if len(q) != len(p) or np.max(np.abs(q - p)) > 1e-12:
        raise ValueError("flat-binary Wigner export needs identical square q and p axes")
    np.asarray(w.values).astype("<f8").tofile(path)
    _write_header(path, {"kind": "wigner", "n": len(q), "lo": float(q[0]), "hi": float(q[-1]), "dims": 2})


def load_wigner(path) -> WignerGrid:
    h = _read_header(path)
    n = int(h["n"])
    data = np.fromfile(path, dtype="<f8")
    if data.size != n * n:
        raise ValueError(f"{path}: expected {n * n} values, found {data.size}")
    axis = np.linspace(float(h["lo"]), float(h["hi"]), n)
    return WignerGrid(data.reshape(n, n), axis, axis)


def write_marginals(ms: MarginalSet, path=None) -> str:
    rows = (
        {"phi": m.phi, "x": x, "density": v}
        for m in ms.marginals
        for x, v in zip(m.x_axis, m.density)
    )
    return write_csv(rows, ["phi", "x", "density"], path)


def read_marginals(path) -> MarginalSet:
    rows = read_csv(path)
    by_phi: dict[float, list] = {}
    for r in rows:
        by_phi.setdefault(float(r["phi"]), []).append((float(r["x"]), float(r["density"])))
    marginals = []
    for phi in sorted(by_phi):
        pts = sorted(by_phi[phi])
        marginals.append(QuadratureMarginal(phi, [x for x, _ in pts], [v for _, v in pts]))
    return MarginalSet(tuple(marginals))
