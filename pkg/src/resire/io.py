"""MRC2014 volumes and stacks, tilt files, CSV reports and solver configs.

MRC files are written little-endian, mode 2 (float32), with ``x`` varying
fastest, no extended header, and no timestamps or free-text labels, so
identical arrays always produce identical bytes. Volumes indexed
``[x, y, z]`` map to ``(nx, ny, nz)``; a projection stack ``(N, Nx, Ny)`` is
stored as ``nx = Nx, ny = Ny, nz = N``.
"""
import csv
import dataclasses
import io as _io
import os
import tempfile
from pathlib import Path

import numpy as np

from .config import format_kv, parse_bool, parse_kv, parse_optional_float
from .errors import FormatError, InvalidArgumentError
from .grid import ProjectionStack, as_tilt_series
from .solver import SolverConfig

__all__ = [
    "HEADER_BYTES",
    "atomic_write",
    "write_mrc",
    "read_mrc",
    "read_mrc_header",
    "write_stack",
    "read_stack",
    "write_tilt",
    "read_tilt",
    "write_fsc_csv",
    "write_rfactor_csv",
    "write_trace_csv",
    "read_csv",
    "write_csv",
    "solver_config_to_text",
    "solver_config_from_text",
]

HEADER_BYTES = 1024
MRC_VERSION = 20140
_MODE_DTYPES = {0: "i1", 1: "i2", 2: "f4"}
_MACHST = {"<": b"\x44\x44\x00\x00", ">": b"\x11\x11\x00\x00"}

_HEADER_FIELDS = [
    ("nx", "i4"), ("ny", "i4"), ("nz", "i4"), ("mode", "i4"),
    ("nxstart", "i4"), ("nystart", "i4"), ("nzstart", "i4"),
    ("mx", "i4"), ("my", "i4"), ("mz", "i4"),
    ("cella", "f4", 3), ("cellb", "f4", 3),
    ("mapc", "i4"), ("mapr", "i4"), ("maps", "i4"),
    ("dmin", "f4"), ("dmax", "f4"), ("dmean", "f4"),
    ("ispg", "i4"), ("nsymbt", "i4"),
    ("extra1", "V8"), ("exttyp", "S4"), ("nversion", "i4"), ("extra2", "V84"),
    ("origin", "f4", 3), ("map", "S4"), ("machst", "V4"),
    ("rms", "f4"), ("nlabl", "i4"), ("label", "S80", 10),
]


def _header_dtype(order):
    return np.dtype([(f[0], order + f[1] if f[1][0] in "if" else f[1]) + f[2:] for f in _HEADER_FIELDS])


def atomic_write(path, data):
    """Write ``data`` bytes to ``path`` via a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _mrc_bytes(data, ispg):
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise InvalidArgumentError(f"MRC data must be 2D or 3D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("MRC data contains non-finite values")
    payload = np.ascontiguousarray(arr.transpose(2, 1, 0), dtype="<f4")
    nx, ny, nz = arr.shape

    h = np.zeros((), dtype=_header_dtype("<"))
    h["nx"], h["ny"], h["nz"] = nx, ny, nz
    h["mode"] = 2
    h["mx"], h["my"], h["mz"] = nx, ny, nz
    h["cella"] = (nx, ny, nz)
    h["cellb"] = (90.0, 90.0, 90.0)
    h["mapc"], h["mapr"], h["maps"] = 1, 2, 3
    stored = payload.astype(np.float64)
    h["dmin"] = stored.min()
    h["dmax"] = stored.max()
    h["dmean"] = stored.mean()
    h["rms"] = stored.std()
    h["ispg"] = ispg
    h["exttyp"] = b"MRCO"
    h["nversion"] = MRC_VERSION
    h["map"] = b"MAP "
    h["machst"] = np.void(_MACHST["<"])
    return h.tobytes() + payload.tobytes()


def write_mrc(path, data, ispg=1):
    """Write a 2D/3D array indexed ``[x, y, z]`` as a float32 MRC2014 file."""
    try:
        atomic_write(path, _mrc_bytes(data, ispg))
    except OSError as exc:
        raise OSError(f"cannot write MRC file {path}: {exc}") from exc


def read_mrc_header(path):
    """Parse and validate the 1024-byte header; returns a numpy record."""
    path = Path(path)
    with open(path, "rb") as fh:
        raw = fh.read(HEADER_BYTES)
    if len(raw) < HEADER_BYTES:
        raise FormatError(
            f"{path}: header truncated, expected {HEADER_BYTES} bytes, got {len(raw)}"
        )
    if raw[208:212] != b"MAP ":
        raise FormatError(f"{path}: bad magic {raw[208:212]!r} at byte offset 208, expected b'MAP '")
    order = ">" if raw[212] == 0x11 else "<"
    h = np.frombuffer(raw, dtype=_header_dtype(order))[0]
    for offset, name in ((0, "nx"), (4, "ny"), (8, "nz")):
        if h[name] < 1:
            raise FormatError(f"{path}: invalid {name} = {h[name]} at byte offset {offset}")
    if int(h["mode"]) not in _MODE_DTYPES:
        raise FormatError(
            f"{path}: unsupported mode {int(h['mode'])} at byte offset 12 (supported: 0, 1, 2)"
        )
    if h["nsymbt"] < 0:
        raise FormatError(f"{path}: negative extended header size at byte offset 92")
    return h


def read_mrc(path, angles=None):
    """Read an MRC file into a float64 array indexed ``[x, y, z]``.

    When ``angles`` (a tilt series or a ``.tlt`` path) is given, the file is
    interpreted as a projection stack and a :class:`ProjectionStack` is
    returned instead.
    """
    path = Path(path)
    h = read_mrc_header(path)
    order = ">" if bytes(h["machst"])[:1] == b"\x11" else "<"
    dtype = np.dtype(order + _MODE_DTYPES[int(h["mode"])])
    nx, ny, nz = (int(h[k]) for k in ("nx", "ny", "nz"))
    count = nx * ny * nz
    if count > np.iinfo(np.int64).max // dtype.itemsize:
        raise FormatError(f"{path}: dimensions {nx}x{ny}x{nz} overflow the addressable size")
    offset = HEADER_BYTES + int(h["nsymbt"])
    expected = offset + count * dtype.itemsize
    actual = path.stat().st_size
    if actual < expected:
        raise FormatError(
            f"{path}: truncated payload, expected {expected} bytes, got {actual} "
            f"(data starts at byte offset {offset})"
        )
    with open(path, "rb") as fh:
        fh.seek(offset)
        flat = np.frombuffer(fh.read(count * dtype.itemsize), dtype=dtype)
    data = flat.reshape(nz, ny, nx).transpose(2, 1, 0).astype(np.float64)
    if angles is None:
        return data
    if isinstance(angles, (str, os.PathLike)):
        angles = read_tilt(angles)
    angles = as_tilt_series(angles)
    if len(angles) != nz:
        raise FormatError(
            f"{path}: stack depth nz = {nz} does not match {len(angles)} tilt angles"
        )
    return ProjectionStack(data.transpose(2, 0, 1), angles)


def write_stack(path, stack):
    """Write the projections of a :class:`ProjectionStack` as an image stack."""
    write_mrc(path, np.asarray(stack.projections).transpose(1, 2, 0), ispg=0)


def read_stack(mrc_path, tilt_path):
    return read_mrc(mrc_path, angles=read_tilt(tilt_path))


def write_tilt(path, angles):
    """Write Euler triples, one ``phi theta psi`` line per projection."""
    angles = as_tilt_series(angles)
    lines = ["# phi theta psi (degrees, ZYX Euler)"]
    lines += [" ".join(repr(float(a)) for a in row) for row in angles]
    atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_tilt(path):
    """Read a tilt file into an ``(N, 3)`` array of degrees."""
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"{path}:{lineno}: expected 'phi theta psi', got {raw!r}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise FormatError(f"{path}: no tilt angles found")
    return as_tilt_series(rows)


def write_csv(path, header, rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write(path, buf.getvalue().encode())


def write_fsc_csv(path, curve):
    rows = [(repr(float(f)), repr(float(c)), int(n)) for f, c, n in zip(curve.freq, curve.fsc, curve.count)]
    write_csv(path, ["freq_cyc_per_px", "fsc", "count"], rows)


def write_rfactor_csv(path, angles, report):
    angles = as_tilt_series(angles)
    rows = [
        (i, repr(float(a[0])), repr(float(a[1])), repr(float(a[2])), repr(float(r)))
        for i, (a, r) in enumerate(zip(angles, report.per_angle))
    ]
    write_csv(path, ["angle_index", "phi", "theta", "psi", "rfactor"], rows)


def write_trace_csv(path, trace):
    rows = [
        (k + 1, repr(s), repr(r), repr(t))
        for k, (s, r, t) in enumerate(zip(trace.sse_history, trace.rfactor_history, trace.wall_time))
    ]
    write_csv(path, ["iter", "sse", "rfactor", "seconds"], rows)


def read_csv(path):
    """Return ``(header, rows)`` of a CSV file as strings."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


_SOLVER_FIELDS = [f.name for f in dataclasses.fields(SolverConfig)]


def solver_config_to_text(cfg):
    """Serialize every :class:`SolverConfig` field, defaults included."""
    items = {}
    for name in _SOLVER_FIELDS:
        value = getattr(cfg, name)
        items[name] = "none" if value is None else str(value).lower() if isinstance(value, bool) else repr(value)
    return format_kv(items)


def solver_config_from_text(text, source="<config>"):
    kv = parse_kv(text, allowed=_SOLVER_FIELDS, source=source)
    parsers = {
        "iterations": int,
        "step_t": float,
        "oversampling_ratio": float,
        "nonnegativity": parse_bool,
        "rfactor_target": parse_optional_float,
    }
    try:
        values = {k: parsers[k](v) for k, v in kv.items()}
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from exc
    return SolverConfig(**values)
