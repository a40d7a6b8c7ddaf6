"""Binary, CSV and image formats for detector data, sinograms and volumes.

``PATC`` (sphere-time data), little endian::

    b"PATC"  u16 version  u8 kind  u32 n_polar  u32 n_az  u32 n_t
    f64 polar_min  f64 t_max  f64 r_det  f64 values[n_polar][n_az][n_t]

``PATV`` (volume)::

    b"PATV"  u16 version  u32 n  f64 half_width  f64 values[n][n][n]  (x1 slowest)
"""

import csv
import hashlib
import json
import struct

import numpy as np

from .grids import DetectorData, Kind, SphereGrid, SphereTimeGrid, VolumeGrid

__all__ = [
    "FormatError",
    "write_patc",
    "read_patc",
    "write_patc_csv",
    "read_patc_csv",
    "write_sinogram_csv",
    "write_patv",
    "read_patv",
    "write_sidecar",
    "file_sha256",
    "write_pgm",
    "read_pgm",
    "write_profile_csv",
]

VERSION = 1


class FormatError(ValueError):
    """A file is not in the expected binary layout."""


_PATC_HEAD = struct.Struct("<4sHB3I3d")
_PATV_HEAD = struct.Struct("<4sHId")


def write_patc(path, data):
    g = data.grid
    head = _PATC_HEAD.pack(
        b"PATC", VERSION, int(data.kind), g.sphere.n_polar, g.sphere.n_az, g.n_t,
        g.sphere.polar_min, g.t_max, g.r_det,
    )
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(np.ascontiguousarray(data.values, dtype="<f8").tobytes())


def read_patc(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _PATC_HEAD.size:
        raise FormatError(f"{path}: too short for a PATC header")
    magic, version, kind, n_p, n_a, n_t, polar_min, t_max, r_det = _PATC_HEAD.unpack_from(raw)
    if magic != b"PATC":
        raise FormatError(f"{path}: not a PATC file")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported PATC version {version}")
    count = n_p * n_a * n_t
    body = raw[_PATC_HEAD.size :]
    if len(body) != 8 * count:
        raise FormatError(f"{path}: expected {count} values, found {len(body) // 8}")
    grid = SphereTimeGrid(SphereGrid(n_p, n_a, polar_min), n_t, t_max, r_det)
    values = np.frombuffer(body, dtype="<f8").reshape(n_p, n_a, n_t).astype(float)
    return DetectorData(grid, values, Kind(kind))


def write_patc_csv(path, data):
    """Rows ``theta_polar,theta_az,t,value`` in polar-major order."""
    g = data.grid
    th, ph, t = np.meshgrid(g.sphere.polar, g.sphere.az, g.times, indexing="ij")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta_polar", "theta_az", "t", "value"])
        for row in zip(th.ravel(), ph.ravel(), t.ravel(), data.values.ravel()):
            w.writerow([repr(float(v)) for v in row])


def read_patc_csv(path):
    """Values of a CSV export as an array of shape ``(rows, 4)``."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_sinogram_csv(path, sino):
    """Debug dump with rows ``angle,s,value``."""
    psi, s = np.meshgrid(sino.angles, sino.s, indexing="ij")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["angle", "s", "value"])
        for row in zip(psi.ravel(), s.ravel(), sino.values.ravel()):
            w.writerow([repr(float(v)) for v in row])


def write_patv(path, vol):
    with open(path, "wb") as fh:
        fh.write(_PATV_HEAD.pack(b"PATV", VERSION, vol.n, vol.half_width))
        fh.write(np.ascontiguousarray(vol.values, dtype="<f8").tobytes())


def read_patv(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _PATV_HEAD.size:
        raise FormatError(f"{path}: too short for a PATV header")
    magic, version, n, half = _PATV_HEAD.unpack_from(raw)
    if magic != b"PATV":
        raise FormatError(f"{path}: not a PATV file")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported PATV version {version}")
    body = raw[_PATV_HEAD.size :]
    if len(body) != 8 * n**3:
        raise FormatError(f"{path}: expected {n**3} values")
    return VolumeGrid(n, half, np.frombuffer(body, dtype="<f8").reshape(n, n, n).astype(float))


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def write_sidecar(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def write_pgm(path, image, lo=None, hi=None):
    """16-bit binary PGM (P5); the grey window ``[lo, hi]`` is kept in a comment.

    ``image[i, j]`` is written with ``i`` as the row index.
    """
    img = np.asarray(image, dtype=float)
    lo = float(img.min()) if lo is None else float(lo)
    hi = float(img.max()) if hi is None else float(hi)
    span = hi - lo
    scaled = np.zeros(img.shape) if span <= 0 else (np.clip(img, lo, hi) - lo) / span
    pix = np.round(scaled * 65535).astype(">u2")
    rows, cols = img.shape
    head = f"P5\n# min {lo!r} max {hi!r}\n{cols} {rows}\n65535\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(pix.tobytes())


def read_pgm(path):
    """Return ``(pixels, lo, hi)`` for files written by :func:`write_pgm`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    lines = raw.split(b"\n", 4)
    if lines[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM")
    _, lo, _, hi = lines[1].decode().lstrip("# ").split()
    cols, rows = map(int, lines[2].split())
    pix = np.frombuffer(lines[4], dtype=">u2").reshape(rows, cols)
    return pix.astype(np.int64), float(lo), float(hi)


def write_profile_csv(path, coord_name, coords, values):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([coord_name, "value"])
        for c, v in zip(coords, values):
            w.writerow([repr(float(c)), repr(float(v))])
