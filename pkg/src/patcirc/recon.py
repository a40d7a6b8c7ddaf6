"""Time-axis filters and the spherical-mean backprojection.

With ``q = R_S f`` sampled on the detector sphere,

    f(x) = -(r_det / 8 pi^2) int_{S^2} [d/dt t d/dt (t q)] / t  at t = |r_det alpha - x|,

and since ``t R_S f = 4 pi int_0^t p`` for the boundary pressure ``p``,

    f(x) = -(r_det / 2 pi) int_{S^2} [d/dt (t p)] / t  at t = |r_det alpha - x|.

The full reconstruction first recovers ``p = 2 pi F^-1 P`` slice by slice and
then applies the second formula.
"""

import logging

import numba
import numpy as np
from scipy.integrate import cumulative_trapezoid

from ._kernels import sphere_backproject
from .funkmink import FunkInverter
from .grids import Kind, VolumeGrid

__all__ = [
    "time_average",
    "time_average_samples",
    "dt_t_filter",
    "backproject_sphere",
    "fpr_backprojection",
    "pressure_backprojection",
    "recover_pressure",
    "reconstruct_pipeline",
]

log = logging.getLogger(__name__)


def time_average_samples(values, dt, atol=1e-9):
    """``g(t) = (1/t) int_0^t u`` on a uniform grid starting at ``t = 0`` (last axis).

    ``g(0) = 0``; requires ``u(0) = 0`` within ``atol`` times ``max |u|``.
    """
    u = np.asarray(values, dtype=float)
    scale = np.abs(u).max(initial=0.0)
    start = np.abs(u[..., 0]).max(initial=0.0)
    if start > atol * max(scale, 1.0):
        raise ValueError(f"time average needs zero data at t = 0 (max |u(0)| = {start:.3e})")
    running = cumulative_trapezoid(u, dx=dt, axis=-1, initial=0.0)
    t = dt * np.arange(u.shape[-1])
    out = np.zeros_like(running)
    out[..., 1:] = running[..., 1:] / t[1:]
    return out


def time_average(data):
    """Running mean ``(1/t) int_0^t P`` of detector data; kind ``G_AVG``."""
    return data.with_values(time_average_samples(data.values, data.grid.dt), Kind.G_AVG)


def dt_t_filter(u, dt):
    """``d/dt (t u)`` along the last axis, uniform grid from ``t = 0``.

    Central differences inside, second-order one-sided differences at the ends.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[-1] < 5:
        raise ValueError("dt_t_filter needs at least 5 time samples")
    t = dt * np.arange(u.shape[-1])
    return np.gradient(t * u, dt, axis=-1, edge_order=2)


def backproject_sphere(grid, w, points, threads=None):
    """``int_{S^2} w(alpha, |r_det alpha - x|) / |r_det alpha - x| dS(alpha)`` at ``points``.

    ``w`` holds even data on the hemisphere nodes of ``grid`` (a
    SphereTimeGrid), shape ``grid.shape``; the lower hemisphere is filled in
    by evenness. Points with ``|x| >= r_det`` get 0.

    Returns
    -------
    values : ndarray, shape (P,)
    n_outside : int
        Number of (node, point) pairs whose radius fell outside ``[0, t_max]``.
    """
    pts = np.ascontiguousarray(np.asarray(points, dtype=float).reshape(-1, 3))
    sph = grid.sphere
    nodes = np.ascontiguousarray(grid.r_det * sph.directions().reshape(-1, 3))
    weights = np.ascontiguousarray(sph.area_weights().reshape(-1))
    wv = np.ascontiguousarray(np.asarray(w, dtype=float).reshape(sph.size, grid.n_t))
    inside = np.linalg.norm(pts, axis=1) < grid.r_det
    sub = np.ascontiguousarray(pts[inside])
    vals = np.zeros(sub.shape[0])
    outside = np.zeros(sub.shape[0], dtype=np.int64)
    previous = numba.get_num_threads()
    if threads is not None:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    try:
        sphere_backproject(nodes, weights, wv, grid.dt, sub, vals, outside)
    finally:
        numba.set_num_threads(previous)
    out = np.zeros(pts.shape[0])
    out[inside] = vals
    n_out = int(outside.sum())
    if n_out:
        log.info("backprojection: %d node/point pairs outside the sampled time range", n_out)
    return out, n_out


def _volume_or_points(vol, points):
    if points is not None:
        return None, np.asarray(points, dtype=float)
    vol = VolumeGrid() if vol is None else vol
    return vol, vol.centers().reshape(-1, 3)


def _finish(vol, values):
    if vol is None:
        return values
    return vol.like(values.reshape((vol.n,) * 3))


def fpr_backprojection(q, vol=None, points=None, threads=None):
    """Invert spherical means ``q = R_S f`` (DetectorData) on a volume grid.

    Returns a VolumeGrid, or a flat array when ``points`` is given.
    """
    w = dt_t_filter(dt_t_filter(q.values, q.grid.dt), q.grid.dt)
    vol, pts = _volume_or_points(vol, points)
    vals, _ = backproject_sphere(q.grid, w, pts, threads)
    return _finish(vol, -q.grid.r_det / (8 * np.pi**2) * vals)


def pressure_backprojection(p, vol=None, points=None, threads=None):
    """Reconstruct ``f`` from boundary pressure data ``p`` (DetectorData).

    The ``t = 0`` slice enters only through ``t p``, so noise there is harmless.
    Returns a VolumeGrid, or a flat array when ``points`` is given.
    """
    w = dt_t_filter(p.values, p.grid.dt)
    vol, pts = _volume_or_points(vol, points)
    vals, _ = backproject_sphere(p.grid, w, pts, threads)
    return _finish(vol, -p.grid.r_det / (2 * np.pi) * vals)


def recover_pressure(P, k=2, inverter=None, **inverter_kwargs):
    """Boundary pressure ``p = 2 pi F^-1 P`` for every time slice at once."""
    if inverter is None:
        inverter = FunkInverter(P.grid.sphere, k=k, **inverter_kwargs)
    p = 2 * np.pi * inverter.apply(P.values)
    return P.with_values(p, Kind.P_BOUNDARY)


def reconstruct_pipeline(P, k=2, vol=None, points=None, threads=None, inverter=None, **inverter_kwargs):
    """Detector data to initial pressure: Funk inversion per slice, then backprojection.

    Parameters
    ----------
    P : DetectorData
        Even detector data with ``P(., 0) = 0``.
    k : int
        Weight exponent of the blended Funk inversion.
    vol : VolumeGrid, optional
        Output grid (default 80^3 on ``[-1, 1]^3``).
    points : array_like, optional
        Evaluate at these points instead of a volume grid.
    threads : int, optional
        Worker threads for the backprojection.
    inverter : FunkInverter, optional
        Reuse a prebuilt inverter (its grid must match ``P``).
    """
    p = recover_pressure(P, k, inverter, **inverter_kwargs)
    return pressure_backprojection(p, vol, points, threads)
