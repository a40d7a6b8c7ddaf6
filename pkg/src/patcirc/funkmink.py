"""Funk-Minkowski transform on ``S^2`` and its inversion through the planar
Radon transform.

For an even ``phi`` on the sphere put ``Phi(x) = 2 phi(alpha) alpha_3^2`` with
``alpha = (x, 1) / sqrt(1 + |x|^2)`` (the gnomonic chart). Great-circle
integrals of ``phi`` are then line integrals of ``Phi``:

    R Phi(omega, s) = (1 + s^2)^(-1/2) F phi((omega, -s) / sqrt(1 + s^2)),

so ``Phi`` and hence ``phi`` follow from a planar filtered backprojection.
The chart divides by ``alpha_3^2``; to stay away from the equator of the
chart the three cyclic choices of the distinguished axis are blended with
weights ``|alpha_i|^k``.
"""

from dataclasses import dataclass

import numpy as np

from .grids import PlaneGrid, Sinogram2D, SphereFunction
from .radon2d import backprojection_matrix, filter_matrix
from .sphere import great_circle_points, interp_matrix

__all__ = [
    "funk_forward",
    "to_axis_frame",
    "from_axis_frame",
    "sinogram_directions",
    "funk_to_sinogram",
    "GnomonicChart",
    "funk_invert_axis",
    "FunkInverter",
    "funk_invert_stabilized",
    "default_s_max",
]


def default_s_max(grid):
    """Largest ``|s|`` reachable from the polar grid: ``cot(polar_min)``."""
    return 1.0 / np.tan(grid.polar_min)


def funk_forward(phi, theta, n_circle=256):
    """Great-circle integral ``int_{theta . alpha = 0} phi(alpha) dS(alpha)``.

    Parameters
    ----------
    phi : callable or SphereFunction
        A callable takes unit vectors of shape ``(..., 3)``; a SphereFunction
        is read by bilinear interpolation (reflected into the upper
        hemisphere).
    theta : array_like, shape (..., 3)
    n_circle : int
        Number of equally spaced nodes on each circle.
    """
    theta = np.asarray(theta, dtype=float)
    pts = great_circle_points(theta, n_circle)
    if isinstance(phi, SphereFunction):
        mat = interp_matrix(phi.grid, pts)
        vals = (mat @ phi.values.reshape(-1)).reshape(pts.shape[:-1])
    else:
        vals = np.asarray(phi(pts), dtype=float)
    return vals.sum(axis=-1) * (2 * np.pi / n_circle)


# axis i plays the role of the third coordinate; the permutation is cyclic
_PERM = {1: (1, 2, 0), 2: (2, 0, 1), 3: (0, 1, 2)}


def to_axis_frame(v, axis):
    """Reorder coordinates so that coordinate ``axis`` (1-based) comes last."""
    v = np.asarray(v)
    return v[..., list(_PERM[axis])]


def from_axis_frame(v, axis):
    v = np.asarray(v)
    inv = np.argsort(_PERM[axis])
    return v[..., list(inv)]


def sinogram_directions(sino, axis):
    """Sphere directions ``(omega, -s)/sqrt(1+s^2)`` for every sinogram node, in world coordinates."""
    w = sino.directions()
    s = sino.s
    scale = 1.0 / np.sqrt(1.0 + s * s)
    theta = np.empty((sino.n_angles, sino.n_s, 3))
    theta[..., 0] = w[:, None, 0] * scale[None, :]
    theta[..., 1] = w[:, None, 1] * scale[None, :]
    theta[..., 2] = -s[None, :] * scale[None, :]
    return from_axis_frame(theta, axis)


def _sinogram_operator(grid, sino, axis):
    dirs = sinogram_directions(sino, axis)
    mat = interp_matrix(grid, dirs)
    scale = np.broadcast_to(1.0 / np.sqrt(1.0 + sino.s**2), (sino.n_angles, sino.n_s)).ravel()
    return mat.multiply(scale[:, None]).tocsr()


def funk_to_sinogram(fphi, axis=3, sino=None):
    """Planar Radon data ``G(omega, s) = (1+s^2)^(-1/2) F phi(theta(omega, s))``.

    Parameters
    ----------
    fphi : SphereFunction
        Great-circle integrals on the hemisphere grid.
    axis : {1, 2, 3}
    sino : Sinogram2D, optional
        Descriptor; defaults to 360 angles, 401 offsets, ``s_max = cot(polar_min)``.
    """
    if sino is None:
        sino = Sinogram2D(360, 401, default_s_max(fphi.grid))
    op = _sinogram_operator(fphi.grid, sino, axis)
    return sino.with_values((op @ fphi.values.reshape(-1)).reshape(sino.n_angles, sino.n_s))


@dataclass
class GnomonicChart:
    """Chart ``alpha -> alpha'/alpha_axis`` onto a plane grid (axis coordinate positive)."""

    axis: int
    plane: PlaneGrid

    def to_plane(self, alpha):
        a = to_axis_frame(alpha, self.axis)
        return a[..., :2] / a[..., 2:3]

    def to_sphere(self, x):
        x = np.asarray(x, dtype=float)
        a = np.concatenate([x, np.ones(x.shape[:-1] + (1,))], axis=-1)
        a /= np.linalg.norm(a, axis=-1, keepdims=True)
        return from_axis_frame(a, self.axis)

    def covers(self, alpha):
        a = to_axis_frame(alpha, self.axis)
        with np.errstate(divide="ignore", invalid="ignore"):
            x = a[..., :2] / a[..., 2:3]
        return np.all(np.abs(x) <= self.plane.x_max, axis=-1) & (a[..., 2] != 0)


def funk_invert_axis(fphi, axis=3, chart=None, sino=None, tail=True):
    """Single-chart inversion: plane estimate of ``2 phi(alpha) alpha_axis^2``.

    Returns the filtered backprojection of ``funk_to_sinogram(fphi, axis)``
    on the chart's plane grid.
    """
    if chart is None:
        chart = GnomonicChart(axis, PlaneGrid(101, 101, 2.5))
    if sino is None:
        sino = Sinogram2D(360, 401, default_s_max(fphi.grid))
    g = funk_to_sinogram(fphi, axis, sino)
    K = filter_matrix(sino.n_s, sino.ds, sino.s_max, tail=tail)
    filt = g.values @ K.T
    pts = chart.plane.points().reshape(-1, 2)
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], 4096):
        B = backprojection_matrix(sino, pts[start : start + 4096])
        out[start : start + 4096] = B @ filt.reshape(-1)
    vals = out.reshape(chart.plane.n_x, chart.plane.n_y) / (4 * np.pi)
    return PlaneGrid(chart.plane.n_x, chart.plane.n_y, chart.plane.x_max, vals)


class FunkInverter:
    """Precomputed blended Funk inversion on a fixed hemisphere grid.

    The operator is linear and the same for every time slice, so the
    interpolation, filtering and backprojection stages are assembled once
    and applied to many columns at a time.

    Parameters
    ----------
    grid : SphereGrid
        Grid of both the input ``F phi`` and the output ``phi``.
    k : int
        Even weight exponent; axis ``i`` contributes with weight ``|alpha_i|^k``.
    n_angles, n_s : int
        Intermediate sinogram size.
    s_max : float, optional
        Sinogram offset range; defaults to ``cot(polar_min)``.
    x_max : float
        Half-width of each chart; chart points beyond it are dropped.
    tail : bool
        Continue sinogram rows beyond ``s_max`` with their ``1/sqrt(1+s^2)``
        decay instead of zeros.
    """

    def __init__(self, grid, k=2, n_angles=360, n_s=401, s_max=None, x_max=2.5, tail=True):
        if k < 0 or k % 2:
            raise ValueError("weight exponent k must be a non-negative even integer")
        self.grid = grid
        self.k = k
        self.sino = Sinogram2D(n_angles, n_s, default_s_max(grid) if s_max is None else s_max)
        self.x_max = x_max
        self.K = filter_matrix(n_s, self.sino.ds, self.sino.s_max, tail=tail)
        nodes = grid.directions().reshape(-1, 3)
        self._axes = []
        denom = np.zeros(grid.size)
        for axis in (1, 2, 3):
            a = to_axis_frame(nodes, axis)
            a3 = a[:, 2]
            with np.errstate(divide="ignore", invalid="ignore"):
                x = a[:, :2] / a3[:, None]
            valid = (np.abs(a3) > 0) & np.all(np.abs(x) <= x_max, axis=1)
            idx = np.flatnonzero(valid)
            weight = np.abs(a3[idx]) ** k
            denom[idx] += np.abs(a3[idx]) ** (k + 2)
            A = _sinogram_operator(grid, self.sino, axis)
            B = backprojection_matrix(self.sino, x[idx]) / (4 * np.pi)
            self._axes.append((idx, weight, A, B.tocsr()))
        if np.any(denom == 0):
            raise ValueError("some sphere nodes are not covered by any chart; increase x_max")
        self._denom = 2.0 * denom

    def axis_estimates(self, values):
        """Per-axis estimates of ``2 phi alpha_i^2`` at the nodes each chart covers."""
        v = np.asarray(values, dtype=float).reshape(self.grid.size, -1)
        na, ns = self.sino.n_angles, self.sino.n_s
        out = []
        for idx, _, A, B in self._axes:
            g = (A @ v).reshape(na, ns, -1)
            filt = np.einsum("ij,ajt->ait", self.K, g, optimize=True)
            out.append((idx, B @ filt.reshape(na * ns, -1)))
        return out

    def apply(self, values):
        """Invert node values of shape ``grid.shape`` or ``grid.shape + (n_t,)``."""
        values = np.asarray(values, dtype=float)
        extra = values.shape[2:]
        acc = np.zeros((self.grid.size, int(np.prod(extra, dtype=int))))
        for (idx, phi_i), (_, weight, _, _) in zip(self.axis_estimates(values), self._axes):
            acc[idx] += weight[:, None] * phi_i
        acc /= self._denom[:, None]
        return acc.reshape(self.grid.shape + extra)


def funk_invert_stabilized(fphi, k=2, **kwargs):
    """Recover an even ``phi`` from its great-circle integrals on the same grid."""
    inv = FunkInverter(fphi.grid, k=k, **kwargs)
    return SphereFunction(fphi.grid, inv.apply(fphi.values))
