"""Planar Radon transform, its filters and filtered backprojection.

Conventions: ``R[Phi](omega, s) = int Phi(s omega + nu omega_perp) dnu`` with
``omega = (cos psi, sin psi)``, ``psi`` in ``[0, pi)``. The inversion is

    Phi = (1 / 4 pi) R^# H d/ds R Phi,

with ``H u(s) = p.v. (1/pi) int u(s') / (s - s') ds'`` and ``R^#`` the
backprojection over the full circle. Sinograms from even data satisfy
``u(-omega, -s) = u(omega, s)``, so only half the angles are stored and the
angular sum is doubled.
"""

import numpy as np
from scipy import integrate, ndimage, sparse
from scipy.linalg import toeplitz
from scipy.signal import fftconvolve

from .grids import PlaneGrid, Sinogram2D

__all__ = [
    "radon2d_forward",
    "radon2d_sinogram",
    "d_ds",
    "hilbert_weights",
    "hilbert",
    "tail_kernel",
    "filter_matrix",
    "backprojection_matrix",
    "backprojection",
    "backproject_points",
    "fbp_invert",
    "fbp_invert_points",
]


def radon2d_forward(plane, omega, s, step=None):
    """Line integrals of a gridded function.

    Samples ``nu`` uniformly on ``[-nu_max, nu_max]`` (``nu_max`` the half
    diagonal of the grid) with step at most the grid spacing and reads the
    grid by bilinear interpolation; samples off the grid count as zero.

    Parameters
    ----------
    plane : PlaneGrid
    omega : array_like, shape (..., 2)
        Unit line normals.
    s : array_like, shape (...)
        Signed offsets.
    """
    omega = np.asarray(omega, dtype=float)
    s = np.asarray(s, dtype=float)
    omega, s = np.broadcast_arrays(omega, s[..., None])
    s = s[..., 0]
    h = plane.spacing if step is None else min(step, plane.spacing)
    nu_max = np.sqrt(2.0) * plane.x_max
    n_nu = int(np.ceil(2 * nu_max / h)) + 1
    nu = np.linspace(-nu_max, nu_max, n_nu)
    dnu = nu[1] - nu[0]
    flat_w = omega.reshape(-1, 2)
    flat_s = s.reshape(-1)
    out = np.empty(flat_s.size)
    chunk = max(1, 2_000_000 // n_nu)
    for start in range(0, flat_s.size, chunk):
        w = flat_w[start : start + chunk]
        ss = flat_s[start : start + chunk]
        perp = np.stack([-w[:, 1], w[:, 0]], axis=-1)
        pts = ss[:, None, None] * w[:, None, :] + nu[None, :, None] * perp[:, None, :]
        idx = (pts + plane.x_max) / plane.spacing
        vals = ndimage.map_coordinates(plane.values, [idx[..., 0].ravel(), idx[..., 1].ravel()], order=1, mode="constant", cval=0.0)
        vals = vals.reshape(idx.shape[:2])
        # periodic-free trapezoid: end samples lie off the support
        out[start : start + chunk] = dnu * (vals.sum(axis=1) - 0.5 * (vals[:, 0] + vals[:, -1]))
    return out.reshape(s.shape)


def radon2d_sinogram(plane, n_angles, n_s, s_max):
    """Sample ``radon2d_forward`` on a full sinogram grid."""
    sino = Sinogram2D(n_angles, n_s, s_max)
    w = sino.directions()[:, None, :]
    vals = radon2d_forward(plane, np.broadcast_to(w, (n_angles, n_s, 2)), np.broadcast_to(sino.s, (n_angles, n_s)))
    return sino.with_values(vals)


def d_ds(sino):
    """Derivative in ``s``: central differences inside, second-order one-sided at the ends."""
    if sino.n_s < 3:
        raise ValueError("d_ds needs n_s >= 3")
    return sino.with_values(np.gradient(sino.values, sino.ds, axis=1, edge_order=2))


def hilbert_weights(n):
    """Weights ``w_k``, ``k = -(n-1) .. n-1``, of the discrete Hilbert convolution.

    ``w_k = p.v. int hat(x) / (k - x) dx`` for the unit hat function on
    ``[-1, 1]``, i.e. the exact Hilbert kernel of the piecewise-linear
    interpolant: ``w_k = g(k+1) - 2 g(k) + g(k-1)`` with ``g(x) = x ln|x|``.
    """
    k = np.arange(-(n - 1), n, dtype=float)

    def g(x):
        ax = np.abs(x)
        return np.where(ax > 0, x * np.log(np.where(ax > 0, ax, 1.0)), 0.0)

    w = g(k + 1) - 2 * g(k) + g(k - 1)
    w[n - 1] = 0.0
    return w


def hilbert(samples, ds=None):
    """Discrete Hilbert transform along the last axis of uniformly spaced samples.

    ``H[u]_i = (1/pi) sum_j u_j w_{i-j}``. The kernel is scale free, so ``ds``
    is accepted for symmetry with the continuum operator but not needed.
    Samples are zero-extended beyond the grid; callers pad if needed.
    """
    u = np.asarray(samples, dtype=float)
    n = u.shape[-1]
    w = hilbert_weights(n)
    shape = (1,) * (u.ndim - 1) + (w.size,)
    full = fftconvolve(u, w.reshape(shape), mode="full", axes=-1)
    return full[..., n - 1 : 2 * n - 1] / np.pi


def tail_kernel(s, s_max):
    """Hilbert-filter response to a sinogram tail beyond ``+s_max``.

    Models the row as ``G(s) = G(s_max) sqrt(1 + s_max^2) / sqrt(1 + s^2)``
    for ``s > s_max`` (the decay of Funk-derived sinograms) and returns
    ``(1/pi) int_{s_max}^inf G'(s') / (s - s') ds'`` per unit ``G(s_max)``.
    The kernel for the ``-s_max`` end is ``tail_kernel(-s, s_max)``.
    """
    s = np.asarray(s, dtype=float)
    c = np.sqrt(1.0 + s_max * s_max)
    inner = s < s_max * (1 - 1e-12)

    def integrand(x):
        return -c * x / (1.0 + x * x) ** 1.5 / (s[inner] - x)

    out = np.zeros_like(s)
    if np.any(inner):
        val, _ = integrate.quad_vec(integrand, s_max, np.inf, epsabs=1e-13, epsrel=1e-10)
        out[inner] = val / np.pi
    return out


def filter_matrix(n_s, ds, s_max=None, tail=False):
    """Dense ``n_s x n_s`` matrix of ``H o d/ds`` acting on one sinogram row.

    With ``tail=True`` the row is continued beyond ``+-s_max`` by the decay
    model of :func:`tail_kernel` instead of by zeros (needs ``s_max``).
    """
    w = hilbert_weights(n_s)
    # T[i, j] = w_{i-j}
    T = toeplitz(w[n_s - 1 :], w[n_s - 1 :: -1]) / np.pi
    D = np.gradient(np.eye(n_s), ds, axis=0, edge_order=2)
    K = T @ D
    if tail:
        if s_max is None:
            raise ValueError("tail continuation needs s_max")
        s = np.linspace(-s_max, s_max, n_s)
        K[:, -1] += tail_kernel(s, s_max)
        K[:, 0] += tail_kernel(-s, s_max)
    return K


def backprojection_matrix(sino, points):
    """Sparse map from flattened sinogram values to ``R^#`` at ``points`` (shape ``(P, 2)``).

    Linear interpolation in ``s``; offsets outside ``[-s_max, s_max]`` read zero.
    The angular rule is the trapezoid sum over ``[0, pi)`` doubled.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n_p = pts.shape[0]
    na, ns = sino.n_angles, sino.n_s
    s = pts @ sino.directions().T
    f = (s + sino.s_max) / sino.ds
    i0 = np.floor(f).astype(np.int64)
    wf = f - i0
    inside = (i0 >= 0) & (i0 <= ns - 1)
    i0c = np.clip(i0, 0, ns - 2)
    wf = np.where(i0 == ns - 1, 1.0, wf)  # exactly at s_max
    base = np.arange(na)[None, :] * ns
    ang_w = 2 * np.pi / na
    rows = np.repeat(np.arange(n_p), na)
    w0 = np.where(inside, (1 - wf) * ang_w, 0.0).ravel()
    w1 = np.where(inside, wf * ang_w, 0.0).ravel()
    c0 = (base + i0c).ravel()
    mat = sparse.csr_matrix(
        (np.concatenate([w0, w1]), (np.concatenate([rows, rows]), np.concatenate([c0, c0 + 1]))),
        shape=(n_p, na * ns),
    )
    mat.sum_duplicates()
    return mat


def backproject_points(sino, points, chunk=4096):
    """``R^# u`` at arbitrary points, shape ``(P, 2)`` -> ``(P,)``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    flat = sino.values.reshape(-1)
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], chunk):
        out[start : start + chunk] = backprojection_matrix(sino, pts[start : start + chunk]) @ flat
    return out


def backprojection(sino, plane):
    """``R^# u`` on the nodes of ``plane`` (a PlaneGrid used as a descriptor)."""
    vals = backproject_points(sino, plane.points().reshape(-1, 2))
    return PlaneGrid(plane.n_x, plane.n_y, plane.x_max, vals.reshape(plane.n_x, plane.n_y))


def _padded(sino, reach):
    """Zero-extend the offset range so that it covers ``|s| <= reach``."""
    n_extra = max(0, int(np.ceil((reach - sino.s_max) / sino.ds - 1e-9)))
    if n_extra == 0:
        return sino
    vals = np.pad(sino.values, ((0, 0), (n_extra, n_extra)))
    return Sinogram2D(sino.n_angles, sino.n_s + 2 * n_extra, sino.s_max + n_extra * sino.ds, vals)


def _filtered(sino):
    return sino.with_values(hilbert(d_ds(sino).values))


def fbp_invert_points(sino, points):
    """Filtered backprojection evaluated at arbitrary points.

    The sinogram is zero-extended beyond ``s_max`` far enough that the
    filtered data (which do not vanish there) reach every requested point.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    reach = np.linalg.norm(pts, axis=1).max(initial=0.0)
    return backproject_points(_filtered(_padded(sino, reach)), pts) / (4 * np.pi)


def fbp_invert(sino, plane):
    """``(1/4 pi) R^# H d/ds`` applied to ``sino`` on the nodes of ``plane``."""
    vals = fbp_invert_points(sino, plane.points().reshape(-1, 2))
    return PlaneGrid(plane.n_x, plane.n_y, plane.x_max, vals.reshape(plane.n_x, plane.n_y))
