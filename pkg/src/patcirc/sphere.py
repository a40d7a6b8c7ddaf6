"""Geometry on the unit sphere: great-circle frames, quadrature rules and
interpolation of hemisphere-stored even functions."""

import numpy as np
from scipy import sparse

__all__ = [
    "great_circle_frame",
    "great_circle_points",
    "gauss_sphere_rule",
    "interp_matrix",
    "interp_sphere",
]


def great_circle_frame(theta):
    """Orthonormal ``(u, v)`` spanning the plane orthogonal to ``theta``.

    ``u = (-t2, t1, 0)/|t'|`` and ``v = (t1 t3, t2 t3, -|t'|^2)/|t'|`` with
    ``t' = (t1, t2)``. At the poles the frame is ``e1, e2``.

    Parameters
    ----------
    theta : array_like, shape (..., 3)
    """
    theta = np.asarray(theta, dtype=float)
    t1, t2, t3 = theta[..., 0], theta[..., 1], theta[..., 2]
    rho = np.hypot(t1, t2)
    pole = rho < 1e-14
    safe = np.where(pole, 1.0, rho)
    u = np.stack([-t2 / safe, t1 / safe, np.zeros_like(t1)], axis=-1)
    v = np.stack([t1 * t3 / safe, t2 * t3 / safe, -rho], axis=-1)
    if np.any(pole):
        u[pole] = (1.0, 0.0, 0.0)
        v[pole] = (0.0, 1.0, 0.0)
    return u, v


def great_circle_points(theta, n_circle):
    """Uniform nodes ``u cos tau_j + v sin tau_j`` on the circle orthogonal to ``theta``.

    Returns an array of shape ``(..., n_circle, 3)``.
    """
    u, v = great_circle_frame(theta)
    tau = 2 * np.pi * np.arange(n_circle) / n_circle
    c, s = np.cos(tau)[:, None], np.sin(tau)[:, None]
    return u[..., None, :] * c + v[..., None, :] * s


def gauss_sphere_rule(n_polar, n_az):
    """Product rule on ``S^2``: Gauss-Legendre in ``cos(polar)`` times uniform azimuth.

    Returns
    -------
    nodes : ndarray, shape (n_polar * n_az, 3)
    weights : ndarray, shape (n_polar * n_az,)
        Sum to ``4 pi``.
    """
    x, w = np.polynomial.legendre.leggauss(n_polar)
    phi = 2 * np.pi * np.arange(n_az) / n_az
    st = np.sqrt(1.0 - x * x)
    nodes = np.stack(
        [
            np.outer(st, np.cos(phi)),
            np.outer(st, np.sin(phi)),
            np.repeat(x[:, None], n_az, axis=1),
        ],
        axis=-1,
    ).reshape(-1, 3)
    weights = np.repeat(w * (2 * np.pi / n_az), n_az)
    return nodes, weights


def interp_matrix(grid, dirs):
    """Sparse matrix mapping node values of ``grid`` to values at ``dirs``.

    Bilinear in (polar, azimuth) with periodic azimuth. Lower-hemisphere
    directions are reflected through the origin. Inside the unsampled polar
    cap the azimuthal mean is extrapolated as ``a + b polar^2`` from the first
    two ring means and the azimuthal variation of the first ring is scaled
    down linearly towards the pole.

    Parameters
    ----------
    grid : SphereGrid
    dirs : array_like, shape (..., 3)

    Returns
    -------
    scipy.sparse.csr_matrix, shape (prod(dirs.shape[:-1]), grid.size)
    """
    d = np.asarray(dirs, dtype=float).reshape(-1, 3)
    m = d.shape[0]
    flip = d[:, 2] < 0
    d = np.where(flip[:, None], -d, d)
    polar = np.arccos(np.clip(d[:, 2] / np.linalg.norm(d, axis=1), -1.0, 1.0))
    az = np.mod(np.arctan2(d[:, 1], d[:, 0]), 2 * np.pi)

    n_p, n_a = grid.n_polar, grid.n_az
    a = az / grid.d_az
    k0 = np.floor(a).astype(np.int64)
    wa = a - k0
    k0 %= n_a
    k1 = (k0 + 1) % n_a

    cap = polar < grid.polar_min
    p = (polar - grid.polar_min) / grid.d_polar
    j0 = np.clip(np.floor(p).astype(np.int64), 0, n_p - 2)
    wp = np.clip(p - j0, 0.0, 1.0)
    wc = np.where(cap, polar / grid.polar_min, 1.0)
    j0 = np.where(cap, 0, j0)
    wp = np.where(cap, 0.0, wp)

    rows = np.arange(m)
    r = [rows] * 4
    c = [j0 * n_a + k0, j0 * n_a + k1, (j0 + 1) * n_a + k0, (j0 + 1) * n_a + k1]
    w = [wc * (1 - wp) * (1 - wa), wc * (1 - wp) * wa, wc * wp * (1 - wa), wc * wp * wa]
    if np.any(cap):
        # pole value from the ring means, even in polar angle: a + b polar^2
        th0, th1 = grid.polar_min, grid.polar_min + grid.d_polar
        crow = rows[cap]
        q = (polar[cap] ** 2 - th0**2) / (th1**2 - th0**2)
        w_mean0 = (1.0 - q - wc[cap]) / n_a
        r += [np.repeat(crow, n_a), np.repeat(crow, n_a)]
        c += [np.tile(np.arange(n_a), crow.size), np.tile(np.arange(n_a, 2 * n_a), crow.size)]
        w += [np.repeat(w_mean0, n_a), np.repeat(q / n_a, n_a)]
    mat = sparse.coo_matrix(
        (np.concatenate(w), (np.concatenate(r), np.concatenate(c))), shape=(m, grid.size)
    )
    return mat.tocsr()


def interp_sphere(grid, values, dirs):
    """Interpolate hemisphere node values (shape ``grid.shape + extra``) at ``dirs``.

    Returns an array of shape ``dirs.shape[:-1] + extra``.
    """
    dirs = np.asarray(dirs, dtype=float)
    values = np.asarray(values, dtype=float)
    extra = values.shape[2:]
    mat = interp_matrix(grid, dirs)
    out = mat @ values.reshape(grid.size, -1)
    return out.reshape(dirs.shape[:-1] + extra)
