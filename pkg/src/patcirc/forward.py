"""Forward models: circular-detector data, spherical means and their Funk transform.

The detector data are circle averages of the boundary pressure,

    P(theta, t) = (1 / 2 pi) int_{theta . alpha = 0} p(r_det alpha, t) dS(alpha),

and ``R_P f = F(R_S f)`` with ``R_S f(alpha, t)`` the integral of ``f`` over
the unit-normalised sphere of radius ``t`` around ``r_det alpha``:

    R_S f(alpha, t) = int_{S^2} f(r_det alpha + t beta) dS(beta).
"""

import numpy as np

from .grids import DetectorData, Kind, SphereTimeGrid
from .phantom import PhantomSpec, _pressure_from_distance, radial_profile
from .sphere import gauss_sphere_rule, great_circle_points

__all__ = [
    "detector_signal",
    "spherical_radon_numeric",
    "rp_numeric",
    "rp_to_detector",
]


def _node_directions(grid, antipodal):
    dirs = grid.sphere.directions()
    return -dirs if antipodal else dirs


def detector_signal(spec, grid=None, n_circle=100, times=None, antipodal=False):
    """Circle averages of the analytic boundary pressure on a sphere-time grid.

    Parameters
    ----------
    spec : PhantomSpec
    grid : SphereTimeGrid, optional
        Defaults to the 50 x 200 x 50 grid on ``[0, 2]``.
    n_circle : int
        Equally spaced nodes per detector circle (periodic trapezoid rule).
    times : array_like, optional
        Sample times replacing ``grid.times``; the result is then a plain
        array of shape ``(n_polar, n_az, len(times))``.
    antipodal : bool
        Evaluate at ``-theta`` instead of the stored nodes (full-sphere checks).

    Returns
    -------
    DetectorData of kind ``P`` (or ndarray if ``times`` is given).
    """
    if n_circle < 8:
        raise ValueError("n_circle must be at least 8")
    grid = SphereTimeGrid() if grid is None else grid
    t = grid.times if times is None else np.asarray(times, dtype=float)
    pts = grid.r_det * great_circle_points(_node_directions(grid, antipodal), n_circle)
    out = np.zeros(grid.sphere.shape + (t.size,))
    for ball in spec.expanded():
        dist = np.linalg.norm(pts - np.asarray(ball.center), axis=-1)
        if np.any(dist <= ball.outer_radius):
            raise ValueError("a phantom component reaches the detector sphere")
        for j, tj in enumerate(t):
            # quick reject: the wave front has not arrived or has passed
            if tj + ball.outer_radius <= dist.min() or tj - ball.outer_radius >= dist.max():
                continue
            out[:, :, j] += _pressure_from_distance(ball, dist, tj).mean(axis=-1)
    if times is not None:
        return out
    return DetectorData(grid, out, Kind.P)


def _ball_sphere_integral(ball, dist, t, n_gauss):
    """``int_{S^2} profile(|y + t beta - x0|) dS(beta)`` for ``|y - x0| = dist``.

    In the frame whose polar axis points from the sphere center to ``x0`` the
    integrand depends only on ``u = cos(polar)``; the integral over ``u`` is
    split where ``|...|`` crosses the inner and outer radii.
    """
    dist, t = np.broadcast_arrays(np.asarray(dist, dtype=float), np.asarray(t, dtype=float))
    out = np.zeros(dist.shape)
    xg, wg = np.polynomial.legendre.leggauss(n_gauss)
    small = dist * t < 1e-14
    # degenerate sphere or sphere centered at x0
    out[small] = 4 * np.pi * radial_profile(ball, np.where(small, dist + t, 0.0)[small])
    dd, tt = dist[~small], t[~small]
    breaks = [-np.ones_like(dd), np.ones_like(dd)]
    for rho in {ball.inner_radius, ball.outer_radius}:
        u = (dd * dd + tt * tt - rho * rho) / (2 * dd * tt)
        breaks.append(np.clip(u, -1.0, 1.0))
    edges = np.sort(np.stack(breaks, axis=-1), axis=-1)
    acc = np.zeros(dd.shape)
    for a, b in zip(edges.T[:-1], edges.T[1:]):
        half = 0.5 * (b - a)
        u = 0.5 * (a + b)[:, None] + half[:, None] * xg[None, :]
        r = np.sqrt(np.maximum(dd[:, None] ** 2 + tt[:, None] ** 2 - 2 * dd[:, None] * tt[:, None] * u, 0.0))
        acc += half * (radial_profile(ball, r) @ wg)
    out[~small] = 2 * np.pi * acc
    return out


def spherical_radon_numeric(f, alpha, t, order=(64, 128), r_det=1.0):
    """Spherical mean integral ``int_{S^2} f(r_det alpha + t beta) dS(beta)``.

    Parameters
    ----------
    f : PhantomSpec or callable
        A callable takes points of shape ``(..., 3)`` and is integrated with
        the product Gauss-Legendre x uniform rule of size ``order``. For a
        phantom each ball is integrated in its own aligned frame with
        ``order[0]`` Gauss nodes per smooth piece in the polar variable; the
        azimuthal integral is exact there.
    alpha : array_like, shape (..., 3)
    t : array_like
        Radii, broadcast against ``alpha.shape[:-1]``.
    order : (int, int)
    """
    alpha = np.asarray(alpha, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("radii must be non-negative")
    centers = r_det * alpha
    shape = np.broadcast_shapes(alpha.shape[:-1], t.shape)
    if isinstance(f, PhantomSpec):
        out = np.zeros(shape)
        for ball in f.expanded():
            dist = np.linalg.norm(centers - np.asarray(ball.center), axis=-1)
            out += ball.amplitude * _ball_sphere_integral(ball, dist, t, order[0])
        return out
    nodes, weights = gauss_sphere_rule(*order)
    c = np.broadcast_to(centers, shape + (3,)).reshape(-1, 3)
    tt = np.broadcast_to(t, shape).reshape(-1)
    out = np.empty(tt.size)
    for i in range(tt.size):
        out[i] = weights @ np.asarray(f(c[i] + tt[i] * nodes), dtype=float)
    return out.reshape(shape)


def rp_numeric(spec, grid=None, n_circle=100, order=(64, 128), times=None, n_table=4001):
    """``R_P f = F(R_S f)`` for a ball phantom on a sphere-time grid.

    For one ball ``R_S`` depends on the detector point only through its
    distance ``d`` to the ball center, so each component's spherical
    integrals are tabulated on ``n_table`` distances and read by linear
    interpolation at the great-circle nodes.

    Returns
    -------
    DetectorData of kind ``R_P`` (or ndarray if ``times`` is given).
    """
    grid = SphereTimeGrid() if grid is None else grid
    t = grid.times if times is None else np.asarray(times, dtype=float)
    pts = grid.r_det * great_circle_points(grid.sphere.directions(), n_circle)
    out = np.zeros(grid.sphere.shape + (t.size,))
    for ball in spec.expanded():
        dist = np.linalg.norm(pts - np.asarray(ball.center), axis=-1)
        table_d = np.linspace(dist.min(), dist.max(), n_table)
        table = ball.amplitude * _ball_sphere_integral(ball, table_d[:, None], t[None, :], order[0])
        for j in range(t.size):
            if not np.any(table[:, j]):
                continue
            out[:, :, j] += np.interp(dist, table_d, table[:, j]).sum(axis=-1) * (2 * np.pi / n_circle)
    if times is not None:
        return out
    return DetectorData(grid, out, Kind.R_P)


def rp_to_detector(spec, grid=None, n_circle=100, order=(64, 128), step=1e-4):
    """Detector data ``(8 pi^2)^-1 d/dt (t R_P f)`` from ``rp_numeric``.

    The time derivative is a central difference with a small ``step`` (one
    sided at ``t = 0``), independent of the grid spacing.
    """
    grid = SphereTimeGrid() if grid is None else grid
    t = grid.times
    lo = np.maximum(t - step, 0.0)
    hi = t + step
    r_lo = rp_numeric(spec, grid, n_circle, order, times=lo)
    r_hi = rp_numeric(spec, grid, n_circle, order, times=hi)
    vals = (hi * r_hi - lo * r_lo) / (hi - lo) / (8 * np.pi**2)
    return DetectorData(grid, vals, Kind.P)
