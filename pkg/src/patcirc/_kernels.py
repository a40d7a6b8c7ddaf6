"""Compiled inner loops (numba)."""

import numba
import numpy as np

# the bundled TBB is often too old and warns; prefer OpenMP
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


@numba.njit(parallel=True, cache=True)
def sphere_backproject(nodes, weights, w, dt, points, out, outside):
    """``out[i] = sum_j weights[j] * (w_j(|n_j - x_i|)/|n_j - x_i| + w_j(|n_j + x_i|)/|n_j + x_i|)``.

    ``nodes`` are detector positions on the stored hemisphere; the second
    term is the mirrored node ``-n_j`` carrying the same (even) data.
    ``w`` is sampled on ``t = 0, dt, ...`` and interpolated linearly; radii
    outside the sampled range contribute zero and are counted per point.
    The summation order per point is fixed, so results do not depend on the
    number of threads.
    """
    n_nodes, n_t = w.shape
    t_last = dt * (n_t - 1)
    for i in numba.prange(points.shape[0]):
        x0, x1, x2 = points[i, 0], points[i, 1], points[i, 2]
        acc = 0.0
        miss = 0
        for j in range(n_nodes):
            for sign in (-1.0, 1.0):
                d0 = nodes[j, 0] + sign * x0
                d1 = nodes[j, 1] + sign * x1
                d2 = nodes[j, 2] + sign * x2
                r = np.sqrt(d0 * d0 + d1 * d1 + d2 * d2)
                if r <= 0.0 or r > t_last:
                    miss += 1
                    continue
                f = r / dt
                k = min(int(f), n_t - 2)
                a = f - k
                acc += weights[j] * ((1.0 - a) * w[j, k] + a * w[j, k + 1]) / r
        out[i] = acc
        outside[i] = miss
