"""Special functions for the range conditions and the test oracles.

Only the three-dimensional case is covered: Legendre polynomials, real
orthonormal spherical harmonics, Bessel functions of half-integer order
``m + 1/2``, their positive zeros and Funk-Hecke coefficients.
"""

import math

import numpy as np
from scipy import integrate, optimize
from scipy.special import gammaln, jv, lpmv

__all__ = [
    "legendre_p",
    "real_sph_harm",
    "bessel_j_half",
    "spherical_bessel_j",
    "bessel_zeros",
    "funk_hecke_coeff",
    "harmonic_indices",
]


def legendre_p(m, x):
    """Legendre polynomial of degree ``m`` by the three-term recurrence.

    Parameters
    ----------
    m : int
        Degree, ``m >= 0``.
    x : float or ndarray
        Evaluation points in ``[-1, 1]``.
    """
    if m < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("legendre_p is defined on [-1, 1]")
    p_prev = np.ones_like(x)
    if m == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for k in range(1, m):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p if p.ndim else float(p)


def harmonic_indices(l_max, even_only=False):
    """All ``(l, m)`` pairs with ``l <= l_max``, ordered by degree then order."""
    step = 2 if even_only else 1
    return [(l, m) for l in range(0, l_max + 1, step) for m in range(-l, l + 1)]


def _as_unit(direction):
    d = np.asarray(direction, dtype=float)
    if d.shape[-1] != 3:
        raise ValueError("directions must be 3-vectors")
    norm = np.linalg.norm(d, axis=-1)
    if np.any(np.abs(norm - 1.0) > 1e-12):
        raise ValueError("direction is not a unit vector")
    return d


def real_sph_harm(l, m, direction):
    """Real orthonormal spherical harmonic ``Y_l^m`` at unit direction(s).

    ``m > 0`` uses ``cos(m phi)``, ``m < 0`` uses ``sin(|m| phi)``. The basis
    satisfies ``int_{S^2} Y_l^m Y_l'^m' dS = delta``.

    Parameters
    ----------
    l, m : int
        Degree and order, ``|m| <= l``.
    direction : array_like, shape (..., 3)
        Unit vectors.
    """
    if l < 0 or abs(m) > l:
        raise ValueError("need l >= 0 and |m| <= l")
    d = _as_unit(direction)
    z = np.clip(d[..., 2], -1.0, 1.0)
    phi = np.arctan2(d[..., 1], d[..., 0])
    am = abs(m)
    log_ratio = gammaln(l - am + 1) - gammaln(l + am + 1)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi) * math.exp(log_ratio))
    plm = lpmv(am, l, z)
    if m == 0:
        out = norm * plm
    elif m > 0:
        out = math.sqrt(2.0) * norm * plm * np.cos(am * phi)
    else:
        out = math.sqrt(2.0) * norm * plm * np.sin(am * phi)
    return out if np.ndim(out) else float(out)


def _j_half_upward(m, t):
    s, c = np.sin(t), np.cos(t)
    pref = np.sqrt(2.0 / (np.pi * t))
    j_prev = pref * s
    if m == 0:
        return j_prev
    j = pref * (s / t - c)
    for k in range(1, m):
        nu = k + 0.5
        j_prev, j = j, (2.0 * nu / t) * j - j_prev
    return j


def _j_half_miller(m, t):
    # Backward recurrence from well above the order; normalize against
    # whichever of J_{1/2}, J_{-1/2} is larger in magnitude.
    start = m + 30 + int(np.max(t))
    j_next = np.zeros_like(t)
    j = np.full_like(t, 1e-300)
    target = np.zeros_like(t)
    for k in range(start, -1, -1):
        # j holds J_{k+1/2}; compute J_{k-1/2} = (2(k+1/2)/t) J_{k+1/2} - J_{k+3/2}
        if k == m:
            target = j.copy()
        j_lower = (2.0 * (k + 0.5) / t) * j - j_next
        j_next, j = j, j_lower
        big = np.abs(j) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            j, j_next, target = j * scale, j_next * scale, target * scale
    # j = J_{-1/2}, j_next = J_{1/2} (unnormalized)
    pref = np.sqrt(2.0 / (np.pi * t))
    half, mhalf = pref * np.sin(t), pref * np.cos(t)
    use_half = np.abs(half) >= np.abs(mhalf)
    ratio = np.where(use_half, half / j_next, mhalf / j)
    return target * ratio


def bessel_j_half(m, t):
    """Bessel function ``J_{m+1/2}(t)`` for ``t > 0``.

    Closed forms for orders 1/2 and 3/2, upward recurrence when ``t >= m`` and
    Miller backward recurrence below that, where the upward sweep is unstable.
    """
    if m < 0:
        raise ValueError("order index m must be >= 0")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("bessel_j_half requires t > 0")
    flat = np.atleast_1d(t).astype(float)
    out = np.empty_like(flat)
    up = flat >= m
    if np.any(up):
        out[up] = _j_half_upward(m, flat[up])
    if np.any(~up):
        out[~up] = _j_half_miller(m, flat[~up])
    out = out.reshape(t.shape)
    return out if out.ndim else float(out)


def spherical_bessel_j(n, t):
    """Normalized spherical Bessel function of order ``n/2 - 1``.

    ``j_nu(t) = 2^nu Gamma(nu + 1) J_nu(t) / t^nu`` with ``j_nu(0) = 1``. For
    ``n = 3`` this is ``sin(t) / t``.

    Parameters
    ----------
    n : int
        Ambient dimension, ``n >= 2``.
    t : float or ndarray
        Arguments, ``t >= 0``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("spherical_bessel_j requires t >= 0")
    nu = n / 2.0 - 1.0
    flat = np.atleast_1d(t)
    out = np.empty_like(flat)
    small = flat < 1e-4
    ts = flat[small]
    # two-term series, exact to O(t^4)
    out[small] = 1.0 - ts * ts / (4.0 * (nu + 1.0))
    tb = flat[~small]
    if tb.size:
        if n == 3:
            out[~small] = np.sin(tb) / tb
        else:
            log_c = nu * math.log(2.0) + math.lgamma(nu + 1.0)
            if n % 2 == 1:
                jnu = bessel_j_half((n - 3) // 2, tb)
            else:
                jnu = jv(nu, tb)
            out[~small] = math.exp(log_c) * jnu / tb**nu
    out = out.reshape(t.shape)
    return out if out.ndim else float(out)


def _dj_half(m, t):
    # J'_nu = J_{nu-1} - (nu/t) J_nu ; J_{-1/2}(t) = sqrt(2/(pi t)) cos t
    nu = m + 0.5
    if m == 0:
        lower = math.sqrt(2.0 / (math.pi * t)) * math.cos(t)
    else:
        lower = bessel_j_half(m - 1, t)
    return lower - nu / t * bessel_j_half(m, t)


def bessel_zeros(m, count):
    """First ``count`` positive zeros of ``J_{m+1/2}``, increasing.

    Sign changes are bracketed on a scan starting at the order (no zero of
    ``J_nu`` lies below ``nu``), refined with Brent's method and polished by
    Newton steps.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    nu = m + 0.5
    step = 0.05
    lo = max(nu, step)
    f_lo = bessel_j_half(m, lo)
    zeros = []
    while len(zeros) < count:
        grid = lo + step * np.arange(1, 201)
        vals = bessel_j_half(m, grid)
        prev_x, prev_f = lo, f_lo
        for x, f in zip(grid, vals):
            if prev_f == 0.0:
                zeros.append(prev_x)
            elif prev_f * f < 0:
                root = optimize.brentq(lambda s: bessel_j_half(m, s), prev_x, x, xtol=1e-15, rtol=1e-15)
                for _ in range(3):
                    fr = bessel_j_half(m, root)
                    if abs(fr) < 1e-16:
                        break
                    root -= fr / _dj_half(m, root)
                zeros.append(root)
            if len(zeros) == count:
                break
            prev_x, prev_f = x, f
        lo, f_lo = grid[-1], vals[-1]
    return np.array(zeros[:count])


def funk_hecke_coeff(m, kernel, tol=1e-10):
    """Funk-Hecke multiplier ``2 pi int_{-1}^{1} h(t) P_m(t) dt`` on ``S^2``.

    Raises
    ------
    RuntimeError
        If adaptive quadrature does not reach ``tol`` (absolute).
    """
    value, err = integrate.quad(lambda x: kernel(x) * legendre_p(m, x), -1.0, 1.0, limit=200, epsabs=tol, epsrel=tol)
    if err > max(tol, tol * abs(value)) * 10:
        raise RuntimeError(f"Funk-Hecke quadrature did not converge: error estimate {err:.3e}")
    return 2.0 * math.pi * value
