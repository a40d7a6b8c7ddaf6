"""Range conditions for ``R_P`` data and for detector data ``P``.

Data in the range are even in ``theta``; detector data integrate to zero
over ``[0, 2 r_det]``; and the spherical-harmonic coefficients of the
moments

    H g(theta, lam) = int g(theta, t) j(lam t) t^2 dt,    j(x) = sin(x) / x,

vanish when ``lam r_det`` is a positive zero of ``J_{l+1/2}``. For detector
data the moment is taken of ``int_0^t P``, with weight ``t`` instead of ``t^2``.
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .grids import DetectorData, Kind, SphereFunction
from .specfun import bessel_zeros, harmonic_indices, real_sph_harm

__all__ = [
    "RangeReport",
    "check_even",
    "check_zero_integral",
    "moment_transform",
    "moment_transform_P",
    "harmonic_coefficient",
    "range_report",
]


def _ratio(num, den):
    return 0.0 if den == 0 else float(num / den)


def check_even(data, antipodal=None):
    """Largest ``|g(theta, t) - g(-theta, t)|`` relative to ``max |g|``.

    Parameters
    ----------
    data : DetectorData
        Values at the stored upper-hemisphere nodes.
    antipodal : DetectorData or ndarray, optional
        Values at the mirrored nodes ``-theta``. Without it only the equator
        ring can be checked, where ``-theta`` is the node half a turn away in
        azimuth (needs an even number of azimuths).
    """
    g = data.values
    if antipodal is not None:
        mirror = np.asarray(getattr(antipodal, "values", antipodal), dtype=float)
        scale = max(np.abs(g).max(initial=0.0), np.abs(mirror).max(initial=0.0))
        return _ratio(np.abs(g - mirror).max(initial=0.0), scale)
    n_az = data.grid.sphere.n_az
    if n_az % 2:
        raise ValueError("equator pairs need an even number of azimuths")
    ring = g[-1]
    diff = np.abs(ring - np.roll(ring, n_az // 2, axis=0)).max(initial=0.0)
    return _ratio(diff, np.abs(g).max(initial=0.0))


def check_zero_integral(data):
    """Largest ``|int_0^t_max P dt|`` over directions, relative to ``max |P|`` (trapezoid)."""
    P = data.values
    integral = trapezoid(P, dx=data.grid.dt, axis=-1)
    return _ratio(np.abs(integral).max(initial=0.0), np.abs(P).max(initial=0.0))


def _sinc_weight(t, lam):
    # j(lam t) = sin(lam t) / (lam t), equal to 1 at t = 0
    return np.sinc(lam * t / np.pi)


def moment_transform(data, lam):
    """``int g(theta, t) j(lam t) t^2 dt`` per direction (trapezoid in ``t``)."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    t = data.grid.times
    vals = trapezoid(data.values * (_sinc_weight(t, lam) * t * t), dx=data.grid.dt, axis=-1)
    return SphereFunction(data.grid.sphere, vals)


def moment_transform_P(data, lam):
    """``int (int_0^t P) j(lam t) t dt`` per direction for detector data."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    t = data.grid.times
    running = cumulative_trapezoid(data.values, dx=data.grid.dt, axis=-1, initial=0.0)
    vals = trapezoid(running * (_sinc_weight(t, lam) * t), dx=data.grid.dt, axis=-1)
    return SphereFunction(data.grid.sphere, vals)


def _harmonic_matrix(grid, indices):
    """Rows ``(1 + (-1)^l) w Y_l^m`` so that a dot product with hemisphere values
    of an even function gives its full-sphere coefficient."""
    dirs = grid.directions().reshape(-1, 3)
    w = grid.area_weights().reshape(-1)
    return np.stack([(1 + (-1) ** l) * w * real_sph_harm(l, m, dirs) for l, m in indices])


def harmonic_coefficient(fn, l, m):
    """``int_{S^2} h Y_l^m dS`` for an even ``h`` stored on the hemisphere."""
    return float(_harmonic_matrix(fn.grid, [(l, m)])[0] @ fn.values.reshape(-1))


@dataclass
class RangeReport:
    """Residuals of the range conditions; see :func:`range_report`."""

    evenness_residual: float
    zero_integral_residual: float
    moment_table: list = field(default_factory=list)
    thresholds: dict = field(default_factory=dict)

    @property
    def max_moment_residual(self):
        return max((row[4] for row in self.moment_table), default=0.0)

    def passed(self, threshold=None):
        """True if every residual is at most ``threshold`` (or the stored thresholds)."""
        th = self.thresholds if threshold is None else dict.fromkeys(("evenness", "zero_integral", "moment"), threshold)
        checks = [
            (self.evenness_residual, th.get("evenness", np.inf)),
            (self.zero_integral_residual, th.get("zero_integral", np.inf)),
            (self.max_moment_residual, th.get("moment", np.inf)),
        ]
        return all(v <= lim for v, lim in checks if v is not None)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["l", "m", "zero_index", "lambda", "residual"])
        for l, m, k, lam, res in self.moment_table:
            writer.writerow([l, m, k, repr(float(lam)), repr(float(res))])
        return buf.getvalue()

    def summary(self):
        lines = [
            f"evenness residual       {self.evenness_residual:.3e}" if self.evenness_residual is not None else "evenness residual       n/a",
            f"zero-integral residual  {self.zero_integral_residual:.3e}" if self.zero_integral_residual is not None else "zero-integral residual  n/a",
            f"max moment residual     {self.max_moment_residual:.3e} over {len(self.moment_table)} entries",
        ]
        if self.moment_table:
            worst = max(self.moment_table, key=lambda row: row[4])
            lines.append(f"worst entry             l={worst[0]} m={worst[1]} zero {worst[2]} lambda={worst[3]:.6f}")
        for name, value in self.thresholds.items():
            lines.append(f"threshold {name:<14} {value:.3e}")
        lines.append("verdict                 " + ("PASS" if self.passed() else "FAIL"))
        return "\n".join(lines)


def range_report(data, l_max=4, n_zeros=5, antipodal=None, threshold=1e-2, n_scan=50, floor=1e-9):
    """Evaluate all range conditions for ``R_P`` data or detector data.

    Detector data (kind ``P``) use :func:`moment_transform_P` and get a
    zero-integral check; other kinds use :func:`moment_transform`.

    For every ``(l, m)`` with ``l <= l_max`` and each of the first
    ``n_zeros`` zeros ``lam_k`` of ``J_{l+1/2}(lam r_det)`` the residual is
    ``|c_lm(lam_k)|`` divided by ``max |c_lm(lam)|`` over ``n_scan`` values
    of ``lam`` on ``(0, lam_{n_zeros} + pi]``. Coefficients whose scan
    maximum is below ``floor`` times the largest scan maximum of the table
    are identically zero up to rounding and get residual 0.

    Returns
    -------
    RangeReport
    """
    if l_max < 0 or n_zeros < 1:
        raise ValueError("need l_max >= 0 and n_zeros >= 1")
    is_P = data.kind == Kind.P
    moment = moment_transform_P if is_P else moment_transform
    r_det = data.grid.r_det
    indices = harmonic_indices(l_max)
    Y = _harmonic_matrix(data.grid.sphere, indices)

    def coeffs(lam):
        return Y @ moment(data, lam).values.reshape(-1)

    rows = []
    scan_max = {}
    zero_vals = {}
    for l in range(l_max + 1):
        zeros = np.asarray(bessel_zeros(l, n_zeros)) / r_det
        lam_scan = np.linspace(0, zeros[-1] + np.pi, n_scan + 1)[1:]
        sel = [i for i, (ll, _) in enumerate(indices) if ll == l]
        scan = np.abs(np.stack([coeffs(lam)[sel] for lam in lam_scan]))
        at_zero = np.abs(np.stack([coeffs(lam)[sel] for lam in zeros]))
        for j, i in enumerate(sel):
            scan_max[indices[i]] = scan[:, j].max()
            zero_vals[indices[i]] = (zeros, at_zero[:, j])
    top = max(scan_max.values(), default=0.0)
    for l, m in indices:
        zeros, vals = zero_vals[(l, m)]
        den = scan_max[(l, m)]
        for k, (lam, v) in enumerate(zip(zeros, vals), start=1):
            res = 0.0 if den <= floor * top else _ratio(v, den)
            rows.append((l, m, k, float(lam), res))
    return RangeReport(
        evenness_residual=check_even(data, antipodal),
        zero_integral_residual=check_zero_integral(data) if is_P else None,
        moment_table=rows,
        thresholds={"evenness": threshold, "zero_integral": threshold, "moment": threshold},
    )
