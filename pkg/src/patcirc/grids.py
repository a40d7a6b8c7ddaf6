"""Sampled-data containers shared across the package.

All sphere data are stored on the upper hemisphere only; values at a lower
hemisphere direction are read from its antipode (the stored functions are
even).
"""

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

__all__ = [
    "Kind",
    "SphereGrid",
    "SphereTimeGrid",
    "DetectorData",
    "SphereFunction",
    "PlaneGrid",
    "Sinogram2D",
    "VolumeGrid",
]


class Kind(IntEnum):
    """Tag stored with sphere-time data (also the byte written to disk)."""

    P = 0
    FPHI = 1
    R_S = 2
    P_BOUNDARY = 3
    G_AVG = 4
    R_P = 5


@dataclass(frozen=True)
class SphereGrid:
    """Polar x azimuth grid on the closed upper hemisphere.

    Polar nodes are uniform on ``[polar_min, pi/2]`` inclusive, azimuths are
    uniform on ``[0, 2 pi)``.
    """

    n_polar: int = 50
    n_az: int = 200
    polar_min: float = np.pi / 25

    def __post_init__(self):
        if self.n_polar < 2 or self.n_az < 2:
            raise ValueError("sphere grid needs at least 2 polar and 2 azimuthal nodes")
        if not 0.0 < self.polar_min < np.pi / 2:
            raise ValueError("polar_min must lie in (0, pi/2)")

    @property
    def polar(self):
        return np.linspace(self.polar_min, np.pi / 2, self.n_polar)

    @property
    def az(self):
        return 2 * np.pi * np.arange(self.n_az) / self.n_az

    @property
    def d_polar(self):
        return (np.pi / 2 - self.polar_min) / (self.n_polar - 1)

    @property
    def d_az(self):
        return 2 * np.pi / self.n_az

    @property
    def shape(self):
        return (self.n_polar, self.n_az)

    @property
    def size(self):
        return self.n_polar * self.n_az

    def directions(self):
        """Unit vectors of the nodes, shape ``(n_polar, n_az, 3)``."""
        th, ph = np.meshgrid(self.polar, self.az, indexing="ij")
        st = np.sin(th)
        return np.stack([st * np.cos(ph), st * np.sin(ph), np.cos(th)], axis=-1)

    def area_weights(self):
        """Hemisphere cell areas per node, shape ``(n_polar, n_az)``.

        Polar cells are bounded by midpoints between nodes; the first cell is
        extended to the pole and the last ends on the equator, so the weights
        sum to ``2 pi``.
        """
        th = self.polar
        edges = np.concatenate([[0.0], 0.5 * (th[1:] + th[:-1]), [np.pi / 2]])
        band = np.cos(edges[:-1]) - np.cos(edges[1:])
        return np.repeat((band * self.d_az)[:, None], self.n_az, axis=1)


@dataclass(frozen=True)
class SphereTimeGrid:
    """Product of a hemisphere grid and a uniform time grid on ``[0, t_max]``."""

    sphere: SphereGrid = field(default_factory=SphereGrid)
    n_t: int = 50
    t_max: float = 2.0
    r_det: float = 1.0

    def __post_init__(self):
        if self.n_t < 2:
            raise ValueError("need at least two time samples")
        if self.t_max <= 0 or self.r_det <= 0:
            raise ValueError("t_max and r_det must be positive")

    @property
    def times(self):
        return np.linspace(0.0, self.t_max, self.n_t)

    @property
    def dt(self):
        return self.t_max / (self.n_t - 1)

    @property
    def shape(self):
        return (self.sphere.n_polar, self.sphere.n_az, self.n_t)


@dataclass
class DetectorData:
    """Samples of a function on ``S^2 x [0, t_max]``; values ``(polar, az, t)``."""

    grid: SphereTimeGrid
    values: np.ndarray
    kind: Kind = Kind.P

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} does not match grid {self.grid.shape}")
        self.kind = Kind(self.kind)

    def with_values(self, values, kind=None):
        return DetectorData(self.grid, values, self.kind if kind is None else kind)

    def time_slice(self, i):
        return SphereFunction(self.grid.sphere, self.values[:, :, i])


@dataclass
class SphereFunction:
    """Samples of an even function on ``S^2``; values ``(polar, az)``."""

    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} does not match grid {self.grid.shape}")


@dataclass
class PlaneGrid:
    """Uniform ``n_x x n_y`` grid on ``[-x_max, x_max]^2``; values ``(ix, iy)``.

    Nodes include both end points.
    """

    n_x: int
    n_y: int
    x_max: float
    values: np.ndarray = None

    def __post_init__(self):
        if self.values is None:
            self.values = np.zeros((self.n_x, self.n_y))
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.n_x, self.n_y):
            raise ValueError("plane values do not match grid size")

    @property
    def x(self):
        return np.linspace(-self.x_max, self.x_max, self.n_x)

    @property
    def y(self):
        return np.linspace(-self.x_max, self.x_max, self.n_y)

    @property
    def spacing(self):
        return 2 * self.x_max / (self.n_x - 1)

    def points(self):
        xx, yy = np.meshgrid(self.x, self.y, indexing="ij")
        return np.stack([xx, yy], axis=-1)


@dataclass
class Sinogram2D:
    """2D Radon data: angles uniform on ``[0, pi)``, offsets uniform on ``[-s_max, s_max]``.

    The line direction is ``omega = (cos psi, sin psi)``; values are ``(angle, offset)``.
    """

    n_angles: int
    n_s: int
    s_max: float
    values: np.ndarray = None

    def __post_init__(self):
        if self.values is None:
            self.values = np.zeros((self.n_angles, self.n_s))
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.n_angles, self.n_s):
            raise ValueError("sinogram values do not match (n_angles, n_s)")
        if self.s_max <= 0:
            raise ValueError("s_max must be positive")

    @property
    def angles(self):
        return np.pi * np.arange(self.n_angles) / self.n_angles

    @property
    def s(self):
        return np.linspace(-self.s_max, self.s_max, self.n_s)

    @property
    def ds(self):
        return 2 * self.s_max / (self.n_s - 1)

    def directions(self):
        psi = self.angles
        return np.stack([np.cos(psi), np.sin(psi)], axis=-1)

    def with_values(self, values):
        return Sinogram2D(self.n_angles, self.n_s, self.s_max, values)


@dataclass
class VolumeGrid:
    """``n^3`` voxels on ``[-h, h]^3`` (cell centers); values indexed ``(x1, x2, x3)``."""

    n: int = 80
    half_width: float = 1.0
    values: np.ndarray = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("volume grid needs n >= 2")
        if self.values is None:
            self.values = np.zeros((self.n,) * 3)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.n,) * 3:
            raise ValueError("volume values do not match n^3")

    @property
    def axis(self):
        h = 2 * self.half_width / self.n
        return -self.half_width + h * (np.arange(self.n) + 0.5)

    @property
    def spacing(self):
        return 2 * self.half_width / self.n

    def centers(self):
        a = self.axis
        return np.stack(np.meshgrid(a, a, a, indexing="ij"), axis=-1)

    def like(self, values):
        return VolumeGrid(self.n, self.half_width, values)
