"""Ball phantoms for the initial pressure and the analytic pressures they radiate.

Two component kinds are supported: ``sharp`` (indicator of a ball) and
``smooth`` (a C^1 radial profile with a cubic blend between an inner radius
``r`` and an outer radius ``R``). Pressures are only evaluated outside each
ball, which is all the detector geometry ever needs.
"""

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .grids import VolumeGrid

__all__ = [
    "BallComponent",
    "PhantomSpec",
    "load_phantom",
    "bundled_phantom",
    "radial_profile",
    "eval_phantom",
    "pressure_sharp",
    "pressure_smooth",
    "pressure_component",
    "boundary_pressure",
    "ground_truth_volume",
]

KINDS = ("sharp", "smooth")


@dataclass(frozen=True)
class BallComponent:
    kind: str
    center: tuple
    outer_radius: float
    inner_radius: float = None
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown component kind {self.kind!r}")
        center = tuple(float(c) for c in self.center)
        if len(center) != 3:
            raise ValueError("center must be a 3-vector")
        object.__setattr__(self, "center", center)
        R = float(self.outer_radius)
        if R <= 0:
            raise ValueError("outer radius must be positive")
        r = R if self.inner_radius is None or self.kind == "sharp" else float(self.inner_radius)
        if self.kind == "smooth" and not 0 < r < R:
            raise ValueError("smooth component needs 0 < inner_radius < outer_radius")
        object.__setattr__(self, "outer_radius", R)
        object.__setattr__(self, "inner_radius", r)
        object.__setattr__(self, "amplitude", float(self.amplitude))

    def mirrored(self):
        return BallComponent(self.kind, tuple(-c for c in self.center), self.outer_radius, self.inner_radius, self.amplitude)

    def to_dict(self):
        return {
            "kind": self.kind,
            "center": list(self.center),
            "outer_radius": self.outer_radius,
            "inner_radius": self.inner_radius,
            "amplitude": self.amplitude,
        }


@dataclass(frozen=True)
class PhantomSpec:
    """Ordered ball components; ``symmetrize`` adds the mirror image ``f(-x)``."""

    components: tuple = field(default_factory=tuple)
    symmetrize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def expanded(self):
        """Components actually radiating: the base list, plus mirrors if symmetrizing."""
        if self.symmetrize:
            return self.components + tuple(c.mirrored() for c in self.components)
        return self.components

    def is_even(self, atol=1e-12):
        """True if every component has a matching mirror component."""
        comps = self.expanded()
        for c in comps:
            m = c.mirrored()
            if not any(
                o.kind == m.kind
                and np.allclose(o.center, m.center, atol=atol)
                and abs(o.outer_radius - m.outer_radius) <= atol
                and abs(o.inner_radius - m.inner_radius) <= atol
                and abs(o.amplitude - m.amplitude) <= atol
                for o in comps
            ):
                return False
        return True

    def validate(self, r_det=1.0):
        """Raise if a ball leaves ``B(0, r_det)``; return warnings for near-contact."""
        warnings = []
        for i, c in enumerate(self.components):
            reach = np.linalg.norm(c.center) + c.outer_radius
            if reach >= r_det:
                raise ValueError(f"component {i} reaches |x| = {reach:.4g} >= r_det = {r_det}")
            if reach > r_det - 1e-3:
                warnings.append(f"component {i} nearly touches the detector sphere (|x| up to {reach:.6g})")
        return warnings

    def to_dict(self):
        return {"symmetrize": self.symmetrize, "components": [c.to_dict() for c in self.components]}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "components" not in data:
            raise ValueError("phantom JSON must be an object with a 'components' list")
        comps = []
        for i, entry in enumerate(data["components"]):
            try:
                comps.append(
                    BallComponent(
                        kind=entry["kind"],
                        center=entry["center"],
                        outer_radius=entry["outer_radius"],
                        inner_radius=entry.get("inner_radius"),
                        amplitude=entry.get("amplitude", 1.0),
                    )
                )
            except (KeyError, TypeError, AttributeError) as exc:
                raise ValueError(f"component {i}: malformed entry ({exc!r})") from None
        return cls(tuple(comps), bool(data.get("symmetrize", True)))


def load_phantom(path):
    with open(path, encoding="utf-8") as fh:
        return PhantomSpec.from_dict(json.load(fh))


def bundled_phantom(name):
    """Load ``fig2`` (sharp) or ``fig3`` (smooth) from the package data."""
    text = resources.files("patcirc").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return PhantomSpec.from_dict(json.loads(text))


def radial_profile(ball, dist):
    """Unit-amplitude profile of a component as a function of distance to its center."""
    dist = np.asarray(dist, dtype=float)
    R, r = ball.outer_radius, ball.inner_radius
    if ball.kind == "sharp":
        return (dist < R).astype(float)
    u = np.clip((dist - r) / (R - r), 0.0, 1.0)
    return 1.0 - 3.0 * u * u + 2.0 * u**3


def eval_phantom(spec, x):
    """Initial pressure at points ``x`` (shape ``(..., 3)``)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1])
    for c in spec.expanded():
        dist = np.linalg.norm(x - np.asarray(c.center), axis=-1)
        out += c.amplitude * radial_profile(c, dist)
    return out


def _pressure_from_distance(ball, dist, t):
    diff = dist - t
    lead = ball.amplitude * diff / (2.0 * dist)
    if ball.kind == "sharp":
        return np.where(np.abs(diff) < ball.outer_radius, lead, 0.0)
    return lead * radial_profile(ball, np.abs(diff))


def _check_outside(ball, dist):
    if np.any(dist <= ball.outer_radius):
        raise ValueError("pressure is only available outside the ball (|x - x0| > R)")


def pressure_sharp(ball, x, t):
    """Pressure radiated by a sharp ball at points outside it.

    ``c (|x-x0| - t) / (2 |x-x0|)`` while ``||x-x0| - t| < R``, zero otherwise.
    """
    if ball.kind != "sharp":
        raise ValueError("pressure_sharp needs a sharp component")
    dist = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(ball.center), axis=-1)
    _check_outside(ball, dist)
    return _pressure_from_distance(ball, dist, np.asarray(t, dtype=float))


def pressure_smooth(ball, x, t):
    """Pressure radiated by a smooth ball: ``c (d - t)/(2 d) * profile(|d - t|)``."""
    if ball.kind != "smooth":
        raise ValueError("pressure_smooth needs a smooth component")
    dist = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(ball.center), axis=-1)
    _check_outside(ball, dist)
    return _pressure_from_distance(ball, dist, np.asarray(t, dtype=float))


def pressure_component(ball, x, t):
    if ball.kind == "sharp":
        return pressure_sharp(ball, x, t)
    return pressure_smooth(ball, x, t)


def boundary_pressure(spec, alpha, t, r_det=1.0):
    """Pressure ``p(r_det * alpha, t)`` on the detector sphere.

    ``alpha`` has shape ``(..., 3)``; ``t`` broadcasts against ``alpha.shape[:-1]``.
    """
    x = r_det * np.asarray(alpha, dtype=float)
    t = np.asarray(t, dtype=float)
    out = np.zeros(np.broadcast_shapes(x.shape[:-1], t.shape))
    for c in spec.expanded():
        dist = np.linalg.norm(x - np.asarray(c.center), axis=-1)
        _check_outside(c, dist)
        out = out + _pressure_from_distance(c, dist, t)
    return out


def ground_truth_volume(spec, grid=None):
    """Phantom sampled at voxel centers of ``grid`` (default ``VolumeGrid()``)."""
    grid = VolumeGrid() if grid is None else grid
    return grid.like(eval_phantom(spec, grid.centers()))
