"""Star-like obstacle boundaries, the measurement circle, and the 2D
fundamental solution of the Helmholtz equation.

A boundary is given by a smooth positive 2*pi-periodic radial function,
``point(theta) = r(theta) (cos theta, sin theta)``.  Discretizations carry
quadrature nodes, outward unit normals and arc-length weights for the
rectangle (Riemann) rule, which is spectrally accurate for smooth periodic
integrands.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun

COINCIDENCE_TOL = 1e-12


@dataclass(frozen=True)
class RadialShape:
    """Star-like boundary r(theta)(cos theta, sin theta) with r > 0 smooth."""

    name: str
    radius: Callable[[np.ndarray], np.ndarray]
    radius_deriv: Callable[[np.ndarray], np.ndarray]

    def points(self, thetas: np.ndarray) -> np.ndarray:
        r = self.radius(thetas)
        return np.stack([r * np.cos(thetas), r * np.sin(thetas)], axis=-1)


def _rounded_square_radius(t):
    # even powers make the |.| in the defining formula redundant and keep
    # the expression smooth at the axis crossings
    g = np.sin(t) ** 10 + 0.1 * np.cos(t) ** 10
    return 0.5 * g ** (-0.1)


def _rounded_square_radius_deriv(t):
    g = np.sin(t) ** 10 + 0.1 * np.cos(t) ** 10
    gp = 10 * np.sin(t) ** 9 * np.cos(t) - np.cos(t) ** 9 * np.sin(t)
    return -0.05 * g ** (-1.1) * gp


_SHAPES = {
    "circle": (
        lambda t: np.full_like(np.asarray(t, dtype=float), 0.5),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)),
    ),
    "acorn": (
        lambda t: 0.25 * (2.0 + 0.5 * np.cos(3 * t)),
        lambda t: -0.375 * np.sin(3 * t),
    ),
    "flower": (
        lambda t: 0.75 * (1.0 - 0.25 * np.sin(4 * t)),
        lambda t: -0.75 * np.cos(4 * t),
    ),
    "rounded-square": (_rounded_square_radius, _rounded_square_radius_deriv),
}

SHAPE_NAMES = tuple(_SHAPES)


def make_shape(name: str) -> RadialShape:
    """Return one of the preset star-like boundaries.

    Presets: ``circle`` (r = 0.5), ``acorn`` (0.25(2 + 0.5 cos 3t)),
    ``flower`` (0.75(1 - 0.25 sin 4t)), ``rounded-square``
    (0.5(sin^10 t + cos^10 t / 10)^(-1/10)).
    """
    try:
        r, rp = _SHAPES[name]
    except KeyError:
        raise ValueError(f"unknown shape {name!r}; choose from {SHAPE_NAMES}") from None
    return RadialShape(name=name, radius=r, radius_deriv=rp)


@dataclass(frozen=True)
class BoundaryDiscretization:
    """Quadrature nodes, outward unit normals and arc-length weights."""

    thetas: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for arr in (self.thetas, self.points, self.normals, self.weights):
            arr.setflags(write=False)

    @property
    def count(self) -> int:
        return len(self.thetas)


def discretize(shape: RadialShape, n: int) -> BoundaryDiscretization:
    """Uniform-angle rectangle-rule discretization with n >= 8 nodes.

    The outward normal at theta is
    ``(r' sin + r cos, -r' cos + r sin) / sqrt(r^2 + r'^2)`` and the weight
    is the arc-length element ``sqrt(r^2 + r'^2) * (2 pi / n)``.
    """
    if n < 8:
        raise ValueError("need at least 8 boundary nodes")
    thetas = 2 * np.pi * np.arange(n) / n
    r = shape.radius(thetas)
    rp = shape.radius_deriv(thetas)
    if np.any(r <= 0):
        raise ValueError("radial function must be positive")
    speed = np.sqrt(r * r + rp * rp)
    points = np.stack([r * np.cos(thetas), r * np.sin(thetas)], axis=1)
    normals = np.stack(
        [rp * np.sin(thetas) + r * np.cos(thetas),
         -rp * np.cos(thetas) + r * np.sin(thetas)],
        axis=1,
    ) / speed[:, None]
    weights = speed * (2 * np.pi / n)
    if not np.all(np.isfinite(weights)):
        raise ValueError("non-finite quadrature weight (bad radial derivative)")
    return BoundaryDiscretization(thetas=thetas, points=points, normals=normals, weights=weights)


@dataclass(frozen=True)
class SourceCurve:
    """Concentric measurement circle carrying sources and receivers."""

    radius: float
    count: int
    disc: BoundaryDiscretization


def source_circle(radius: float, count: int) -> SourceCurve:
    if radius <= 0:
        raise ValueError("source circle radius must be positive")
    shape = RadialShape(
        name="source-circle",
        radius=lambda t: np.full_like(np.asarray(t, dtype=float), radius),
        radius_deriv=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
    )
    return SourceCurve(radius=radius, count=count, disc=discretize(shape, count))


def fundamental_solution(x, y, k: float):
    """Radiating 2D Helmholtz fundamental solution (i/4) H^(1)_0(k |x-y|).

    ``x`` and ``y`` broadcast against each other over a trailing axis of
    length 2.  Raises if any pair coincides to within 1e-12.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.linalg.norm(x - y, axis=-1)
    if np.any(d < COINCIDENCE_TOL):
        raise ValueError("fundamental solution evaluated at coincident points")
    return 0.25j * specfun.hankel1(0, k * d)


def fundamental_solution_dnu(x, nu, y, k: float):
    """Normal derivative nu(x) . grad_x of the fundamental solution.

    Uses H0' = -H1:  -(ik/4) H^(1)_1(k|x-y|) ((x-y) . nu) / |x-y|.
    ``nu`` must hold unit vectors broadcastable with ``x``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nu = np.asarray(nu, dtype=float)
    diff = x - y
    d = np.linalg.norm(diff, axis=-1)
    if np.any(d < COINCIDENCE_TOL):
        raise ValueError("fundamental solution evaluated at coincident points")
    proj = np.sum(diff * nu, axis=-1)
    return -0.25j * k * specfun.hankel1(1, k * d) * proj / d


def max_radius(shape: RadialShape, samples: int = 4096) -> float:
    t = 2 * np.pi * np.arange(samples) / samples
    return float(np.max(shape.radius(t)))


def in_region(shape: RadialShape, points: np.ndarray) -> np.ndarray:
    """Boolean mask: which points lie in the closed region bounded by the shape."""
    points = np.atleast_2d(points)
    ang = np.mod(np.arctan2(points[:, 1], points[:, 0]), 2 * np.pi)
    return np.linalg.norm(points, axis=1) <= shape.radius(ang)


def distance_to_region(shape: RadialShape, points: np.ndarray,
                       boundary_samples: int = 2048, chunk: int = 2048) -> np.ndarray:
    """Euclidean distance from each point to the closed region (0 inside)."""
    points = np.atleast_2d(points)
    t = 2 * np.pi * np.arange(boundary_samples) / boundary_samples
    bp = shape.points(t)
    inside = in_region(shape, points)
    out = np.zeros(len(points))
    for lo in range(0, len(points), chunk):
        sel = slice(lo, lo + chunk)
        d = np.linalg.norm(points[sel, None, :] - bp[None, :, :], axis=-1)
        out[sel] = d.min(axis=1)
    out[inside] = 0.0
    return out
