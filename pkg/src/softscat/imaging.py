"""Direct sampling imaging functionals on a rectangular grid.

Three indicators are provided, all built from plane-wave probe vectors
phi_z(theta_j) = e^(-ik z . xhat_j) on the uniform direction grid:

* far-field indicator: |<F phi_z, phi_z>|^p1 with the weighted l2 inner
  product (conjugation on the second slot, angular weight 2 pi / n);
* filtered indicator: a least-squares cubic approximation of the Tikhonov
  filter sqrt(t)/(alpha + t) applied to the singular values of F, paired
  with the right singular vectors;
* Cauchy-data indicator: modulus of the boundary pairing of the probe's
  point-source response against the measured Cauchy data, raised to rho.

Grid sweeps are vectorized over the sampling points; the per-point functions
are the reference definitions and the vectorized paths must match them
exactly (see the test suite).  Everything here is read-only with respect to
its inputs, so sweeps can be freely parallelized by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .forward import NearFieldData
from .geometry import fundamental_solution, fundamental_solution_dnu
from .xform import OperatorMatrix, grid_thetas

FILTER_NODE_COUNT = 10


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ProbeVector:
    """Plane-wave probe phi_z sampled on the direction grid."""

    z: np.ndarray
    values: np.ndarray


def probe_vector(z, thetas: np.ndarray, k: float) -> ProbeVector:
    z = np.asarray(z, dtype=float)
    xhat = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    return ProbeVector(z=z, values=np.exp(-1j * k * (xhat @ z)))


def probe_matrix(points: np.ndarray, thetas: np.ndarray, k: float) -> np.ndarray:
    """Probe vectors for many sampling points, shape (n_points, n)."""
    xhat = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    return np.exp(-1j * k * (np.atleast_2d(points) @ xhat.T))


# ---------------------------------------------------------------------------
# far-field indicator
# ---------------------------------------------------------------------------
def indicator_far_field(F: OperatorMatrix, z, k: float, p1: float = 4.0) -> float:
    """|<F phi_z, phi_z>_l2 (2 pi / n)|^p1 at a single sampling point."""
    vals = _far_field_values(F.entries, np.atleast_2d(np.asarray(z, dtype=float)), k, p1)
    return float(vals[0])


def _far_field_values(F: np.ndarray, points: np.ndarray, k: float, p1: float) -> np.ndarray:
    n = F.shape[0]
    phi = probe_matrix(points, grid_thetas(n), k)
    quad = np.einsum("zi,iz->z", np.conj(phi), F @ phi.T) * (2 * np.pi / n)
    return np.abs(quad) ** p1


# ---------------------------------------------------------------------------
# Tikhonov-filtered indicator
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FilterPolynomial:
    """Cubic c1 t + c2 t^2 + c3 t^3 fitted to sqrt(t)/(alpha + t).

    The fit is least squares at ``FILTER_NODE_COUNT`` equally spaced nodes on
    [0, interval_top]; both the target and the polynomial vanish at t = 0, so
    the zero node contributes no residual.  ``fit_residual`` is the max abs
    misfit over the nodes; it is reported but carries no accuracy contract.
    """

    coeffs: np.ndarray
    alpha: float
    interval_top: float
    nodes: np.ndarray
    fit_residual: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self.coeffs[0] * t + self.coeffs[1] * t ** 2 + self.coeffs[2] * t ** 3
        return out if out.ndim else float(out)


def fit_filter(F: OperatorMatrix, alpha: float) -> FilterPolynomial:
    """Fit the cubic filter surrogate on [0, ||F||_2]."""
    if alpha <= 0:
        raise ValueError("regularization parameter must be positive")
    top = F.norm2()
    if top == 0.0:
        raise ValueError("cannot fit the filter to a zero operator")
    nodes = np.arange(FILTER_NODE_COUNT) * top / (FILTER_NODE_COUNT - 1)
    target = np.sqrt(nodes) / (alpha + nodes)
    vander = np.stack([nodes, nodes ** 2, nodes ** 3], axis=1)
    coeffs, *_ = np.linalg.lstsq(vander, target, rcond=None)
    residual = float(np.max(np.abs(vander @ coeffs - target)))
    return FilterPolynomial(coeffs=coeffs, alpha=alpha, interval_top=top,
                            nodes=nodes, fit_residual=residual)


def indicator_filtered(F: OperatorMatrix, filter_poly: FilterPolynomial, z,
                       k: float, p2: float = 4.0,
                       svd: Optional[tuple] = None) -> float:
    """Filtered-spectrum indicator at a single sampling point.

    ``svd`` may carry a precomputed ``numpy.linalg.svd(F.entries)`` result;
    the decomposition is reused across sampling points.
    """
    if svd is None:
        svd = np.linalg.svd(F.entries)
    vals = _filtered_values(svd, filter_poly, np.atleast_2d(np.asarray(z, dtype=float)), k, p2)
    return float(vals[0])


def _filtered_values(svd: tuple, filter_poly: FilterPolynomial, points: np.ndarray,
                     k: float, p2: float) -> np.ndarray:
    _, s, vh = svd
    right_vectors = vh.conj().T          # columns are the right singular vectors
    n = right_vectors.shape[0]
    weights = filter_poly(s) ** 2
    phi = probe_matrix(points, grid_thetas(n), k)
    proj = np.conj(phi) @ right_vectors  # <v_j, phi_z> with conjugation on phi
    vals = (np.abs(proj) ** 2 * (2 * np.pi / n)) @ weights
    return np.abs(vals) ** p2


# ---------------------------------------------------------------------------
# Cauchy-data indicator
# ---------------------------------------------------------------------------
def indicator_cauchy(data: NearFieldData, z, rho: float = 8.0) -> float:
    """Cauchy-data indicator at one sampling point (z off the circle).

    Outer and inner integrals use the rectangle rule with arc-length
    weights; the point-source response Phi(., z) and its normal derivative
    enter conjugated.
    """
    vals = _cauchy_values(data, np.atleast_2d(np.asarray(z, dtype=float)), rho)
    return float(vals[0])


def _cauchy_values(data: NearFieldData, points: np.ndarray, rho: float) -> np.ndarray:
    disc = data.gamma.disc
    w = disc.weights                      # arc-length weights on the circle
    ph = fundamental_solution(disc.points[None, :, :], points[:, None, :], data.k)
    dph = fundamental_solution_dnu(disc.points[None, :, :], disc.normals[None, :, :],
                                   points[:, None, :], data.k)
    inner = (np.conj(dph) * w) @ data.U - (np.conj(ph) * w) @ data.dU
    return np.sum(np.abs(inner) ** rho * w, axis=1)


# ---------------------------------------------------------------------------
# grid sweeps
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SamplingGrid:
    """Square sampling grid [-half_width, half_width]^2 with n^2 nodes."""

    half_width: float = 2.0
    n: int = 128

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sampling grid must contain at least one node")
        if self.half_width <= 0:
            raise ValueError("grid half width must be positive")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    def points(self) -> np.ndarray:
        gx, gy = np.meshgrid(self.xs, self.ys, indexing="xy")
        return np.stack([gx.ravel(), gy.ravel()], axis=1)


@dataclass(frozen=True)
class ImageGrid:
    """Normalized indicator values on a sampling grid.

    ``values[iy, ix]`` belongs to the point (xs[ix], ys[iy]); after
    normalization the maximum is exactly 1 (an all-zero field stays zero).
    """

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    functional: str
    params: dict = field(default_factory=dict)

    def argmax_index(self) -> tuple[int, int]:
        # np.argmax resolves ties at the lowest row-major linear index
        flat = int(np.argmax(self.values))
        return divmod(flat, self.values.shape[1])

    def argmax_point(self) -> np.ndarray:
        iy, ix = self.argmax_index()
        return np.array([self.xs[ix], self.ys[iy]])


FUNCTIONAL_TAGS = ("FF", "TDSM", "CD")


def evaluate_grid(functional: str, grid: SamplingGrid, *, k: Optional[float] = None,
                  operator: Optional[OperatorMatrix] = None,
                  filter_poly: Optional[FilterPolynomial] = None,
                  data: Optional[NearFieldData] = None,
                  p1: float = 4.0, p2: float = 4.0, rho: float = 8.0) -> ImageGrid:
    """Evaluate one functional at every grid node and normalize to max 1."""
    points = grid.points()
    if functional == "FF":
        if operator is None or k is None:
            raise ValueError("FF needs the transformed operator and the wavenumber")
        raw = _far_field_values(operator.entries, points, k, p1)
        params = {"p1": p1}
    elif functional == "TDSM":
        if operator is None or filter_poly is None or k is None:
            raise ValueError("TDSM needs the operator, the fitted filter and the wavenumber")
        raw = _filtered_values(np.linalg.svd(operator.entries), filter_poly, points, k, p2)
        params = {"p2": p2, "alpha": filter_poly.alpha}
    elif functional == "CD":
        if data is None:
            raise ValueError("CD needs the near-field Cauchy data")
        raw = _cauchy_values(data, points, rho)
        params = {"rho": rho}
    else:
        raise ValueError(f"functional must be one of {FUNCTIONAL_TAGS}")
    peak = raw.max()
    if peak > 0:
        raw = raw / peak
    return ImageGrid(xs=grid.xs, ys=grid.ys, values=raw.reshape(grid.n, grid.n),
                     functional=functional, params=params)


# ---------------------------------------------------------------------------
# partial aperture
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ApertureMask:
    """Angular arcs [lo, hi) on which sources and receivers are active.

    Entries whose receiver or source angle falls outside every arc are
    zero-filled; the matrix dimensions stay unchanged so the downstream
    operators still conform.
    """

    arcs: tuple

    def __post_init__(self):
        for lo, hi in self.arcs:
            if not (0 <= lo < hi <= 2 * np.pi + 1e-12):
                raise ValueError("aperture arcs must satisfy 0 <= lo < hi <= 2 pi")

    @classmethod
    def full(cls) -> "ApertureMask":
        return cls(arcs=((0.0, 2 * np.pi),))

    def is_full(self) -> bool:
        return any(lo == 0.0 and hi >= 2 * np.pi for lo, hi in self.arcs)

    def active(self, thetas: np.ndarray) -> np.ndarray:
        thetas = np.mod(thetas, 2 * np.pi)
        mask = np.zeros(thetas.shape, dtype=bool)
        for lo, hi in self.arcs:
            mask |= (thetas >= lo) & (thetas < hi)
        return mask


def apply_aperture(data: NearFieldData, mask: ApertureMask) -> NearFieldData:
    """Zero-fill Cauchy data outside the aperture arcs."""
    active = mask.active(data.gamma.disc.thetas)
    keep = np.outer(active, active)
    return replace(data, U=data.U * keep, dU=data.dU * keep)
