"""Near-field data synthesis for a sound-soft obstacle.

The scattered field due to a point source at y is represented by a truncated
outgoing cylinder-wave series about the origin,

    u_s(x, y) = sum_{|m| <= M}  a_m(y) H^(1)_m(k |x|) e^(i m theta_x),

whose coefficients are fitted in least squares to the sound-soft boundary
condition u_s = -Phi(., y) at uniformly spaced boundary nodes.  The resulting
collocation matrix has column norms spanning many orders of magnitude (the
Hankel functions grow factorially in the order), so the system is solved by a
truncated-SVD pseudoinverse of the *column-equilibrated* matrix: columns are
scaled to unit norm, singular values below ``tau_rel`` times the largest are
discarded, and the scaling is undone afterwards.  Without the equilibration a
relative cutoff discards the physically dominant low orders.

The series converges in the exterior of the circumscribing circle of the
obstacle; all evaluations (measurement circle, diagnostics) happen there.
An independent closed-form solution for the concentric disk, obtained from
the addition theorem for cylinder waves, serves as the accuracy oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import specfun
from .geometry import RadialShape, SourceCurve, fundamental_solution, max_radius

DEFAULT_M_FORWARD = 32
DEFAULT_N_BOUNDARY = 256
DEFAULT_TAU_REL = 1e-8


@dataclass(frozen=True)
class SeriesSolution:
    """Fitted series coefficients, one column per point source."""

    coeffs: np.ndarray          # (2M+1, n_sources) complex
    orders: np.ndarray          # (2M+1,) integers -M..M
    k: float
    shape: RadialShape
    residual_max: float         # max |A a - b| over all nodes and sources
    residuals: np.ndarray       # (n_sources,) per-source max residual
    kept_modes: int
    tau_rel: float


@dataclass(frozen=True)
class NearFieldData:
    """Sampled Cauchy data u_s and d(u_s)/d(nu) on the measurement circle."""

    U: np.ndarray               # (n, n) complex, receivers x sources
    dU: np.ndarray              # (n, n) complex
    gamma: SourceCurve
    k: float
    delta: float = 0.0
    seed: Optional[int] = None


def solve_forward(shape: RadialShape, gamma: SourceCurve, k: float,
                  m_forward: int = DEFAULT_M_FORWARD,
                  n_boundary: int = DEFAULT_N_BOUNDARY,
                  tau_rel: float = DEFAULT_TAU_REL) -> SeriesSolution:
    """Fit the outgoing series to the sound-soft boundary condition.

    Parameters
    ----------
    shape : RadialShape
        Star-like obstacle boundary.
    gamma : SourceCurve
        Source circle; must enclose the obstacle with positive clearance.
    k : float
        Wavenumber (k^2 must not be an interior Dirichlet eigenvalue; not
        checked, the boundary residual is the runtime guard).
    m_forward : int
        Series truncation; orders -m_forward .. m_forward.
    n_boundary : int
        Collocation node count on the obstacle boundary.
    tau_rel : float
        Relative singular-value cutoff for the equilibrated system.

    Notes
    -----
    The per-source systems share one matrix factorization; all right-hand
    sides are solved in a single pass, which also makes per-source work
    trivially parallel.
    """
    if max_radius(shape) >= gamma.radius:
        raise ValueError("source curve must enclose the obstacle with positive distance")
    thetas_b = 2 * np.pi * np.arange(n_boundary) / n_boundary
    r_b = shape.radius(thetas_b)
    orders = np.arange(-m_forward, m_forward + 1)
    if len(orders) > n_boundary:
        raise ValueError("need at least as many boundary nodes as series terms")

    A = np.empty((n_boundary, len(orders)), dtype=complex)
    for j, m in enumerate(orders):
        A[:, j] = specfun.hankel1(int(m), k * r_b) * np.exp(1j * m * thetas_b)

    bdry = shape.points(thetas_b)
    B = -fundamental_solution(bdry[:, None, :], gamma.disc.points[None, :, :], k)

    col_norms = np.linalg.norm(A, axis=0)
    u, s, vh = np.linalg.svd(A / col_norms, full_matrices=False)
    keep = s >= tau_rel * s[0]
    if not np.any(keep):
        raise ValueError("all singular values fall below the spectral cutoff")
    s_inv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    coeffs = (vh.conj().T @ (s_inv[:, None] * (u.conj().T @ B))) / col_norms[:, None]

    resid = np.abs(A @ coeffs - B)
    return SeriesSolution(
        coeffs=coeffs,
        orders=orders,
        k=k,
        shape=shape,
        residual_max=float(resid.max()),
        residuals=resid.max(axis=0),
        kept_modes=int(keep.sum()),
        tau_rel=tau_rel,
    )


def evaluate_nearfield(sol: SeriesSolution, gamma: SourceCurve) -> NearFieldData:
    """Evaluate the series and its radial derivative on the source circle.

    The receivers sit on the circle of radius R, where the outward normal is
    radial, so the normal derivative is the radial derivative; the Hankel
    derivative is taken with the recurrence H_m' = (H_{m-1} - H_{m+1}) / 2.
    """
    k, R = sol.k, gamma.radius
    thetas = gamma.disc.thetas
    n = gamma.count
    n_src = sol.coeffs.shape[1]
    U = np.zeros((n, n_src), dtype=complex)
    dU = np.zeros((n, n_src), dtype=complex)
    for j, m in enumerate(sol.orders):
        m = int(m)
        angular = np.exp(1j * m * thetas)
        U += np.outer(angular, sol.coeffs[j]) * specfun.hankel1(m, k * R)
        dU += np.outer(angular, sol.coeffs[j]) * (
            0.5 * k * (specfun.hankel1(m - 1, k * R) - specfun.hankel1(m + 1, k * R))
        )
    return NearFieldData(U=U, dU=dU, gamma=gamma, k=k, delta=0.0, seed=None)


def evaluate_series(sol: SeriesSolution, points: np.ndarray) -> np.ndarray:
    """Evaluate the fitted series at arbitrary exterior points.

    Valid only outside the circumscribing circle of the obstacle; points
    inside it are rejected.  Returns an array of shape (n_points, n_sources).
    """
    points = np.atleast_2d(points)
    r = np.linalg.norm(points, axis=1)
    if np.any(r <= max_radius(sol.shape)):
        raise ValueError("series evaluation requested inside the circumscribing circle")
    t = np.arctan2(points[:, 1], points[:, 0])
    out = np.zeros((len(points), sol.coeffs.shape[1]), dtype=complex)
    for j, m in enumerate(sol.orders):
        m = int(m)
        basis = specfun.hankel1(m, sol.k * r) * np.exp(1j * m * t)
        out += np.outer(basis, sol.coeffs[j])
    return out


def add_noise(data: NearFieldData, delta: float, seed: int) -> NearFieldData:
    """Apply entrywise multiplicative noise U <- U (1 + delta E).

    E is an i.i.d. complex Gaussian matrix rescaled to unit spectral norm.
    The derivative data gets an independently drawn matrix of the same
    construction; the two generators are spawned from one ``SeedSequence``
    (numpy PCG64), so a single integer seed reproduces the run bit-exactly.
    ``delta = 0`` returns the input unchanged.
    """
    if delta < 0:
        raise ValueError("noise level must be nonnegative")
    if delta == 0.0:
        return data
    child_u, child_du = np.random.SeedSequence(seed).spawn(2)
    E = _unit_spectral_noise(np.random.default_rng(child_u), data.U.shape)
    E_d = _unit_spectral_noise(np.random.default_rng(child_du), data.dU.shape)
    return replace(data, U=data.U * (1.0 + delta * E), dU=data.dU * (1.0 + delta * E_d),
                   delta=delta, seed=seed)


def _unit_spectral_noise(rng: np.random.Generator, shape) -> np.ndarray:
    E = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return E / np.linalg.norm(E, 2)


def disk_coefficients(k: float, a: float, gamma: SourceCurve, m_forward: int) -> np.ndarray:
    """Closed-form series coefficients for the sound-soft disk of radius a.

    From the addition theorem, the incident point-source field expands as
    Phi(x, y) = (i/4) sum_m H^(1)_m(k|y|) J_m(k|x|) e^(im(theta_x - theta_y))
    for |x| < |y|, and matching the boundary condition on |x| = a gives

        a_m(y) = -(i/4) e^(-im theta_y) H^(1)_m(k|y|) J_m(ka) / H^(1)_m(ka).

    Independent of the least-squares path; used as its accuracy oracle.
    """
    orders = np.arange(-m_forward, m_forward + 1)
    thetas_y = gamma.disc.thetas
    out = np.empty((len(orders), gamma.count), dtype=complex)
    for j, m in enumerate(orders):
        m = int(m)
        out[j] = (-0.25j * np.exp(-1j * m * thetas_y) * specfun.hankel1(m, k * gamma.radius)
                  * specfun.bessel_j(m, k * a) / specfun.hankel1(m, k * a))
    return out


def disk_nearfield(k: float, a: float, gamma: SourceCurve, m_forward: int) -> NearFieldData:
    """Closed-form near-field data for the sound-soft disk (oracle path)."""
    sol = SeriesSolution(
        coeffs=disk_coefficients(k, a, gamma, m_forward),
        orders=np.arange(-m_forward, m_forward + 1),
        k=k,
        shape=RadialShape(
            name="disk-oracle",
            radius=lambda t: np.full_like(np.asarray(t, dtype=float), a),
            radius_deriv=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        ),
        residual_max=0.0,
        residuals=np.zeros(gamma.count),
        kept_modes=2 * m_forward + 1,
        tau_rel=0.0,
    )
    return evaluate_nearfield(sol, gamma)
