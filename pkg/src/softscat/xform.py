"""Discrete operators: near-field data operator, Dirichlet-to-far-field map
on a circle, antipodal reflection, and the far-field transform.

All operators act on samples over the uniform angle grid theta_j = 2 pi j / n
and carry their input quadrature weight, so composition is plain matrix
multiplication.  Two weight conventions appear and are kept distinct:

* the data operator integrates against arc length on the measurement circle
  (weight R 2 pi / n);
* the circle-to-far-field map and the reflection integrate against the
  angular measure (weight 2 pi / n).

The far-field map kernel is the truncated series

    Q(theta, phi) = c sum_{|m| <= M} e^(im(theta - phi - pi/2)) / H^(1)_m(kR),

with the constant c fixed by normalization convention.  Two conventions are
in circulation for the 2D far field, differing by the constant
gamma = e^(i pi/4) / sqrt(8 pi k):

* ``"qs"`` (default): c = -2i/pi.  The map then sends the trace of a point
  source at w, Phi(., w)|_Gamma, exactly to the plane-wave pattern
  e^(-ik xhat . w): the natural calibration for sampling functionals built
  from plane-wave probes.  All toolkit defaults and tests use it.
* ``"farfield"``: c = (1-i) / (2 pi sqrt(pi k)), i.e. gamma times the above.
  This matches the far-field amplitude defined without the gamma prefactor,
  u ~ e^(ikr)/sqrt(r) (u_inf + O(1/r)).

The two choices rescale everything downstream by one global constant and are
otherwise interchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import specfun
from .forward import NearFieldData

_KINDS = ("N", "Q", "R", "F")


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense discrete operator with provenance tag.

    ``quadrature_weighted`` records that the input-side Riemann weight is
    folded into the entries; ``truncation`` is the kernel series cutoff for
    the Q and R kinds.
    """

    entries: np.ndarray
    kind: str
    quadrature_weighted: bool = True
    truncation: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("operator entries must be finite")
        self.entries.setflags(write=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def norm2(self) -> float:
        return float(np.linalg.norm(self.entries, 2))


def grid_thetas(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def assemble_nearfield(data: NearFieldData) -> OperatorMatrix:
    """Data operator: scattered-field samples times arc-length weights.

    Entries N[i, j] = U[i, j] * w_j with w_j = R 2 pi / n, so N g is the
    Riemann sum of the integral of u_s(x_i, .) g over the source circle.
    """
    w = data.gamma.radius * 2 * np.pi / data.gamma.count
    return OperatorMatrix(entries=data.U * w, kind="N")


def qs_kernel_constant() -> complex:
    return -2j / np.pi


def farfield_kernel_constant(k: float) -> complex:
    return (1 - 1j) / (2 * np.pi * np.sqrt(np.pi * k))


def assemble_dirichlet_to_farfield(radius: float, k: float, n: int, truncation: int,
                                   convention: str = "qs") -> OperatorMatrix:
    """Circle Dirichlet trace -> far-field pattern, truncated kernel series.

    Integrates against the angular measure d(phi) (weight 2 pi / n), not arc
    length.  The series converges geometrically in the operator norm since
    1/|H^(1)_m(kR)| decays factorially in m.
    """
    if truncation < 0:
        raise ValueError("kernel truncation must be nonnegative")
    if convention == "qs":
        const = qs_kernel_constant()
    elif convention == "farfield":
        const = farfield_kernel_constant(k)
    else:
        raise ValueError("convention must be 'qs' or 'farfield'")
    thetas = grid_thetas(n)
    diff = thetas[:, None] - thetas[None, :]
    kernel = np.zeros((n, n), dtype=complex)
    for m in range(-truncation, truncation + 1):
        kernel += np.exp(1j * m * (diff - np.pi / 2)) / specfun.hankel1(m, k * radius)
    return OperatorMatrix(entries=const * kernel * (2 * np.pi / n), kind="Q",
                          truncation=truncation)


def assemble_reflection(n: int, truncation: int) -> OperatorMatrix:
    """Antipodal map g(theta) -> g(theta + pi) as a truncated Fourier series.

    R[i, j] = (1/ 2 pi) sum_{|m| <= M} e^(im(theta_i - theta_j + pi)) (2 pi / n).
    Exact on sample vectors band-limited to |m| <= min(M, n/2 - 1).
    """
    if truncation < 0:
        raise ValueError("kernel truncation must be nonnegative")
    thetas = grid_thetas(n)
    diff = thetas[:, None] - thetas[None, :] + np.pi
    kernel = np.zeros((n, n), dtype=complex)
    for m in range(-truncation, truncation + 1):
        kernel += np.exp(1j * m * diff)
    return OperatorMatrix(entries=kernel / n, kind="R", truncation=truncation)


def far_field_transform(N: OperatorMatrix, Q: OperatorMatrix,
                        R: OperatorMatrix) -> OperatorMatrix:
    """Far-field transform F = Q N Q^T R.

    The middle transpose is the plain (bilinear-dual) transpose, not the
    conjugate transpose.  The result approximates the far-field operator of
    the plane-wave scattering problem up to one global constant.
    """
    if not (N.kind, Q.kind, R.kind) == ("N", "Q", "R"):
        raise ValueError("far_field_transform expects operators tagged N, Q, R")
    if not N.entries.shape == Q.entries.shape == R.entries.shape:
        raise ValueError("operator dimensions do not conform")
    F = Q.entries @ N.entries @ Q.entries.T @ R.entries
    return OperatorMatrix(entries=F, kind="F", truncation=Q.truncation)


def reflection_truncation_error(truncation: int, samples: np.ndarray) -> float:
    """L2 error of the truncated reflection against the exact half-rotation.

    ``samples`` holds g on the uniform grid (even length).  The exact map is
    the index shift by n/2; the L2 norm carries the 2 pi / n weight.
    """
    samples = np.asarray(samples)
    n = len(samples)
    if n % 2 != 0:
        raise ValueError("need an even number of samples for the exact half-rotation")
    exact = np.roll(samples, -n // 2)
    approx = assemble_reflection(n, truncation).entries @ samples
    return float(np.sqrt(np.sum(np.abs(approx - exact) ** 2) * 2 * np.pi / n))
