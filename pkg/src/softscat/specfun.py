"""Cylinder special functions of integer order for real arguments.

Thin, contract-checked layer over :mod:`scipy.special` providing the Bessel
functions J_m, Y_m, the first-kind Hankel function H^(1)_m and its derivative.
Negative orders are reduced to positive ones through the parity identities

    J_{-m}(t) = (-1)^m J_m(t),      H^(1)_{-m}(t) = (-1)^m H^(1)_m(t),

so the parity relations hold bit-exactly.  Orders are guarded at |m| <= 64;
together with the argument range t >= 1e-3 used by the toolkit this keeps
every value inside double-precision range (Y_64(1e-3) ~ 1e298).

All functions accept a scalar or an ndarray argument and are pure; they are
safe to call concurrently.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

ORDER_LIMIT = 64


def _check_order(m: int) -> int:
    if m != int(m):
        raise ValueError(f"order must be an integer, got {m!r}")
    m = int(m)
    if abs(m) > ORDER_LIMIT:
        raise ValueError(f"|order| = {abs(m)} exceeds the supported limit {ORDER_LIMIT}")
    return m


def _check_finite(value, name: str):
    if not np.all(np.isfinite(value)):
        raise ValueError(f"{name} produced a non-finite value")
    return value


def bessel_j(m: int, t):
    """Bessel function of the first kind J_m(t) for t >= 0.

    Parameters
    ----------
    m : int
        Order, |m| <= 64.
    t : float or ndarray
        Nonnegative argument.

    Returns
    -------
    float or ndarray
    """
    m = _check_order(m)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("bessel_j requires t >= 0")
    sign = -1.0 if (m < 0 and m % 2 != 0) else 1.0
    out = sign * _sp.jv(abs(m), t)
    return _check_finite(out if out.ndim else float(out), "bessel_j")


def bessel_y(m: int, t):
    """Bessel function of the second kind Y_m(t) for t > 0.

    Y_m is singular at the origin; t = 0 raises a ``ValueError``.
    """
    m = _check_order(m)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("bessel_y requires t > 0 (Y_m is singular at t = 0)")
    sign = -1.0 if (m < 0 and m % 2 != 0) else 1.0
    out = sign * _sp.yv(abs(m), t)
    return _check_finite(out if out.ndim else float(out), "bessel_y")


def hankel1(m: int, t):
    """First-kind Hankel function H^(1)_m(t) = J_m(t) + i Y_m(t), t > 0.

    Composed from :func:`bessel_j` and :func:`bessel_y` so the identity
    H = J + iY holds exactly, as does the parity reduction for m < 0.
    """
    return bessel_j(m, t) + 1j * bessel_y(m, t)


def hankel1_deriv(m: int, t):
    """Derivative d/dt H^(1)_m(t) via (H_{m-1} - H_{m+1}) / 2, t > 0.

    The recurrence needs orders m-1 and m+1, so |m| <= 63 is required.
    """
    m = _check_order(m)
    if abs(m) + 1 > ORDER_LIMIT:
        raise ValueError("hankel1_deriv needs |m| + 1 within the order limit")
    return 0.5 * (hankel1(m - 1, t) - hankel1(m + 1, t))
