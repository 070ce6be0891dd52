"""Fast built-in oracle and invariant checks behind ``softscat selftest``.

Each check recomputes a quantity two independent ways and compares at a
fixed tolerance.  The suite runs in a few seconds and touches every layer:
special functions, quadrature identities, the forward solver against the
closed-form disk solution, the operator chain, and the noise model.
"""

from __future__ import annotations

import numpy as np

from . import specfun
from .forward import add_noise, disk_coefficients, evaluate_nearfield, solve_forward
from .geometry import (fundamental_solution, fundamental_solution_dnu, make_shape,
                       source_circle)
from .imaging import probe_vector
from .xform import (assemble_dirichlet_to_farfield, assemble_reflection, grid_thetas)

K, RADIUS, N = 4.0, 5.0, 64


def _check_bessel_values():
    j0 = specfun.bessel_j(0, 1.0)
    y0 = specfun.bessel_y(0, 1.0)
    ok = abs(j0 - 0.765197686557967) < 1e-12 and abs(y0 - 0.088256964215677) < 1e-12
    return ok, f"J0(1)={j0:.15f} Y0(1)={y0:.15f}"


def _check_wronskian():
    worst = 0.0
    for t in (0.5, 1.0, 4.0, 20.0, 100.0):
        for m in range(0, 17):
            jp = 0.5 * (specfun.bessel_j(m - 1, t) - specfun.bessel_j(m + 1, t))
            yp = 0.5 * (specfun.bessel_y(m - 1, t) - specfun.bessel_y(m + 1, t))
            w = specfun.bessel_j(m, t) * yp - jp * specfun.bessel_y(m, t)
            worst = max(worst, abs(w - 2 / (np.pi * t)) / (2 / (np.pi * t)))
    return worst < 1e-9, f"max rel Wronskian defect {worst:.2e}"


def _check_funk_hecke():
    thetas = grid_thetas(N)
    yhat = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(20):
        x = rng.uniform(-1, 1, 2)
        z = rng.uniform(-1, 1, 2)
        if np.linalg.norm(x - z) < 0.05:
            continue
        d = np.linalg.norm(x - z)
        quad = (2 * np.pi / N) * np.sum(np.exp(-1j * K * (yhat @ (z - x))))
        worst = max(worst, abs(quad - 2 * np.pi * specfun.bessel_j(0, K * d)))
    return worst < 1e-10, f"max scalar identity error {worst:.2e}"


def _check_disk_oracle():
    gamma = source_circle(RADIUS, N)
    sol = solve_forward(make_shape("circle"), gamma, K)
    oracle = disk_coefficients(K, 0.5, gamma, sol.orders.max())
    mid = len(sol.orders) // 2
    sl = slice(mid - 10, mid + 11)
    rel = np.max(np.abs(sol.coeffs[sl] - oracle[sl]) / np.abs(oracle[sl]))
    ok = rel < 1e-8 and sol.residual_max < 1e-6
    return ok, f"coeff rel err {rel:.2e}, residual {sol.residual_max:.2e}"


def _check_point_source_map():
    Q = assemble_dirichlet_to_farfield(RADIUS, K, N, truncation=15)
    gamma = source_circle(RADIUS, N)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        w = rng.uniform(-0.7, 0.7, 2)
        trace = fundamental_solution(gamma.disc.points, w[None, :], K)
        target = np.exp(-1j * K * (gamma.disc.points / RADIUS) @ w)
        worst = max(worst, np.max(np.abs(Q.entries @ trace - target)))
    return worst < 1e-4, f"max point-source map error {worst:.2e}"


def _check_reflection():
    thetas = grid_thetas(N)
    R = assemble_reflection(N, truncation=20)
    g = np.exp(1j * 7 * thetas) + 0.5 * np.exp(-1j * 15 * thetas)
    err_inv = np.max(np.abs(R.entries @ (R.entries @ g) - g))
    err_probe = np.max(np.abs(R.entries @ probe_vector([0.4, -0.3], thetas, K).values
                              - probe_vector([-0.4, 0.3], thetas, K).values))
    ok = err_inv < 1e-10 and err_probe < 1e-8
    return ok, f"involution {err_inv:.2e}, probe reflection {err_probe:.2e}"


def _check_greens_identity():
    gamma = source_circle(RADIUS, N)
    disc = gamma.disc
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(10):
        z = rng.uniform(-1, 1, 2)
        w = rng.uniform(-1, 1, 2)
        ph_z = fundamental_solution(disc.points, z[None, :], K)
        dph_z = fundamental_solution_dnu(disc.points, disc.normals, z[None, :], K)
        ph_w = fundamental_solution(disc.points, w[None, :], K)
        dph_w = fundamental_solution_dnu(disc.points, disc.normals, w[None, :], K)
        quad = np.sum(disc.weights * (np.conj(dph_z) * ph_w - np.conj(ph_z) * dph_w))
        exact = -0.5j * specfun.bessel_j(0, K * np.linalg.norm(w - z))
        worst = max(worst, abs(quad - exact))
    return worst < 1e-8, f"max error vs -(i/2) J0 closed form {worst:.2e}"


def _check_noise_model():
    gamma = source_circle(RADIUS, N)
    data = evaluate_nearfield(solve_forward(make_shape("circle"), gamma, K), gamma)
    a = add_noise(data, 0.05, 123)
    b = add_noise(data, 0.05, 123)
    c = add_noise(data, 0.05, 124)
    ok = (np.array_equal(a.U, b.U) and not np.array_equal(a.U, c.U)
          and add_noise(data, 0.0, 1).U is data.U)
    # perturbation matrix recovered from the data has unit spectral norm
    E = (a.U / data.U - 1.0) / 0.05
    ok = ok and abs(np.linalg.norm(E, 2) - 1.0) < 1e-10
    return ok, f"deterministic, independent draws, ||E||_2 - 1 = {np.linalg.norm(E, 2) - 1:.1e}"


CHECKS = [
    ("bessel reference values", _check_bessel_values),
    ("wronskian identity", _check_wronskian),
    ("funk-hecke quadrature", _check_funk_hecke),
    ("disk forward oracle", _check_disk_oracle),
    ("point-source far-field map", _check_point_source_map),
    ("reflection operator", _check_reflection),
    ("greens identity quadrature", _check_greens_identity),
    ("noise model", _check_noise_model),
]


def run_selftest(verbose: bool = True) -> bool:
    all_ok = True
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:   # a crash is a failure, keep going
            ok, detail = False, f"raised {exc!r}"
        all_ok &= ok
        if verbose:
            print(f"[{'ok' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
