import numpy as np
import pytest

from softscat.forward import NearFieldData
from softscat.geometry import fundamental_solution
from softscat.specfun import bessel_j, hankel1
from softscat.xform import (OperatorMatrix, assemble_dirichlet_to_farfield,
                            assemble_nearfield, assemble_reflection,
                            far_field_transform, farfield_kernel_constant,
                            grid_thetas, qs_kernel_constant,
                            reflection_truncation_error)

from oracles import modified_i_series

K = 4.0
RADIUS = 5.0
N = 64
THETAS = grid_thetas(N)
XHAT = np.stack([np.cos(THETAS), np.sin(THETAS)], axis=1)


# ---------------------------------------------------------------------------
# Funk-Hecke quadrature identities
# ---------------------------------------------------------------------------
def test_funk_hecke_scalar():
    rng = np.random.default_rng(1)
    for _ in range(50):
        x, z = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        d = np.linalg.norm(x - z)
        if d < 0.05:
            continue
        quad = (2 * np.pi / N) * np.sum(np.exp(-1j * K * (XHAT @ (z - x))))
        assert abs(quad - 2 * np.pi * bessel_j(0, K * d)) < 1e-10


def test_funk_hecke_vector():
    # closed form: 2 pi (z - x) / (i |z - x|) * J1(k |x - z|); small-argument
    # limit integral(yhat (1 + i b . yhat)) = i pi b with b = k (x - z) fixes
    # the sign
    rng = np.random.default_rng(2)
    for _ in range(50):
        x, z = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        d = np.linalg.norm(x - z)
        if d < 0.05:
            continue
        quad = (2 * np.pi / N) * (XHAT.T @ np.exp(-1j * K * (XHAT @ (z - x))))
        closed = 2 * np.pi * (z - x) / (1j * d) * bessel_j(1, K * d)
        assert np.max(np.abs(quad - closed)) < 1e-10


def test_funk_hecke_vector_small_argument_limit():
    b = np.array([1e-4, -2e-4])
    quad = (2 * np.pi / N) * (XHAT.T @ np.exp(1j * (XHAT @ b)))
    assert np.max(np.abs(quad - 1j * np.pi * b)) < 1e-9


# ---------------------------------------------------------------------------
# data operator
# ---------------------------------------------------------------------------
def test_nearfield_operator_is_riemann_sum(gamma, forward_case):
    _, _, data = forward_case("circle")
    Nop = assemble_nearfield(data)
    g = np.ones(N)
    w = RADIUS * 2 * np.pi / N
    assert np.allclose(Nop.entries @ g, data.U.sum(axis=1) * w, atol=1e-14)
    assert Nop.kind == "N" and Nop.quadrature_weighted


def test_nearfield_operator_symmetry(forward_case):
    _, _, data = forward_case("circle")
    Nop = assemble_nearfield(data)
    defect = np.linalg.norm(Nop.entries - Nop.entries.T, 2) / np.linalg.norm(Nop.entries, 2)
    assert defect <= 1e-3


def test_nearfield_operator_zero(gamma):
    zero = NearFieldData(U=np.zeros((N, N), dtype=complex),
                         dU=np.zeros((N, N), dtype=complex), gamma=gamma, k=K)
    assert not assemble_nearfield(zero).entries.any()


# ---------------------------------------------------------------------------
# Dirichlet-to-far-field map
# ---------------------------------------------------------------------------
def test_q_fourier_eigenvector_both_conventions():
    for m in (0, 3, -7, 10):
        f = np.exp(1j * m * THETAS)
        phase = np.exp(1j * m * (THETAS - np.pi / 2)) / hankel1(m, K * RADIUS)
        Q_ff = assemble_dirichlet_to_farfield(RADIUS, K, N, 15, convention="farfield")
        expected_ff = ((1 - 1j) / np.sqrt(np.pi * K)) * phase
        assert np.max(np.abs(Q_ff.entries @ f - expected_ff)) < 1e-12
        Q_qs = assemble_dirichlet_to_farfield(RADIUS, K, N, 15, convention="qs")
        assert np.max(np.abs(Q_qs.entries @ f - (-4j) * phase)) < 1e-12


def test_q_convention_scale_is_farfield_constant():
    ratio = farfield_kernel_constant(K) / qs_kernel_constant()
    gamma_const = np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * K)
    assert ratio == pytest.approx(gamma_const, abs=1e-15)


def _point_source_error(gamma, truncation):
    Q = assemble_dirichlet_to_farfield(RADIUS, K, N, truncation)
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(25):
        w = rng.uniform(-1, 1, 2)
        if np.linalg.norm(w) > 1:
            w = w / np.linalg.norm(w) * rng.uniform(0.1, 1.0)
        trace = fundamental_solution(gamma.disc.points, w[None, :], K)
        target = np.exp(-1j * K * (XHAT @ w))
        worst = max(worst, np.max(np.abs(Q.entries @ trace - target)))
    return worst


def test_q_point_source_relation(gamma):
    assert _point_source_error(gamma, 15) <= 1e-4


def test_q_truncation_convergence_geometric(gamma):
    errs = [_point_source_error(gamma, M) for M in (5, 10, 15, 20)]
    assert errs[1] < errs[0] and errs[2] < errs[1] and errs[3] < errs[2]
    # geometric: each 5-order step gains at least a factor 30
    assert errs[1] < errs[0] / 30
    assert errs[2] < errs[1] / 30


def test_q_rank_one_at_zero_truncation():
    Q = assemble_dirichlet_to_farfield(RADIUS, K, N, 0)
    s = np.linalg.svd(Q.entries, compute_uv=False)
    assert s[1] < 1e-14 * s[0]
    expected = qs_kernel_constant() / hankel1(0, K * RADIUS) * (2 * np.pi / N)
    assert Q.entries[0, 0] == pytest.approx(expected, abs=1e-15)


# ---------------------------------------------------------------------------
# reflection operator
# ---------------------------------------------------------------------------
def test_reflection_first_harmonic():
    R = assemble_reflection(N, 5)
    g = np.exp(1j * THETAS)
    assert np.max(np.abs(R.entries @ g + g)) < 1e-12


def test_reflection_probe_vectors():
    R = assemble_reflection(N, 15)
    rng = np.random.default_rng(6)
    for _ in range(12):
        z = rng.uniform(-2, 2, 2)
        if np.linalg.norm(z) > 2:
            continue
        phi_z = np.exp(-1j * K * (XHAT @ z))
        phi_mz = np.exp(+1j * K * (XHAT @ z))
        err = np.max(np.abs(R.entries @ phi_z - phi_mz))
        # plane-wave mode tail beyond the truncation bounds the error
        tail = np.sqrt(2 * sum(bessel_j(m, K * np.linalg.norm(z)) ** 2
                               for m in range(16, 64)))
        assert err <= 3 * tail + 1e-12
        if np.linalg.norm(z) <= 1.0:
            assert err <= 1e-6


def test_reflection_equals_half_rotation_on_bandlimited():
    R = assemble_reflection(N, N // 2 - 1)
    rng = np.random.default_rng(7)
    coeffs = rng.standard_normal(21) + 1j * rng.standard_normal(21)
    g = sum(c * np.exp(1j * m * THETAS) for c, m in zip(coeffs, range(-10, 11)))
    assert np.max(np.abs(R.entries @ g - np.roll(g, -N // 2))) < 1e-10


def test_reflection_involution_on_bandlimited():
    R = assemble_reflection(N, 20)
    rng = np.random.default_rng(8)
    for _ in range(5):
        coeffs = rng.standard_normal(31) + 1j * rng.standard_normal(31)
        g = sum(c * np.exp(1j * m * THETAS) for c, m in zip(coeffs, range(-15, 16)))
        assert np.max(np.abs(R.entries @ (R.entries @ g) - g)) < 1e-10


def test_reflection_truncation_error_bandlimited_exact():
    g = np.exp(1j * 4 * THETAS) - 2 * np.exp(-1j * 9 * THETAS)
    assert reflection_truncation_error(10, g) < 1e-12


def test_reflection_truncation_error_exp_cos_rate():
    g = np.exp(np.cos(THETAS))
    for M in (5, 10):
        err = reflection_truncation_error(M, g)
        tail = np.sqrt(2 * 2 * np.pi * sum(modified_i_series(m, 1.0) ** 2
                                           for m in range(M + 1, 40)))
        assert err <= 3 * tail
        assert err >= tail / 3


def test_reflection_truncation_error_monotone():
    g = np.exp(np.cos(THETAS))
    errs = [reflection_truncation_error(M, g) for M in (4, 8, 16)]
    assert errs[1] <= errs[0] and errs[2] <= errs[1]


def test_reflection_truncation_error_needs_even_count():
    with pytest.raises(ValueError):
        reflection_truncation_error(4, np.ones(63))


# ---------------------------------------------------------------------------
# far-field transform
# ---------------------------------------------------------------------------
def _operators(truncation=10):
    Q = assemble_dirichlet_to_farfield(RADIUS, K, N, truncation)
    R = assemble_reflection(N, truncation)
    return Q, R


def test_far_field_transform_zero(gamma):
    zero = NearFieldData(U=np.zeros((N, N), dtype=complex),
                         dU=np.zeros((N, N), dtype=complex), gamma=gamma, k=K)
    Q, R = _operators()
    F = far_field_transform(assemble_nearfield(zero), Q, R)
    assert not F.entries.any() and F.kind == "F"


def test_far_field_transform_kind_check(forward_case):
    _, _, data = forward_case("circle")
    Nop = assemble_nearfield(data)
    Q, R = _operators()
    with pytest.raises(ValueError):
        far_field_transform(Q, Nop, R)


def test_far_field_reciprocity(forward_case):
    Q, R = _operators()
    for name in ("circle", "acorn", "flower", "rounded-square"):
        _, _, data = forward_case(name)
        F = far_field_transform(assemble_nearfield(data), Q, R).entries
        defect = np.linalg.norm(R.entries @ F @ R.entries - F.T, 2) / np.linalg.norm(F, 2)
        assert defect <= 1e-2, f"{name}: reciprocity defect {defect:.2e}"


def test_disk_eigenvalues_match_scattering_coefficients(forward_case):
    # eigenvalues of F are proportional to J_m(ka)/H_m(ka); compare the
    # leading magnitudes after fitting the single global constant
    _, _, data = forward_case("circle")
    Q, R = _operators(truncation=10)
    F = far_field_transform(assemble_nearfield(data), Q, R)
    eig = np.abs(np.linalg.eigvals(F.entries))
    eig = np.sort(eig)[::-1]
    pred = sorted((abs(bessel_j(m, 2.0) / hankel1(m, 2.0)) for m in range(-8, 9)),
                  reverse=True)
    scale = eig[0] / pred[0]
    for i in range(1, 7):
        assert eig[i] == pytest.approx(scale * pred[i], rel=1e-3)
    # the constant itself: 40 pi with the default conventions (R_gamma = 5)
    assert scale == pytest.approx(40 * np.pi, rel=1e-3)


def test_operator_matrix_validation():
    with pytest.raises(ValueError):
        OperatorMatrix(entries=np.zeros((4, 4)), kind="X")
    with pytest.raises(ValueError):
        OperatorMatrix(entries=np.full((4, 4), np.nan), kind="N")
