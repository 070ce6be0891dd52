import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from softscat import specfun

from oracles import bessel_j_series, bessel_y0_series, bessel_y1_series

J0_AT_1 = 0.765197686557967
Y0_AT_1 = 0.088256964215677
Y1_AT_1 = -0.781212821300289


def test_j_at_origin():
    assert specfun.bessel_j(0, 0.0) == 1.0
    assert specfun.bessel_j(1, 0.0) == 0.0


def test_j0_matches_power_series_oracle():
    assert bessel_j_series(0, 1.0) == pytest.approx(J0_AT_1, abs=1e-15)
    assert specfun.bessel_j(0, 1.0) == pytest.approx(J0_AT_1, abs=1e-13)
    for t in (0.1, 0.7, 2.3, 5.0, 9.5):
        for m in (0, 1, 3, 8):
            assert specfun.bessel_j(m, t) == pytest.approx(bessel_j_series(m, t), abs=1e-13)


def test_y_series_oracles():
    assert bessel_y0_series(1.0) == pytest.approx(Y0_AT_1, abs=1e-14)
    assert bessel_y1_series(1.0) == pytest.approx(Y1_AT_1, abs=1e-14)
    assert specfun.bessel_y(0, 1.0) == pytest.approx(Y0_AT_1, abs=1e-12)
    assert specfun.bessel_y(1, 1.0) == pytest.approx(Y1_AT_1, abs=1e-12)
    for t in (0.3, 1.0, 2.5, 6.0):
        assert specfun.bessel_y(0, t) == pytest.approx(bessel_y0_series(t), abs=1e-12)
        assert specfun.bessel_y(1, t) == pytest.approx(bessel_y1_series(t), abs=1e-12)


def test_y2_from_recurrence():
    expected = 2.0 * specfun.bessel_y(1, 1.0) - specfun.bessel_y(0, 1.0)
    assert specfun.bessel_y(2, 1.0) == pytest.approx(expected, rel=1e-12)


def test_hankel_is_j_plus_iy():
    h = specfun.hankel1(0, 1.0)
    assert h.real == specfun.bessel_j(0, 1.0)
    assert h.imag == specfun.bessel_y(0, 1.0)
    assert h == pytest.approx(J0_AT_1 + 1j * Y0_AT_1, abs=1e-12)


def test_hankel_parity_bit_exact():
    for m in (1, 2, 7, 15):
        for t in (0.5, 1.0, 13.0):
            assert specfun.hankel1(-m, t) == (-1) ** m * specfun.hankel1(m, t)


def test_hankel_large_argument_decay():
    # |H0(t)| ~ sqrt(2/(pi t)); the modulus has no oscillation
    for t in (50.0, 100.0, 200.0):
        mod = abs(specfun.hankel1(0, t))
        assert mod == pytest.approx(np.sqrt(2 / (np.pi * t)), rel=1e-4)
    big, small = abs(specfun.hankel1(0, 50.0)), abs(specfun.hankel1(0, 200.0))
    assert small / big == pytest.approx(0.5, rel=1e-4)


def test_hankel_deriv_identities():
    for t in (0.5, 1.0, 4.0):
        assert specfun.hankel1_deriv(0, t) == pytest.approx(-specfun.hankel1(1, t), abs=1e-14)
    expected = 0.5 * (specfun.hankel1(0, 1.0) - specfun.hankel1(2, 1.0))
    assert specfun.hankel1_deriv(1, 1.0) == expected


def test_hankel_deriv_central_difference():
    h = 1e-5
    for m in (0, 1, 3, 6):
        for t in (1.0, 4.0, 20.0):
            d = specfun.hankel1_deriv(m, t)
            fd = (specfun.hankel1(m, t + h) - specfun.hankel1(m, t - h)) / (2 * h)
            assert abs(d - fd) < 1e-8 * max(1.0, abs(d))


def test_hankel_deriv_fd_error_is_second_order():
    m, t = 2, 3.0
    d = specfun.hankel1_deriv(m, t)
    errs = []
    for h in (1e-3, 5e-4, 2.5e-4):
        fd = (specfun.hankel1(m, t + h) - specfun.hankel1(m, t - h)) / (2 * h)
        errs.append(abs(d - fd))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


@pytest.mark.parametrize("t", [0.5, 1.0, 4.0, 20.0, 100.0])
def test_wronskian(t):
    for m in range(0, 17):
        jp = 0.5 * (specfun.bessel_j(m - 1, t) - specfun.bessel_j(m + 1, t))
        yp = 0.5 * (specfun.bessel_y(m - 1, t) - specfun.bessel_y(m + 1, t))
        w = specfun.bessel_j(m, t) * yp - jp * specfun.bessel_y(m, t)
        assert w == pytest.approx(2 / (np.pi * t), rel=1e-9)


@pytest.mark.parametrize("t", [0.5, 1.0, 4.0, 20.0, 100.0])
def test_three_term_recurrence(t):
    for fn in (specfun.bessel_j, specfun.bessel_y):
        for m in range(1, 16):
            lhs = fn(m + 1, t)
            rhs = (2 * m / t) * fn(m, t) - fn(m - 1, t)
            scale = max(abs(lhs), abs(rhs), 1e-300)
            assert abs(lhs - rhs) / scale < 1e-9


def test_accuracy_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    ts = [1e-3, 0.01, 0.5, 1.0, 4.0, 20.0, 87.0, 200.0]
    for m in (0, 1, 2, 5, 16, 32):
        for t in ts:
            ref_j = float(mpmath.besselj(m, t))
            assert abs(specfun.bessel_j(m, t) - ref_j) < 1e-12
            ref_y = mpmath.bessely(m, t)
            err_y = abs(specfun.bessel_y(m, t) - float(ref_y))
            # absolute contract where the value is moderate, relative where huge
            assert err_y < 1e-10 + 1e-13 * abs(float(ref_y))


@given(st.integers(min_value=0, max_value=32),
       st.floats(min_value=1e-3, max_value=150.0, allow_nan=False))
def test_parity_property(m, t):
    assert specfun.bessel_j(-m, t) == (-1) ** m * specfun.bessel_j(m, t)
    assert specfun.hankel1(-m, t) == (-1) ** m * specfun.hankel1(m, t)


@given(st.integers(min_value=0, max_value=63),
       st.floats(min_value=1e-3, max_value=200.0, allow_nan=False))
def test_outputs_finite(m, t):
    assert np.isfinite(specfun.bessel_j(m, t))
    assert np.isfinite(specfun.hankel1(m, t)).all()


def test_domain_and_order_errors():
    with pytest.raises(ValueError):
        specfun.bessel_y(0, 0.0)
    with pytest.raises(ValueError):
        specfun.hankel1(0, 0.0)
    with pytest.raises(ValueError):
        specfun.bessel_j(0, -1.0)
    with pytest.raises(ValueError):
        specfun.bessel_j(65, 1.0)
    with pytest.raises(ValueError):
        specfun.hankel1_deriv(64, 1.0)
    with pytest.raises(ValueError):
        specfun.bessel_j(0.5, 1.0)


def test_array_arguments_broadcast():
    t = np.array([0.5, 1.0, 2.0])
    vals = specfun.bessel_j(0, t)
    assert vals.shape == (3,)
    assert vals[1] == specfun.bessel_j(0, 1.0)
