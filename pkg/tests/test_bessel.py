"""Bessel band construction against an independent power-series oracle."""

import math

import numpy as np
import pytest

from rotorlab import bessel_band

# J_s(21) for s = 0..10, frozen from the power-series oracle below at
# 60 decimal digits (see _series_oracle; regenerate with mp.dps = 60).
J21 = [
    0.036579071000862745,
    0.1711202727639001,
    -0.020281902166205592,
    -0.17498349222412973,
    -0.029713381326402905,
    0.16366410886169053,
    0.10764867126054126,
    -0.10215058242709553,
    -0.17574905954527162,
    -0.031753462940730455,
    0.14853180559607407,
]


def _series_oracle(s, x, dps=60):
    """J_s(x) by direct power series in extended precision."""
    from mpmath import mp, mpf, factorial
    with mp.workdps(dps):
        half = mpf(x) / 2
        total = mpf(0)
        m = 0
        while True:
            term = ((-1) ** m * half ** (2 * m + s)
                    / (factorial(m) * factorial(m + s)))
            total += term
            if m > 5 and abs(term) < abs(total) * mpf(10) ** -55 + mpf(10) ** -80:
                break
            m += 1
        return float(total)


def test_zero_argument_is_kronecker_delta():
    band = bessel_band(0.0, 1e-16)
    assert band.order_max == 0
    assert band.values.tolist() == [1.0]
    assert band.value(0) == 1.0
    assert band.value(5) == 0.0


def test_matches_frozen_series_oracle_at_21():
    band = bessel_band(21.0, 1e-14)
    assert band.order_max >= 10
    for s, expected in enumerate(J21):
        assert band.value(s) == pytest.approx(expected, rel=1e-12)


def test_matches_live_series_oracle_small_argument():
    band = bessel_band(0.5, 1e-15)
    for s in range(0, 5):
        assert band.value(s) == pytest.approx(_series_oracle(s, 0.5), rel=1e-12)


def test_matches_scipy_across_arguments():
    from scipy.special import jv
    for kappa in (5.0, 21.0, 40.0):
        band = bessel_band(kappa, 1e-14)
        s = np.arange(0, band.order_max + 1)
        reference = jv(s, kappa)
        np.testing.assert_allclose(band.half(), reference,
                                   rtol=1e-10, atol=1e-15)


@pytest.mark.parametrize("kappa", [0.5, 5.0, 21.0, 40.0])
def test_sum_rule_within_declared_tolerance(kappa):
    tolerance = 1e-14
    band = bessel_band(kappa, tolerance)
    total = float(np.sum(band.values ** 2))
    assert 1.0 - tolerance <= total <= 1.0 + 1e-14


@pytest.mark.parametrize("kappa", [5.0, 21.0])
def test_sum_rule_tight_tolerance_up_to_rounding(kappa):
    # Below ~1e-14 the window collapses under double-precision rounding of
    # the squares sum itself; the identity still holds up to that rounding.
    tolerance = 1e-20
    band = bessel_band(kappa, tolerance)
    total = float(np.sum(band.values ** 2))
    slack = 1e-15 * (2 * band.order_max + 1)
    assert abs(total - 1.0) <= tolerance + slack


def test_reflection_symmetry_bit_identical():
    band = bessel_band(21.0, 1e-16)
    for s in range(1, band.order_max + 1):
        expected = band.value(s) if s % 2 == 0 else -band.value(s)
        assert band.value(-s) == expected  # exact, not approximate


def test_three_term_recurrence_residual():
    band = bessel_band(21.0, 1e-14)
    j = band.half()
    scale = np.max(np.abs(j))
    for s in range(1, band.order_max):
        residual = j[s - 1] + j[s + 1] - (2 * s / 21.0) * j[s]
        assert abs(residual) < 1e-10 * scale


def test_superexponential_decay_past_turnover():
    kappa = 21.0
    band = bessel_band(kappa, 1e-24)
    turnover = int(kappa + 2.0 * kappa ** (1.0 / 3.0)) + 1
    magnitudes = np.abs(band.half())
    for s in range(turnover, band.order_max):
        assert magnitudes[s + 1] < magnitudes[s]


def test_tail_criterion_honoured():
    for tolerance in (1e-10, 1e-16, 1e-24):
        band = bessel_band(21.0, tolerance)
        from scipy.special import jv
        s = np.arange(band.order_max + 1, band.order_max + 200)
        discarded = 2.0 * np.sum(jv(s, 21.0) ** 2)
        assert discarded < tolerance


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel_band(-1.0, 1e-14)
    with pytest.raises(ValueError):
        bessel_band(5.0, 0.0)
    with pytest.raises(ValueError):
        bessel_band(5.0, 1.0)
    with pytest.raises(ValueError):
        bessel_band(5.0, -1e-3)
    with pytest.raises(ValueError):
        bessel_band(float("nan"), 1e-14)


def test_large_argument_accuracy():
    # Twelve significant digits are required up to kappa = 50.
    band = bessel_band(50.0, 1e-16)
    for s in (0, 7, 25, 50):
        assert band.value(s) == pytest.approx(_series_oracle(s, 50), rel=1e-12)
