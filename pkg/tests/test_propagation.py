import math

import numpy as np
import pytest

from secgraph.pointprocess import Rng
from secgraph.propagation import FadingModel, GainModel, gain, sample_fading


def test_unbounded_gain_power_law():
    g = GainModel(kind="unbounded", b=2.0)
    assert gain(g, 2.0) == pytest.approx(2.0**-4)
    assert gain(g, 1.0, z=3.0) == pytest.approx(3.0)


def test_bounded_gain_finite_at_origin():
    g = GainModel(kind="bounded", b=1.5)
    assert gain(g, 0.0) == pytest.approx(1.0)
    assert gain(g, 2.0) == pytest.approx(1.0 / (1.0 + 2.0**3))


def test_unbounded_gain_rejects_zero_distance():
    with pytest.raises(ValueError):
        gain(GainModel(kind="unbounded", b=2.0), 0.0)


def test_gain_vectorized():
    g = GainModel(kind="unbounded", b=1.0)
    r = np.array([1.0, 2.0, 4.0])
    assert np.allclose(gain(g, r), [1.0, 0.25, 0.0625])


def test_gain_model_validation():
    with pytest.raises(ValueError):
        GainModel(kind="weird")
    with pytest.raises(ValueError):
        GainModel(b=0.0)


def test_fading_none_is_unit():
    z = sample_fading(FadingModel(kind="none"), Rng(1), size=100)
    assert np.all(z == 1.0)


def test_nakagami_power_has_unit_mean():
    # Z = alpha^2 with alpha Nakagami-m is Gamma(m, 1/m): mean 1, var 1/m
    for m in (1.0, 3.0):
        z = sample_fading(FadingModel(kind="nakagami", m=m), Rng(42), size=200_000)
        assert np.mean(z) == pytest.approx(1.0, abs=0.02)
        assert np.var(z) == pytest.approx(1.0 / m, rel=0.05)


def test_lognormal_shadowing_log_moments():
    # ln Z = 2 sigma_s G: mean 0, sd 2 sigma_s
    sig = 0.8
    z = sample_fading(FadingModel(kind="lognormal", sigma_s=sig), Rng(43), size=200_000)
    assert np.mean(np.log(z)) == pytest.approx(0.0, abs=0.02)
    assert np.std(np.log(z)) == pytest.approx(2.0 * sig, rel=0.02)


def test_composite_fading_factors():
    # composite log-effect = Gamma log plus normal log; check first moment only
    z = sample_fading(FadingModel(kind="nakagami_lognormal", m=2.0, sigma_s=0.3), Rng(44), size=200_000)
    # E[Z] = E[gamma] * E[lognormal] = 1 * exp(2 sigma_s^2)
    assert np.mean(z) == pytest.approx(math.exp(2.0 * 0.3**2), rel=0.03)


def test_fading_model_validation():
    with pytest.raises(ValueError):
        FadingModel(kind="rain")
    with pytest.raises(ValueError):
        FadingModel(kind="nakagami", m=0.0)
    with pytest.raises(ValueError):
        FadingModel(kind="lognormal", sigma_s=-0.1)


def test_sample_fading_deterministic():
    f = FadingModel(kind="nakagami_lognormal", m=1.5, sigma_s=0.5)
    assert np.array_equal(sample_fading(f, Rng(9), size=32), sample_fading(f, Rng(9), size=32))
