import math

import numpy as np
import pytest

from upc_sim import (
    FadingDraw,
    NoiseModel,
    SimConfig,
    UserDrop,
    Reuse,
    build_layout,
    cochannel_set,
    conditional_coverage,
    coverage_fading_mc,
    instantaneous_sinr,
    noise_variance_norm,
    sample_drop,
)

R = 500.0


def make_drop(r, pairs):
    return UserDrop(r=r, interferers=np.array(pairs, dtype=float).reshape(-1, 2))


# frozen: -174 dBm/Hz + 10 log10(12 * 15 kHz) - 43 dBm, in linear units
SIGMA2_DEFAULT = 3.591472166943992e-17


def test_noise_default_value():
    noise = noise_variance_norm(SimConfig())
    assert noise.sigma2_norm == pytest.approx(SIGMA2_DEFAULT, rel=1e-12)


def test_noise_interference_limited_mode():
    cfg = SimConfig().with_updates(noise_psd_dbm_hz=-math.inf)
    assert noise_variance_norm(cfg).sigma2_norm == 0.0


def test_noise_doubling_subcarriers_adds_3dB():
    base = noise_variance_norm(SimConfig()).sigma2_norm
    doubled = noise_variance_norm(SimConfig().with_updates(subcarriers_per_prb=24)).sigma2_norm
    assert 10 * math.log10(doubled / base) == pytest.approx(3.0103, abs=1e-4)


def test_noise_model_rejects_negative():
    with pytest.raises(ValueError):
        NoiseModel(-1e-3)


def test_sinr_single_link_snr():
    drop = make_drop(R, np.empty((0, 2)))
    out = instantaneous_sinr(drop, FadingDraw(1.0, np.empty(0)), 0.5, 3.0, R, NoiseModel(1.0))
    assert out.eta == pytest.approx(R**-3.0, rel=1e-12)
    assert out.interference == 0.0


def test_sinr_normalized_signal_value():
    # alpha=2, eps=0.5, R=4, r=2: (r/R)^(alpha eps) * r^-alpha = 0.5 * 0.25
    drop = make_drop(2.0, np.empty((0, 2)))
    out = instantaneous_sinr(drop, FadingDraw(1.0, np.empty(0)), 0.5, 2.0, 4.0, NoiseModel(1.0))
    assert out.signal == pytest.approx(0.125, rel=1e-12)
    assert out.eta == out.signal


def test_sinr_infinite_when_nothing_opposes():
    drop = make_drop(2.0, np.empty((0, 2)))
    out = instantaneous_sinr(drop, FadingDraw(1.0, np.empty(0)), 0.5, 2.0, 4.0, NoiseModel(0.0))
    assert out.eta == math.inf


def test_sinr_normalized_rejects_r_beyond_R():
    drop = make_drop(2.0, np.empty((0, 2)))
    with pytest.raises(ValueError):
        instantaneous_sinr(drop, FadingDraw(1.0, np.empty(0)), 0.5, 2.0, 1.0, NoiseModel(0.0))


def test_sinr_raw_hand_calculation():
    # literal form: signal = r^(alpha(eps-1)), I = h * r_i^(alpha eps) * d_i^-alpha
    drop = make_drop(2.0, [[1.0, 4.0]])
    out = instantaneous_sinr(
        drop, FadingDraw(1.0, np.ones(1)), 0.5, 2.0, 1.0, NoiseModel(0.1875), normalized=False
    )
    assert out.signal == pytest.approx(0.5, rel=1e-12)
    assert out.interference == pytest.approx(0.0625, rel=1e-12)
    assert out.eta == pytest.approx(2.0, rel=1e-12)


def test_sinr_eta_identity_exact():
    drop = make_drop(300.0, [[100.0, 900.0], [400.0, 1100.0]])
    fading = FadingDraw(1.7, np.array([0.3, 2.2]))
    noise = NoiseModel(1e-9)
    out = instantaneous_sinr(drop, fading, 0.6, 3.5, R, noise)
    assert out.eta == out.signal / (noise.sigma2_norm + out.interference)


def test_sinr_mismatched_fading_length():
    drop = make_drop(300.0, [[100.0, 900.0]])
    with pytest.raises(ValueError):
        instantaneous_sinr(drop, FadingDraw(1.0, np.ones(3)), 0.5, 3.0, R, NoiseModel(0.0))


def test_sinr_monotonicity():
    drop = make_drop(300.0, [[100.0, 900.0]])
    noise = NoiseModel(1e-10)

    def eta(g, h, sigma2=1e-10):
        return instantaneous_sinr(
            drop, FadingDraw(g, np.array([h])), 0.5, 3.0, R, NoiseModel(sigma2)
        ).eta

    assert eta(2.0, 1.0) > eta(1.0, 1.0)
    assert eta(1.0, 2.0) < eta(1.0, 1.0)
    assert eta(1.0, 1.0, sigma2=1e-8) < eta(1.0, 1.0, sigma2=1e-10)


def test_sinr_scale_invariance_without_noise():
    drop = make_drop(300.0, [[100.0, 900.0], [450.0, 1700.0]])
    fading = FadingDraw(1.3, np.array([0.8, 1.9]))
    base = instantaneous_sinr(drop, fading, 0.4, 3.0, R, NoiseModel(0.0)).eta
    for c in (0.1, 3.0, 42.0):
        scaled_drop = make_drop(c * 300.0, [[c * 100.0, c * 900.0], [c * 450.0, c * 1700.0]])
        scaled = instantaneous_sinr(scaled_drop, fading, 0.4, 3.0, c * R, NoiseModel(0.0)).eta
        assert scaled == pytest.approx(base, rel=1e-9)


def test_sinr_full_compensation_equalizes_received_power():
    noise = NoiseModel(0.0)
    signals = []
    for r in (50.0, 250.0, 499.0):
        drop = make_drop(r, np.empty((0, 2)))
        signals.append(
            instantaneous_sinr(drop, FadingDraw(1.0, np.empty(0)), 1.0, 3.0, R, noise).signal
        )
    assert signals[0] == pytest.approx(R**-3.0, rel=1e-12)
    assert max(signals) == pytest.approx(min(signals), rel=1e-12)


def test_coverage_tends_to_one_as_target_vanishes():
    drop = make_drop(300.0, [[100.0, 900.0]])
    noise = NoiseModel(1e-9)
    assert conditional_coverage(drop, 0.5, 3.0, R, noise, 1e-15) == pytest.approx(1.0, abs=1e-9)


def test_coverage_no_interference_no_noise_is_one():
    drop = make_drop(300.0, np.empty((0, 2)))
    assert conditional_coverage(drop, 0.5, 3.0, R, NoiseModel(0.0), 1.0) == 1.0


def test_coverage_raw_single_interferer_value():
    # eps=0, T=1, sigma2=0, r=500, one interferer at d_i=1000: 1/(1 + (1/2)^3)
    drop = make_drop(500.0, [[123.0, 1000.0]])
    cov = conditional_coverage(drop, 0.0, 3.0, 1.0, NoiseModel(0.0), 1.0, normalized=False)
    assert cov == pytest.approx(0.8888888888888888, rel=1e-12)


def test_coverage_oracle_matches_indicator_mc():
    layout = build_layout(R)
    cochannel = cochannel_set(layout, Reuse.FR1)
    cfg = SimConfig()
    noise = noise_variance_norm(cfg)
    rng = np.random.default_rng(100)
    for _ in range(4):
        drop = sample_drop(layout, cochannel, rng)
        exact = conditional_coverage(drop, 0.5, 3.0, R, noise, 1.0)
        est, se = coverage_fading_mc(drop, 0.5, 3.0, R, noise, 1.0, 100_000, rng)
        assert abs(est - exact) < max(3 * se, 1e-4)


def test_coverage_removing_interferer_never_hurts():
    layout = build_layout(R)
    cochannel = cochannel_set(layout, Reuse.FR1)
    rng = np.random.default_rng(101)
    noise = noise_variance_norm(SimConfig())
    for _ in range(20):
        drop = sample_drop(layout, cochannel, rng)
        full = conditional_coverage(drop, 0.5, 3.0, R, noise, 1.0)
        for k in range(drop.n_interferers):
            reduced = UserDrop(r=drop.r, interferers=np.delete(drop.interferers, k, axis=0))
            assert conditional_coverage(reduced, 0.5, 3.0, R, noise, 1.0) >= full
