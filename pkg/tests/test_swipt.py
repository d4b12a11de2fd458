import math

import numpy as np
import pytest

from sagin_outage import swipt
from sagin_outage.config import config_from_mapping
from sagin_outage.errors import ConfigError, DomainError
from sagin_outage.mc import _block_rng, draw_block

SP = swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=0.7, p_th=3.16e-3)
NOISE = swipt.NoiseParams(sigma_r2=1e-8, sigma_rb2=1e-8, sigma_d2=1e-8, sigma_t2=1e-8)


def _draw(X, Y=1.0, Z=1.0, w_km=1000.0, v=800.0, u=450.0):
    return swipt.FadingDraw(X=np.asarray(X), Y=np.asarray(Y), Z=np.asarray(Z),
                            w_sr_km=np.asarray(w_km), w_rd_m=np.asarray(v),
                            w_rt_m=np.asarray(u))


class TestHarvestedPower:
    def test_chi_rho_eps_value(self):
        sp = swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=0.7, p_th=1.0)
        assert sp.chi_rho_eps == pytest.approx(0.6 * (0.8 / 0.6 + 0.4), rel=1e-14)  # 1.04

    def test_saturated_branch(self):
        # received power at twice the threshold: harvested is chi_re * p_th
        eta = 1.0
        w_m = 1.0
        x = 2.0 * SP.p_th
        assert swipt.harvested_power(x, w_m, eta, SP) == pytest.approx(
            SP.chi_rho_eps * SP.p_th, rel=1e-14)

    def test_linear_when_threshold_infinite(self):
        sp = swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=0.7, p_th=math.inf)
        xs = np.array([0.1, 10.0, 1e6])
        np.testing.assert_allclose(swipt.harvested_power(xs, 1.0, 2.0, sp),
                                   sp.chi_rho_eps * 2.0 * xs, rtol=1e-14)

    def test_continuous_and_nondecreasing(self):
        xs = np.linspace(0.0, 4 * SP.p_th, 4001)
        h = swipt.harvested_power(xs, 1.0, 1.0, SP)
        assert np.all(np.diff(h) >= -1e-18)
        knee = SP.p_th
        assert swipt.harvested_power(knee * (1 - 1e-12), 1.0, 1.0, SP) == pytest.approx(
            swipt.harvested_power(knee * (1 + 1e-12), 1.0, 1.0, SP), rel=1e-9)


class TestSnrGu:
    def test_large_x_limit_is_mu_prime(self):
        # the ceiling belongs to the unsaturated branch: keep it active via p_th=inf
        sp = swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=0.7, p_th=math.inf)
        lam = swipt.snr_gu(_draw(X=1e18), 1.0, sp, NOISE)
        assert lam == pytest.approx(sp.mu_prime, rel=1e-6)

    def test_zero_destination_fade(self):
        assert swipt.snr_gu(_draw(X=1.0, Y=0.0), 1e12, SP, NOISE) == 0.0

    def test_monotone_in_y(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            x = rng.exponential(0.2)
            y = rng.exponential(1.0)
            d1 = _draw(X=x, Y=y)
            d2 = _draw(X=x, Y=y * 1.3)
            assert swipt.snr_gu(d2, 1e12, SP, NOISE) >= swipt.snr_gu(d1, 1e12, SP, NOISE)

    def test_supremum_bound_over_draws(self):
        cfg = config_from_mapping({"link.eta_s_db": 130.0})
        rng = _block_rng(5, 0)
        d = draw_block(cfg, rng, 200_000)
        lam = swipt.snr_gu(d, cfg.eta_s, cfg.sp, cfg.noise)
        assert np.max(lam) < cfg.sp.mu_prime


class TestSnrArx:
    def test_pic_dominates_imic_pointwise(self):
        cfg = config_from_mapping({"link.eta_s_db": 120.0})
        rng = _block_rng(6, 0)
        d = draw_block(cfg, rng, 200_000)
        lam_im = swipt.snr_arx(d, cfg.eta_s, cfg.sp, cfg.noise, ic_mode=swipt.IM_IC)
        lam_p = swipt.snr_arx(d, cfg.eta_s, cfg.sp, cfg.noise, ic_mode=swipt.P_IC)
        assert np.all(lam_p >= lam_im)

    def test_large_x_imic_limit(self):
        sp = swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=0.7, p_th=math.inf)
        lam = swipt.snr_arx(_draw(X=1e18), 1.0, sp, NOISE, ic_mode=swipt.IM_IC)
        assert lam == pytest.approx(1.0 / sp.mu_prime, rel=1e-6)

    def test_imic_supremum_bound_over_draws(self):
        cfg = config_from_mapping({"link.eta_s_db": 130.0})
        rng = _block_rng(7, 0)
        d = draw_block(cfg, rng, 200_000)
        lam = swipt.snr_arx(d, cfg.eta_s, cfg.sp, cfg.noise, ic_mode=swipt.IM_IC)
        assert np.max(lam) < 1.0 / cfg.sp.mu_prime

    def test_mu_one_kills_both_modes(self):
        sp = swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=1.0, p_th=1.0)
        for mode in (swipt.IM_IC, swipt.P_IC):
            assert swipt.snr_arx(_draw(X=3.0), 1e12, sp, NOISE, ic_mode=mode) == 0.0

    def test_unknown_mode_rejected(self):
        with pytest.raises(ConfigError):
            swipt.snr_arx(_draw(X=1.0), 1.0, SP, NOISE, ic_mode="oracle")


class TestGammaFromRate:
    def test_zero_rate(self):
        assert swipt.gamma_from_rate(0.0, 0.4) == 0.0

    def test_reference_value(self):
        assert swipt.gamma_from_rate(0.5, 0.4) == pytest.approx(2 ** (5 / 3) - 1, rel=1e-13)

    def test_monotone_in_rho(self):
        gammas = [swipt.gamma_from_rate(0.1, r) for r in (0.0, 0.3, 0.6, 0.9)]
        assert gammas == sorted(gammas)

    def test_domain(self):
        with pytest.raises(DomainError):
            swipt.gamma_from_rate(0.1, 1.0)
        with pytest.raises(DomainError):
            swipt.gamma_from_rate(-0.1, 0.4)


class TestParamValidation:
    def test_ranges(self):
        with pytest.raises(ConfigError):
            swipt.SwiptParams(chi=0.6, rho=1.2, epsilon=0.4, mu=0.7, p_th=1.0)
        with pytest.raises(ConfigError):
            swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=0.0, p_th=1.0)
        with pytest.raises(ConfigError):
            swipt.NoiseParams(sigma_r2=0.0, sigma_rb2=1e-8, sigma_d2=1e-8, sigma_t2=1e-8)

    def test_mu_eps(self):
        assert NOISE.mu_eps(SP) == pytest.approx(0.7 * (1e-8 + 1e-8 / 0.6), rel=1e-14)

    def test_mu_prime_at_one(self):
        sp = swipt.SwiptParams(chi=0.6, rho=0.4, epsilon=0.4, mu=1.0, p_th=1.0)
        assert math.isinf(sp.mu_prime)
