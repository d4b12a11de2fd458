"""Hybrid time/power-splitting energy harvesting and the relayed-link SNRs.

The harvested power is linear in the received satellite power up to the
saturation threshold and flat above it.  All SNR evaluators are vectorised:
fields of FadingDraw may be scalars or equal-length arrays.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

IM_IC = "im-ic"
P_IC = "p-ic"


@dataclass(frozen=True)
class SwiptParams:
    chi: float        # conversion efficiency
    rho: float        # time-split fraction
    epsilon: float    # power-split fraction
    mu: float         # spectrum-sharing factor
    p_th: float       # saturation threshold power, W (may be inf for linear EH)
    block_s: float = 1.0

    def __post_init__(self):
        if not 0 < self.chi < 1:
            raise ConfigError("swipt.chi must lie in (0, 1)")
        if not 0 <= self.rho < 1:
            raise ConfigError("swipt.rho must lie in [0, 1)")
        if not 0 < self.epsilon < 1:
            raise ConfigError("swipt.epsilon must lie in (0, 1)")
        if not 0 < self.mu <= 1:
            raise ConfigError("swipt.mu must lie in (0, 1]")
        if not self.p_th > 0:
            raise ConfigError("swipt.p_th must be positive (inf selects linear EH)")
        if not self.block_s > 0:
            raise ConfigError("swipt.block_s must be positive")

    @property
    def chi_rho_eps(self):
        return self.chi * (2.0 * self.rho / (1.0 - self.rho) + self.epsilon)

    @property
    def mu_prime(self):
        if self.mu >= 1.0:
            return np.inf
        return self.mu / (1.0 - self.mu)

    @property
    def linear_eh(self):
        return np.isinf(self.p_th)


@dataclass(frozen=True)
class NoiseParams:
    """Receiver noise powers in watts."""

    sigma_r2: float
    sigma_rb2: float
    sigma_d2: float
    sigma_t2: float

    def __post_init__(self):
        for name in ("sigma_r2", "sigma_rb2", "sigma_d2", "sigma_t2"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"noise.{name} must be positive")

    def mu_eps(self, sp):
        """Relay-noise weight mu (sigma_r^2 + sigma_rb^2/(1-epsilon))."""
        return sp.mu * (self.sigma_r2 + self.sigma_rb2 / (1.0 - sp.epsilon))


@dataclass
class FadingDraw:
    """One joint realisation: channel powers and distances (w_sr km, others m)."""

    X: np.ndarray       # |g_sr|^2
    Y: np.ndarray       # |g_rd|^2
    Z: np.ndarray       # |g_rt|^2
    w_sr_km: np.ndarray
    w_rd_m: np.ndarray
    w_rt_m: np.ndarray


def harvested_power(X, w_sr_m, eta_s, sp):
    """Relay transmit power: chi_(rho,eps) * min(eta_s X / w^2, p_th)."""
    X = np.asarray(X, dtype=float)
    if np.any(X < 0):
        raise DomainError("channel power must be nonnegative")
    recv = eta_s * X / np.asarray(w_sr_m, dtype=float) ** 2
    return sp.chi_rho_eps * np.minimum(recv, sp.p_th)


def snr_gu(draw, eta_s, sp, noise, nu_rd=2.0):
    """End-to-end SNR at the ground user through the relay."""
    X = np.asarray(draw.X, dtype=float)
    Y = np.asarray(draw.Y, dtype=float)
    w_m = np.asarray(draw.w_sr_km, dtype=float) * 1e3
    v = np.asarray(draw.w_rd_m, dtype=float)
    return _snr_gu_core(X, Y, w_m, v, nu_rd, eta_s, sp, noise)


def _snr_gu_core(X, Y, w_m, v, nu_rd, eta_s, sp, noise):
    chi = sp.chi_rho_eps
    mu = sp.mu
    me = noise.mu_eps(sp)
    s2 = noise.sigma_d2
    g_sat = eta_s * X / w_m ** 2
    yv = Y * v ** (-nu_rd)
    lin = np.minimum(g_sat, sp.p_th)
    # common form: both branches reduce to
    #   mu chi lin yv / (me chi lin yv / g_sat + (1-mu) chi lin yv + s2)
    with np.errstate(divide="ignore", invalid="ignore"):
        relay_noise = np.where(g_sat > 0, me * chi * lin * yv / g_sat, 0.0)
    return mu * chi * lin * yv / (relay_noise + (1.0 - mu) * chi * lin * yv + s2)


def snr_arx(draw, eta_s, sp, noise, ic_mode=IM_IC, nu_rt=2.0):
    """SNR of the relay's own transmission at the aerial receiver."""
    if ic_mode not in (IM_IC, P_IC):
        raise ConfigError(f"ic_mode must be {IM_IC!r} or {P_IC!r}")
    X = np.asarray(draw.X, dtype=float)
    Z = np.asarray(draw.Z, dtype=float)
    w_m = np.asarray(draw.w_sr_km, dtype=float) * 1e3
    u = np.asarray(draw.w_rt_m, dtype=float)
    return _snr_arx_core(X, Z, w_m, u, nu_rt, eta_s, sp, noise, ic_mode)


def _snr_arx_core(X, Z, w_m, u, nu_rt, eta_s, sp, noise, ic_mode):
    chi = sp.chi_rho_eps
    mu = sp.mu
    me = noise.mu_eps(sp)
    s2 = noise.sigma_t2
    g_sat = eta_s * X / w_m ** 2
    zu = Z * u ** (-nu_rt)
    lin = np.minimum(g_sat, sp.p_th)
    with np.errstate(divide="ignore", invalid="ignore"):
        relay_noise = np.where(g_sat > 0, me * chi * lin * zu / g_sat, 0.0)
    interference = mu * chi * lin * zu if ic_mode == IM_IC else 0.0
    return (1.0 - mu) * chi * lin * zu / (relay_noise + interference + s2)


def gamma_from_rate(rate, rho):
    """Outage threshold 2^(2 r / (1 - rho)) - 1 for the two-hop half block."""
    if not 0 <= rho < 1:
        raise DomainError("rho must lie in [0, 1) to leave transmission time")
    if rate < 0:
        raise DomainError("rate must be nonnegative")
    return float(2.0 ** (2.0 * rate / (1.0 - rho)) - 1.0)
