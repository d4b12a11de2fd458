"""Composite coefficients shared by the closed-form and integration paths.

Both outage problems (satellite-to-ground and air-to-air) have the same
algebraic shape once the destination link is abstracted:

  success  <=>  T * (a X w^-2 - b) > gamma sigma^2 u^nu * r(X, w)

with (a, b) built from the sharing factor, the harvester constants and the
threshold, and the destination tail expanded as
sum_n wgt_n (c u^nu / z)^n exp(-c u^nu / z).  The destination distance
measure enters as a short list of monomial pieces coeff * u^q on [lo, hi].
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammainc, gammaln

from ..channel import nakagami_power_tail, rician_power_tail
from ..errors import ConfigError
from ..swipt import IM_IC, P_IC


@dataclass(frozen=True)
class SeriesContext:
    """Truncation policy for the infinite index sums."""

    rel_tol: float = 1e-12       # relative term size that counts as converged
    consecutive: int = 3         # how many small terms in a row stop a sum
    k2_cap: int = 200            # Taylor index over the exponential expansions
    dest_cap: int = 80           # destination tail series (collapsed index)
    cgq_n: int = 100

    def __post_init__(self):
        if not (0 < self.rel_tol <= 1e-6):
            raise ConfigError("series rel_tol must lie in (0, 1e-6]")
        if self.k2_cap < 16 or self.dest_cap < 16:
            raise ConfigError("series caps must be >= 16")


@dataclass(frozen=True)
class DerivedCoefficients:
    """The composite constants of one outage case.

    a_lin > 0 is the feasibility condition (threshold below the SNR ceiling);
    p_sat = p_th a / eta - b separates the unsaturated/saturated integration
    ranges of the satellite fading variable.
    """

    a_lin: float
    b_lin: float
    p_sat: float
    eta_s: float
    p_th: float
    gamma: float
    a_floor: float = 0.0   # feasibility needs a_lin above this roundoff scale

    @classmethod
    def for_case(cls, cfg, network, ic_mode, gamma):
        sp = cfg.sp
        noise = cfg.noise
        chi = sp.chi_rho_eps
        mu = sp.mu
        eta = cfg.eta_s
        mu_eps = noise.mu_eps(sp)
        if network == "s2g":
            a = chi * eta * (mu - (1.0 - mu) * gamma)
            b = mu_eps * chi * gamma
        elif ic_mode == IM_IC:
            a = chi * eta * ((1.0 - mu) - mu * gamma)
            b = mu_eps * chi * gamma
        elif ic_mode == P_IC:
            a = chi * eta * (1.0 - mu)
            b = mu_eps * chi * gamma
        else:
            raise ConfigError(f"unknown ic_mode {ic_mode!r}")
        p_sat = math.inf if math.isinf(sp.p_th) else sp.p_th * a / eta - b
        # thresholds landing exactly on the SNR ceiling leave roundoff dust in a
        a_floor = 1e-12 * chi * eta * (1.0 + gamma)
        return cls(a_lin=a, b_lin=b, p_sat=p_sat, eta_s=eta, p_th=sp.p_th,
                   gamma=gamma, a_floor=a_floor)


@dataclass
class OutageCase:
    """Everything either evaluation path needs for one (network, mode, gamma)."""

    network: str
    ic_mode: str
    gamma: float
    coeff: DerivedCoefficients
    # satellite fading and distance (metres)
    alpha: float
    beta_bar: float
    zeta: np.ndarray
    m_sr: int
    w_min_m: float
    w_max_m: float
    w_norm_m2: float           # w_er * w_min in m^2 (pdf normalisation)
    # destination link
    sigma2: float
    nu: float
    dest_pieces: tuple         # ((lo, hi, coeff, upower), ...)
    dest_lo: float
    dest_hi: float
    dest_tail: object = field(repr=False)   # callable t -> Pr[fade > t]
    dest_c: float = 0.0        # c multiplying u^nu / z in the tail series
    dest_logw: np.ndarray = None   # log weights of the collapsed tail series

    @property
    def feasible(self):
        return self.coeff.a_lin > self.coeff.a_floor


def _dest_series_nakagami(m_rd, cap):
    if not float(m_rd).is_integer():
        raise ConfigError("closed-form destination series needs integer m_rd")
    n = np.arange(int(m_rd))
    return -gammaln(n + 1.0)


def _dest_series_rician(K, cap, rel_tol):
    # tail = sum_n P[Pois(K) >= n] ((1+K)t)^n e^-((1+K)t) / n!; the Poisson
    # tail collapses the textbook double sum exactly and keeps terms positive
    n = np.arange(cap + 1)
    pois_tail = np.empty(cap + 1)
    pois_tail[0] = 1.0
    if cap >= 1:
        pois_tail[1:] = gammainc(n[1:], K)
    with np.errstate(divide="ignore"):
        logw = np.log(pois_tail) - gammaln(n + 1.0)
    keep = pois_tail > rel_tol * 1e-4
    return logw[keep]


def build_case(cfg, network, ic_mode, gamma, ctx=None):
    """Assemble the OutageCase for a network/mode at threshold gamma."""
    ctx = ctx or SeriesContext(cgq_n=cfg.cgq_n)
    coeff = DerivedCoefficients.for_case(cfg, network, ic_mode, gamma)
    sr = cfg.sr
    orbit = cfg.orbit
    cone = cfg.cone
    w_min_m = orbit.w_min * 1e3
    w_max_m = orbit.w_max * 1e3
    w_norm_m2 = (orbit.w_er * 1e3) * w_min_m

    if network == "s2g":
        sigma2 = cfg.noise.sigma_d2
        nu = cfg.nak.nu_rd
        lo, hi = cone.h_0, cone.gu_max
        pieces = ((lo, hi, 2.0 / cone.l ** 2, 1),)
        tail = lambda t: nakagami_power_tail(t, cfg.nak)
        c = cfg.nak.m_rd * sigma2 * gamma
        logw = _dest_series_nakagami(cfg.nak.m_rd, ctx.dest_cap) if float(cfg.nak.m_rd).is_integer() else None
    elif network == "a2a":
        sigma2 = cfg.noise.sigma_t2
        nu = cfg.ric.nu_rt
        c_phi = math.cos(cone.phi)
        norm = math.tan(cone.phi) ** 2 * (cone.h_2 ** 3 - cone.h_1 ** 3)
        h1, h2 = cone.h_1, cone.h_2
        lo, hi = h1, h2 / c_phi
        if cone.case1:
            pieces = (
                (h1, h1 / c_phi, 6.0 / norm, 2),
                (h1, h1 / c_phi, -6.0 * h1 / norm, 1),
                (h1 / c_phi, h2, 6.0 * (1.0 - c_phi) / norm, 2),
                (h2, h2 / c_phi, 6.0 * h2 / norm, 1),
                (h2, h2 / c_phi, -6.0 * c_phi / norm, 2),
            )
        else:
            pieces = (
                (h1, h2, 6.0 / norm, 2),
                (h1, h2, -6.0 * h1 / norm, 1),
                (h2, h1 / c_phi, 6.0 * (h2 - h1) / norm, 1),
                (h1 / c_phi, h2 / c_phi, 6.0 * h2 / norm, 1),
                (h1 / c_phi, h2 / c_phi, -6.0 * c_phi / norm, 2),
            )
        tail = lambda t: rician_power_tail(t, cfg.ric)
        c = (1.0 + cfg.ric.K_rt) * sigma2 * gamma
        logw = _dest_series_rician(cfg.ric.K_rt, ctx.dest_cap, ctx.rel_tol)
    else:
        raise ConfigError(f"unknown network {network!r}")

    return OutageCase(
        network=network, ic_mode=ic_mode, gamma=gamma, coeff=coeff,
        alpha=sr.alpha, beta_bar=sr.beta_bar, zeta=sr.zeta(), m_sr=sr.m_sr,
        w_min_m=w_min_m, w_max_m=w_max_m, w_norm_m2=w_norm_m2,
        sigma2=sigma2, nu=nu, dest_pieces=pieces, dest_lo=lo, dest_hi=hi,
        dest_tail=tail, dest_c=c, dest_logw=logw,
    )
