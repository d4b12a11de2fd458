"""Monte Carlo outage and throughput estimation.

Trials are drawn in fixed-size blocks, each from its own Philox substream
keyed by (seed, block index) through the counter words.  Estimates are
therefore bit-identical for a given (config, trials, seed) no matter how the
blocks are scheduled across workers.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import (sample_arx_distance, sample_gu_distance,
                       sample_satellite_distance)
from .channel import (sample_nakagami_power, sample_rician_power,
                      sample_shadowed_rician_power)
from .swipt import IM_IC, P_IC, FadingDraw, snr_arx, snr_gu

BLOCK = 1 << 16

# outage below ~10 successes-worth of resolution is flagged, not trusted
RESOLUTION_FACTOR = 10.0


@dataclass(frozen=True)
class OutageEstimate:
    """One outage probability with its provenance."""

    value: float
    std_error: float
    trials: int
    method: str
    seed: int = 0
    flags: tuple = ()

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ConfigError("outage estimate outside [0, 1]")


def _block_rng(seed, block_index):
    # Philox counter words: (0, 0, block, brand); key from the user seed
    bitgen = np.random.Philox(key=np.uint64(seed) & np.uint64(0xFFFFFFFFFFFFFFFF),
                              counter=[0, 0, np.uint64(block_index), np.uint64(0x5A61)])
    return np.random.Generator(bitgen)


def draw_block(cfg, rng, n):
    """One independent block-fading realisation per trial."""
    w_sr = sample_satellite_distance(rng, cfg.orbit, n)      # km
    w_rd = sample_gu_distance(rng, cfg.cone, n)              # m
    w_rt = sample_arx_distance(rng, cfg.cone, n)             # m
    X = sample_shadowed_rician_power(rng, cfg.sr, n)
    Y = sample_nakagami_power(rng, cfg.nak, n)
    Z = sample_rician_power(rng, cfg.ric, n)
    return FadingDraw(X=X, Y=Y, Z=Z, w_sr_km=w_sr, w_rd_m=w_rd, w_rt_m=w_rt)


def _snr_for(cfg, draw, network, ic_mode):
    eta = cfg.eta_s
    if network == "s2g":
        return snr_gu(draw, eta, cfg.sp, cfg.noise, nu_rd=cfg.nak.nu_rd)
    if network == "a2a":
        return snr_arx(draw, eta, cfg.sp, cfg.noise, ic_mode=ic_mode,
                       nu_rt=cfg.ric.nu_rt)
    raise ConfigError(f"unknown network {network!r}")


def _gamma_for(cfg, network):
    return cfg.gamma_s if network == "s2g" else cfg.gamma_a


def simulate_op(cfg, network, ic_mode=IM_IC, trials=None, seed=None):
    """Outage frequency over exact per-trial SNRs, with binomial standard error."""
    trials = cfg.trials if trials is None else int(trials)
    seed = cfg.seed if seed is None else int(seed)
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    gamma = _gamma_for(cfg, network)
    failures = 0
    done = 0
    block_index = 0
    while done < trials:
        n = min(BLOCK, trials - done)
        rng = _block_rng(seed, block_index)
        draw = draw_block(cfg, rng, n)
        lam = _snr_for(cfg, draw, network, ic_mode)
        failures += int(np.count_nonzero(lam < gamma))
        done += n
        block_index += 1
    value = failures / trials
    se = math.sqrt(value * (1.0 - value) / trials)
    flags = ()
    if 0 < value < RESOLUTION_FACTOR / trials:
        flags = ("resolution_floor",)
    return OutageEstimate(value=value, std_error=se, trials=trials,
                          method="mc", seed=seed, flags=flags)


def simulate_throughput(cfg, trials=None, seed=None, ic_mode=IM_IC):
    """Average throughput with both outage terms estimated by simulation."""
    op_s = simulate_op(cfg, "s2g", trials=trials, seed=seed)
    op_a = simulate_op(cfg, "a2a", ic_mode=ic_mode, trials=trials, seed=seed)
    sp = cfg.sp
    pre = (1.0 - sp.rho) * sp.block_s / 2.0
    r_s, r_a = cfg.raw["rates.r_s"], cfg.raw["rates.r_a"]
    return pre * (r_s * (1.0 - op_s.value) + r_a * (1.0 - op_a.value))


def common_random_numbers_compare(cfg, trials=None, seed=None):
    """Paired im-IC / p-IC outage on identical draws.

    Returns (est_im, est_p, diff, diff_se); the per-trial SNR ordering makes
    the paired difference nonnegative for every seed.
    """
    trials = cfg.trials if trials is None else int(trials)
    seed = cfg.seed if seed is None else int(seed)
    gamma = cfg.gamma_a
    fail_im = 0
    fail_p = 0
    disagree = 0   # trials outaged under im-IC only (the paired difference)
    done = 0
    block_index = 0
    while done < trials:
        n = min(BLOCK, trials - done)
        rng = _block_rng(seed, block_index)
        draw = draw_block(cfg, rng, n)
        lam_im = _snr_for(cfg, draw, "a2a", IM_IC)
        lam_p = _snr_for(cfg, draw, "a2a", P_IC)
        out_im = lam_im < gamma
        out_p = lam_p < gamma
        fail_im += int(np.count_nonzero(out_im))
        fail_p += int(np.count_nonzero(out_p))
        disagree += int(np.count_nonzero(out_im & ~out_p))
        done += n
        block_index += 1
    est_im = OutageEstimate(fail_im / trials,
                            math.sqrt(fail_im / trials * (1 - fail_im / trials) / trials),
                            trials, "mc", seed)
    est_p = OutageEstimate(fail_p / trials,
                           math.sqrt(fail_p / trials * (1 - fail_p / trials) / trials),
                           trials, "mc", seed)
    d = disagree / trials
    d_se = math.sqrt(max(d * (1.0 - d), 0.0) / trials)
    return est_im, est_p, d, d_se
