"""Closed-form outage series with the residual distance integrals by CGQ.

Both networks share one algebraic skeleton; the destination link enters only
through the collapsed tail series (weights w_n, scale c) and the monomial
pieces of its distance measure.  Four building blocks cover every regime:

  unsat_taylor     unsaturated branch, Taylor series in the satellite
                   exponential (usable while beta_bar w_max^2 p_sat / a stays
                   moderate);
  unsat_linear minus unsat_overshoot
                   the same probability written as the no-saturation value
                   minus the overshoot beyond the saturation point (usable
                   everywhere the Taylor parameter is large);
  sat_above_knee   saturated branch above a positive saturation point;
  sat_below_knee   saturated branch when the saturation point is negative.

All sums run in signed log space; cancellation is monitored against the
largest term so a noisy series is reported instead of silently returned.
"""

import math
import warnings

import numpy as np
from scipy.special import gammaln

from ..errors import NumericError
from ..channel import shadowed_rician_power_tail
from ..specfun import (CgqRule, cgq_points, log_delta_gamma, log_gamma_upper,
                       logsumexp_signed, meijer_g_log)
from ..swipt import IM_IC
from .coefficients import SeriesContext, build_case

_ROUTE_SWITCH = 25.0        # Taylor parameter above which the unsaturated branch switches route
_SERIES_BLOWUP = 250.0      # cap for the Bessel-tamed unsaturated series
_SERIES_BLOWUP_EXP = 28.0   # cap for plain alternating-exponential expansions


class _Work:
    """Per-evaluation caches and diagnostics."""

    def __init__(self, case, ctx):
        self.case = case
        self.ctx = ctx
        self.rule = CgqRule(ctx.cgq_n)
        self.w_nodes, self.w_wts = cgq_points(case.w_min_m, case.w_max_m, self.rule)
        self.log_w = np.log(self.w_nodes)
        self.log_wts = np.log(self.w_wts)
        self.gamma_cache = {}
        self.g2123_cache = {}
        self.g2113_cache = {}
        self.diagnostics = {"truncated": False, "routes": []}

    # -- CGQ kernels --------------------------------------------------------

    def log_gamma_on_nodes(self, s, p_sat):
        """log Gamma(s, beta_bar w^2 p_sat / a) on the CGQ nodes."""
        hit = self.gamma_cache.get(s)
        if hit is not None:
            return hit
        case = self.case
        xs = case.beta_bar * self.w_nodes ** 2 * p_sat / case.coeff.a_lin
        vals = np.array([log_gamma_upper(s, x) for x in xs])
        self.gamma_cache[s] = vals
        return vals

    def cgq_gamma(self, s, w_pow, p_sat):
        """(sign, log) of int w^w_pow e^(-bb b w^2/a) Gamma(s, bb w^2 p/a) dw."""
        case = self.case
        expo = (self.log_wts + w_pow * self.log_w
                - case.beta_bar * case.coeff.b_lin * self.w_nodes ** 2 / case.coeff.a_lin
                + self.log_gamma_on_nodes(s, p_sat))
        return logsumexp_signed(expo, np.ones_like(expo))

    def g2123_pieces(self, n, s1):
        """(sign, log) of the destination bracket of the Taylor-route series."""
        key = (n, s1)
        hit = self.g2123_cache.get(key)
        if hit is not None:
            return hit
        case = self.case
        nu = case.nu
        omega = case.dest_c / case.coeff.p_sat
        by_q = {}
        for lo, hi, coeff, q in case.dest_pieces:
            by_q.setdefault(q, []).append((lo, hi, coeff))
        signs, logs = [], []
        for q, group in by_q.items():
            e = (q + 1.0) / nu
            params = (1.0 - n - e, s1 + 1.0, s1, 0.0, -n - e)
            ys = np.array([[hi, lo] for lo, hi, _ in group]).ravel()
            gs, gl = meijer_g_log("G2123", params, omega * ys ** nu)
            pw = nu * n + q + 1.0
            for i, (lo, hi, coeff) in enumerate(group):
                for j, (y, orient) in enumerate(((hi, 1.0), (lo, -1.0))):
                    idx = 2 * i + j
                    signs.append(orient * np.sign(coeff) * gs[idx])
                    logs.append(math.log(abs(coeff) / nu) + pw * math.log(y) + gl[idx])
        out = logsumexp_signed(np.array(logs), np.array(signs))
        self.g2123_cache[key] = out
        return out

    def cgq_g2113(self, s2, s3, w_pow, cst):
        """(sign, log) of the CGQ integral whose integrand carries the
        destination bracket of G2113 terms with argument cst * y^nu * w^2."""
        case = self.case
        nu = case.nu
        key = (round(s2 * 2), round(s3 * 2))
        hit = self.g2113_cache.get(key)
        if hit is None:
            nn = len(self.w_nodes)
            by_q = {}
            for lo, hi, coeff, q in case.dest_pieces:
                by_q.setdefault(q, []).append((lo, hi, coeff))
            parts_logs, parts_signs = [], []
            for q, group in by_q.items():
                e = (q + 1.0) / nu
                params = (1.0 - s2 - e, s3, -s3, -s2 - e)
                ys = np.array([[hi, lo] for lo, hi, _ in group]).ravel()
                xs = (cst * ys[:, None] ** nu * self.w_nodes[None, :] ** 2).ravel()
                gs, gl = meijer_g_log("G2113", params, xs)
                gs = gs.reshape(len(ys), nn)
                gl = gl.reshape(len(ys), nn)
                pw = nu * s2 + q + 1.0
                for i, (lo, hi, coeff) in enumerate(group):
                    for j, (y, orient) in enumerate(((hi, 1.0), (lo, -1.0))):
                        idx = 2 * i + j
                        parts_signs.append(orient * np.sign(coeff) * gs[idx])
                        parts_logs.append(math.log(abs(coeff) / nu)
                                          + pw * math.log(y) + gl[idx])
            logs = np.stack(parts_logs)          # (pieces*2, n_nodes)
            signs = np.stack(parts_signs)
            m = logs.max(axis=0)
            vals = np.sum(signs * np.exp(logs - m[None, :]), axis=0)
            bracket_sign = np.sign(vals)
            with np.errstate(divide="ignore"):
                bracket_log = m + np.log(np.abs(vals))
            hit = (bracket_sign, bracket_log)
            self.g2113_cache[key] = hit
        bracket_sign, bracket_log = hit
        case = self.case
        expo = (self.log_wts + w_pow * self.log_w
                - case.beta_bar * case.coeff.b_lin * self.w_nodes ** 2 / case.coeff.a_lin
                + bracket_log)
        return logsumexp_signed(expo, bracket_sign)

    # -- destination helpers --------------------------------------------------

    def pieces_moment(self, r):
        """(sign, log) of sum over pieces of coeff (hi^p - lo^p)/p, p = nu r + q + 1."""
        case = self.case
        logs, signs = [], []
        for lo, hi, coeff, q in case.dest_pieces:
            p = case.nu * r + q + 1.0
            val = (hi ** p - lo ** p) / p
            logs.append(math.log(abs(coeff) * abs(val)) if val != 0 else -np.inf)
            signs.append(np.sign(coeff) * np.sign(val))
        return logsumexp_signed(np.array(logs), np.array(signs))

    def pieces_dgamma(self, order, c_eff):
        """(sign, log) of sum over pieces of (coeff/nu) c_eff^(-(q+1)/nu)
        DeltaGamma(order + (q+1)/nu, c_eff lo^nu, c_eff hi^nu)."""
        case = self.case
        nu = case.nu
        logs, signs = [], []
        for lo, hi, coeff, q in case.dest_pieces:
            e = (q + 1.0) / nu
            dg_s, dg_l = log_delta_gamma(order + e, c_eff * lo ** nu, c_eff * hi ** nu)
            logs.append(math.log(abs(coeff) / nu) - e * math.log(c_eff) + dg_l)
            signs.append(np.sign(coeff) * dg_s)
        return logsumexp_signed(np.array(logs), np.array(signs))


class _SignedSum:
    """Signed log-domain accumulator that tracks the cancellation peak."""

    def __init__(self):
        self.logs = []
        self.signs = []
        self.peak = -np.inf

    def add(self, sign, log):
        if sign == 0.0 or log == -np.inf:
            return
        self.logs.append(log)
        self.signs.append(sign)
        self.peak = max(self.peak, log)

    def value(self):
        if not self.logs:
            return 0.0
        sgn, lg = logsumexp_signed(np.array(self.logs), np.array(self.signs))
        return sgn * math.exp(lg) if lg > -700 else 0.0

    def noise_estimate(self):
        if not self.logs:
            return 0.0
        return len(self.logs) * 1e-15 * math.exp(min(self.peak, 700.0))


def _log_binom(n, k):
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


# ---------------------------------------------------------------------------
# the four series blocks
# ---------------------------------------------------------------------------

def _unsat_taylor(work):
    """Unsaturated branch as a Taylor series in the satellite exponential."""
    case, ctx = work.case, work.ctx
    co = case.coeff
    a, b, bb = co.a_lin, co.b_lin, case.beta_bar
    logw_n = case.dest_logw
    log_c = math.log(case.dest_c)
    acc = _SignedSum()
    base = math.log(case.alpha * a / 2.0) - math.log(case.w_norm_m2)
    for k in range(case.m_sr):
        if case.zeta[k] <= 0:
            continue
        log_zeta = math.log(case.zeta[k])
        for k1 in range(k + 1):
            lb = _log_binom(k, k1)
            small = 0
            for k2 in range(ctx.k2_cap + 1):
                dg_s, dg_l = log_delta_gamma(k + k2 + 2.0,
                                             bb * b * case.w_min_m ** 2 / a,
                                             bb * b * case.w_max_m ** 2 / a)
                pref = (base + log_zeta + lb
                        - (k1 + k2 + 2.0) * math.log(b)
                        - (k + 2.0) * math.log(bb)
                        - float(gammaln(k2 + 1.0)) + dg_l)
                sign_k2 = (-1.0) ** k2 * dg_s
                term_peak = -np.inf
                n_small = 0
                for n in range(len(logw_n)):
                    s1 = 1 + k1 + k2 - n
                    g_s, g_l = work.g2123_pieces(n, s1)
                    if g_s == 0.0:
                        continue
                    lt = (pref + logw_n[n] + n * log_c
                          + s1 * math.log(co.p_sat) + g_l)
                    acc.add(sign_k2 * g_s, lt)
                    term_peak = max(term_peak, lt)
                    if lt < acc.peak + math.log(ctx.rel_tol):
                        n_small += 1
                        if n_small >= ctx.consecutive:
                            break
                    else:
                        n_small = 0
                if term_peak < acc.peak + math.log(ctx.rel_tol):
                    small += 1
                    if small >= ctx.consecutive:
                        break
                else:
                    small = 0
            else:
                work.diagnostics["truncated"] = True
    return acc


def _unsat_linear(work):
    """No-saturation probability (finite Bessel-K route, no Taylor index)."""
    case, ctx = work.case, work.ctx
    co = case.coeff
    a, b, bb = co.a_lin, co.b_lin, case.beta_bar
    logw_n = case.dest_logw
    c = case.dest_c
    cst = bb * c / a
    acc = _SignedSum()
    base = math.log(case.alpha) - math.log(case.w_norm_m2)
    for k in range(case.m_sr):
        if case.zeta[k] <= 0:
            continue
        log_zeta = math.log(case.zeta[k])
        for k1 in range(k + 1):
            lb = _log_binom(k, k1)
            small = 0
            for n in range(len(logw_n)):
                s3 = (k1 - n + 1) / 2.0
                s2p = (n + k1 + 1) / 2.0
                w_pow = 2 * k + n - k1 + 2
                i_s, i_l = work.cgq_g2113(s2p, s3, w_pow, cst)
                if i_s == 0.0:
                    continue
                lt = (base + log_zeta + lb + logw_n[n]
                      + (k - k1) * math.log(b)
                      + (n + s3) * math.log(c)
                      - s3 * math.log(bb)
                      + (-(k + 1) + s3) * math.log(a) + i_l)
                acc.add(i_s, lt)
                if lt < acc.peak + math.log(ctx.rel_tol):
                    small += 1
                    if small >= ctx.consecutive:
                        break
                else:
                    small = 0
    return acc


def _unsat_overshoot(work):
    """Unsaturated-branch integrand carried past the saturation point."""
    case, ctx = work.case, work.ctx
    co = case.coeff
    a, b, bb = co.a_lin, co.b_lin, case.beta_bar
    logw_n = case.dest_logw
    c = case.dest_c
    acc = _SignedSum()
    base = math.log(case.alpha) - math.log(case.w_norm_m2)
    for k in range(case.m_sr):
        if case.zeta[k] <= 0:
            continue
        log_zeta = math.log(case.zeta[k])
        for k1 in range(k + 1):
            lb = _log_binom(k, k1)
            n_small = 0
            for n in range(len(logw_n)):
                n_peak = -np.inf
                small = 0
                for k2 in range(ctx.k2_cap + 1):
                    s = k1 - n - k2 + 1
                    m_s, m_l = work.pieces_moment(n + k2)
                    if m_s == 0.0:
                        break
                    g_s, g_l = work.cgq_gamma(s, 2 * k + 3 - 2 * s, co.p_sat)
                    lt = (base + log_zeta + lb + logw_n[n]
                          + (k - k1) * math.log(b)
                          - (k + 1.0) * math.log(a)
                          + s * (math.log(a) - math.log(bb))
                          - float(gammaln(k2 + 1.0))
                          + (n + k2) * math.log(c) + m_l + g_l)
                    acc.add((-1.0) ** k2 * m_s * g_s, lt)
                    n_peak = max(n_peak, lt)
                    if lt < acc.peak + math.log(ctx.rel_tol):
                        small += 1
                        if small >= ctx.consecutive:
                            break
                    else:
                        small = 0
                else:
                    work.diagnostics["truncated"] = True
                if n_peak < acc.peak + math.log(ctx.rel_tol):
                    n_small += 1
                    if n_small >= ctx.consecutive:
                        break
                else:
                    n_small = 0
    return acc


def _sat_above_knee(work):
    """Saturated branch above a positive saturation point."""
    case, ctx = work.case, work.ctx
    co = case.coeff
    a, b, bb = co.a_lin, co.b_lin, case.beta_bar
    logw_n = case.dest_logw
    c_eff = case.dest_c * co.eta_s / (co.p_th * a)
    acc = _SignedSum()
    base = math.log(case.alpha) - math.log(case.w_norm_m2)
    for k in range(case.m_sr):
        if case.zeta[k] <= 0:
            continue
        log_zeta = math.log(case.zeta[k])
        n_small = 0
        for n in range(len(logw_n)):
            n_peak = -np.inf
            for k1 in range(k + n + 1):
                lb = _log_binom(k + n, k1)
                small = 0
                for k2 in range(ctx.k2_cap + 1):
                    s = k1 - n - k2 + 1
                    d_s, d_l = work.pieces_dgamma(n + k2, c_eff)
                    if d_s == 0.0:
                        break
                    g_s, g_l = work.cgq_gamma(s, 2 * k + 3 - 2 * s, co.p_sat)
                    lt = (base + log_zeta + logw_n[n] + lb
                          + (k + n - k1 + k2) * math.log(b)
                          - (k + 1.0) * math.log(a)
                          + s * (math.log(a) - math.log(bb))
                          - float(gammaln(k2 + 1.0)) + d_l + g_l)
                    acc.add((-1.0) ** k2 * d_s * g_s, lt)
                    n_peak = max(n_peak, lt)
                    if lt < acc.peak + math.log(ctx.rel_tol):
                        small += 1
                        if small >= ctx.consecutive:
                            break
                    else:
                        small = 0
                else:
                    work.diagnostics["truncated"] = True
            if n_peak < acc.peak + math.log(ctx.rel_tol):
                n_small += 1
                if n_small >= ctx.consecutive:
                    break
            else:
                n_small = 0
    return acc


def _sat_below_knee(work):
    """Saturated branch when the saturation point is at or below zero."""
    case, ctx = work.case, work.ctx
    co = case.coeff
    a, b, bb = co.a_lin, co.b_lin, case.beta_bar
    logw_n = case.dest_logw
    c_eff = case.dest_c * co.eta_s / (co.p_th * a)
    if c_eff * case.dest_hi ** case.nu > _SERIES_BLOWUP_EXP:
        raise NumericError("saturated-branch series parameter too large "
                           "(use the integral path for this configuration)",
                           {"param": c_eff * case.dest_hi ** case.nu})
    cst = bb * c_eff * b / a
    acc = _SignedSum()
    base = math.log(case.alpha) - math.log(case.w_norm_m2)
    for k in range(case.m_sr):
        if case.zeta[k] <= 0:
            continue
        log_zeta = math.log(case.zeta[k])
        n_small = 0
        for n in range(len(logw_n)):
            n_peak = -np.inf
            for k1 in range(k + n + 1):
                lb = _log_binom(k + n, k1)
                s3 = (k1 - n + 1) / 2.0
                small = 0
                for k2 in range(ctx.k2_cap + 1):
                    s2 = n + k2 + s3
                    w_pow = 2 * k + n - k1 + 2
                    i_s, i_l = work.cgq_g2113(s2, s3, w_pow, cst)
                    if i_s == 0.0:
                        continue
                    lt = (base + log_zeta + logw_n[n] + lb
                          + (k + n - k1 + s3) * math.log(b)
                          + (-(k + 1) + s3) * math.log(a)
                          - s3 * math.log(bb)
                          + (n + k2 + s3) * math.log(c_eff)
                          - float(gammaln(k2 + 1.0)) + i_l)
                    acc.add((-1.0) ** k2 * i_s, lt)
                    n_peak = max(n_peak, lt)
                    if lt < acc.peak + math.log(ctx.rel_tol):
                        small += 1
                        if small >= ctx.consecutive:
                            break
                    else:
                        small = 0
                else:
                    work.diagnostics["truncated"] = True
            if n_peak < acc.peak + math.log(ctx.rel_tol):
                n_small += 1
                if n_small >= ctx.consecutive:
                    break
            else:
                n_small = 0
    return acc


# ---------------------------------------------------------------------------
# branch assembly
# ---------------------------------------------------------------------------

class _TailView:
    """Adapter exposing the case's satellite-fading constants to the tail helper."""

    def __init__(self, case):
        self.m_sr = case.m_sr
        self.alpha = case.alpha
        self.beta_bar = case.beta_bar
        self._zeta = case.zeta

    def zeta(self):
        return self._zeta


def _sat_bound(case):
    """Rigorous upper bound on any saturated-branch probability."""
    co = case.coeff
    if math.isinf(co.p_th):
        return 0.0
    x_min = (max(co.p_sat, 0.0) + co.b_lin) * case.w_min_m ** 2 / co.a_lin
    return float(shadowed_rician_power_tail(x_min, _TailView(case)))


def _closed_outage(case, ctx):
    if case.gamma <= 0.0:
        return 0.0
    if not case.feasible:
        return 1.0
    work = _Work(case, ctx)
    co = case.coeff
    p1 = 0.0
    p2 = 0.0
    noise = 0.0
    if co.p_sat > 0.0:
        if math.isinf(co.p_sat):
            acc = _unsat_linear(work)
            work.diagnostics["routes"].append("linear")
            p1 = acc.value()
            noise += acc.noise_estimate()
        else:
            param_direct = case.beta_bar * case.w_max_m ** 2 * co.p_sat / co.a_lin
            param_tail = case.dest_c * case.dest_hi ** case.nu / co.p_sat
            if param_direct <= _ROUTE_SWITCH or param_direct <= param_tail:
                if param_direct > _SERIES_BLOWUP:
                    raise NumericError("unsaturated-branch series parameter too large",
                                       {"param": param_direct})
                acc = _unsat_taylor(work)
                work.diagnostics["routes"].append("direct")
                p1 = acc.value()
                noise += acc.noise_estimate()
            else:
                if param_tail > _SERIES_BLOWUP_EXP:
                    raise NumericError("saturation-tail series parameter too large",
                                       {"param": param_tail})
                acc_l = _unsat_linear(work)
                acc_t = _unsat_overshoot(work)
                work.diagnostics["routes"].append("linear-minus-tail")
                p1 = acc_l.value() - acc_t.value()
                noise += acc_l.noise_estimate() + acc_t.noise_estimate()
        if not math.isinf(co.p_th) and _sat_bound(case) > 1e-18:
            acc2 = _sat_above_knee(work)
            p2 = acc2.value()
            noise += acc2.noise_estimate()
    else:
        acc3 = _sat_below_knee(work)
        work.diagnostics["routes"].append("sat-below-knee")
        p2 = acc3.value()
        noise += acc3.noise_estimate()
    if noise > 1e-5:
        raise NumericError("closed-form series lost too much precision",
                           {"noise": noise, "p1": p1, "p2": p2,
                            "routes": work.diagnostics["routes"]})
    val = 1.0 - p1 - p2
    clamped = min(max(val, 0.0), 1.0)
    if abs(clamped - val) > 1e-6:
        warnings.warn(f"closed-form outage clamped by {abs(clamped - val):.3e}; "
                      "series may be struggling", stacklevel=3)
    return float(clamped)


def op_s2g_closed(gamma_s, cfg, ctx=None):
    """Satellite-to-ground outage probability by the closed-form series."""
    ctx = ctx or SeriesContext(cgq_n=cfg.cgq_n)
    case = build_case(cfg, "s2g", IM_IC, gamma_s, ctx)
    return _closed_outage(case, ctx)


def op_a2a_closed(gamma_a, cfg, ic_mode=IM_IC, ctx=None):
    """Air-to-air outage probability by the closed-form series (im-IC or p-IC)."""
    ctx = ctx or SeriesContext(cgq_n=cfg.cgq_n)
    case = build_case(cfg, "a2a", ic_mode, gamma_a, ctx)
    return _closed_outage(case, ctx)
