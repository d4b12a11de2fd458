"""Sweep execution over one configuration variable and CSV emission.

The CSV schema is fixed (schema v1): one row per grid point, every column
always present, floats at 10 significant digits, '.' decimal separator,
newline-terminated rows.  Methods that were not requested leave their cells
empty; per-point numeric failures are recorded in the diagnostics column and
the run continues.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .analytic import (op_a2a_closed, op_a2a_integral, op_s2g_closed,
                       op_s2g_integral)
from .analytic.throughput import throughput_from_ops
from .errors import NumericError
from .mc import simulate_op
from .swipt import IM_IC

SCHEMA_COLUMNS = (
    "sweep_variable", "sweep_value",
    "op_s2g_mc", "se_s2g_mc", "op_s2g_closed", "op_s2g_integral",
    "op_a2a_im_mc", "se_a2a_im_mc", "op_a2a_im_closed", "op_a2a_im_integral",
    "op_a2a_p_mc", "se_a2a_p_mc", "op_a2a_p_closed", "op_a2a_p_integral",
    "throughput_mc", "throughput_closed", "throughput_integral",
    "diagnostics",
)


@dataclass
class SweepResult:
    variable: str
    columns: tuple = SCHEMA_COLUMNS
    rows: list = field(default_factory=list)

    @property
    def any_point_all_failed(self):
        return any(r.get("_all_failed", False) for r in self.rows)


def _worker_count():
    env = os.environ.get("SAGIN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def _mode_tag(mode):
    return "im" if mode == IM_IC else "p"


def _evaluate_point(cfg, variable, value, seed):
    row = {c: "" for c in SCHEMA_COLUMNS}
    row["sweep_variable"] = variable or ""
    row["sweep_value"] = value if value is not None else ""
    diags = []
    ops = {}

    def record(name, fn):
        try:
            ops[name] = fn()
        except NumericError as exc:
            diags.append(f"{name}:{exc}")
            ops[name] = None

    networks = cfg.networks
    methods = cfg.methods
    if "s2g" in networks:
        if "mc" in methods:
            def _mc_s():
                est = simulate_op(cfg, "s2g", seed=seed)
                row["se_s2g_mc"] = est.std_error
                diags.extend(f"s2g_mc:{f}" for f in est.flags)
                return est.value
            record("op_s2g_mc", _mc_s)
            row["op_s2g_mc"] = _blank(ops["op_s2g_mc"])
        if "closed" in methods:
            record("op_s2g_closed", lambda: op_s2g_closed(cfg.gamma_s, cfg))
            row["op_s2g_closed"] = _blank(ops["op_s2g_closed"])
        if "integral" in methods:
            record("op_s2g_integral", lambda: op_s2g_integral(cfg.gamma_s, cfg))
            row["op_s2g_integral"] = _blank(ops["op_s2g_integral"])
    if "a2a" in networks:
        for mode in cfg.ic_modes:
            tag = _mode_tag(mode)
            if "mc" in methods:
                def _mc_a(m=mode, t=tag):
                    est = simulate_op(cfg, "a2a", ic_mode=m, seed=seed)
                    row[f"se_a2a_{t}_mc"] = est.std_error
                    diags.extend(f"a2a_{t}_mc:{f}" for f in est.flags)
                    return est.value
                record(f"op_a2a_{tag}_mc", _mc_a)
                row[f"op_a2a_{tag}_mc"] = _blank(ops[f"op_a2a_{tag}_mc"])
            if "closed" in methods:
                record(f"op_a2a_{tag}_closed",
                       lambda m=mode: op_a2a_closed(cfg.gamma_a, cfg, ic_mode=m))
                row[f"op_a2a_{tag}_closed"] = _blank(ops[f"op_a2a_{tag}_closed"])
            if "integral" in methods:
                record(f"op_a2a_{tag}_integral",
                       lambda m=mode: op_a2a_integral(cfg.gamma_a, cfg, ic_mode=m))
                row[f"op_a2a_{tag}_integral"] = _blank(ops[f"op_a2a_{tag}_integral"])

    # throughput needs both networks; the im-IC outage feeds it when both modes run
    if "s2g" in networks and "a2a" in networks:
        a_tag = "im" if IM_IC in cfg.ic_modes else "p"
        for meth in methods:
            s_key = f"op_s2g_{meth}"
            a_key = f"op_a2a_{a_tag}_{meth}"
            if ops.get(s_key) is not None and ops.get(a_key) is not None:
                row[f"throughput_{meth}"] = throughput_from_ops(
                    cfg, ops[s_key], ops[a_key])

    requested = [k for k in ops]
    row["_all_failed"] = bool(requested) and all(ops[k] is None for k in requested)
    row["diagnostics"] = ";".join(diags)
    return row


def run_sweep(cfg):
    """Evaluate every requested method on the configured grid."""
    variable = cfg.raw["sweep.variable"]
    values = cfg.sweep_values if variable else [None]
    seeds = [cfg.seed + i for i in range(len(values))]
    points = []
    for val in values:
        points.append(cfg if val is None else cfg.with_overrides({variable: val}))
    result = SweepResult(variable=variable or "")
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        futs = [pool.submit(_evaluate_point, c, variable, v, s)
                for c, v, s in zip(points, values, seeds)]
        result.rows = [f.result() for f in futs]   # grid order regardless of finish
    return result


def _blank(v):
    return "" if v is None else v


def _fmt(v):
    if v == "" or v is None:
        return ""
    if isinstance(v, str):
        return v
    return f"{float(v):.10g}"


def emit_csv(result, path):
    """Write the sweep result with the fixed schema-v1 column order."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(SCHEMA_COLUMNS) + "\n")
        for row in result.rows:
            fh.write(",".join(_fmt(row.get(c, "")) for c in SCHEMA_COLUMNS) + "\n")
