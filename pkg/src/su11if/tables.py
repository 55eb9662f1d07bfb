"""Tabular outputs for the CLI: subcommand tables, figure data, CSV/JSON writers.

Column headers are ``quantity[unit]``. Angles leave this module in degrees,
lengths in micrometers; the library's radians and meters never leak.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from su11if.errors import UnknownFigureError
from su11if.ifshift import find_if_peaks, if_shift
from su11if.metrology import evaluate, scan
from su11if.optics import reflectance, spr_angle

UM = 1e6
DEG = np.pi / 180
# amplitude figures: |α|, |β| axes from amp_max/amp_steps up to amp_max
AMP_STEPS = 20
THETA_STEPS = 2000

FIGURE_BRACKETS_DEG = {
    "fig1b": (40.0, 50.0),
    "fig2": (43.5, 43.75),
}
DEFAULT_BRACKET_DEG = (43.55, 43.72)


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    reasons: list = field(default_factory=list)

    def add(self, values, reasons=None):
        self.rows.append([float(v) for v in values])
        self.reasons.append(dict(reasons or {}))

    def column(self, name):
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])


def _fmt(x):
    return repr(float(x))


def write_csv(table, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])


def write_json(table, fh):
    out = []
    for row, reasons in zip(table.rows, table.reasons):
        obj = {}
        why = {}
        for name, v in zip(table.columns, row):
            if math.isfinite(v):
                obj[name] = v
            else:
                obj[name] = None
                why[name] = f"{_fmt(v)}: {reasons.get(name, 'non-finite value')}"
        if why:
            obj["_nonfinite"] = why
        out.append(obj)
    json.dump(out, fh, indent=1, allow_nan=False)
    fh.write("\n")


def _deg_grid(lo_deg, hi_deg, steps):
    return np.radians(np.linspace(lo_deg, hi_deg, steps))


def _critical_angle(stack):
    return math.asin(math.sqrt(stack.eps_vacuum / stack.eps_prism))


def peak_angles(scenario):
    """IF peak angles of the scenario's stack, lower angle first (radians)."""
    stack = scenario.stack_obj()
    beam = scenario.beam_obj().with_oam(1)
    lo = _critical_angle(stack) + math.radians(0.05)
    spr = spr_angle(stack, bracket=(lo, math.radians(85.0)), prescan=40000)
    half = math.radians(0.75)
    peaks = find_if_peaks(beam, stack, (max(spr - half, lo), spr + half))
    return tuple(sorted((peaks.theta_neg_peak, peaks.theta_pos_peak)))


# ---------------------------------------------------------------- subcommands


def reflectivity_table(scenario):
    stack = scenario.stack_obj()
    grid = scenario.theta_grid()
    refl = reflectance(stack, grid)
    t = Table(["theta[deg]", "abs_r[1]", "eta[1]", "deta_dtheta[1/deg]"])
    for row in zip(np.degrees(grid), refl.abs_r, refl.eta, np.asarray(refl.deta_dtheta) * DEG):
        t.add(row)
    return t


def ifshift_table(scenario):
    stack, beam = scenario.stack_obj(), scenario.beam_obj()
    grid = scenario.theta_grid()
    s = if_shift(beam, stack, grid)
    t = Table(["theta[deg]", "Y[um]", "Y_over_lambda[1]"])
    for row in zip(np.degrees(grid), np.asarray(s.Y) * UM, s.Y_over_lambda):
        t.add(row)
    return t


def _reports(scenario, grid=None):
    return scan(
        scenario.inputs_obj(),
        scenario.opa_obj(),
        scenario.stack_obj(),
        scenario.beam_obj(),
        scenario.theta_grid() if grid is None else grid,
        trials=scenario.trials,
    )


_LIMIT_COLUMNS = [
    ("eta", "eta[1]", 1.0),
    ("Y", "Y[um]", UM),
    ("delta_Y", "delta_Y[um]", UM),
    ("snl_Y", "delta_Y_SNL[um]", UM),
    ("qcrb_Y", "delta_Y_QCRB[um]", UM),
    ("delta_theta", "delta_theta[deg]", 1 / DEG),
    ("snl_theta", "delta_theta_SNL[deg]", 1 / DEG),
    ("qcrb_theta", "delta_theta_QCRB[deg]", 1 / DEG),
    ("fisher_Y", "F_Y[1/um^2]", 1 / UM**2),
    ("fisher_theta", "F_theta[1/deg^2]", DEG**2),
]


def _report_table(reports, keys):
    spec = [c for c in _LIMIT_COLUMNS if c[0] in keys]
    t = Table(["theta[deg]"] + [c[1] for c in spec])
    for r in reports:
        reasons = {c[1]: r.reasons[c[0]] for c in spec if c[0] in r.reasons}
        t.add([math.degrees(r.theta)] + [getattr(r, c[0]) * c[2] for c in spec], reasons)
    return t


def sensitivity_table(scenario):
    return _report_table(_reports(scenario), {"eta", "Y", "delta_Y", "delta_theta"})


def limits_table(scenario):
    return _report_table(_reports(scenario), {c[0] for c in _LIMIT_COLUMNS})


# -------------------------------------------------------------------- figures


def _theta_figure_grid(scenario, fig_id, override):
    lo, hi = FIGURE_BRACKETS_DEG.get(fig_id, DEFAULT_BRACKET_DEG)
    steps = THETA_STEPS
    if override:
        lo = override.get("theta_min") or lo
        hi = override.get("theta_max") or hi
        steps = override.get("steps") or steps
    return _deg_grid(lo, hi, steps)


def _fig1b(scenario, grid):
    refl = reflectance(scenario.stack_obj(), grid)
    t = Table(["theta[deg]", "abs_r[1]"])
    for row in zip(np.degrees(grid), refl.abs_r):
        t.add(row)
    return t


def _fig2(scenario, grid):
    stack, beam = scenario.stack_obj(), scenario.beam_obj()
    cols = ["theta[deg]"]
    data = [np.degrees(grid)]
    for l in (1, 2, 3):
        s = if_shift(beam.with_oam(l), stack, grid)
        cols += [f"Y_l{l}[um]", f"Y_over_lambda_l{l}[1]"]
        data += [np.asarray(s.Y) * UM, s.Y_over_lambda]
    t = Table(cols)
    for row in zip(*data):
        t.add(row)
    return t


def _fig4a(scenario, grid):
    s = if_shift(scenario.beam_obj(), scenario.stack_obj(), grid)
    t = Table(["theta[deg]", "Y[um]", "Y_over_lambda[1]"])
    for row in zip(np.degrees(grid), np.asarray(s.Y) * UM, s.Y_over_lambda):
        t.add(row)
    return t


def _fig4b(scenario, grid):
    return _report_table(_reports(scenario, grid), {"delta_Y"})


def _fig6(scenario, grid):
    stack, inputs, opa = scenario.stack_obj(), scenario.inputs_obj(), scenario.opa_obj()
    cols, data, flags = ["theta[deg]"], [np.degrees(grid)], []
    for l in (1, 2, 3):
        v = evaluate(inputs, opa, stack, scenario.beam_obj().with_oam(l), grid, scenario.trials)
        cols.append(f"delta_Y_l{l}[um]")
        data.append(v["delta_Y"] * UM)
        flags.append((cols[-1], v["stationary"]))
    t = Table(cols)
    for i, row in enumerate(zip(*data)):
        t.add(row, {name: "stationary reflectance (SPR angle)" for name, s in flags if s[i]})
    return t


def _fig7(scenario, grid):
    return _report_table(_reports(scenario, grid), {"delta_theta"})


def _fig9(scenario, grid):
    return _report_table(_reports(scenario, grid), {"delta_Y", "qcrb_Y", "snl_Y"})


def _fig11(scenario, grid):
    return _report_table(_reports(scenario, grid), {"delta_theta", "qcrb_theta", "snl_theta"})


def _amplitude_figure(key, column, scale, which_peak):
    def build(scenario, amp_max=None, amp_steps=AMP_STEPS):
        theta = peak_angles(scenario)[which_peak]
        if amp_max is None:
            amp_max = 2 * max(scenario.inputs.alpha, scenario.inputs.beta, 1.0)
        amps = np.linspace(amp_max / amp_steps, amp_max, amp_steps)
        stack, beam, opa = scenario.stack_obj(), scenario.beam_obj(), scenario.opa_obj()
        base = scenario.inputs_obj()
        t = Table(["theta[deg]", "alpha[1]", "beta[1]", column])
        for a in amps:
            for b in amps:
                v = evaluate(base.with_amplitudes(a, b), opa, stack, beam, theta, scenario.trials)
                t.add([math.degrees(theta), a, b, v[key][0] * scale])
        return t

    return build


THETA_FIGURES = {
    "fig1b": _fig1b,
    "fig2": _fig2,
    "fig4a": _fig4a,
    "fig4b": _fig4b,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig9": _fig9,
    "fig11": _fig11,
}

AMPLITUDE_FIGURES = {
    "fig5a": _amplitude_figure("delta_Y", "delta_Y[um]", UM, 0),
    "fig5b": _amplitude_figure("delta_Y", "delta_Y[um]", UM, 1),
    "fig8a": _amplitude_figure("delta_theta", "delta_theta[deg]", 1 / DEG, 0),
    "fig8b": _amplitude_figure("delta_theta", "delta_theta[deg]", 1 / DEG, 1),
    "fig10a": _amplitude_figure("qcrb_Y", "delta_Y_QCRB[um]", UM, 0),
    "fig10b": _amplitude_figure("qcrb_Y", "delta_Y_QCRB[um]", UM, 1),
}

FIGURE_IDS = (
    "fig1b", "fig2", "fig4a", "fig4b", "fig5a", "fig5b", "fig6",
    "fig7", "fig8a", "fig8b", "fig9", "fig10a", "fig10b", "fig11",
)  # fmt: skip


def figure_table(fig_id, scenario, theta_override=None, amp_max=None, amp_steps=None):
    if fig_id in THETA_FIGURES:
        grid = _theta_figure_grid(scenario, fig_id, theta_override)
        return THETA_FIGURES[fig_id](scenario, grid)
    if fig_id in AMPLITUDE_FIGURES:
        return AMPLITUDE_FIGURES[fig_id](scenario, amp_max, amp_steps or AMP_STEPS)
    raise UnknownFigureError(f"unknown figure {fig_id!r}; valid ids: {', '.join(FIGURE_IDS)}")
