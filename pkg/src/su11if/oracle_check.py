"""Closed form vs. truncated-Fock oracle comparison report."""

import math
from dataclasses import asdict, dataclass

from su11if import fock_oracle, metrology
from su11if.interferometer import homodyne_moments
from su11if.optics import reflectance

MOMENT_TOL = 1e-8
QFI_RTOL = 1e-4
ETA_GRID = (0.1, 0.5, 0.9)


@dataclass(frozen=True)
class Comparison:
    quantity: str
    parameters: dict
    closed_form: float
    oracle: float
    deviation: float
    tolerance: float
    kind: str
    passed: bool


def _compare(quantity, params, closed, oracle, tol, kind):
    dev = abs(closed - oracle)
    if kind == "relative":
        dev /= abs(closed)
    return Comparison(quantity, params, float(closed), float(oracle), float(dev), tol, kind,
                      bool(dev <= tol))


def run_oracle_check(scenario):
    """Every closed-form moment and QFI the scenario exercises, against the oracle."""
    inputs, opa = scenario.inputs_obj(), scenario.opa_obj()
    stack, beam = scenario.stack_obj(), scenario.beam_obj()
    grid = scenario.theta_grid()
    angles = sorted({float(grid[0]), float(grid[len(grid) // 2]), float(grid[-1])})
    etas = list(ETA_GRID) + [float(reflectance(stack, t).eta) for t in angles]

    out = []
    for eta in etas:
        oracle = fock_oracle.run_pipeline(inputs, opa, eta)
        closed = homodyne_moments(inputs, opa, eta)
        params = {"eta": eta, "cutoff": oracle.cutoff}
        for name in ("mean_x", "var_x", "n_after_opa1", "n_total"):
            out.append(_compare(name, params, getattr(closed, name), getattr(oracle, name),
                                MOMENT_TOL, "absolute"))
    for theta in angles:
        f_y, f_theta = metrology.qfi(inputs, opa, stack, beam, theta)
        params = {"theta_deg": math.degrees(theta)}
        num_theta = fock_oracle.numerical_qfi(inputs, opa, stack, theta)
        num_y = fock_oracle.numerical_qfi(inputs, opa, stack, theta, which="Y", beam=beam)
        out.append(_compare("fisher_theta", params, f_theta, num_theta, QFI_RTOL, "relative"))
        out.append(_compare("fisher_Y", params, f_y, num_y, QFI_RTOL, "relative"))
    return out


def report_records(comparisons):
    return [asdict(c) for c in comparisons]


def all_passed(comparisons):
    return bool(comparisons) and all(c.passed for c in comparisons)
