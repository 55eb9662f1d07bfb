"""Acceptance suite: one test per primary criterion, each at its target tolerance.

Every test records a PASS/FAIL line, collected in the pytest terminal
summary under "acceptance criteria". Run on its own with

    python3 -m pytest tests/test_acceptance.py -v
"""

import time

import numpy as np
import pytest

from su11if import fock_oracle
from su11if.cli import main
from su11if.ifshift import find_if_peaks, if_shift, shift_slope
from su11if.interferometer import CoherentInputs, OpaSettings, homodyne_moments
from su11if.metrology import evaluate, qfi
from su11if.numdiff import richardson
from su11if.optics import reflectance, spr_angle
from su11if.scenario import BUILTIN
from su11if.tables import figure_table, peak_angles

DEFAULT = BUILTIN["paper-default"]
BRACKET = (np.radians(43.0), np.radians(44.5))
TARGET_PEAKS_DEG = (43.6208, 43.6407)


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def test_c01_spr_dip_location(criterion):
    theta, dt = _timed(spr_angle, DEFAULT.stack_obj(), BRACKET)
    deg = np.degrees(theta)
    ok = abs(deg - 43.63) <= 0.005 and dt < 1.0
    criterion(1, ok, f"argmin |r| = {deg:.5f} deg (target 43.63 +/- 0.005), {dt:.3f} s")
    assert ok


def test_c02_if_peak_angles(criterion):
    beam = DEFAULT.beam_obj()
    peaks, dt = _timed(find_if_peaks, beam, DEFAULT.stack_obj(), BRACKET)
    found = sorted(np.degrees([peaks.theta_neg_peak, peaks.theta_pos_peak]))
    errs = [abs(f - q) for f, q in zip(found, TARGET_PEAKS_DEG)]
    ok = max(errs) <= 0.002 and dt < 1.0
    criterion(
        2, ok,
        f"peaks {found[0]:.5f}, {found[1]:.5f} deg (targets 43.6208, 43.6407 +/- 0.002), {dt:.3f} s",
    )
    assert ok


def test_c03_max_if_shift_and_linearity(criterion):
    stack = DEFAULT.stack_obj()
    beam3 = DEFAULT.beam_obj().with_oam(3)
    peaks = find_if_peaks(beam3, stack, BRACKET)
    y_max_um = max(abs(peaks.Y_neg), abs(peaks.Y_pos)) * 1e6
    grid = DEFAULT.theta_grid()
    y1 = if_shift(DEFAULT.beam_obj(), stack, grid).Y
    lin = max(
        np.max(np.abs(if_shift(DEFAULT.beam_obj().with_oam(l), stack, grid).Y - l * y1) / np.abs(l * y1))
        for l in (2, 3)
    )
    ok = abs(y_max_um - 1092) <= 0.02 * 1092 and lin <= 1e-12
    criterion(
        3, ok,
        f"max|Y| l=3 = {y_max_um:.2f} um (target 1092 +/- 2%), l-linearity rel err {lin:.1e}",
    )
    assert ok


def test_c04_incident_angle_record(criterion):
    grid = DEFAULT.theta_grid()
    v, dt = _timed(
        evaluate, DEFAULT.inputs_obj(), DEFAULT.opa_obj(), DEFAULT.stack_obj(), DEFAULT.beam_obj(), grid
    )
    d_deg = np.degrees(v["delta_theta"])
    best, at = np.min(d_deg), np.degrees(grid[np.argmin(d_deg)])
    theta_deg = np.degrees(grid)
    near = [np.min(d_deg[np.abs(theta_deg - p) <= 0.002]) for p in np.degrees(peak_angles(DEFAULT))]
    ok = best < 6e-6 and max(near) < 6e-6 and dt < 5.0 and grid.size == 2000
    criterion(
        4, ok,
        f"min delta_theta = {best:.3e} deg at {at:.4f} deg, within 0.002 deg of the peaks "
        f"{near[0]:.3e}/{near[1]:.3e} deg (< 6e-6), {dt:.3f} s",
    )
    assert ok


def _figure_rows(fig):
    t = figure_table(fig, DEFAULT)
    return t, t.column("theta[deg]")


def test_c05_snl_beating_near_both_peaks(criterion):
    fig9, theta9 = _figure_rows("fig9")
    fig11, theta11 = _figure_rows("fig11")
    beat_y = fig9.column("delta_Y[um]") < fig9.column("delta_Y_SNL[um]")
    beat_t = fig11.column("delta_theta[deg]") < fig11.column("delta_theta_SNL[deg]")
    assert np.array_equal(theta9, theta11)
    details, ok = [], True
    for peak in np.degrees(peak_angles(DEFAULT)):
        # the neighborhood: every grid angle within 0.002 deg of the peak
        near = np.abs(theta9 - peak) <= 0.002
        good = bool(near.any() and np.all(beat_y[near] & beat_t[near]))
        ok &= good
        details.append(f"{peak:.4f} deg: {int(near.sum())} rows, {'beats' if good else 'misses'} SNL")
    criterion(5, ok, "; ".join(details))
    assert ok


def _scans():
    out = []
    for name in ("paper-default", "calibrated-46nm"):
        sc = BUILTIN[name]
        for l in (1, 2, 3):
            beam = sc.beam_obj().with_oam(l)
            for grid in (sc.theta_grid(), np.radians(np.linspace(43.0, 44.5, 2000))):
                out.append(evaluate(sc.inputs_obj(), sc.opa_obj(), sc.stack_obj(), beam, grid))
    return out


def test_c06_cramer_rao_ordering(criterion):
    rows = violations = 0
    for v in _scans():
        for d, q in (("delta_Y", "qcrb_Y"), ("delta_theta", "qcrb_theta")):
            finite = np.isfinite(v[d]) & np.isfinite(v[q])
            rows += int(finite.sum())
            violations += int(np.sum(v[d][finite] < v[q][finite]))
    ok = violations == 0 and rows > 0
    criterion(6, ok, f"{violations} violations over {rows} finite (delta, QCRB) pairs")
    assert ok


def test_c07_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    worst, worst_at, points = 0.0, None, 0
    levels = (0.0, 0.3, 0.8)
    for a in levels:
        for b in levels:
            inputs = CoherentInputs(a, 0.0, b, np.pi)
            for g in (0.0, 0.2, 0.5):
                opa = OpaSettings.balanced_pair(g)
                for eta in (0.1, 0.5, 0.9):
                    oracle = fock_oracle.run_pipeline(inputs, opa, eta)
                    closed = homodyne_moments(inputs, opa, eta)
                    for name in ("mean_x", "var_x", "n_after_opa1", "n_total"):
                        dev = abs(getattr(oracle, name) - getattr(closed, name))
                        if dev > worst:
                            worst, worst_at = dev, (name, a, b, g, eta)
                    points += 1
    dt = time.perf_counter() - t0
    ok = worst <= 1e-8 and dt < 120
    criterion(7, ok, f"{points} points, worst |dev| {worst:.1e} at {worst_at} (<= 1e-8), {dt:.1f} s")
    assert ok


def test_c08_qfi_validation(criterion):
    sc = BUILTIN["oracle-small"]
    stack, beam = sc.stack_obj(), sc.beam_obj()
    points = [
        (CoherentInputs(0.5, 0, 0.5, np.pi), 0.2, 43.50),
        (CoherentInputs(0.5, 0, 0.5, np.pi), 0.2, 43.70),
        (CoherentInputs(0.3, 0, 0.8, np.pi), 0.5, 43.58),
        (CoherentInputs(0.8, 0, 0.0, 0.0), 0.0, 43.66),
        (CoherentInputs(0.0, 0, 0.0, 0.0), 0.3, 43.55),
    ]
    worst_qfi = 0.0
    for inputs, g, deg in points:
        opa, theta = OpaSettings.balanced_pair(g), np.radians(deg)
        f_y, f_theta = qfi(inputs, opa, stack, beam, theta)
        num_t = fock_oracle.numerical_qfi(inputs, opa, stack, theta)
        num_y = fock_oracle.numerical_qfi(inputs, opa, stack, theta, which="Y", beam=beam)
        worst_qfi = max(worst_qfi, abs(num_t - f_theta) / f_theta, abs(num_y - f_y) / f_y)

    grid = DEFAULT.theta_grid()
    v = evaluate(DEFAULT.inputs_obj(), DEFAULT.opa_obj(), DEFAULT.stack_obj(), DEFAULT.beam_obj(), grid)
    slope = np.asarray(shift_slope(DEFAULT.beam_obj(), DEFAULT.stack_obj(), grid))
    ok_rows = ~v["stationary"] & (slope != 0) & np.isfinite(v["fisher_Y"])
    chain = np.max(np.abs(v["fisher_Y"][ok_rows] * slope[ok_rows] ** 2 - v["fisher_theta"][ok_rows])
                   / v["fisher_theta"][ok_rows])
    ok = worst_qfi <= 1e-4 and chain <= 1e-10
    criterion(
        8, ok,
        f"closed vs overlap QFI worst rel {worst_qfi:.1e} (<= 1e-4, 5 points); "
        f"chain rule worst rel {chain:.1e} over {int(ok_rows.sum())} rows (<= 1e-10)",
    )
    assert ok


def test_c09_derivatives(criterion):
    stack = DEFAULT.stack_obj()
    rng = np.random.default_rng(20240601)
    worst1 = worst2 = 0.0
    for theta in np.radians(rng.uniform(43.0, 44.5, 20)):
        r = reflectance(stack, theta)
        fd1, _ = richardson(lambda t: reflectance(stack, t).eta, theta, h=1e-7, levels=2)
        fd2, _ = richardson(lambda t: reflectance(stack, t).abs_r, theta, h=1e-5, order=2)
        worst1 = max(worst1, abs(r.deta_dtheta - fd1) / abs(fd1))
        worst2 = max(worst2, abs(r.d2abs_r_dtheta2 - fd2) / abs(fd2))
    ok = worst1 <= 1e-6 and worst2 <= 1e-4
    criterion(9, ok, f"d eta/d theta worst rel {worst1:.1e} (<= 1e-6); d2|r| worst rel {worst2:.1e} (<= 1e-4)")
    assert ok


def test_c10_amplitude_monotonicity(criterion):
    stack, beam, opa = DEFAULT.stack_obj(), DEFAULT.beam_obj(), DEFAULT.opa_obj()
    amps = np.linspace(1e4, 1e5, 10)
    angles = list(peak_angles(DEFAULT)) + list(np.radians(TARGET_PEAKS_DEG))
    bad = checked = 0
    for theta in angles:
        cube = {k: np.empty((10, 10)) for k in ("delta_Y", "delta_theta", "qcrb_Y")}
        for i, a in enumerate(amps):
            for j, b in enumerate(amps):
                v = evaluate(CoherentInputs(a, 0, b, np.pi), opa, stack, beam, theta)
                for k in cube:
                    cube[k][i, j] = v[k][0]
        for table in cube.values():
            steps = np.concatenate([np.diff(table, axis=0).ravel(), np.diff(table, axis=1).ravel()])
            bad += int(np.sum(steps > 0))
            checked += steps.size
    ok = bad == 0
    criterion(10, ok, f"{bad} increasing steps out of {checked} (10x10 grid, {len(angles)} angles)")
    assert ok


def test_c11_determinism(criterion, tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = (main(["figure", "fig2", "-o", str(a)]), main(["figure", "fig2", "-o", str(b)]))
    capsys.readouterr()
    ok = codes == (0, 0) and a.read_bytes() == b.read_bytes()
    criterion(11, ok, f"fig2 twice: exit codes {codes}, {a.stat().st_size} bytes, identical={ok}")
    assert ok


@pytest.mark.parametrize("name", ["calibrated-46nm"])
def test_supplementary_calibrated_film(name, capsys):
    """Target dip, peaks and maximum shift at the 46 nm film (not a criterion)."""
    sc = BUILTIN[name]
    stack = sc.stack_obj()
    dip = np.degrees(spr_angle(stack, BRACKET))
    p = find_if_peaks(sc.beam_obj().with_oam(3), stack, BRACKET)
    lo, hi = sorted(np.degrees([p.theta_neg_peak, p.theta_pos_peak]))
    y = max(abs(p.Y_neg), abs(p.Y_pos)) * 1e6
    print(f"{name}: dip {dip:.4f} deg, peaks {lo:.4f}/{hi:.4f} deg, max|Y| l=3 {y:.1f} um")
    assert abs(dip - 43.63) <= 0.005
    assert abs(lo - 43.6208) <= 0.002 and abs(hi - 43.6407) <= 0.002
    assert abs(y - 1092) <= 0.02 * 1092
