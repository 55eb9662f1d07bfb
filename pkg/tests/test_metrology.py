import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PEAK_BRACKET
from su11if.errors import EtaBoundaryError, NonPositiveInformationError
from su11if.ifshift import find_if_peaks, shift_slope
from su11if.interferometer import CoherentInputs, OpaSettings
from su11if.metrology import delta_theta, delta_Y, evaluate, qcrb, qfi, scan, snl
from su11if.optics import reflectance, spr_angle

off_dip = st.floats(np.radians(43.0), np.radians(44.5)).filter(
    lambda t: abs(np.degrees(t) - 43.6208) > 0.01
)


@pytest.fixture
def peaks(stack47, beam):
    p = find_if_peaks(beam, stack47, PEAK_BRACKET)
    return sorted((p.theta_neg_peak, p.theta_pos_peak))


def test_qcrb_examples():
    assert qcrb(4.0) == 0.5
    assert qcrb(4.0, trials=4) == pytest.approx(qcrb(4.0) / 2)
    with pytest.raises(NonPositiveInformationError):
        qcrb(0.0)
    with pytest.raises(NonPositiveInformationError):
        qcrb(np.nan)
    with pytest.raises(ValueError):
        qcrb(1.0, trials=0)


@settings(max_examples=50)
@given(off_dip)
def test_chain_rule_identities(theta):
    from su11if.optics import LayerStack
    from su11if.ifshift import BeamSpec

    stack = LayerStack(2.22, -20.327 + 1.862j, 47e-9, 780e-9)
    beam = BeamSpec.for_stack(stack, 1, 1e-3)
    inputs = CoherentInputs(5e4, 0, 5e4, np.pi)
    opa = OpaSettings.balanced_pair(0.7)
    slope = abs(shift_slope(beam, stack, theta))
    f_y, f_theta = qfi(inputs, opa, stack, beam, theta)
    assert f_y * slope**2 == pytest.approx(f_theta, rel=1e-10)
    assert delta_Y(inputs, opa, stack, beam, theta) == pytest.approx(
        delta_theta(inputs, opa, stack, theta) * slope, rel=1e-10
    )
    s_y, s_theta = snl(inputs, opa, stack, beam, theta)
    assert s_y == pytest.approx(s_theta * slope, rel=1e-10)
    assert qcrb(f_y) == pytest.approx(qcrb(f_theta) * slope, rel=1e-10)


def test_delta_theta_halves_when_amplitudes_double(stack47, default_opa):
    theta = np.radians(43.60)
    one = delta_theta(CoherentInputs(1e3, 0, 1e3, np.pi), default_opa, stack47, theta)
    two = delta_theta(CoherentInputs(2e3, 0, 2e3, np.pi), default_opa, stack47, theta)
    assert two == pytest.approx(one / 2, rel=1e-12)


def test_coherent_probe_reduction(stack47, beam):
    theta = np.radians(43.58)
    a = 7.0
    refl = reflectance(stack47, theta)
    _, f_theta = qfi(CoherentInputs(a, 0, 0, 0), OpaSettings.balanced_pair(0), stack47, beam, theta)
    expected = refl.deta_dtheta**2 * a**2 / (refl.eta * (1 - refl.eta))
    assert f_theta == pytest.approx(expected, rel=1e-14)


def test_snl_coherent_reduction(stack47, beam):
    theta = np.radians(43.58)
    a, b = 3.0, 4.0
    refl = reflectance(stack47, theta)
    _, s = snl(CoherentInputs(a, 0, b, 0), OpaSettings.balanced_pair(0), stack47, beam, theta)
    expected = 2 * np.sqrt(refl.eta * (1 - refl.eta)) / (abs(refl.deta_dtheta) * np.sqrt(a**2 + b**2))
    assert s == pytest.approx(expected, rel=1e-14)


def test_sentinels_at_spr_angle(stack47, beam, default_inputs, default_opa):
    dip = spr_angle(stack47)
    assert np.isinf(delta_theta(default_inputs, default_opa, stack47, dip))
    grid = np.array([dip - 1e-3, dip, dip + 1e-3])
    reports = scan(default_inputs, default_opa, stack47, beam, grid)
    assert [r.theta for r in reports] == list(grid)
    mid = reports[1]
    for key in ("delta_theta", "delta_Y", "snl_theta", "snl_Y", "qcrb_theta", "qcrb_Y"):
        assert np.isinf(getattr(mid, key)), key
        assert key in mid.reasons
    assert np.all(np.isfinite([reports[0].delta_theta, reports[2].delta_theta]))


def test_y_extremum_row(stack47, beam, default_inputs, default_opa, peaks):
    v = evaluate(default_inputs, default_opa, stack47, beam, peaks[0])
    slope = abs(shift_slope(beam, stack47, peaks[0]))
    # golden refinement leaves a slope ~1e-8 of the off-peak one
    assert slope < 1e-3 * abs(shift_slope(beam, stack47, np.radians(43.5)))
    assert v["delta_Y"][0] == pytest.approx(v["delta_theta"][0] * slope, rel=1e-12)


def test_exact_zero_slope_sentinel():
    from su11if.metrology import _fisher_Y, _scale

    assert _fisher_Y(np.array([2.0]), np.array([0.0]))[0] == np.inf
    assert _scale(np.array([3.0]), np.array([0.0]))[0] == 0.0
    assert _scale(np.array([np.inf]), np.array([0.0]))[0] == np.inf


def test_eta_boundary(default_inputs, default_opa, beam):
    from su11if.optics import LayerStack

    # total internal reflection without the metal film's loss: η → 1
    lossless = LayerStack(2.22, -20.327 + 0j, 47e-9, 780e-9)
    theta = np.radians(43.6)
    with pytest.raises(EtaBoundaryError):
        qfi(default_inputs, default_opa, lossless, beam, theta)
    v = evaluate(default_inputs, default_opa, lossless, beam, theta)
    assert v["eta_boundary"][0] and np.isnan(v["fisher_theta"][0])


def test_scan_plumbing(stack47, beam, default_inputs, default_opa):
    grid = np.radians([43.56, 43.60, 43.70])
    reports = scan(default_inputs, default_opa, stack47, beam, grid, trials=3)
    assert len(reports) == 3 and [r.theta for r in reports] == list(grid)
    assert all(r.trials == 3 for r in reports)
    single = scan(default_inputs, default_opa, stack47, beam, grid)
    for r3, r1 in zip(reports, single):
        assert r3.qcrb_theta == pytest.approx(r1.qcrb_theta / np.sqrt(3), rel=1e-14)
    for bad in ([], [0.8, 0.7], [0.0, 0.5], [[0.7, 0.8]]):
        with pytest.raises(ValueError):
            scan(default_inputs, default_opa, stack47, beam, bad)


def test_report_matches_scalar_functions(stack47, beam, default_inputs, default_opa):
    theta = np.radians(43.59)
    (r,) = scan(default_inputs, default_opa, stack47, beam, [theta])
    f_y, f_theta = qfi(default_inputs, default_opa, stack47, beam, theta)
    s_y, s_theta = snl(default_inputs, default_opa, stack47, beam, theta)
    assert r.delta_theta == pytest.approx(delta_theta(default_inputs, default_opa, stack47, theta), rel=1e-14)
    assert r.delta_Y == pytest.approx(delta_Y(default_inputs, default_opa, stack47, beam, theta), rel=1e-14)
    assert (r.fisher_Y, r.fisher_theta) == pytest.approx((f_y, f_theta), rel=1e-14)
    assert (r.snl_Y, r.snl_theta) == pytest.approx((s_y, s_theta), rel=1e-14)
    assert r.qcrb_theta == pytest.approx(qcrb(f_theta), rel=1e-14)
    assert r.qcrb_theta <= r.delta_theta and r.qcrb_Y <= r.delta_Y


def test_l_scaling(stack47, beam, default_inputs, default_opa):
    grid = np.radians(np.linspace(43.55, 43.72, 50))
    base = evaluate(default_inputs, default_opa, stack47, beam, grid)
    for l in (2, 3, -2):
        v = evaluate(default_inputs, default_opa, stack47, beam.with_oam(l), grid)
        assert np.allclose(v["delta_Y"], abs(l) * base["delta_Y"], rtol=1e-12, atol=0)
        assert np.allclose(v["qcrb_Y"], abs(l) * base["qcrb_Y"], rtol=1e-12, atol=0)
        assert np.array_equal(v["delta_theta"], base["delta_theta"])
        assert np.array_equal(v["fisher_theta"], base["fisher_theta"])


def test_zero_oam_rejected(stack47, beam, default_inputs, default_opa):
    with pytest.raises(ValueError):
        delta_Y(default_inputs, default_opa, stack47, beam.with_oam(0), 0.76)


def test_amplitude_monotonicity(stack47, beam, default_opa, peaks):
    amps = np.linspace(1e4, 1e5, 10)
    for theta in peaks:
        for key in ("delta_Y", "delta_theta", "qcrb_Y"):
            table = np.array([
                [evaluate(CoherentInputs(a, 0, b, np.pi), default_opa, stack47, beam, theta)[key][0]
                 for b in amps]
                for a in amps
            ])
            assert np.all(np.diff(table, axis=0) <= 0), key
            assert np.all(np.diff(table, axis=1) <= 0), key
