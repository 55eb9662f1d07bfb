"""Homodyne sensitivities, quantum Fisher information, QCRB and shot-noise limit.

All Y-quantities are the θ-quantities pushed through the scalar
reparameterization Y(θ): a standard deviation picks up a factor |dY/dθ|
and a Fisher information a factor 1/(dY/dθ)². Computing ΔY as
Δθ·|dY/dθ| (rather than dividing by ∂Y/∂η) keeps the Y-extremum angles
finite: ΔY is exactly 0 there.

Non-finite values are sentinels, not failures:

* ``inf`` for Δθ, ΔY, the SNLs and QCRBs where dη/dθ = 0 (SPR angle);
* ``inf`` for F_Y and 0 for ΔY, ΔY_SNL, ΔY_QCRB where dY/dθ = 0;
* ``nan`` for the Fisher-based quantities when η(1-η) vanishes.

``scan`` records the reason for each sentinel in ``SensitivityReport.reasons``.
"""

from dataclasses import dataclass, field

import numpy as np

from su11if.errors import EtaBoundaryError, NonPositiveInformationError
from su11if.ifshift import if_shift, shift_slope
from su11if.interferometer import homodyne_mean_deta, homodyne_variance, photon_numbers
from su11if.optics import reflectance

# |d ln η / dθ| (per radian) below which η counts as stationary
STATIONARY_TOL = 1e-6
ETA_EPS = 1e-12

REASON_STATIONARY = "stationary reflectance (d eta/d theta = 0, SPR angle)"
REASON_Y_EXTREMUM = "IF-shift extremum (dY/d theta = 0)"
REASON_ETA_BOUNDARY = "eta(1 - eta) below tolerance"


@dataclass(frozen=True)
class SensitivityReport:
    theta: float
    eta: float
    Y: float
    delta_Y: float
    delta_theta: float
    snl_Y: float
    snl_theta: float
    qcrb_Y: float
    qcrb_theta: float
    fisher_Y: float
    fisher_theta: float
    trials: int = 1
    reasons: dict = field(default_factory=dict)


def _angle_terms(stack, theta):
    refl = reflectance(stack, theta)
    eta, deta = np.asarray(refl.eta, float), np.asarray(refl.deta_dtheta, float)
    stationary = np.abs(deta) <= STATIONARY_TOL * eta
    return eta, deta, stationary


def _delta_theta(inputs, opa, eta, deta, stationary):
    noise = np.sqrt(homodyne_variance(opa, eta))
    signal = np.abs(homodyne_mean_deta(inputs, opa, eta) * deta)
    with np.errstate(divide="ignore"):
        out = noise / signal
    return np.where(stationary, np.inf, out)


def delta_theta(inputs, opa, stack, theta):
    """Homodyne incident-angle sensitivity (radians); inf at the SPR angle."""
    eta, deta, stationary = _angle_terms(stack, theta)
    return _squeeze(_delta_theta(inputs, opa, eta, deta, stationary))


def delta_Y(inputs, opa, stack, beam, theta):
    """Homodyne IF-shift sensitivity (meters); inf at the SPR angle, 0 at Y extrema."""
    if beam.oam_index == 0:
        raise ValueError("IF-shift sensitivity needs a nonzero OAM index")
    dtheta = np.asarray(delta_theta(inputs, opa, stack, theta))
    slope = np.abs(np.asarray(shift_slope(beam, stack, theta)))
    return _squeeze(_scale(dtheta, slope))


def _scale(value, slope):
    # inf·0 at a point that is both stationary and a Y extremum stays inf
    with np.errstate(invalid="ignore"):
        out = value * slope
    return np.where(np.isinf(value), np.inf, out)


def _fisher_theta(inputs, opa, eta, deta):
    n_a, _ = photon_numbers(inputs, opa)
    return deta**2 / (eta * (1 - eta)) * n_a


def _fisher_Y(f_theta, slope):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = f_theta / slope**2
    return np.where(slope == 0, np.inf, out)


def qfi(inputs, opa, stack, beam, theta):
    """Closed-form (F_Y, F_θ) of the state before OPA2."""
    eta, deta, _ = _angle_terms(stack, theta)
    if np.any(eta * (1 - eta) < ETA_EPS):
        raise EtaBoundaryError("QFI undefined: eta(1 - eta) vanishes")
    f_theta = _fisher_theta(inputs, opa, eta, deta)
    f_y = _fisher_Y(f_theta, np.asarray(shift_slope(beam, stack, theta)))
    return _squeeze(f_y), _squeeze(f_theta)


def qcrb(fisher, trials=1):
    """Quantum Cramér-Rao bound 1/√(v F)."""
    fisher = np.asarray(fisher, dtype=float)
    if trials < 1 or int(trials) != trials:
        raise ValueError("trials must be a positive integer")
    if np.any(~(fisher > 0)):
        raise NonPositiveInformationError("Fisher information must be positive")
    with np.errstate(divide="ignore"):
        return _squeeze(1.0 / np.sqrt(trials * fisher))


def _snl_theta(inputs, opa, eta, deta, stationary):
    _, n_tot = photon_numbers(inputs, opa)
    with np.errstate(divide="ignore"):
        out = 2 * np.sqrt(eta * (1 - eta)) / (np.abs(deta) * np.sqrt(n_tot))
    return np.where(stationary, np.inf, out)


def snl(inputs, opa, stack, beam, theta):
    """Shot-noise limits (ΔY_SNL, Δθ_SNL) at the interferometer's total photon number."""
    eta, deta, stationary = _angle_terms(stack, theta)
    if np.any(eta * (1 - eta) < ETA_EPS):
        raise EtaBoundaryError("SNL undefined: eta(1 - eta) vanishes")
    s_theta = _snl_theta(inputs, opa, eta, deta, stationary)
    s_y = _scale(s_theta, np.abs(np.asarray(shift_slope(beam, stack, theta))))
    return _squeeze(s_y), _squeeze(s_theta)


def _squeeze(x):
    x = np.asarray(x)
    return x[()] if x.ndim == 0 else x


def evaluate(inputs, opa, stack, beam, theta, trials=1):
    """Vectorized evaluation of every report quantity; returns a dict of arrays."""
    opa.require_balanced()
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    eta, deta, stationary = _angle_terms(stack, theta)
    y = np.asarray(if_shift(beam, stack, theta).Y)
    slope = np.abs(np.asarray(shift_slope(beam, stack, theta)))
    boundary = eta * (1 - eta) < ETA_EPS

    d_theta = _delta_theta(inputs, opa, eta, deta, stationary)
    with np.errstate(divide="ignore", invalid="ignore"):
        f_theta = np.where(boundary, np.nan, _fisher_theta(inputs, opa, eta, deta))
        s_theta = np.where(boundary, np.nan, _snl_theta(inputs, opa, eta, deta, stationary))
        q_theta = np.where(f_theta > 0, 1.0 / np.sqrt(trials * f_theta), np.inf)
    q_theta = np.where(stationary, np.inf, q_theta)
    q_theta = np.where(np.isnan(f_theta), np.nan, q_theta)
    f_y = _fisher_Y(f_theta, slope)
    f_y = np.where(np.isnan(f_theta), np.nan, f_y)

    return {
        "theta": theta,
        "eta": eta,
        "Y": y,
        "delta_Y": _scale(d_theta, slope),
        "delta_theta": d_theta,
        "snl_Y": _scale(s_theta, slope),
        "snl_theta": s_theta,
        "qcrb_Y": _scale(q_theta, slope),
        "qcrb_theta": q_theta,
        "fisher_Y": f_y,
        "fisher_theta": f_theta,
        "stationary": stationary,
        "y_extremum": slope == 0,
        "eta_boundary": boundary,
    }


def _reasons(values, i):
    reasons = {}
    if values["stationary"][i]:
        for key in ("delta_Y", "delta_theta", "snl_Y", "snl_theta", "qcrb_Y", "qcrb_theta"):
            reasons[key] = REASON_STATIONARY
    if values["y_extremum"][i]:
        reasons["fisher_Y"] = REASON_Y_EXTREMUM
    if values["eta_boundary"][i]:
        for key in ("snl_Y", "snl_theta", "qcrb_Y", "qcrb_theta", "fisher_Y", "fisher_theta"):
            reasons[key] = REASON_ETA_BOUNDARY
    return reasons


def scan(inputs, opa, stack, beam, theta_grid, trials=1):
    """One SensitivityReport per grid angle, in grid order; sentinels kept."""
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("theta_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("theta_grid must be strictly increasing")
    if grid[0] <= 0 or grid[-1] >= np.pi / 2:
        raise ValueError("theta_grid must lie inside (0, pi/2)")
    if trials < 1 or int(trials) != trials:
        raise ValueError("trials must be a positive integer")
    values = evaluate(inputs, opa, stack, beam, grid, trials)
    keys = [k for k in SensitivityReport.__dataclass_fields__ if k not in ("trials", "reasons")]
    return [
        SensitivityReport(
            **{k: float(values[k][i]) for k in keys},
            trials=int(trials),
            reasons=_reasons(values, i),
        )
        for i in range(grid.size)
    ]
