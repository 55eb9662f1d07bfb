"""Imbert-Fedorov shift of a reflected OAM beam in the large-waist limit.

    Y(θ) = -l · (d|r|/dθ) / (k0 |r|)

and its slope dY/dθ, which the sensitivity formulas need.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from su11if.errors import NearZeroReflectivityError, NoPeakError
from su11if.optics import REFLECTIVITY_EPS, reflectance

# below this w0·k0 the large-waist closed form is not trusted
LARGE_WAIST_MIN = 1e3
PEAK_PRESCAN = 2000
PEAK_TOL_DEG = 1e-6


@dataclass(frozen=True)
class BeamSpec:
    oam_index: int
    waist: float
    k0: float

    def __post_init__(self):
        if int(self.oam_index) != self.oam_index:
            raise ValueError("oam_index must be an integer")
        object.__setattr__(self, "oam_index", int(self.oam_index))
        if not self.waist > 0:
            raise ValueError(f"waist must be > 0, got {self.waist}")
        if not self.k0 > 0:
            raise ValueError(f"k0 must be > 0, got {self.k0}")

    @classmethod
    def for_stack(cls, stack, oam_index, waist):
        return cls(oam_index, waist, stack.k0)

    def with_oam(self, oam_index):
        return BeamSpec(oam_index, self.waist, self.k0)

    @property
    def large_waist_valid(self):
        return self.waist * self.k0 >= LARGE_WAIST_MIN


@dataclass(frozen=True)
class ShiftSample:
    theta: float
    Y: float
    Y_over_lambda: float
    large_waist_valid: bool = True


@dataclass(frozen=True)
class IFPeaks:
    theta_neg_peak: float
    theta_pos_peak: float
    Y_neg: float
    Y_pos: float


def _check_beam(beam, stack):
    if not np.isclose(beam.k0, stack.k0, rtol=1e-12, atol=0):
        raise ValueError(f"beam k0={beam.k0} inconsistent with stack wavelength (k0={stack.k0})")


def _log_slope(stack, theta):
    """(d|r|/dθ)/|r| and its θ-derivative."""
    refl = reflectance(stack, theta)
    if np.any(np.asarray(refl.abs_r) < REFLECTIVITY_EPS):
        raise NearZeroReflectivityError("IF shift undefined: |r_pgv| is numerically zero")
    q = refl.dabs_r_dtheta / refl.abs_r
    dq = refl.d2abs_r_dtheta2 / refl.abs_r - q**2
    return q, dq


def if_shift(beam, stack, theta):
    _check_beam(beam, stack)
    q, _ = _log_slope(stack, theta)
    y = -beam.oam_index * (q / beam.k0)
    return ShiftSample(theta, y, y * beam.k0 / (2 * np.pi), beam.large_waist_valid)


def shift_slope(beam, stack, theta):
    """dY/dθ in meters per radian."""
    _check_beam(beam, stack)
    _, dq = _log_slope(stack, theta)
    return -beam.oam_index * (dq / beam.k0)


def find_if_peaks(beam, stack, bracket):
    """Locate the maximum and minimum of Y(θ) inside `bracket` (radians).

    A dense pre-scan brackets each extremum via sign changes of dY/dθ, then a
    golden-section search refines it.
    """
    lo, hi = bracket
    if not (0 < lo < hi < np.pi / 2):
        raise ValueError("bracket must satisfy 0 < lo < hi < pi/2")
    if hi - lo >= np.radians(5.0):
        raise ValueError("bracket must be narrower than 5 degrees")
    grid = np.linspace(lo, hi, PEAK_PRESCAN)
    y = if_shift(beam, stack, grid).Y
    slope = shift_slope(beam, stack, grid)
    crossings = np.nonzero(np.sign(slope[:-1]) * np.sign(slope[1:]) < 0)[0]
    maxima = [i for i in crossings if slope[i] > 0]
    minima = [i for i in crossings if slope[i] < 0]
    if not maxima or not minima:
        raise NoPeakError("no sign change of dY/dtheta for both a maximum and a minimum in bracket")

    i_max = max(maxima, key=lambda i: max(y[i], y[i + 1]))
    i_min = min(minima, key=lambda i: min(y[i], y[i + 1]))
    tol = np.radians(PEAK_TOL_DEG)

    def refine(i, sign):
        def f(t):
            return -sign * float(if_shift(beam, stack, t).Y)

        j = i if f(grid[i]) < f(grid[i + 1]) else i + 1
        j = min(max(j, 1), PEAK_PRESCAN - 2)
        t = optimize.golden(f, brack=(grid[j - 1], grid[j], grid[j + 1]), tol=tol / (2 * grid[j]))
        return float(t), float(if_shift(beam, stack, t).Y)

    t_pos, y_pos = refine(i_max, +1)
    t_neg, y_neg = refine(i_min, -1)
    return IFPeaks(t_neg, t_pos, y_neg, y_pos)
