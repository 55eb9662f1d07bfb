"""IF-shift and incident-angle metrology with an SPR sensor inside an SU(1,1) interferometer."""

from su11if.optics import LayerStack, kretschmann_reflection, reflectance, spr_angle
from su11if.ifshift import BeamSpec, find_if_peaks, if_shift
from su11if.interferometer import (
    CoherentInputs,
    OpaSettings,
    homodyne_mean,
    homodyne_variance,
    photon_numbers,
    w_coefficients,
)
from su11if.metrology import SensitivityReport, scan

__all__ = [
    "BeamSpec",
    "CoherentInputs",
    "LayerStack",
    "OpaSettings",
    "SensitivityReport",
    "find_if_peaks",
    "homodyne_mean",
    "homodyne_variance",
    "if_shift",
    "kretschmann_reflection",
    "photon_numbers",
    "reflectance",
    "scan",
    "spr_angle",
    "w_coefficients",
]
