"""Scenario files: the full parameter set for one run, in file-facing units.

Angles are degrees, film thickness and wavelength nanometers, beam waist
micrometers. Conversion to the library's radians and meters happens only
in the ``*_obj`` accessors.

Schema (all keys required unless noted; unknown keys are rejected)::

    {
      "name": str,
      "stack":  {"eps_prism": float, "eps_gold": {"re": float, "im": float},
                 "thickness_nm": float, "wavelength_nm": float},
      "beam":   {"l": int, "w0_um": float},
      "inputs": {"alpha": float, "theta_alpha_deg": float,
                 "beta": float, "theta_beta_deg": float},
      "opa":    {"g": float, "balanced": true},
      "scan":   {"theta_min_deg": float, "theta_max_deg": float, "steps": int},
      "trials": int                      # optional, default 1
    }
"""

import json
from dataclasses import MISSING, asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from su11if.errors import ScenarioError
from su11if.ifshift import BeamSpec
from su11if.interferometer import CoherentInputs, OpaSettings
from su11if.optics import LayerStack


@dataclass(frozen=True)
class StackParams:
    eps_prism: float
    eps_gold_re: float
    eps_gold_im: float
    thickness_nm: float
    wavelength_nm: float


@dataclass(frozen=True)
class BeamParams:
    l: int
    w0_um: float


@dataclass(frozen=True)
class InputParams:
    alpha: float
    theta_alpha_deg: float
    beta: float
    theta_beta_deg: float


@dataclass(frozen=True)
class OpaParams:
    g: float
    balanced: bool = True


@dataclass(frozen=True)
class ScanParams:
    theta_min_deg: float
    theta_max_deg: float
    steps: int


@dataclass(frozen=True)
class Scenario:
    name: str
    stack: StackParams
    beam: BeamParams
    inputs: InputParams
    opa: OpaParams
    scan: ScanParams
    trials: int = 1

    def __post_init__(self):
        _validate(self)

    def stack_obj(self):
        s = self.stack
        return LayerStack(
            s.eps_prism,
            complex(s.eps_gold_re, s.eps_gold_im),
            s.thickness_nm * 1e-9,
            s.wavelength_nm * 1e-9,
        )

    def beam_obj(self):
        return BeamSpec.for_stack(self.stack_obj(), self.beam.l, self.beam.w0_um * 1e-6)

    def inputs_obj(self):
        i = self.inputs
        return CoherentInputs(
            i.alpha, np.radians(i.theta_alpha_deg), i.beta, np.radians(i.theta_beta_deg)
        )

    def opa_obj(self):
        return OpaSettings.balanced_pair(self.opa.g)

    def theta_grid(self):
        """Scan grid in radians."""
        s = self.scan
        return np.radians(np.linspace(s.theta_min_deg, s.theta_max_deg, s.steps))

    def with_scan(self, theta_min_deg=None, theta_max_deg=None, steps=None):
        s = self.scan
        return replace(
            self,
            scan=ScanParams(
                s.theta_min_deg if theta_min_deg is None else theta_min_deg,
                s.theta_max_deg if theta_max_deg is None else theta_max_deg,
                s.steps if steps is None else steps,
            ),
        )

    def to_dict(self):
        d = asdict(self)
        st = d["stack"]
        d["stack"] = {
            "eps_prism": st["eps_prism"],
            "eps_gold": {"re": st["eps_gold_re"], "im": st["eps_gold_im"]},
            "thickness_nm": st["thickness_nm"],
            "wavelength_nm": st["wavelength_nm"],
        }
        return d


def _validate(sc):
    checks = [
        ("stack.eps_prism", sc.stack.eps_prism > 1, "must be > 1"),
        ("stack.eps_gold.im", sc.stack.eps_gold_im >= 0, "must be >= 0 (absorbing film)"),
        ("stack.thickness_nm (thickness_gold)", sc.stack.thickness_nm > 0, "must be > 0"),
        ("stack.wavelength_nm (wavelength)", sc.stack.wavelength_nm > 0, "must be > 0"),
        ("beam.w0_um (waist)", sc.beam.w0_um > 0, "must be > 0"),
        ("inputs.alpha", sc.inputs.alpha >= 0, "must be >= 0"),
        ("inputs.beta", sc.inputs.beta >= 0, "must be >= 0"),
        ("opa.g", sc.opa.g >= 0, "must be >= 0"),
        ("opa.balanced", sc.opa.balanced is True, "only the balanced interferometer is supported"),
        ("scan.steps", sc.scan.steps >= 1, "must be >= 1"),
        (
            "scan.theta_min_deg/theta_max_deg",
            0 < sc.scan.theta_min_deg < sc.scan.theta_max_deg < 90
            or (sc.scan.steps == 1 and 0 < sc.scan.theta_min_deg < 90),
            "need 0 < theta_min < theta_max < 90",
        ),
        ("trials", sc.trials >= 1, "must be a positive integer"),
    ]
    for name, ok, msg in checks:
        if not ok:
            raise ScenarioError(f"invalid scenario {sc.name!r}: {name} {msg}")


_SECTIONS = {
    "beam": BeamParams,
    "inputs": InputParams,
    "opa": OpaParams,
    "scan": ScanParams,
}
_INT_FIELDS = {("beam", "l"), ("scan", "steps")}


def _check_keys(obj, allowed, where, required=None):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {unknown}")
    missing = sorted(set(allowed if required is None else required) - set(obj))
    if missing:
        raise ScenarioError(f"{where}: missing keys {missing}")


def _number(value, where, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {value!r}")
    if integer:
        if int(value) != value:
            raise ScenarioError(f"{where}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def scenario_from_dict(d):
    top = ["name", "stack", "beam", "inputs", "opa", "scan", "trials"]
    _check_keys(d, top, "scenario", required=top[:-1])
    st = d["stack"]
    _check_keys(st, ["eps_prism", "eps_gold", "thickness_nm", "wavelength_nm"], "stack")
    _check_keys(st["eps_gold"], ["re", "im"], "stack.eps_gold")
    stack = StackParams(
        _number(st["eps_prism"], "stack.eps_prism"),
        _number(st["eps_gold"]["re"], "stack.eps_gold.re"),
        _number(st["eps_gold"]["im"], "stack.eps_gold.im"),
        _number(st["thickness_nm"], "stack.thickness_nm"),
        _number(st["wavelength_nm"], "stack.wavelength_nm"),
    )
    parts = {}
    for key, cls in _SECTIONS.items():
        names = [f.name for f in fields(cls)]
        required = [f.name for f in fields(cls) if f.default is MISSING]
        _check_keys(d[key], names, key, required=required)
        vals = {}
        for n in names:
            if n not in d[key]:
                continue
            v = d[key][n]
            if n == "balanced":
                if not isinstance(v, bool):
                    raise ScenarioError("opa.balanced: expected true/false")
                vals[n] = v
            else:
                vals[n] = _number(v, f"{key}.{n}", integer=(key, n) in _INT_FIELDS)
        parts[key] = cls(**vals)
    if not isinstance(d["name"], str):
        raise ScenarioError("name: expected a string")
    trials = _number(d.get("trials", 1), "trials", integer=True)
    return Scenario(d["name"], stack, trials=trials, **parts)


def dumps(scenario):
    return json.dumps(scenario.to_dict(), indent=2, sort_keys=True) + "\n"


_GOLD_STACK = StackParams(2.22, -20.327, 1.862, 47.0, 780.0)

BUILTIN = {
    "paper-default": Scenario(
        "paper-default",
        _GOLD_STACK,
        BeamParams(1, 1000.0),
        InputParams(50000.0, 0.0, 50000.0, 180.0),
        OpaParams(0.7),
        ScanParams(43.55, 43.72, 2000),
    ),
    # 46 nm film: dip 43.631°, IF peaks 43.6209°/43.6407°, max |Y| (l=3) 1092 μm
    "calibrated-46nm": Scenario(
        "calibrated-46nm",
        replace(_GOLD_STACK, thickness_nm=46.0),
        BeamParams(1, 1000.0),
        InputParams(50000.0, 0.0, 50000.0, 180.0),
        OpaParams(0.7),
        ScanParams(43.55, 43.72, 2000),
    ),
    "oracle-small": Scenario(
        "oracle-small",
        _GOLD_STACK,
        BeamParams(1, 1000.0),
        InputParams(0.5, 0.0, 0.5, 180.0),
        OpaParams(0.2),
        ScanParams(43.5, 43.7, 3),
    ),
}


def load_scenario(source):
    """Built-in scenario by name, or a JSON scenario file path."""
    if isinstance(source, str) and source in BUILTIN:
        return BUILTIN[source]
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {source!r}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data)
