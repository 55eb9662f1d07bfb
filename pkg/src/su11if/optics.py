"""TM reflection of a prism / gold film / vacuum Kretschmann stack.

Angles are radians and lengths meters throughout. Every reflection quantity
is returned together with its first and second angular derivatives, which
are obtained by exact chain-rule propagation (see ``_Jet``), not by finite
differences.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from su11if.errors import DegenerateDenominatorError

# relative tolerance on |numerator + denominator| cancellation in the TM formulas
DENOMINATOR_EPS = 1e-12
# |r| below this is treated as zero reflectivity
REFLECTIVITY_EPS = 1e-12


@dataclass(frozen=True)
class LayerStack:
    eps_prism: float
    eps_gold: complex
    thickness_gold: float
    wavelength: float
    eps_vacuum: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "eps_gold", complex(self.eps_gold))
        if not self.eps_prism > 1:
            raise ValueError(f"eps_prism must be > 1, got {self.eps_prism}")
        if self.eps_vacuum != 1.0:
            raise ValueError("eps_vacuum is fixed at 1.0")
        if not self.thickness_gold > 0:
            raise ValueError(f"thickness_gold must be > 0, got {self.thickness_gold}")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.eps_gold.imag < 0:
            raise ValueError("eps_gold must have Im >= 0 (absorbing film)")

    @property
    def k0(self):
        return 2 * np.pi / self.wavelength

    def scaled(self, factor):
        """Same stack with every length multiplied by `factor`."""
        return LayerStack(
            self.eps_prism, self.eps_gold, self.thickness_gold * factor, self.wavelength * factor
        )


@dataclass(frozen=True)
class ComplexReflection:
    r: complex
    dr_dtheta: complex
    d2r_dtheta2: complex


@dataclass(frozen=True)
class Reflectance:
    """η = |r|² and |r| with their angular derivatives.

    ``dabs_r_dtheta`` and ``d2abs_r_dtheta2`` are NaN wherever |r| is below
    ``REFLECTIVITY_EPS``.
    """

    eta: float
    deta_dtheta: float
    abs_r: float
    dabs_r_dtheta: float
    d2abs_r_dtheta2: float


class _Jet:
    """Truncated Taylor jet (value, first, second derivative) in one variable."""

    __slots__ = ("v", "d1", "d2")

    def __init__(self, v, d1, d2):
        self.v, self.d1, self.d2 = v, d1, d2

    @staticmethod
    def lift(x):
        return x if isinstance(x, _Jet) else _Jet(x, 0.0, 0.0)

    def __add__(self, other):
        o = _Jet.lift(other)
        return _Jet(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = _Jet.lift(other)
        return _Jet(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)

    def __rsub__(self, other):
        return _Jet.lift(other) - self

    def __mul__(self, other):
        o = _Jet.lift(other)
        return _Jet(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2 * self.d1 * o.d1 + self.v * o.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _Jet.lift(other)
        q = self.v / o.v
        q1 = (self.d1 - q * o.d1) / o.v
        q2 = (self.d2 - 2 * q1 * o.d1 - q * o.d2) / o.v
        return _Jet(q, q1, q2)

    def exp(self):
        e = np.exp(self.v)
        return _Jet(e, self.d1 * e, (self.d2 + self.d1**2) * e)


def _sin2_jet(theta):
    return _Jet(np.sin(theta) ** 2, np.sin(2 * theta), 2 * np.cos(2 * theta))


def _kz_value(eps_layer, theta, stack):
    arg = eps_layer - stack.eps_prism * np.sin(theta) ** 2 + 0j
    k = stack.k0 * np.sqrt(arg)
    return np.where(np.imag(k) < 0, -k, k)


def normal_wavevector(eps_layer, theta, stack):
    """Normal wave-vector component in a layer, on the decaying branch (Im >= 0)."""
    k = _kz_value(eps_layer, theta, stack)
    return k[()] if np.ndim(k) == 0 else k


def _kz_jet(eps_layer, theta, stack):
    # k² = k0²(ε − ε_p sin²θ)  ⇒  2 k k' = −k0² ε_p (sin²θ)'
    s = _sin2_jet(theta)
    k = _kz_value(eps_layer, theta, stack)
    c = stack.k0**2 * stack.eps_prism
    k1 = -c * s.d1 / (2 * k)
    k2 = (-c * s.d2 - 2 * k1**2) / (2 * k)
    return _Jet(k, k1, k2)


def _check_denominator(den, scale, what):
    bad = np.abs(den) < DENOMINATOR_EPS * scale
    if np.any(bad):
        raise DegenerateDenominatorError(f"{what}: vanishing denominator")


def fresnel_tm(eps_n, eps_m, k_nz, k_mz):
    """TM reflection coefficient from layer n into layer m."""
    a = k_nz * eps_m
    b = k_mz * eps_n
    _check_denominator(a + b, np.abs(a) + np.abs(b), "fresnel_tm")
    return (a - b) / (a + b)


def _fresnel_jet(eps_n, eps_m, kn, km):
    a = kn * eps_m
    b = km * eps_n
    den = a + b
    _check_denominator(den.v, np.abs(a.v) + np.abs(b.v), "fresnel_tm")
    return (a - b) / den


def _reflection_jet(stack, theta):
    theta = np.asarray(theta, dtype=float)
    ep, eg, ev = stack.eps_prism, stack.eps_gold, stack.eps_vacuum
    kp = _kz_jet(ep, theta, stack)
    kg = _kz_jet(eg, theta, stack)
    kv = _kz_jet(ev, theta, stack)
    r_pg = _fresnel_jet(ep, eg, kp, kg)
    r_gv = _fresnel_jet(eg, ev, kg, kv)
    phase = (kg * (2j * stack.thickness_gold)).exp()
    num = r_pg + r_gv * phase
    den = 1.0 + r_pg * r_gv * phase
    _check_denominator(den.v, 1.0, "kretschmann_reflection")
    return num / den


def _squeeze(x):
    return x[()] if np.ndim(x) == 0 else x


def kretschmann_reflection(stack, theta):
    """Complex TM reflection r_pgv of the three-layer stack and its θ-derivatives."""
    jet = _reflection_jet(stack, theta)
    return ComplexReflection(_squeeze(jet.v), _squeeze(jet.d1), _squeeze(jet.d2))


def reflectance(stack, theta):
    jet = _reflection_jet(stack, theta)
    r, r1, r2 = jet.v, jet.d1, jet.d2
    abs_r = np.abs(r)
    re1 = np.real(np.conj(r) * r1)
    eta = abs_r**2
    deta = 2 * re1
    ok = abs_r >= REFLECTIVITY_EPS
    safe = np.where(ok, abs_r, 1.0)
    dabs = np.where(ok, re1 / safe, np.nan)
    # |r|'' = (|r'|² + Re(r* r''))/|r| − (Re(r* r'))²/|r|³
    d2abs = np.where(
        ok,
        (np.abs(r1) ** 2 + np.real(np.conj(r) * r2)) / safe - re1**2 / safe**3,
        np.nan,
    )
    return Reflectance(*(_squeeze(np.asarray(q)) for q in (eta, deta, abs_r, dabs, d2abs)))


def spr_angle(stack, bracket=(np.radians(43.0), np.radians(44.5)), prescan=2000):
    """Angle of minimum reflectivity inside `bracket` (radians)."""
    lo, hi = bracket
    grid = np.linspace(lo, hi, prescan)
    eta = reflectance(stack, grid).eta
    i = int(np.argmin(eta))
    if i in (0, prescan - 1):
        return float(grid[i])

    def f(t):
        return float(reflectance(stack, t).eta)

    t = optimize.golden(f, brack=(grid[i - 1], grid[i], grid[i + 1]), tol=1e-12)
    # golden section stalls near sqrt(machine eps) on a flat minimum; polish on dη/dθ = 0
    def slope(t):
        return float(reflectance(stack, t).deta_dtheta)

    a, b = grid[i - 1], grid[i + 1]
    if slope(a) < 0 < slope(b):
        t = optimize.brentq(slope, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(t)
