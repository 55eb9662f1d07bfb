"""SU(1,1) interferometer algebra with a lossy sensing arm.

Mode a passes OPA1, then a fictitious beam splitter of transmissivity η
(coupling in a vacuum mode v), then OPA2. In the Heisenberg picture the
output annihilation operators are

    a2 = W1 a0 - W2 b0† + W3 av
    b2 = W4 b0 - W5 a0† + W6 av†

Quadrature convention: X = (a + a†)/√2, so vacuum variance is 1/2.
"""

from dataclasses import dataclass

import numpy as np

from su11if.errors import BalancedRequiredError

_TWO_PI = 2 * np.pi


def _wrap(phase):
    return float(np.mod(phase, _TWO_PI))


@dataclass(frozen=True)
class CoherentInputs:
    alpha_mag: float
    alpha_phase: float
    beta_mag: float
    beta_phase: float

    def __post_init__(self):
        if self.alpha_mag < 0 or self.beta_mag < 0:
            raise ValueError("coherent amplitudes must be non-negative")
        object.__setattr__(self, "alpha_phase", _wrap(self.alpha_phase))
        object.__setattr__(self, "beta_phase", _wrap(self.beta_phase))

    @property
    def alpha(self):
        return self.alpha_mag * np.exp(1j * self.alpha_phase)

    @property
    def beta(self):
        return self.beta_mag * np.exp(1j * self.beta_phase)

    def with_amplitudes(self, alpha_mag, beta_mag):
        return CoherentInputs(alpha_mag, self.alpha_phase, beta_mag, self.beta_phase)


@dataclass(frozen=True)
class OpaSettings:
    g1: float
    theta1: float
    g2: float
    theta2: float

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise ValueError("OPA gains must be non-negative")

    @classmethod
    def balanced_pair(cls, g):
        """OPA2 undoes OPA1: equal gains, θ1 = 0, θ2 = π."""
        return cls(g, 0.0, g, np.pi)

    @property
    def balanced(self):
        return (
            self.g1 == self.g2
            and np.isclose(np.mod(self.theta1, _TWO_PI), 0.0, atol=1e-12)
            and np.isclose(np.cos(self.theta2 - self.theta1), -1.0, rtol=0, atol=1e-12)
        )

    @property
    def g(self):
        self.require_balanced()
        return self.g1

    def require_balanced(self):
        if not self.balanced:
            raise BalancedRequiredError(
                "closed form requires a balanced interferometer (g1 = g2, theta1 = 0, theta2 = pi)"
            )


@dataclass(frozen=True)
class WCoefficients:
    w1: complex
    w2: complex
    w3: complex
    w4: complex
    w5: complex
    w6: complex

    @property
    def commutator_a(self):
        """[a2, a2†] = |W1|² - |W2|² + |W3|²."""
        return abs(self.w1) ** 2 - abs(self.w2) ** 2 + abs(self.w3) ** 2

    @property
    def commutator_b(self):
        """[b2, b2†] = |W4|² - |W5|² - |W6|² (W6 multiplies a creation operator)."""
        return abs(self.w4) ** 2 - abs(self.w5) ** 2 - abs(self.w6) ** 2


@dataclass(frozen=True)
class HomodyneMoments:
    mean_x: float
    var_x: float
    n_after_opa1: float
    n_total: float


def _check_eta(eta):
    if np.any(np.asarray(eta) < 0) or np.any(np.asarray(eta) > 1):
        raise ValueError("transmissivity eta must lie in [0, 1]")


def w_coefficients(opa, eta):
    _check_eta(eta)
    ch1, sh1 = np.cosh(opa.g1), np.sinh(opa.g1)
    ch2, sh2 = np.cosh(opa.g2), np.sinh(opa.g2)
    e1 = np.exp(1j * opa.theta1)
    e2 = np.exp(1j * opa.theta2)
    e21 = np.exp(1j * (opa.theta2 - opa.theta1))
    t = np.sqrt(eta)
    loss = np.sqrt(1 - eta)
    return WCoefficients(
        w1=t * ch1 * ch2 + e21 * sh1 * sh2,
        w2=t * e1 * sh1 * ch2 + e2 * ch1 * sh2,
        w3=loss * ch2 + 0j,
        w4=ch1 * ch2 + t * e21 * sh1 * sh2,
        w5=e1 * sh1 * ch2 + t * e2 * ch1 * sh2,
        w6=-loss * e2 * sh2,
    )


def quadrature_moments(inputs, w):
    """⟨X⟩ and Δ²X of output mode a for coherent inputs, any W coefficients."""
    mean = np.sqrt(2) * np.real(w.w1 * inputs.alpha - w.w2 * np.conj(inputs.beta))
    var = 0.5 * (np.abs(w.w1) ** 2 + np.abs(w.w2) ** 2 + np.abs(w.w3) ** 2)
    return mean, var


def _balanced_terms(g, eta):
    ch, sh = np.cosh(g), np.sinh(g)
    t = np.sqrt(eta)
    return ch, sh, t * ch**2 - sh**2, (t - 1) * sh * ch


def homodyne_mean(inputs, opa, eta):
    opa.require_balanced()
    _check_eta(eta)
    _, _, direct, conjugate = _balanced_terms(opa.g1, eta)
    return np.sqrt(2) * (
        inputs.alpha_mag * direct * np.cos(inputs.alpha_phase)
        - inputs.beta_mag * conjugate * np.cos(inputs.beta_phase)
    )


def homodyne_mean_deta(inputs, opa, eta):
    """∂⟨X⟩/∂η for the balanced interferometer (infinite at η = 0)."""
    opa.require_balanced()
    ch, sh = np.cosh(opa.g1), np.sinh(opa.g1)
    with np.errstate(divide="ignore"):
        return (
            np.sqrt(2)
            * (
                inputs.alpha_mag * ch**2 * np.cos(inputs.alpha_phase)
                - inputs.beta_mag * sh * ch * np.cos(inputs.beta_phase)
            )
            / (2 * np.sqrt(eta))
        )


def homodyne_variance(opa, eta):
    opa.require_balanced()
    _check_eta(eta)
    ch, _, direct, conjugate = _balanced_terms(opa.g1, eta)
    return 0.5 * (direct**2 + conjugate**2 + (1 - eta) * ch**2)


def photon_numbers(inputs, opa):
    """Mean photons in the sensing arm and in both arms after OPA1.

    General-phase form; at θ1 = 0 and θ_α + θ_β = π it reduces to
    (|α| cosh g + |β| sinh g)² + sinh² g and
    (|α|² + |β|²) cosh 2g + 2|α||β| sinh 2g + 2 sinh² g.
    """
    ch, sh = np.cosh(opa.g1), np.sinh(opa.g1)
    a, b = inputs.alpha_mag, inputs.beta_mag
    cross = np.real(np.exp(1j * opa.theta1) * np.conj(inputs.alpha) * np.conj(inputs.beta))
    n_a = ch**2 * a**2 + sh**2 * (b**2 + 1) - 2 * ch * sh * cross
    n_b = ch**2 * b**2 + sh**2 * (a**2 + 1) - 2 * ch * sh * cross
    return n_a, n_a + n_b


def homodyne_moments(inputs, opa, eta):
    """All moments; closed forms when balanced, W-coefficient path otherwise."""
    if opa.balanced:
        mean, var = homodyne_mean(inputs, opa, eta), homodyne_variance(opa, eta)
    else:
        mean, var = quadrature_moments(inputs, w_coefficients(opa, eta))
    n_a, n_tot = photon_numbers(inputs, opa)
    return HomodyneMoments(mean, var, n_a, n_tot)
