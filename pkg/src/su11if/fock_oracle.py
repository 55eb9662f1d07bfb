"""Brute-force truncated Fock-space simulation of the interferometer.

This is the independent check on every closed form in ``interferometer``
and ``metrology``. State vectors are dense arrays of shape
``(cutoff + 1,) * 3`` over modes (a, b, v); gates are matrix exponentials
of sparse truncated two-mode generators, applied with scipy's
``expm_multiply`` (scaled truncated Taylor series) to the relevant pair of
axes.

The oracle never renormalizes. If population reaches the cutoff it
refuses instead of silently truncating.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse, special, stats
from scipy.sparse.linalg import expm_multiply

from su11if.errors import (
    CutoffTooSmallError,
    DegenerateParameterError,
    OracleError,
    TailOverflowError,
)
from su11if.ifshift import if_shift
from su11if.numdiff import richardson
from su11if.optics import reflectance

MODE_A, MODE_B, MODE_V = 0, 1, 2
TAIL_TOL = 1e-10
MAX_CUTOFF = 40
MIN_CUTOFF = 6


@dataclass
class FockState:
    amplitudes: np.ndarray
    cutoff: int
    tail_tol: float = TAIL_TOL

    @property
    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    @property
    def tail_mass(self):
        """Population on basis states with any mode at the cutoff."""
        pop = np.abs(self.amplitudes) ** 2
        inner = pop[(slice(0, self.cutoff),) * pop.ndim]
        return float(pop.sum() - inner.sum())

    def check_tail(self, what):
        tail = self.tail_mass
        if tail >= self.tail_tol:
            raise TailOverflowError(
                f"{what}: population {tail:.3e} at cutoff {self.cutoff} exceeds {self.tail_tol:.0e}",
                tail_mass=tail,
                cutoff=self.cutoff,
            )
        return self


def _coherent(z, cutoff):
    n = np.arange(cutoff + 1)
    if z == 0:
        out = np.zeros(cutoff + 1, complex)
        out[0] = 1.0
        return out
    log_mag = -abs(z) ** 2 / 2 + n * np.log(abs(z)) - 0.5 * special.gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(z))


def poisson_tail(mag, cutoff):
    """P(n >= cutoff) for a coherent state of amplitude `mag`."""
    return float(stats.poisson.sf(cutoff - 1, mag**2)) if mag > 0 else 0.0


def prepare_input(inputs, cutoff, tail_tol=TAIL_TOL):
    """|α⟩_a |β⟩_b |0⟩_v in the truncated basis."""
    for name, mag in (("alpha", inputs.alpha_mag), ("beta", inputs.beta_mag)):
        tail = poisson_tail(mag, cutoff)
        if tail >= tail_tol:
            raise CutoffTooSmallError(
                f"cutoff {cutoff} too small for |{name}|={mag}: Poisson tail {tail:.3e} >= {tail_tol:.0e}",
                tail_mass=tail,
                cutoff=cutoff,
            )
    vac = np.zeros(cutoff + 1, complex)
    vac[0] = 1.0
    amps = np.einsum(
        "i,j,k->ijk", _coherent(inputs.alpha, cutoff), _coherent(inputs.beta, cutoff), vac
    )
    return FockState(amps, cutoff, tail_tol)


@lru_cache(maxsize=None)
def _ladder(cutoff):
    return sparse.diags(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1, format="csr")


@lru_cache(maxsize=None)
def _pair_ops(cutoff):
    a = _ladder(cutoff)
    eye = sparse.identity(cutoff + 1, format="csr")
    return sparse.kron(a, eye, format="csr"), sparse.kron(eye, a, format="csr")


def squeeze_generator(g, theta, cutoff):
    """ξ* a b - ξ a† b† with ξ = g e^{iθ}, on the truncated two-mode space."""
    a1, a2 = _pair_ops(cutoff)
    ab = a1 @ a2
    xi = g * np.exp(1j * theta)
    return (np.conj(xi) * ab - xi * ab.conj().T).tocsr()


def beam_splitter_generator(eta, cutoff):
    """(a† a_v - a a_v†) arctan √((1-η)/η), on the truncated two-mode space."""
    a1, a2 = _pair_ops(cutoff)
    phi = np.arctan2(np.sqrt(1 - eta), np.sqrt(eta))
    return (phi * (a1.T @ a2 - a1 @ a2.T)).tocsr()


def _apply(state, generator, modes, what):
    """exp(generator) on the axes `modes`, via a scaled truncated Taylor series."""
    c = state.cutoff + 1
    m1, m2 = modes
    psi = np.moveaxis(state.amplitudes, (m1, m2), (0, 1))
    shape = psi.shape
    block = psi.reshape(c * c, -1).astype(complex)
    psi = expm_multiply(generator.astype(complex), block).reshape(shape)
    out = FockState(np.moveaxis(psi, (0, 1), (m1, m2)), state.cutoff, state.tail_tol)
    return out.check_tail(what)


def apply_two_mode_squeeze(state, g, theta, modes=(MODE_A, MODE_B)):
    if g == 0:
        return state
    return _apply(state, squeeze_generator(g, theta, state.cutoff), modes, "squeeze")


def apply_beam_splitter(state, eta, modes=(MODE_A, MODE_V)):
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    if eta == 1:
        return state
    return _apply(state, beam_splitter_generator(eta, state.cutoff), modes, "beam splitter")


def _lower(amps, mode):
    """Apply the annihilation operator of `mode` to a dense amplitude array."""
    psi = np.moveaxis(amps, mode, 0)
    out = np.zeros_like(psi)
    n = np.sqrt(np.arange(1, psi.shape[0]))
    out[:-1] = n.reshape((-1,) + (1,) * (psi.ndim - 1)) * psi[1:]
    return np.moveaxis(out, 0, mode)


def moments(state, mode):
    """(⟨X⟩, ⟨X²⟩, ⟨n⟩) for X = (a + a†)/√2, using [a, a†] = 1 exactly."""
    psi = state.amplitudes
    a_psi = _lower(psi, mode)
    aa_psi = _lower(a_psi, mode)
    mean_a = np.vdot(psi, a_psi)
    mean_aa = np.vdot(psi, aa_psi)
    n = float(np.real(np.vdot(a_psi, a_psi)))
    x = np.sqrt(2) * float(np.real(mean_a))
    x2 = float(np.real(mean_aa)) + n + 0.5 * state.norm**2
    return x, x2, n


@dataclass(frozen=True)
class PipelineResult:
    cutoff: int
    mean_x: float
    var_x: float
    n_after_opa1: float
    n_total: float


def _pipeline_states(inputs, opa, eta, cutoff, tail_tol):
    psi = prepare_input(inputs, cutoff, tail_tol)
    after1 = apply_two_mode_squeeze(psi, opa.g1, opa.theta1)
    before2 = apply_beam_splitter(after1, eta)
    out = apply_two_mode_squeeze(before2, opa.g2, opa.theta2)
    return after1, before2, out


def _auto_cutoff(build, cutoff, inputs):
    if cutoff is not None:
        return cutoff, build(cutoff)
    last = None
    for c in range(MIN_CUTOFF, MAX_CUTOFF + 1):
        try:
            return c, build(c)
        except CutoffTooSmallError as exc:
            last = exc
    raise CutoffTooSmallError(
        f"no cutoff <= {MAX_CUTOFF} keeps the truncation tail below tolerance for "
        f"|alpha|={inputs.alpha_mag}, |beta|={inputs.beta_mag} ({last})",
        tail_mass=getattr(last, "tail_mass", None),
        cutoff=MAX_CUTOFF,
    )


def _quick_refusal(inputs, tail_tol):
    # Poisson tails alone rule out amplitudes far beyond the cutoff cap
    for name, mag in (("alpha", inputs.alpha_mag), ("beta", inputs.beta_mag)):
        tail = poisson_tail(mag, MAX_CUTOFF)
        if tail >= tail_tol:
            raise CutoffTooSmallError(
                f"|{name}|={mag} is not representable below the cutoff cap {MAX_CUTOFF}: "
                f"Poisson tail {tail:.3e} >= {tail_tol:.0e}",
                tail_mass=tail,
                cutoff=MAX_CUTOFF,
            )


def run_pipeline(inputs, opa, eta, cutoff=None, tail_tol=TAIL_TOL):
    """Full interferometer: OPA1, lossy arm, OPA2; moments of output mode a."""
    _quick_refusal(inputs, tail_tol)
    c, (after1, _, out) = _auto_cutoff(
        lambda c: _pipeline_states(inputs, opa, eta, c, tail_tol), cutoff, inputs
    )
    x, x2, _ = moments(out, MODE_A)
    _, _, n_a = moments(after1, MODE_A)
    _, _, n_b = moments(after1, MODE_B)
    return PipelineResult(c, x, x2 - x**2, n_a, n_a + n_b)


def state_qfi(state_fn, x, dstep=1e-6, levels=2):
    """4[⟨ψ'|ψ'⟩ - |⟨ψ'|ψ⟩|²] with ψ' from Richardson central differences.

    Returns ``(F, err)`` where ``err`` bounds the derivative's extrapolation error
    propagated into F.
    """
    psi = state_fn(x)
    dpsi, dpsi_err = richardson(state_fn, x, h=dstep, levels=levels)
    f = 4 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(dpsi, psi)) ** 2)
    err = 8 * np.linalg.norm(dpsi) * np.linalg.norm(dpsi_err)
    return float(f), float(err)


def numerical_qfi(inputs, opa, stack, theta, which="theta", beam=None, dstep=1e-6,
                  cutoff=None, tail_tol=TAIL_TOL):
    """Overlap QFI of the state before OPA2 w.r.t. incident angle or IF shift.

    The state depends on θ only through η(θ) = |r_pgv(θ)|², evaluated here
    from reflection values alone. For ``which="Y"`` the θ-information is
    divided by (dY/dθ)², with dY/dθ taken by finite differences of Y values.
    """
    if which not in ("theta", "Y"):
        raise ValueError("which must be 'theta' or 'Y'")
    if which == "Y" and beam is None:
        raise ValueError("which='Y' needs a BeamSpec")

    def eta_of(t):
        return float(reflectance(stack, t).eta)

    eta0 = eta_of(theta)
    if not 0 < eta0 < 1:
        raise DegenerateParameterError(f"eta={eta0} leaves no room for a beam-splitter derivative")
    deta, _ = richardson(eta_of, theta, h=dstep, levels=2)
    if abs(deta) <= 1e-6 * eta0:
        raise DegenerateParameterError("d eta/d theta vanishes: stationary reflectance")

    _quick_refusal(inputs, tail_tol)
    c, (after1, _, _) = _auto_cutoff(
        lambda c: _pipeline_states(inputs, opa, eta0, c, tail_tol), cutoff, inputs
    )
    def state(t):
        return apply_beam_splitter(after1, eta_of(t)).amplitudes.ravel()

    f_theta, err = state_qfi(state, theta, dstep=dstep, levels=2)
    if err > 1e-3 * abs(f_theta):
        raise OracleError(f"finite-difference QFI not converged (F={f_theta:.6e}, err={err:.1e})")
    if which == "theta":
        return f_theta

    def y_of(t):
        return float(if_shift(beam, stack, t).Y)

    slope, _ = richardson(y_of, theta, h=dstep, levels=2)
    if slope == 0 or not np.isfinite(slope):
        raise DegenerateParameterError("dY/d theta vanishes: IF-shift extremum")
    return f_theta / slope**2
