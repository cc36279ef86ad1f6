"""Entangling-cloner eavesdropping model for a thermal-loss channel.

The eavesdropper replaces a channel of transmittance tau and thermal photon
number nbar by a beam splitter of the same transmittance fed with one arm
of a two-mode squeezed vacuum chosen so the channel statistics are
unchanged.  She keeps the second beam-splitter output and the retained
squeezed-vacuum arm.  Conditioned on the sender's coherent amplitude her
two-mode state is Gaussian with an amplitude-independent covariance, so it
reduces to a fixed Gaussian unitary acting on a displaced pair of thermal
modes; only the displacement carries the signal.
"""

import math
from dataclasses import dataclass

import numpy as np

from .blochmessiah import bloch_messiah, factors_to_circuit
from .states import (
    StandardTwoModeCov,
    SymplecticMap,
    average_covariance,
    make_tmsv,
    williamson_standard_two_mode,
)
from .unitaries import (
    from_symplectic,
    switch_disp_rotation,
    switch_disp_squeezer,
)

__all__ = [
    "ChannelParams",
    "Constellation",
    "DisplacedThermalEnsemble",
    "qpsk",
    "initial_covariance",
    "bs_symplectic",
    "eve_reduced_covariance",
    "eve_conditional_mean",
    "displaced_thermal_ensemble",
    "eve_average_covariance",
    "qpsk_average_covariance",
]


@dataclass(frozen=True)
class ChannelParams:
    """Thermal-loss channel: transmittance tau in [0, 1], nbar >= 0."""

    tau: float
    nbar: float

    def __post_init__(self):
        if not 0 <= self.tau <= 1:
            raise ValueError(f"transmittance must lie in [0, 1], got {self.tau}")
        if self.nbar < 0:
            raise ValueError(f"thermal photon number must be >= 0, got {self.nbar}")

    @property
    def t(self):
        return math.sqrt(self.tau)

    @property
    def r(self):
        return math.sqrt(1 - self.tau)


@dataclass(frozen=True)
class Constellation:
    """Discrete coherent-state ensemble: amplitudes with probabilities."""

    amplitudes: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", np.atleast_1d(np.asarray(self.amplitudes, dtype=complex)))
        object.__setattr__(self, "probs", np.atleast_1d(np.asarray(self.probs, dtype=float)))
        if self.amplitudes.size != self.probs.size:
            raise ValueError("need one probability per amplitude")
        if np.any(self.probs < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(self.probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {self.probs.sum()!r}, expected 1 within 1e-12")


def qpsk(alpha):
    """Four equiprobable coherent states alpha * exp(i (2k - 1) pi / 4)."""
    if alpha <= 0:
        raise ValueError(f"amplitude must be positive, got {alpha}")
    phases = np.exp(1j * (2 * np.arange(1, 5) - 1) * np.pi / 4)
    return Constellation(amplitudes=alpha * phases, probs=np.full(4, 0.25))


@dataclass(frozen=True)
class DisplacedThermalEnsemble:
    """Equal-covariance displaced two-mode thermal ensemble.

    nu1p and nu2p are the thermal photon numbers (nu1 - 1)/2 and
    (nu2 - 1)/2 of the eavesdropper covariance's symplectic eigenvalues.
    Mode 1 (the beam-splitter output she keeps, which carries the large
    displacement -w1 r alpha_i) is thermal with nu2p; mode 2 (the retained
    squeezed-vacuum arm, displaced by w2 r conj(alpha_i)) is thermal with
    nu1p.  That pairing is the one whose transformed moments match the
    Fock-space reference.
    """

    nu1p: float
    nu2p: float
    means: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", np.atleast_2d(np.asarray(self.means, dtype=float)))
        object.__setattr__(self, "probs", np.atleast_1d(np.asarray(self.probs, dtype=float)))
        if self.nu1p < -1e-12 or self.nu2p < -1e-12:
            raise ValueError("thermal photon numbers must be >= 0")
        if not np.all(np.isfinite(self.means)):
            raise ValueError("ensemble means must be finite")
        if self.means.shape != (self.probs.size, 4):
            raise ValueError("means must be K x 4 for a two-mode ensemble")

    def common_covariance(self):
        """Shared covariance diag(nu2, nu2, nu1, nu1) of the ensemble."""
        nu1 = 2 * max(self.nu1p, 0.0) + 1
        nu2 = 2 * max(self.nu2p, 0.0) + 1
        return np.diag([nu2, nu2, nu1, nu1])

    def mode_amplitudes(self):
        """K x 2 complex displacement amplitudes, one column per mode."""
        return (self.means[:, 0::2] + 1j * self.means[:, 1::2]) / 2


def initial_covariance(params):
    """6x6 covariance of sender mode (x) two-mode squeezed vacuum, in mode
    order (A, C, E): identity block for the coherent signal, TMSV block for
    the eavesdropper ancilla."""
    cov = np.eye(6)
    cov[2:, 2:] = make_tmsv(params.nbar).cov
    return cov


def bs_symplectic(params):
    """Beam splitter on modes (A, C), identity on E.

    First output t A + r C, second output -r A + t C, with t = sqrt(tau)
    and r = sqrt(1 - tau).
    """
    s = np.eye(6)
    t, r = params.t, params.r
    s[0:2, 0:2] = t * np.eye(2)
    s[0:2, 2:4] = r * np.eye(2)
    s[2:4, 0:2] = -r * np.eye(2)
    s[2:4, 2:4] = t * np.eye(2)
    return SymplecticMap(s=s)


def eve_reduced_covariance(params):
    """Eavesdropper covariance after tracing out the receiver mode.

    Standard form with a = 2 tau nbar + 1, b = 2 nbar + 1,
    c = 2 sqrt(tau) sqrt(nbar^2 + nbar); equal to the
    initial-covariance -> beam-splitter -> partial-trace pipeline.
    """
    return StandardTwoModeCov(
        a=2 * params.tau * params.nbar + 1,
        b=2 * params.nbar + 1,
        c=2 * params.t * math.sqrt(params.nbar**2 + params.nbar),
    )


def eve_conditional_mean(alpha_i, params):
    """Mean quadratures of the eavesdropper's two modes given amplitude
    alpha_i: (-r 2 Re alpha, -r 2 Im alpha, 0, 0)."""
    alpha_i = complex(alpha_i)
    return np.array([-params.r * 2 * alpha_i.real, -params.r * 2 * alpha_i.imag, 0.0, 0.0])


def _switched_displacement(circuit, beta):
    """Displacement beta' with D(beta) R2 S R1 = R2 S R1 D(beta')."""
    rot1, squeezer, rot2 = circuit[:3]
    g = switch_disp_rotation(rot2.phi, beta)
    g = switch_disp_squeezer(squeezer.z, g)
    return switch_disp_rotation(rot1.phi, g)


def displaced_thermal_ensemble(constellation, params):
    """Reduce the eavesdropper's conditional states to displaced thermals.

    The thermal decomposition of her covariance supplies the fixed Gaussian
    unitary; pulling the conditional displacement through its
    rotation-squeezer-rotation circuit leaves an ensemble of displaced
    two-mode thermal states with the same entropy as her true average
    state.  For each amplitude the switched displacement comes out as
    (-w1 r alpha_i, w2 r conj(alpha_i)).
    """
    std = eve_reduced_covariance(params)
    smap, nu1, nu2 = williamson_standard_two_mode(std)
    circuit = factors_to_circuit(bloch_messiah(from_symplectic(smap)))

    means = np.zeros((constellation.amplitudes.size, 4))
    for i, amp in enumerate(constellation.amplitudes):
        beta = np.array([-params.r * amp, 0.0], dtype=complex)
        beta_p = _switched_displacement(circuit, beta)
        means[i, 0::2] = 2 * beta_p.real
        means[i, 1::2] = 2 * beta_p.imag
    return DisplacedThermalEnsemble(
        nu1p=(nu1 - 1) / 2,
        nu2p=(nu2 - 1) / 2,
        means=means,
        probs=constellation.probs.copy(),
    )


def eve_average_covariance(constellation, params):
    """4x4 covariance of the displaced-thermal average state (the fixed
    unitary stripped off, which leaves the entropy unchanged)."""
    ens = displaced_thermal_ensemble(constellation, params)
    return average_covariance(ens.means, ens.probs, ens.common_covariance())


def qpsk_average_covariance(alpha, params):
    """Closed form of `eve_average_covariance` for the four-state ensemble.

    With x = w1 r alpha and y = w2 r alpha the average covariance is
    [[(2(n1 + x^2) + 1) I, -2xy Z], [-2xy Z, (2(n2 + y^2) + 1) I]] where
    n1, n2 are the thermal photon numbers of modes 1 and 2.
    """
    if alpha <= 0:
        raise ValueError(f"amplitude must be positive, got {alpha}")
    std = eve_reduced_covariance(params)
    smap, nu1, nu2 = williamson_standard_two_mode(std)
    w1 = smap.s[0, 0]
    w2 = smap.s[0, 2]
    x = w1 * params.r * alpha
    y = w2 * params.r * alpha
    n1 = (nu2 - 1) / 2
    n2 = (nu1 - 1) / 2
    cov = np.diag([2 * (n1 + x * x) + 1] * 2 + [2 * (n2 + y * y) + 1] * 2)
    z = np.diag([1.0, -1.0])
    cov[:2, 2:] = -2 * x * y * z
    cov[2:, :2] = -2 * x * y * z
    return cov
