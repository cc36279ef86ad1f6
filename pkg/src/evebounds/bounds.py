"""Eavesdropper-entropy estimators for a discretely modulated protocol.

Three estimators are compared:

* `eb_qpsk_entropy`: the entangled-based bound.  The four-state average is
  purified, the purification's covariance is pushed through the channel,
  and the Gaussian entropy of the result is taken (Gaussian extremality
  plus global purity make it an upper bound).
* `bm_get_entropy`: Gaussian extremality applied directly to the
  covariance of the displaced-thermal ensemble that carries the
  eavesdropper's average state.
* `bm_gme_entropy`: the entropy of the ensemble's normalized Gram matrix.
  For a pure ensemble the Gram spectrum equals the average-state spectrum,
  so the "pure-exact" variant is exact there; for mixed ensembles the Gram
  entry is ambiguous and both conjectured variants are provided.
"""

from dataclasses import dataclass

import numpy as np

from . import fock
from .cloner import Constellation, displaced_thermal_ensemble, eve_average_covariance
from .linalg import max_abs
from .states import GaussianState, entropy_from_cov

__all__ = [
    "GramMatrix",
    "gaussian_hs_overlap",
    "gram_matrix",
    "gram_entropy",
    "bm_get_entropy",
    "bm_gme_entropy",
    "eb_qpsk_entropy",
]

GRAM_VARIANTS = ("pure-exact", "hs-normalized")


def gaussian_hs_overlap(s1, s2):
    """Hilbert-Schmidt product tr(rho1 rho2) of two Gaussian states.

    tr(rho1 rho2) = 2^N det(S1 + S2)^(-1/2) exp(-delta^T (S1+S2)^{-1} delta / 2)
    with delta the mean difference.  Symmetric in its arguments and in
    (0, 1] for physical states.
    """
    if s1.nmodes != s2.nmodes:
        raise ValueError(f"mode mismatch: {s1.nmodes} vs {s2.nmodes}")
    total = s1.cov + s2.cov
    det = float(np.linalg.det(total))
    if det <= 0:
        raise ValueError(f"covariance sum is singular: det = {det!r}")
    delta = s1.mean - s2.mean
    exponent = -0.5 * float(delta @ np.linalg.solve(total, delta))
    return float(2**s1.nmodes / np.sqrt(det) * np.exp(exponent))


@dataclass
class GramMatrix:
    """Normalized weighted-overlap matrix of an ensemble."""

    matrix: np.ndarray
    variant: str

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        herm = max_abs(self.matrix - self.matrix.conj().T)
        if herm > 1e-10:
            raise ValueError(f"Gram matrix not Hermitian: residual {herm:.3e}")
        trace = complex(np.trace(self.matrix)).real
        if abs(trace - 1.0) > 1e-9:
            raise ValueError(f"Gram matrix trace is {trace!r}, expected 1 within 1e-9")
        min_eig = float(np.linalg.eigvalsh(self.matrix).min())
        if min_eig < -1e-8:
            raise ValueError(f"Gram matrix has eigenvalue {min_eig:.3e} below -1e-8")


def _coherent_overlap(a, b):
    """<a|b> = exp(-(|a|^2 + |b|^2)/2 + conj(a) b) for coherent states."""
    return np.exp(-0.5 * (abs(a) ** 2 + abs(b) ** 2) + np.conj(a) * b)


def _ensemble_data(ensemble):
    """(amplitudes K x M, probs, mode photon numbers) for either input kind."""
    if isinstance(ensemble, Constellation):
        return ensemble.amplitudes.reshape(-1, 1), ensemble.probs, (0.0,)
    amps = ensemble.mode_amplitudes()
    return amps, ensemble.probs, (ensemble.nu2p, ensemble.nu1p)


def gram_matrix(ensemble, variant="pure-exact"):
    """Gram matrix of a displaced-thermal ensemble or coherent constellation.

    "pure-exact": entries sqrt(p_m p_n) <psi_m|psi_n> built from the complex
    coherent-state overlaps of the displacement amplitudes.  Exact whenever
    the thermal photon numbers vanish; for mixed ensembles it deliberately
    drops the thermal covariance, keeping the overlap phases (the
    conjectured mixed-state extension; its entropy provably stays below the
    Gaussian-extremality bound because the true average state is the pure
    surrogate convolved with thermal noise).

    "hs-normalized": entries
    sqrt(p_m p_n) tr(rho_m rho_n) / sqrt(tr(rho_m^2) tr(rho_n^2)), so the
    diagonal is p_m.  Phase-free; recorded for comparison.
    """
    if variant not in GRAM_VARIANTS:
        raise ValueError(f"unknown Gram variant {variant!r}, expected one of {GRAM_VARIANTS}")
    amps, probs, mode_nbars = _ensemble_data(ensemble)
    k = probs.size
    root_p = np.sqrt(probs)

    if variant == "pure-exact":
        m = np.empty((k, k), dtype=complex)
        for i in range(k):
            for j in range(k):
                overlap = np.prod([_coherent_overlap(amps[i, mode], amps[j, mode])
                                   for mode in range(amps.shape[1])])
                m[i, j] = root_p[i] * root_p[j] * overlap
        return GramMatrix(matrix=m, variant=variant)

    cov = np.diag(np.repeat([2 * nb + 1 for nb in mode_nbars], 2)).astype(float)
    states = []
    for i in range(k):
        mean = np.empty(2 * amps.shape[1])
        mean[0::2] = 2 * amps[i].real
        mean[1::2] = 2 * amps[i].imag
        states.append(GaussianState(mean=mean, cov=cov))
    hs = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            hs[i, j] = hs[j, i] = gaussian_hs_overlap(states[i], states[j])
    purity = np.sqrt(np.diag(hs))
    m = root_p[:, None] * root_p[None, :] * hs / (purity[:, None] * purity[None, :])
    return GramMatrix(matrix=m.astype(complex), variant=variant)


def gram_entropy(gm, base="bits"):
    """Entropy -sum lambda log lambda of a Gram matrix's spectrum.

    Eigenvalues in [-1e-8, 0) are clipped to zero (Hermitian eigensolves
    dip slightly negative) and the spectrum renormalized.
    """
    if base not in ("bits", "nats"):
        raise ValueError(f"log base must be 'bits' or 'nats', got {base!r}")
    eigs = np.linalg.eigvalsh(gm.matrix)
    if eigs.min() < -1e-8:
        raise ValueError(f"Gram eigenvalue {eigs.min():.3e} below -1e-8")
    eigs = np.clip(eigs, 0.0, None)
    eigs = eigs / eigs.sum()
    eigs = eigs[eigs > 1e-15]
    logs = np.log2(eigs) if base == "bits" else np.log(eigs)
    return float(-(eigs * logs).sum())


def bm_get_entropy(constellation, params, base="bits"):
    """Gaussian-extremality bound: entropy of the average-state covariance."""
    return entropy_from_cov(eve_average_covariance(constellation, params), base=base)


def bm_gme_entropy(constellation, params, variant="pure-exact", base="bits"):
    """Gram-matrix entropy of the eavesdropper's displaced-thermal ensemble."""
    ens = displaced_thermal_ensemble(constellation, params)
    return gram_entropy(gram_matrix(ens, variant=variant), base=base)


def eb_qpsk_entropy(alpha, params, base="bits", cutoff=40):
    """Entangled-based bound for the four-state protocol.

    Builds the two-mode covariance [[X I, Z4 Z], [Z4 Z, X I]] of the
    purification of the sender's average state, with X = 1 + 2 alpha^2 and
    Z4 the numerically computed purification cross moment, sends the second
    mode through the channel (variance tau X + (1 - tau)(2 nbar + 1),
    correlation sqrt(tau) Z4) and returns the Gaussian entropy of the
    result, which bounds the eavesdropper entropy by global purity.
    """
    if alpha <= 0:
        raise ValueError(f"amplitude must be positive, got {alpha}")
    x = 1 + 2 * alpha * alpha
    z4 = fock.eb_z4(alpha, cutoff)
    bob = params.tau * x + (1 - params.tau) * (2 * params.nbar + 1)
    corr = np.sqrt(params.tau) * z4
    cov = np.diag([x, x, bob, bob]).astype(float)
    z = np.diag([1.0, -1.0])
    cov[:2, 2:] = corr * z
    cov[2:, :2] = corr * z
    return entropy_from_cov(cov, base=base)
