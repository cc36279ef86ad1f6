"""Gaussian states in phase space: covariance matrices, symplectic maps,
thermal decomposition and von Neumann entropy.

Conventions: quadratures are q = a + a^dag and p = -i(a - a^dag), quadrature
vector ordering (q1, p1, ..., qN, pN), so the vacuum covariance matrix is the
identity and a coherent state |alpha> has mean (2 Re alpha, 2 Im alpha).
The symplectic form Omega is block diagonal with 2x2 blocks [[0, 1], [-1, 0]]
and physical covariances satisfy cov + i Omega >= 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import max_abs, require_finite

__all__ = [
    "GaussianState",
    "SymplecticMap",
    "StandardTwoModeCov",
    "omega",
    "make_thermal",
    "make_tmsv",
    "make_coherent",
    "symplectic_eigenvalues",
    "standard_symplectic_spectrum",
    "williamson_standard_two_mode",
    "entropy_from_cov",
    "thermal_entropy",
    "apply_symplectic",
    "partial_trace_modes",
    "average_covariance",
]

_Z = np.array([[1.0, 0.0], [0.0, -1.0]])

PHYSICALITY_ATOL = 1e-9


def omega(nmodes):
    """Symplectic form for `nmodes` modes in (q1, p1, ...) ordering."""
    return np.kron(np.eye(nmodes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _check_cov(cov, atol_sym=1e-10):
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError(f"covariance matrix must be square 2N x 2N, got {cov.shape}")
    require_finite(cov, "covariance matrix")
    sym_defect = max_abs(cov - cov.T)
    if sym_defect > atol_sym:
        raise ValueError(f"covariance matrix not symmetric: residual {sym_defect:.3e}")
    n = cov.shape[0] // 2
    min_eig = float(np.linalg.eigvalsh(cov + 1j * omega(n)).min())
    if min_eig < -PHYSICALITY_ATOL:
        raise ValueError(
            f"unphysical covariance matrix: min eig of cov + i Omega is {min_eig:.3e}"
        )
    return cov


@dataclass
class GaussianState:
    """First and second moments of an N-mode bosonic Gaussian state.

    Args:
        mean (array[float]): length-2N vector of quadrature means.
        cov (array[float]): 2N x 2N covariance matrix, vacuum = identity.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        self.cov = _check_cov(self.cov)
        self.mean = np.asarray(self.mean, dtype=float).reshape(-1)
        require_finite(self.mean, "mean vector")
        if self.mean.size != self.cov.shape[0]:
            raise ValueError(
                f"mean length {self.mean.size} does not match covariance size {self.cov.shape[0]}"
            )

    @property
    def nmodes(self):
        return self.mean.size // 2


@dataclass
class SymplecticMap:
    """Affine phase-space map r -> S r + d with S symplectic."""

    s: np.ndarray
    d: np.ndarray = None

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        if self.s.ndim != 2 or self.s.shape[0] != self.s.shape[1] or self.s.shape[0] % 2:
            raise ValueError(f"symplectic matrix must be square 2N x 2N, got {self.s.shape}")
        require_finite(self.s, "symplectic matrix")
        if self.d is None:
            self.d = np.zeros(self.s.shape[0])
        self.d = np.asarray(self.d, dtype=float).reshape(-1)
        if self.d.size != self.s.shape[0]:
            raise ValueError("displacement length does not match symplectic matrix size")
        om = omega(self.s.shape[0] // 2)
        defect = max_abs(self.s @ om @ self.s.T - om)
        if defect > 1e-9:
            raise ValueError(f"matrix is not symplectic: max |S Omega S^T - Omega| = {defect:.3e}")

    @property
    def nmodes(self):
        return self.s.shape[0] // 2


@dataclass
class StandardTwoModeCov:
    """Two-mode covariance in standard form [[a I, c Z], [c Z, b I]]."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"standard-form entry {name} is not finite")
        if self.a < 1 - PHYSICALITY_ATOL or self.b < 1 - PHYSICALITY_ATOL:
            raise ValueError(f"standard form needs a, b >= 1, got a={self.a}, b={self.b}")
        _check_cov(self.as_matrix())

    def as_matrix(self):
        m = np.zeros((4, 4))
        m[:2, :2] = self.a * np.eye(2)
        m[2:, 2:] = self.b * np.eye(2)
        m[:2, 2:] = self.c * _Z
        m[2:, :2] = self.c * _Z
        return m


def make_thermal(nbar):
    """Single-mode thermal state with mean photon number `nbar`."""
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar}")
    return GaussianState(mean=np.zeros(2), cov=(2 * nbar + 1) * np.eye(2))


def make_tmsv(nbar):
    """Two-mode squeezed vacuum purifying a thermal state of `nbar` photons.

    The covariance matrix is [[nu I, s Z], [s Z, nu I]] with nu = 2 nbar + 1
    and s = 2 sqrt(nbar^2 + nbar) = sqrt(nu^2 - 1).
    """
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar}")
    nu = 2 * nbar + 1
    return GaussianState(
        mean=np.zeros(4),
        cov=StandardTwoModeCov(a=nu, b=nu, c=math.sqrt(nu * nu - 1)).as_matrix(),
    )


def make_coherent(alpha):
    """Single-mode coherent state of complex amplitude `alpha`."""
    alpha = complex(alpha)
    return GaussianState(mean=np.array([2 * alpha.real, 2 * alpha.imag]), cov=np.eye(2))


def symplectic_eigenvalues(cov):
    """Symplectic spectrum of a physical covariance matrix.

    The eigenvalues of i Omega cov come in +/- pairs; their magnitudes are
    sorted in decreasing order and every other one kept.  Adjacent pair
    members must agree to 1e-8 relative.

    Returns:
        array[float]: N symplectic eigenvalues, decreasing, each >= 1 - 1e-9.
    """
    cov = _check_cov(cov)
    n = cov.shape[0] // 2
    mags = np.sort(np.abs(np.linalg.eigvals(1j * omega(n) @ cov)))[::-1]
    pair_gap = np.abs(mags[0::2] - mags[1::2]) / np.maximum(mags[0::2], 1.0)
    if np.any(pair_gap > 1e-8):
        raise ValueError(
            f"symplectic eigenvalues did not pair up: relative gap {pair_gap.max():.3e}"
        )
    return mags[0::2]


def standard_symplectic_spectrum(std):
    """Closed-form symplectic eigenvalues of a standard-form covariance.

    nu_{1,2} = [sqrt((a+b)^2 - 4c^2) +/- (b - a)] / 2, so nu1 is the larger
    eigenvalue whenever b >= a.
    """
    disc = (std.a + std.b) ** 2 - 4 * std.c**2
    if disc <= 0:
        raise ValueError(
            f"unphysical standard form: (a+b)^2 - 4c^2 = {disc:.3e} must be positive"
        )
    root = math.sqrt(disc)
    return (root + (std.b - std.a)) / 2, (root - (std.b - std.a)) / 2


def williamson_standard_two_mode(std):
    """Thermal decomposition of a standard-form two-mode covariance.

    Returns (map, nu1, nu2) where map.s = [[w1 I, w2 Z], [w2 Z, w1 I]] with
    w_{1,2} = sqrt((a+b) / (2 sqrt((a+b)^2 - 4 c^2)) +/- 1/2), which satisfy
    w1^2 - w2^2 = 1, and nu1, nu2 from `standard_symplectic_spectrum`.

    The diagonal form pairs nu2 with the first mode:
    S diag(nu2, nu2, nu1, nu1) S^T reconstructs the input.  (Pairing nu1
    with the first mode reconstructs the mode-swapped matrix instead; only
    this assignment returns the input.)  For c < 0 the sign is carried by
    the w2 entries of S.

    Raises:
        ValueError: if (a+b)^2 - 4c^2 <= 0.
    """
    nu1, nu2 = standard_symplectic_spectrum(std)
    ratio = (std.a + std.b) / (2 * math.sqrt((std.a + std.b) ** 2 - 4 * std.c**2))
    w1 = math.sqrt(ratio + 0.5)
    w2 = math.sqrt(max(ratio - 0.5, 0.0))
    w2_signed = math.copysign(w2, std.c) if std.c != 0 else 0.0
    s = np.zeros((4, 4))
    s[:2, :2] = w1 * np.eye(2)
    s[2:, 2:] = w1 * np.eye(2)
    s[:2, 2:] = w2_signed * _Z
    s[2:, :2] = w2_signed * _Z
    return SymplecticMap(s=s), nu1, nu2


def _log(x, base):
    if base == "bits":
        return np.log2(x)
    if base == "nats":
        return np.log(x)
    raise ValueError(f"log base must be 'bits' or 'nats', got {base!r}")


def thermal_entropy(nbar, base="bits"):
    """g(nbar) = (nbar+1) log(nbar+1) - nbar log(nbar), the entropy of a
    thermal state with mean photon number nbar; g(0) = 0."""
    if nbar < 1e-12:
        return 0.0
    return float((nbar + 1) * _log(nbar + 1, base) - nbar * _log(nbar, base))


def entropy_from_cov(cov, base="bits"):
    """Von Neumann entropy of the Gaussian state with covariance `cov`.

    Sums g((nu_k - 1)/2) over the symplectic eigenvalues nu_k.

    Args:
        cov (array[float]): physical covariance matrix.
        base (str): 'bits' (log2) or 'nats' (natural log).
    """
    nus = symplectic_eigenvalues(cov)
    return sum(thermal_entropy(max(nu - 1.0, 0.0) / 2, base) for nu in nus)


def apply_symplectic(state, smap):
    """Transform a Gaussian state by an affine symplectic map."""
    if smap.nmodes != state.nmodes:
        raise ValueError(
            f"mode mismatch: map acts on {smap.nmodes} modes, state has {state.nmodes}"
        )
    return GaussianState(
        mean=smap.s @ state.mean + smap.d,
        cov=smap.s @ state.cov @ smap.s.T,
    )


def partial_trace_modes(state, keep):
    """Restrict a Gaussian state to the modes listed in `keep` (0-based)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("must keep at least one mode")
    if keep[0] < 0 or keep[-1] >= state.nmodes:
        raise ValueError(f"mode indices {keep} out of range for {state.nmodes}-mode state")
    idx = np.array([2 * k + o for k in keep for o in (0, 1)])
    return GaussianState(mean=state.mean[idx], cov=state.cov[np.ix_(idx, idx)])


def average_covariance(means, probs, common_cov):
    """Covariance of a mixture of equal-covariance Gaussian states.

    The mixture covariance is the shared covariance plus the second central
    moment of the displacement vectors:
    common_cov + sum_k p_k (m_k - mbar)(m_k - mbar)^T.

    Args:
        means (array[float]): K x 2N matrix of mean vectors.
        probs (array[float]): K probabilities summing to 1 within 1e-12.
        common_cov (array[float]): shared 2N x 2N covariance.
    """
    means = np.atleast_2d(np.asarray(means, dtype=float))
    probs = np.asarray(probs, dtype=float)
    if abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {probs.sum()!r}, expected 1 within 1e-12")
    if means.shape[0] != probs.size:
        raise ValueError("number of means and probabilities differ")
    common_cov = np.asarray(common_cov, dtype=float)
    if means.shape[1] != common_cov.shape[0]:
        raise ValueError("mean dimension does not match covariance size")
    mbar = probs @ means
    centered = means - mbar
    spread = (centered * probs[:, np.newaxis]).T @ centered
    return common_cov + spread
