"""Dense matrix kernels for the Gaussian-unitary decompositions.

Everything here targets the small matrices (a handful of modes) that show
up in phase-space models of optical circuits; nothing is tuned for scale.
Construction-level checks run at 1e-10 and reconstruction-level checks at
1e-9, one order of magnitude of slack over accumulated round-off at this
matrix size.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

__all__ = [
    "MatchedSVD",
    "principal_sqrt",
    "takagi_symmetric_unitary",
    "matched_svd",
]

ATOL_CONSTRUCT = 1e-10
ATOL_RECONSTRUCT = 1e-9

# Singular values closer than this (relative) are treated as one
# degenerate block; true degeneracies agree to machine precision while
# distinct values produced by generic circuits are far apart.
DEGENERACY_RTOL = 1e-10


def max_abs(m):
    """Largest entry magnitude, as a plain float."""
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def require_finite(m, name="matrix"):
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or Inf entries")


def unitarity_defect(m):
    """max |M^dag M - I|."""
    return max_abs(m.conj().T @ m - np.eye(m.shape[0]))


def require_unitary(m, name="matrix", atol=ATOL_CONSTRUCT):
    defect = unitarity_defect(m)
    if defect > atol:
        raise ValueError(
            f"{name} is not unitary: max |M^dag M - I| = {defect:.3e} > {atol:.0e}"
        )


def require_symmetric(m, name="matrix", atol=ATOL_CONSTRUCT):
    defect = max_abs(m - m.T)
    if defect > atol:
        raise ValueError(
            f"{name} is not symmetric: max |M - M^T| = {defect:.3e} > {atol:.0e}"
        )


def _unitary_eig(m):
    """Spectral decomposition of a (numerically) unitary matrix.

    Uses the complex Schur form, which is exactly diagonal for normal
    input; the strictly upper-triangular residue is checked rather than
    assumed.
    """
    t, q = schur(np.asarray(m, dtype=complex), output="complex")
    residue = max_abs(np.triu(t, k=1))
    if residue > 1e-8:
        raise ValueError(
            f"matrix is not normal enough to diagonalize: Schur residue {residue:.3e}"
        )
    return np.diag(t), q


def principal_angles(eigvals):
    """Eigenvalue arguments folded into (-pi, pi], with -pi mapped to +pi."""
    angles = np.angle(eigvals)
    angles[angles <= -np.pi + 1e-12] += 2 * np.pi
    return angles


def principal_sqrt(m):
    """Principal square root of a symmetric unitary matrix.

    Args:
        m (array[complex]): symmetric unitary matrix.

    Returns:
        array[complex]: R with R @ R = m, eigenvalue arguments taken on the
        principal branch (-pi, pi], so an eigenvalue -1 maps to +1j.

    Raises:
        ValueError: if the input is not symmetric and unitary to 1e-10.
    """
    m = np.asarray(m, dtype=complex)
    require_finite(m, "principal_sqrt input")
    require_symmetric(m, "principal_sqrt input")
    require_unitary(m, "principal_sqrt input")
    eigvals, q = _unitary_eig(m)
    roots = np.sqrt(np.abs(eigvals)) * np.exp(0.5j * principal_angles(eigvals))
    return q @ np.diag(roots) @ q.conj().T


def takagi_symmetric_unitary(g):
    """Takagi factor of a symmetric unitary matrix.

    For symmetric unitary G the factorization G = D D^T is solved by the
    principal square root D = G^(1/2), which is itself symmetric and
    unitary.

    Args:
        g (array[complex]): symmetric unitary matrix.

    Returns:
        array[complex]: unitary D with D @ D.T = g.
    """
    return principal_sqrt(g)


@dataclass
class MatchedSVD:
    """Simultaneous SVD of a Bogoliubov pair with a common left factor.

    E = u diag(lambda_e) w_e^dag and F = u diag(lambda_f) w_f^dag, with
    lambda_e[k]^2 = 1 + lambda_f[k]^2.  The right factors are not yet
    balanced: w_f == conj(w_e) is *not* guaranteed at this stage.
    """

    u: np.ndarray
    lambda_e: np.ndarray
    lambda_f: np.ndarray
    w_e: np.ndarray
    w_f: np.ndarray

    def __post_init__(self):
        require_unitary(self.u, "matched SVD factor u")
        require_unitary(self.w_e, "matched SVD factor w_e")
        require_unitary(self.w_f, "matched SVD factor w_f")
        if np.any(self.lambda_e < 1 - 1e-12):
            raise ValueError("matched SVD lambda_e has entries below 1")
        squeeze_defect = max_abs(self.lambda_e**2 - self.lambda_f**2 - 1)
        if squeeze_defect > ATOL_CONSTRUCT:
            raise ValueError(
                f"matched SVD violates lambda_e^2 = 1 + lambda_f^2: {squeeze_defect:.3e}"
            )


def _check_bogoliubov_constraints(e, f, atol=ATOL_RECONSTRUCT):
    n = e.shape[0]
    res_sym = max_abs(e @ f.T - f @ e.T)
    if res_sym > atol:
        raise ValueError(
            f"Bogoliubov constraint E F^T = F E^T violated: residual {res_sym:.3e}"
        )
    res_norm = max_abs(e @ e.conj().T - f @ f.conj().T - np.eye(n))
    if res_norm > atol:
        raise ValueError(
            f"Bogoliubov constraint E E^dag = F F^dag + I violated: residual {res_norm:.3e}"
        )


def matched_svd(e, f):
    """SVD of a Bogoliubov pair (E, F) sharing the left unitary factor.

    The left factor comes from the eigendecomposition of E E^dag (Hermitian
    PSD), which avoids two independent SVDs disagreeing on degenerate
    subspaces; F F^dag is then diagonal in the same basis because
    E E^dag = F F^dag + I.  Where a squeezing singular value vanishes the
    corresponding w_f column is unconstrained and is set to the conjugate
    of the w_e column, so the later balancing step is well posed there.

    Args:
        e (array[complex]): square matrix E.
        f (array[complex]): square matrix F, same shape as E.

    Returns:
        MatchedSVD: factors with singular values sorted in decreasing order.

    Raises:
        ValueError: if (E, F) violate the Bogoliubov constraints to 1e-9,
            naming the violated identity and its residual.
    """
    e = np.asarray(e, dtype=complex)
    f = np.asarray(f, dtype=complex)
    if e.shape != f.shape or e.ndim != 2 or e.shape[0] != e.shape[1]:
        raise ValueError(f"E and F must be square matrices of equal shape, got {e.shape} and {f.shape}")
    require_finite(e, "E")
    require_finite(f, "F")
    _check_bogoliubov_constraints(e, f)

    evals, u = np.linalg.eigh(e @ e.conj().T)
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    u = u[:, order]

    lambda_e = np.sqrt(np.maximum(evals, 0.0))
    lambda_f = np.sqrt(np.maximum(evals - 1.0, 0.0))

    w_e = e.conj().T @ u / lambda_e[np.newaxis, :]
    w_f = np.empty_like(w_e)
    support = lambda_f > 1e-12
    if np.any(support):
        w_f[:, support] = f.conj().T @ u[:, support] / lambda_f[np.newaxis, support]
    w_f[:, ~support] = w_e[:, ~support].conj()

    return MatchedSVD(u=u, lambda_e=lambda_e, lambda_f=lambda_f, w_e=w_e, w_f=w_f)
