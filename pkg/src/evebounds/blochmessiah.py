"""Bloch-Messiah reduction of a Gaussian unitary.

Any Bogoliubov pair factors as E = U L_E W_E^dag, F = U L_F W_F^dag with a
common left unitary, nonnegative diagonal L_E, L_F satisfying
L_E^2 = I + L_F^2, and right factors obeying the rotation condition
W_F = conj(W_E).  A matched SVD alone does not deliver the rotation
condition; it is repaired by a balancing matrix D obtained from the Takagi
factorization of G = W_E^dag conj(W_F).  The balanced factors realize the
unitary as rotation -> parallel single-mode squeezers -> rotation.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import (
    matched_svd,
    max_abs,
    principal_angles,
    require_unitary,
    takagi_symmetric_unitary,
    _unitary_eig,
)
from .unitaries import Displacement, Rotation, Squeezer

__all__ = ["BMFactors", "bloch_messiah", "factors_to_circuit"]


@dataclass
class BMFactors:
    """Balanced factors (cal_u, lambda_e, lambda_f, cal_we, cal_wf)."""

    cal_u: np.ndarray
    lambda_e: np.ndarray
    lambda_f: np.ndarray
    cal_we: np.ndarray
    cal_wf: np.ndarray

    def __post_init__(self):
        require_unitary(self.cal_u, "cal_u")
        require_unitary(self.cal_we, "cal_we")
        require_unitary(self.cal_wf, "cal_wf")
        rot = max_abs(self.cal_wf - self.cal_we.conj())
        if rot > 1e-9:
            raise ValueError(f"rotation condition W_F = conj(W_E) violated: residual {rot:.3e}")
        squeeze = max_abs(self.lambda_e**2 - self.lambda_f**2 - 1)
        if squeeze > 1e-10:
            raise ValueError(f"squeeze relation L_E^2 = 1 + L_F^2 violated: residual {squeeze:.3e}")

    def reconstruct(self):
        """(E, F) rebuilt from the factors."""
        e = self.cal_u @ np.diag(self.lambda_e) @ self.cal_we.conj().T
        f = self.cal_u @ np.diag(self.lambda_f) @ self.cal_wf.conj().T
        return e, f


def bloch_messiah(pair):
    """Bloch-Messiah factors of a Bogoliubov pair (displacement ignored).

    Pipeline: matched SVD, then G = w_e^dag conj(w_f), then the balancing
    matrix D from the Takagi factorization of G, then
    cal_u = u D, cal_we = conj(w_f) conj(D), cal_wf = w_f D.

    G is symmetric and block diagonal with respect to the degenerate blocks
    of the singular values whenever the input satisfies the Bogoliubov
    constraints; its symmetry is checked, not assumed.

    Raises:
        ValueError: on constraint-violating input, on a non-symmetric G
            (residual reported), or if the factors fail to reconstruct the
            input to 1e-9.
    """
    m = matched_svd(pair.e, pair.f)
    g = m.w_e.conj().T @ m.w_f.conj()
    sym_residual = max_abs(g - g.T)
    if sym_residual > 1e-8:
        raise ValueError(
            f"balancing input G = W_E^dag conj(W_F) not symmetric: residual {sym_residual:.3e}"
        )
    d = takagi_symmetric_unitary((g + g.T) / 2)

    factors = BMFactors(
        cal_u=m.u @ d,
        lambda_e=m.lambda_e,
        lambda_f=m.lambda_f,
        cal_we=m.w_f.conj() @ d.conj(),
        cal_wf=m.w_f @ d,
    )
    e, f = factors.reconstruct()
    residual = max(max_abs(e - pair.e), max_abs(f - pair.f))
    if residual > 1e-9:
        raise ValueError(f"Bloch-Messiah factors do not reconstruct the input: residual {residual:.3e}")
    return factors


def _hermitian_phase(v):
    """Hermitian phi with exp(i phi) = v, eigenphases on (-pi, pi]."""
    eigvals, q = _unitary_eig(v)
    h = q @ np.diag(principal_angles(eigvals)) @ q.conj().T
    return (h + h.conj().T) / 2


def factors_to_circuit(factors, alpha=None):
    """Fundamental-operation circuit realizing balanced factors.

    Returns [Rotation(phi1), Squeezer(diag(r)), Rotation(phi2)] in
    application order (index 0 acts first), with exp(i phi1) = cal_we^dag,
    cosh(r_k) = lambda_e[k] on the principal branch (r_k >= 0, phases live
    in the rotations), and exp(i phi2) = cal_u.  If `alpha` is given a
    final Displacement(alpha) is appended, acting last.
    """
    phi1 = _hermitian_phase(factors.cal_we.conj().T)
    phi2 = _hermitian_phase(factors.cal_u)
    r = np.arccosh(np.maximum(factors.lambda_e, 1.0))
    ops = [Rotation(phi1), Squeezer(np.diag(r).astype(complex)), Rotation(phi2)]
    if alpha is not None:
        ops.append(Displacement(alpha))
    return ops
