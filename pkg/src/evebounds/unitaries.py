"""Fundamental Gaussian unitaries as Bogoliubov pairs.

A Gaussian unitary acts on the annihilation operators as
a -> E a + F a^dag + alpha, with E F^T = F E^T and E E^dag = F F^dag + I.
This module builds the pairs for displacements, rotations and squeezers,
converts to and from the quadrature (symplectic) picture, composes them,
and implements the operator-reordering rules that move a displacement or
squeezer through the other fundamental operations.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import polar

from .linalg import max_abs, require_finite
from .states import SymplecticMap

__all__ = [
    "FundamentalOp",
    "Displacement",
    "Rotation",
    "Squeezer",
    "BogoliubovPair",
    "bogoliubov_of",
    "to_symplectic",
    "from_symplectic",
    "compose",
    "switch_disp_squeezer",
    "switch_squeezer_rotation",
    "switch_disp_rotation",
]


class FundamentalOp:
    """Base tag for the displacement / rotation / squeezer union."""


@dataclass
class Displacement(FundamentalOp):
    alpha: np.ndarray

    def __post_init__(self):
        self.alpha = np.atleast_1d(np.asarray(self.alpha, dtype=complex))
        require_finite(self.alpha, "displacement amplitude")


@dataclass
class Rotation(FundamentalOp):
    phi: np.ndarray  # Hermitian generator, E = exp(i phi)

    def __post_init__(self):
        self.phi = np.atleast_2d(np.asarray(self.phi, dtype=complex))
        require_finite(self.phi, "rotation generator")
        defect = max_abs(self.phi - self.phi.conj().T)
        if defect > 1e-10:
            raise ValueError(f"rotation generator not Hermitian: residual {defect:.3e}")


@dataclass
class Squeezer(FundamentalOp):
    z: np.ndarray  # symmetric squeezing matrix, polar form z = r exp(i theta)

    def __post_init__(self):
        self.z = np.atleast_2d(np.asarray(self.z, dtype=complex))
        require_finite(self.z, "squeezing matrix")
        defect = max_abs(self.z - self.z.T)
        if defect > 1e-10:
            raise ValueError(f"squeezing matrix not symmetric: residual {defect:.3e}")


@dataclass
class BogoliubovPair:
    """Heisenberg-picture data (E, F, alpha) of a Gaussian unitary."""

    e: np.ndarray
    f: np.ndarray
    alpha: np.ndarray = None

    def __post_init__(self):
        self.e = np.atleast_2d(np.asarray(self.e, dtype=complex))
        self.f = np.atleast_2d(np.asarray(self.f, dtype=complex))
        if self.alpha is None:
            self.alpha = np.zeros(self.e.shape[0], dtype=complex)
        self.alpha = np.atleast_1d(np.asarray(self.alpha, dtype=complex))
        require_finite(self.e, "E")
        require_finite(self.f, "F")
        require_finite(self.alpha, "alpha")
        n = self.e.shape[0]
        if self.e.shape != (n, n) or self.f.shape != (n, n) or self.alpha.size != n:
            raise ValueError("E, F must be N x N and alpha length N")
        res = max_abs(self.e @ self.f.T - self.f @ self.e.T)
        if res > 1e-9:
            raise ValueError(f"constraint E F^T = F E^T violated: residual {res:.3e}")
        res = max_abs(self.e @ self.e.conj().T - self.f @ self.f.conj().T - np.eye(n))
        if res > 1e-9:
            raise ValueError(f"constraint E E^dag = F F^dag + I violated: residual {res:.3e}")

    @property
    def nmodes(self):
        return self.e.shape[0]


def _func_hermitian(h, func):
    """func applied to a Hermitian matrix through its eigendecomposition."""
    vals, vecs = np.linalg.eigh(h)
    return vecs @ np.diag(func(vals)) @ vecs.conj().T


def expm_i_hermitian(phi):
    """exp(i phi) for Hermitian phi."""
    return _func_hermitian(np.asarray(phi, dtype=complex), lambda v: np.exp(1j * v))


def polar_squeeze(z):
    """Left polar factors (r, w) of a squeezing matrix: z = r w.

    r = (z z^dag)^(1/2) is Hermitian PSD and w unitary; on the kernel of r
    the unitary factor is an arbitrary completion (identity for diagonal
    nonnegative z) and never enters sinh(r) w.
    """
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    if max_abs(z) == 0.0:
        return np.zeros_like(z), np.eye(z.shape[0], dtype=complex)
    w, r = polar(z, side="left")
    return r, w


def bogoliubov_of(op):
    """Bogoliubov pair of a fundamental Gaussian operation.

    Displacement(alpha): E = I, F = 0.  Rotation(phi): E = exp(i phi),
    F = 0.  Squeezer(z = r exp(i theta)): E = cosh(r),
    F = sinh(r) exp(i theta), with the matrix functions evaluated through
    the eigendecomposition of the Hermitian polar factor r.
    """
    if isinstance(op, Displacement):
        n = op.alpha.size
        return BogoliubovPair(e=np.eye(n, dtype=complex), f=np.zeros((n, n), dtype=complex), alpha=op.alpha)
    if isinstance(op, Rotation):
        n = op.phi.shape[0]
        return BogoliubovPair(e=expm_i_hermitian(op.phi), f=np.zeros((n, n), dtype=complex))
    if isinstance(op, Squeezer):
        r, w = polar_squeeze(op.z)
        return BogoliubovPair(e=_func_hermitian(r, np.cosh), f=_func_hermitian(r, np.sinh) @ w)
    raise TypeError(f"not a fundamental Gaussian operation: {op!r}")


def to_symplectic(pair):
    """Quadrature-picture map of a Bogoliubov pair.

    With q = a + a^dag and p = -i(a - a^dag) the 2x2 block of S coupling
    mode j to mode k is [[Re(E+F), Im(F-E)], [Im(E+F), Re(E-F)]]_{jk} and
    d = (2 Re alpha_1, 2 Im alpha_1, ...).
    """
    n = pair.nmodes
    s = np.zeros((2 * n, 2 * n))
    s[0::2, 0::2] = (pair.e + pair.f).real
    s[0::2, 1::2] = (pair.f - pair.e).imag
    s[1::2, 0::2] = (pair.e + pair.f).imag
    s[1::2, 1::2] = (pair.e - pair.f).real
    d = np.zeros(2 * n)
    d[0::2] = 2 * pair.alpha.real
    d[1::2] = 2 * pair.alpha.imag
    return SymplecticMap(s=s, d=d)


def from_symplectic(smap):
    """Inverse of `to_symplectic`; input symplectic to 1e-9 (validated by
    SymplecticMap)."""
    s = smap.s
    a = s[0::2, 0::2]
    b = s[0::2, 1::2]
    c = s[1::2, 0::2]
    dd = s[1::2, 1::2]
    e = (a + dd) / 2 + 1j * (c - b) / 2
    f = (a - dd) / 2 + 1j * (c + b) / 2
    alpha = (smap.d[0::2] + 1j * smap.d[1::2]) / 2
    return BogoliubovPair(e=e, f=f, alpha=alpha)


def compose(first, then):
    """Bogoliubov pair of `then` applied after `first`.

    Matches the symplectic composition (S2 S1, S2 d1 + d2).
    """
    if first.nmodes != then.nmodes:
        raise ValueError(
            f"mode mismatch: composing {first.nmodes}-mode with {then.nmodes}-mode operation"
        )
    return BogoliubovPair(
        e=then.e @ first.e + then.f @ first.f.conj(),
        f=then.e @ first.f + then.f @ first.e.conj(),
        alpha=then.e @ first.alpha + then.f @ first.alpha.conj() + then.alpha,
    )


def switch_disp_squeezer(z, alpha):
    """beta such that D(alpha) S(z) = S(z) D(beta).

    beta = cosh(r) alpha - sinh(r) exp(i theta) alpha*, with z = r exp(i theta).
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    r, w = polar_squeeze(z)
    return _func_hermitian(r, np.cosh) @ alpha - _func_hermitian(r, np.sinh) @ w @ alpha.conj()


def switch_squeezer_rotation(phi, z):
    """z' such that S(z) R(phi) = R(phi) S(z'): z' = e^{-i phi} z e^{-i phi^T}."""
    u = expm_i_hermitian(-np.atleast_2d(np.asarray(phi, dtype=complex)))
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    return u @ z @ u.T


def switch_disp_rotation(phi, alpha):
    """gamma such that D(alpha) R(phi) = R(phi) D(gamma): gamma = e^{-i phi} alpha."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    return expm_i_hermitian(-np.atleast_2d(np.asarray(phi, dtype=complex))) @ alpha
