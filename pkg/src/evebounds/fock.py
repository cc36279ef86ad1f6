"""Brute-force reference calculations in a truncated Fock space.

Dense density-matrix simulation at desk scale, used to validate the
phase-space pipeline: moment extraction, operator-reordering identities,
exact ensemble entropies of the eavesdropper state, and the cross moment
of the purification of a four-state coherent ensemble.

Unitaries are exponentials of the truncated anti-Hermitian generator, so
they stay exactly unitary; truncation error shows up as population
reaching the top of the photon ladder, which is what the leakage checks
measure.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

__all__ = [
    "FockSpace",
    "FockState",
    "FockConvergenceError",
    "OracleEntropy",
    "fock_coherent",
    "fock_thermal",
    "fock_tmsv",
    "fock_displacement",
    "fock_rotation",
    "fock_squeezer",
    "fock_bs",
    "fock_partial_trace",
    "fock_entropy",
    "fock_hs_product",
    "fock_moments",
    "eve_exact_entropy",
    "eb_z4",
]

# Truncation leakage above this disqualifies a value as a reference.
DEFICIT_LIMIT = 1e-6


class FockConvergenceError(RuntimeError):
    """Raised when a truncated computation fails its convergence check."""


@dataclass(frozen=True)
class FockSpace:
    """Truncated tensor-product Fock space: `cutoff`+1 levels per mode."""

    cutoff: int
    nmodes: int = 1

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if self.nmodes < 1:
            raise ValueError(f"nmodes must be >= 1, got {self.nmodes}")

    @property
    def ldim(self):
        return self.cutoff + 1

    @property
    def dim(self):
        return self.ldim**self.nmodes

    def destroy(self, mode):
        """Sparse annihilation operator acting on `mode` (0-based)."""
        if not 0 <= mode < self.nmodes:
            raise ValueError(f"mode {mode} out of range for {self.nmodes} modes")
        d = self.ldim
        a = sp.diags(np.sqrt(np.arange(1, d)), offsets=1, format="csr")
        ops = [sp.identity(d, format="csr")] * self.nmodes
        ops[mode] = a
        out = ops[0]
        for op in ops[1:]:
            out = sp.kron(out, op, format="csr")
        return out


@dataclass
class FockState:
    """Dense density matrix plus the trace lost to truncation."""

    rho: np.ndarray
    trace_deficit: float

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=complex)
        herm = float(np.max(np.abs(self.rho - self.rho.conj().T)))
        if herm > 1e-9:
            raise ValueError(f"density matrix not Hermitian: residual {herm:.3e}")
        min_eig = float(np.linalg.eigvalsh(self.rho).min())
        if min_eig < -1e-9:
            raise ValueError(f"density matrix not PSD: min eigenvalue {min_eig:.3e}")


def coherent_ket(alpha, cutoff):
    """(ket, deficit) for |alpha> truncated at `cutoff` photons."""
    alpha = complex(alpha)
    c = np.zeros(cutoff + 1, dtype=complex)
    c[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff + 1):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    norm2 = float(np.vdot(c, c).real)
    deficit = 1.0 - norm2
    return c / math.sqrt(norm2), deficit


def tmsv_ket(nbar, cutoff):
    """(ket, deficit) for a two-mode squeezed vacuum, Schmidt coefficients
    sqrt(1 - lam^2) lam^n with lam = tanh(arccosh(2 nbar + 1) / 2).

    The coefficients are taken with a uniform positive sign, which makes
    the q-q correlation of the two arms positive, matching the phase-space
    convention used for the covariance matrices in this package.
    """
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar}")
    nu = 2 * nbar + 1
    lam = math.tanh(0.5 * math.acosh(nu))
    d = cutoff + 1
    c = math.sqrt(max(1 - lam * lam, 0.0)) * lam ** np.arange(d) if lam > 0 else np.eye(1, d, 0)[0]
    psi = np.zeros((d, d))
    psi[np.arange(d), np.arange(d)] = c
    psi = psi.reshape(-1)
    norm2 = float(psi @ psi)
    deficit = 1.0 - norm2
    return (psi / math.sqrt(norm2)).astype(complex), deficit


def fock_coherent(alpha, space):
    """Coherent state |alpha><alpha| on a single-mode space."""
    if space.nmodes != 1:
        raise ValueError("fock_coherent builds a single-mode state")
    ket, deficit = coherent_ket(alpha, space.cutoff)
    _require_deficit(deficit, f"coherent alpha={alpha}")
    return FockState(rho=np.outer(ket, ket.conj()), trace_deficit=deficit)


def fock_thermal(nbar, space):
    """Thermal state of mean photon number `nbar` on a single-mode space."""
    if space.nmodes != 1:
        raise ValueError("fock_thermal builds a single-mode state")
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar}")
    n = np.arange(space.ldim)
    p = (1.0 / (1.0 + nbar)) * (nbar / (1.0 + nbar)) ** n if nbar > 0 else np.eye(1, space.ldim, 0)[0]
    deficit = 1.0 - float(p.sum())
    _require_deficit(deficit, f"thermal nbar={nbar}")
    return FockState(rho=np.diag(p / p.sum()).astype(complex), trace_deficit=deficit)


def fock_tmsv(nbar, space):
    """Two-mode squeezed vacuum density matrix."""
    if space.nmodes != 2:
        raise ValueError("fock_tmsv builds a two-mode state")
    ket, deficit = tmsv_ket(nbar, space.cutoff)
    _require_deficit(deficit, f"tmsv nbar={nbar}")
    return FockState(rho=np.outer(ket, ket.conj()), trace_deficit=deficit)


def _require_deficit(deficit, what):
    if deficit > DEFICIT_LIMIT:
        raise FockConvergenceError(
            f"truncation leakage {deficit:.3e} > {DEFICIT_LIMIT:.0e} for {what}; raise the cutoff"
        )


def displacement_generator(space, alpha):
    """Anti-Hermitian generator of D(alpha) = exp(sum alpha_k a_k^dag - h.c.)."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    if alpha.size != space.nmodes:
        raise ValueError("one displacement amplitude per mode required")
    g = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for k, a_k in enumerate(alpha):
        a = space.destroy(k)
        g = g + a_k * a.conj().T - np.conj(a_k) * a
    return g


def rotation_generator(space, phi):
    """Anti-Hermitian generator of R(phi) = exp(i a^dag phi a), phi Hermitian."""
    phi = np.atleast_2d(np.asarray(phi, dtype=complex))
    ops = [space.destroy(k) for k in range(space.nmodes)]
    g = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for j in range(space.nmodes):
        for k in range(space.nmodes):
            if phi[j, k] != 0:
                g = g + 1j * phi[j, k] * (ops[j].conj().T @ ops[k])
    return g


def squeeze_generator(space, z):
    """Anti-Hermitian generator of S(z) = exp((a^dag z a^dag - a z^dag a) / 2)."""
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    ops = [space.destroy(k) for k in range(space.nmodes)]
    g = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for j in range(space.nmodes):
        for k in range(space.nmodes):
            if z[j, k] != 0:
                g = g + 0.5 * z[j, k] * (ops[j].conj().T @ ops[k].conj().T)
                g = g - 0.5 * np.conj(z[j, k]) * (ops[j] @ ops[k])
    return g


def bs_generator(space, tau, modes=(0, 1)):
    """Generator of the beam splitter exp(theta (a^dag b - a b^dag)).

    cos(theta) = sqrt(tau), so the outputs are t a + r b and -r a + t b
    with t = sqrt(tau), r = sqrt(1 - tau).
    """
    if not 0 <= tau <= 1:
        raise ValueError(f"transmittance must lie in [0, 1], got {tau}")
    theta = math.acos(math.sqrt(tau))
    a = space.destroy(modes[0])
    b = space.destroy(modes[1])
    return theta * (a.conj().T @ b - a @ b.conj().T)


def fock_unitary(gen):
    """Dense unitary exp(gen) of an anti-Hermitian generator.

    Diagonalizes the Hermitian matrix i*gen, so the result is exactly
    unitary up to round-off even on the truncated ladder.
    """
    h = 1j * gen.toarray()
    vals, vecs = np.linalg.eigh(h)
    return vecs @ np.diag(np.exp(-1j * vals)) @ vecs.conj().T


def apply_generator(gen, ket):
    """exp(gen) @ ket without forming the dense exponential."""
    return expm_multiply(gen, ket)


def fock_displacement(alpha, space):
    return fock_unitary(displacement_generator(space, alpha))


def fock_rotation(phi, space):
    return fock_unitary(rotation_generator(space, phi))


def fock_squeezer(z, space):
    return fock_unitary(squeeze_generator(space, z))


def fock_bs(tau, space, modes=(0, 1)):
    return fock_unitary(bs_generator(space, tau, modes))


def fock_partial_trace(rho, dims, keep):
    """Partial trace of a dense multimode density matrix.

    Args:
        rho: density matrix over a tensor product of spaces of sizes `dims`.
        dims: per-mode dimensions.
        keep: mode indices (0-based) to keep, in increasing order.
    """
    dims = tuple(int(d) for d in dims)
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"invalid mode selection {keep} for {n} modes")
    t = np.asarray(rho).reshape(dims + dims)
    for mode in reversed([m for m in range(n) if m not in keep]):
        nleft = t.ndim // 2
        t = np.trace(t, axis1=mode, axis2=mode + nleft)
    dkeep = int(np.prod([dims[m] for m in keep]))
    return t.reshape(dkeep, dkeep)


def fock_entropy(rho, base="bits"):
    """Von Neumann entropy by eigendecomposition; eigenvalues <= 1e-15 skipped."""
    if base not in ("bits", "nats"):
        raise ValueError(f"log base must be 'bits' or 'nats', got {base!r}")
    eigs = np.linalg.eigvalsh(rho)
    eigs = eigs[eigs > 1e-15]
    logs = np.log2(eigs) if base == "bits" else np.log(eigs)
    return float(-(eigs * logs).sum())


def fock_hs_product(rho1, rho2):
    """Hilbert-Schmidt product tr(rho1 rho2) of two density matrices."""
    val = complex(np.sum(np.asarray(rho1) * np.asarray(rho2).T))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"tr(rho1 rho2) not real: imaginary part {val.imag:.3e}")
    return float(val.real)


def fock_moments(rho, space):
    """Quadrature mean vector and covariance matrix of a Fock-basis state.

    Uses q = a + a^dag, p = -i(a - a^dag) and the symmetrized second
    moments, matching the phase-space convention of `evebounds.states`.
    """
    rho = np.asarray(rho, dtype=complex)
    quads = []
    for k in range(space.nmodes):
        a = space.destroy(k).toarray()
        quads.append(a + a.conj().T)
        quads.append(-1j * (a - a.conj().T))
    mean = np.array([np.trace(rho @ r).real for r in quads])
    n = len(quads)
    cov = np.zeros((n, n))
    for j in range(n):
        for k in range(j, n):
            second = np.trace(rho @ quads[j] @ quads[k])
            cov[j, k] = cov[k, j] = second.real - mean[j] * mean[k]
    return mean, cov


@dataclass
class OracleEntropy:
    """Exact-entropy result with its cutoff-sweep convergence record."""

    value: float
    value_check: float
    cutoff: int
    check_cutoff: int

    @property
    def drift(self):
        return abs(self.value - self.value_check)


def _eve_average_state(constellation, params, cutoff):
    """Average eavesdropper density matrix on her two modes, plus leakage.

    For each amplitude: coherent (x) TMSV on modes (A, C, E), beam splitter
    on (A, C), trace out the first output.  Works with pure-state tensors
    until the final partial trace.
    """
    d = cutoff + 1
    psi_ce, tmsv_deficit = tmsv_ket(params.nbar, cutoff)
    psi_ce = psi_ce.reshape(d, d)
    bs2 = fock_bs(params.tau, FockSpace(cutoff=cutoff, nmodes=2)).reshape(d, d, d, d)

    rho = np.zeros((d * d, d * d), dtype=complex)
    worst_leak = tmsv_deficit
    for amp, prob in zip(constellation.amplitudes, constellation.probs):
        ket_a, a_deficit = coherent_ket(amp, cutoff)
        psi = np.einsum("a,ce->ace", ket_a, psi_ce)
        out = np.einsum("bdac,ace->bde", bs2, psi)
        top = (
            (np.abs(out[-1, :, :]) ** 2).sum()
            + (np.abs(out[:, -1, :]) ** 2).sum()
            + (np.abs(out[:, :, -1]) ** 2).sum()
        )
        worst_leak = max(worst_leak, a_deficit, float(top))
        rho += prob * np.einsum("bde,bfg->defg", out, out.conj()).reshape(d * d, d * d)
    return rho, worst_leak


def eve_exact_entropy(constellation, params, cutoff=18, base="bits"):
    """Exact average-state entropy of the eavesdropper, by density matrix.

    The same entropy is recomputed at cutoff-5; the run only counts as
    converged if the two values agree within 1e-4 (and truncation leakage
    stays below 1e-6), otherwise FockConvergenceError is raised and no
    value is returned.

    Returns:
        OracleEntropy: entropy in `base` units plus the sweep record.
    """
    if cutoff < 7:
        raise ValueError(f"cutoff must be >= 7 to allow the convergence sweep, got {cutoff}")
    values = []
    for c in (cutoff, cutoff - 5):
        rho, leak = _eve_average_state(constellation, params, c)
        if leak > DEFICIT_LIMIT:
            raise FockConvergenceError(
                f"truncation leakage {leak:.3e} > {DEFICIT_LIMIT:.0e} at cutoff {c}"
            )
        values.append(fock_entropy(rho, base=base))
    result = OracleEntropy(
        value=values[0], value_check=values[1], cutoff=cutoff, check_cutoff=cutoff - 5
    )
    if result.drift >= 1e-4:
        raise FockConvergenceError(
            f"entropy drift {result.drift:.3e} >= 1e-4 between cutoffs {cutoff} and {cutoff - 5}"
        )
    return result


def _qpsk_average_state(alpha, cutoff):
    d = cutoff + 1
    rho = np.zeros((d, d), dtype=complex)
    worst = 0.0
    for k in range(4):
        ket, deficit = coherent_ket(alpha * np.exp(1j * (2 * k + 1) * np.pi / 4), cutoff)
        worst = max(worst, deficit)
        rho += 0.25 * np.outer(ket, ket.conj())
    return rho, worst


def _z4_at_cutoff(alpha, cutoff):
    rho, deficit = _qpsk_average_state(alpha, cutoff)
    _require_deficit(deficit, f"qpsk alpha={alpha}")
    lam, vecs = np.linalg.eigh(rho)
    sel = lam > 1e-12
    lam, vecs = lam[sel], vecs[:, sel]

    d = cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, d)), k=1)
    q = a + a.conj().T
    p = -1j * (a - a.conj().T)

    c = np.sqrt(lam)
    moments = {}
    for name, op in (("q", q), ("p", p)):
        moments_a = vecs.conj().T @ op @ vecs
        moments_b = vecs.T @ op @ vecs.conj()
        moments[name] = (moments_a, moments_b)

    def cross(na, nb):
        ma = moments[na][0]
        mb = moments[nb][1]
        return complex(np.einsum("j,k,jk,jk->", c, c, ma, mb))

    z_qq = cross("q", "q")
    z_pp = cross("p", "p")
    z_qp = cross("q", "p")
    z_pq = cross("p", "q")
    for name, val in (("qq", z_qq), ("pp", z_pp), ("qp", z_qp), ("pq", z_pq)):
        if abs(val.imag) > 1e-8:
            raise FockConvergenceError(f"purification {name} moment not real: {val.imag:.3e}")
    if abs(z_qp.real) > 1e-8 or abs(z_pq.real) > 1e-8:
        raise FockConvergenceError("purification q-p cross moments did not vanish")
    if abs(z_pp.real + z_qq.real) > 1e-8 * max(1.0, abs(z_qq.real)):
        raise FockConvergenceError("purification does not have the (Z4, -Z4) correlation structure")

    x_a = float(np.trace(rho @ q @ q).real)
    x_expected = 1 + 2 * alpha * alpha
    if abs(x_a - x_expected) > 1e-6:
        raise FockConvergenceError(
            f"ensemble variance check failed: <q^2> = {x_a!r}, expected {x_expected!r}"
        )
    x_b = float(np.einsum("j,jj->", lam, (vecs.T @ q @ q @ vecs.conj()).real))
    if abs(x_b - x_expected) > 1e-6:
        raise FockConvergenceError("purification partner variance does not reproduce the ensemble")

    z4 = z_qq.real
    if z4 < 0:
        raise FockConvergenceError(f"purification cross moment came out negative: {z4!r}")
    return z4


@lru_cache(maxsize=128)
def eb_z4(alpha, cutoff=40):
    """q-q cross moment of the Schmidt purification of the four-state
    coherent average state, with partner vectors conjugated in the Fock
    basis (which makes the moment nonnegative).

    Cached by value; convergence is enforced by a cutoff-5 sweep.
    """
    if alpha <= 0:
        raise ValueError(f"amplitude must be positive, got {alpha}")
    if cutoff < 7:
        raise ValueError(f"cutoff must be >= 7 to allow the convergence sweep, got {cutoff}")
    fine = _z4_at_cutoff(float(alpha), int(cutoff))
    coarse = _z4_at_cutoff(float(alpha), int(cutoff) - 5)
    if abs(fine - coarse) >= 1e-6:
        raise FockConvergenceError(
            f"Z4 drift {abs(fine - coarse):.3e} >= 1e-6 between cutoffs {cutoff} and {cutoff - 5}"
        )
    return fine
