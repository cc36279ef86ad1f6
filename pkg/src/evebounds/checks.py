"""Self-check suites: each suite exercises one invariant family and
reports its worst residual against a fixed tolerance.

Used by the command line (`--check`) to gate scans on a healthy build.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .blochmessiah import bloch_messiah, factors_to_circuit
from .bounds import bm_get_entropy, bm_gme_entropy, eb_qpsk_entropy, gram_matrix
from .cloner import (
    ChannelParams,
    bs_symplectic,
    displaced_thermal_ensemble,
    eve_reduced_covariance,
    initial_covariance,
    qpsk,
)
from .linalg import max_abs, takagi_symmetric_unitary, unitarity_defect
from .states import (
    GaussianState,
    apply_symplectic,
    average_covariance,
    entropy_from_cov,
    partial_trace_modes,
    standard_symplectic_spectrum,
    williamson_standard_two_mode,
)
from .unitaries import (
    BogoliubovPair,
    Rotation,
    Squeezer,
    bogoliubov_of,
    compose,
    from_symplectic,
    to_symplectic,
)

__all__ = ["CheckResult", "run_checks", "format_report"]


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return self.residual <= self.tolerance


def random_pair(rng, nmodes, with_displacement=False):
    """Random Gaussian unitary built by composing fundamental operations."""
    pair = bogoliubov_of(Rotation(np.zeros((nmodes, nmodes))))
    for _ in range(3):
        herm = rng.normal(size=(nmodes, nmodes)) + 1j * rng.normal(size=(nmodes, nmodes))
        herm = (herm + herm.conj().T) / 2
        sym = rng.normal(size=(nmodes, nmodes)) + 1j * rng.normal(size=(nmodes, nmodes))
        sym = 0.25 * (sym + sym.T)
        pair = compose(pair, bogoliubov_of(Rotation(herm)))
        pair = compose(pair, bogoliubov_of(Squeezer(sym)))
    if with_displacement:
        alpha = rng.normal(size=nmodes) + 1j * rng.normal(size=nmodes)
        pair = BogoliubovPair(e=pair.e, f=pair.f, alpha=alpha)
    return pair


def check_bogoliubov_roundtrip():
    rng = np.random.default_rng(11)
    worst = 0.0
    for trial in range(20):
        pair = random_pair(rng, 1 + trial % 3, with_displacement=True)
        back = from_symplectic(to_symplectic(pair))
        worst = max(worst, max_abs(back.e - pair.e), max_abs(back.f - pair.f),
                    max_abs(back.alpha - pair.alpha))
    return CheckResult("bogoliubov-roundtrip", worst, 1e-10)


def check_bloch_messiah():
    rng = np.random.default_rng(23)
    worst = 0.0
    for trial in range(50):
        pair = random_pair(rng, 1 + trial % 3)
        factors = bloch_messiah(pair)
        e, f = factors.reconstruct()
        worst = max(worst, max_abs(e - pair.e), max_abs(f - pair.f))
        circuit = factors_to_circuit(factors)
        total = bogoliubov_of(circuit[0])
        for op in circuit[1:]:
            total = compose(total, bogoliubov_of(op))
        worst = max(worst, max_abs(total.e - pair.e), max_abs(total.f - pair.f))
    return CheckResult("bloch-messiah-reconstruction", worst, 1e-9)


def check_takagi():
    rng = np.random.default_rng(37)
    worst = 0.0
    for _ in range(20):
        n = rng.integers(1, 5)
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q = np.linalg.qr(m)[0]
        g = q @ q.T
        d = takagi_symmetric_unitary(g)
        worst = max(worst, max_abs(d @ d.T - g), unitarity_defect(d))
    return CheckResult("takagi-reconstruction", worst, 1e-9)


def check_williamson_grid():
    worst = 0.0
    for tau in np.linspace(0.05, 0.95, 10):
        for nbar in (0.01, 0.02, 0.1):
            std = eve_reduced_covariance(ChannelParams(tau=tau, nbar=nbar))
            smap, nu1, nu2 = williamson_standard_two_mode(std)
            rebuilt = smap.s @ np.diag([nu2, nu2, nu1, nu1]) @ smap.s.T
            worst = max(worst, max_abs(rebuilt - std.as_matrix()))
            w1, w2 = smap.s[0, 0], smap.s[0, 2]
            worst = max(worst, abs(w1 * w1 - w2 * w2 - 1))
    return CheckResult("williamson-grid", worst, 1e-9)


def check_eca_pipeline():
    worst = 0.0
    for tau in np.linspace(0.05, 0.95, 10):
        for nbar in (0.01, 0.02, 0.1):
            params = ChannelParams(tau=tau, nbar=nbar)
            state = GaussianState(mean=np.zeros(6), cov=initial_covariance(params))
            reduced = partial_trace_modes(apply_symplectic(state, bs_symplectic(params)), keep=(1, 2))
            worst = max(worst, max_abs(reduced.cov - eve_reduced_covariance(params).as_matrix()))
            nu1, nu2 = standard_symplectic_spectrum(eve_reduced_covariance(params))
            worst = max(worst, abs(nu1 - (2 * (1 - tau) * nbar + 1)), abs(nu2 - 1))
    return CheckResult("eca-pipeline", worst, 1e-9)


def check_entropy_unitary_invariance():
    worst = 0.0
    constellation = qpsk(1.0)
    for tau, nbar in ((0.3, 0.01), (0.5, 0.02), (0.8, 0.1)):
        params = ChannelParams(tau=tau, nbar=nbar)
        ens = displaced_thermal_ensemble(constellation, params)
        avg = average_covariance(ens.means, ens.probs, ens.common_covariance())
        smap, _, _ = williamson_standard_two_mode(eve_reduced_covariance(params))
        conjugated = smap.s @ avg @ smap.s.T
        worst = max(worst, abs(entropy_from_cov(avg) - entropy_from_cov(conjugated)))
    return CheckResult("entropy-unitary-invariance", worst, 1e-9)


def check_estimator_ordering():
    worst = 0.0
    constellation = qpsk(1.0)
    for nbar in (0.01, 0.02):
        for tau in np.linspace(0.05, 0.95, 10):
            params = ChannelParams(tau=tau, nbar=nbar)
            gme = bm_gme_entropy(constellation, params)
            get = bm_get_entropy(constellation, params)
            eb = eb_qpsk_entropy(1.0, params)
            worst = max(worst, gme - get, get - eb, 0.0)
    return CheckResult("estimator-ordering", worst, 1e-9)


def check_gram_validity():
    worst = 0.0
    constellation = qpsk(1.0)
    for variant in ("pure-exact", "hs-normalized"):
        for tau in (0.2, 0.6, 0.9):
            ens = displaced_thermal_ensemble(constellation, ChannelParams(tau=tau, nbar=0.02))
            gm = gram_matrix(ens, variant=variant)
            eigs = np.linalg.eigvalsh(gm.matrix)
            worst = max(
                worst,
                max_abs(gm.matrix - gm.matrix.conj().T),
                abs(float(np.trace(gm.matrix).real) - 1.0),
                max(0.0, -float(eigs.min())),
            )
    return CheckResult("gram-validity", worst, 1e-8)


def random_rule_params(rng):
    """Rule parameters within |alpha| <= 1 and squeeze strength <= 0.5."""
    alpha = rng.normal(size=2) + 1j * rng.normal(size=2)
    alpha *= min(1.0, 1.0 / max(abs(alpha)))
    herm = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    herm = (herm + herm.conj().T) / 2
    sym = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    sym = (sym + sym.T) / 2
    sym *= min(1.0, 0.5 / np.linalg.svd(sym, compute_uv=False)[0])
    return alpha, herm, sym


def check_switching_rules_fock():
    # cutoff 50: at the |alpha| = 1, r = 0.5 corner the displaced-squeezed
    # probes still carry ~1e-8 population near level 30, which floors the
    # trace distance around 1e-4 there.
    rng = np.random.default_rng(53)
    worst = 0.0
    space = fock.FockSpace(cutoff=50, nmodes=2)
    for _ in range(3):
        alpha, herm, sym = random_rule_params(rng)
        worst = max(worst, _switch_rule_distances(space, alpha, herm, sym, rng))
    return CheckResult("switching-rules-fock", worst, 1e-6)


def _random_gaussian_ket(space, rng):
    ket = np.zeros(space.dim, dtype=complex)
    ket[0] = 1.0
    sym = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    sym = (sym + sym.T) / 2
    sym *= min(1.0, 0.2 / np.linalg.svd(sym, compute_uv=False)[0])
    alpha = rng.normal(size=2) + 1j * rng.normal(size=2)
    alpha *= min(1.0, 0.3 / max(abs(alpha)))
    ket = fock.apply_generator(fock.squeeze_generator(space, sym), ket)
    ket = fock.apply_generator(fock.displacement_generator(space, alpha), ket)
    return ket / np.linalg.norm(ket)


def _pure_trace_distance(k1, k2):
    overlap = abs(np.vdot(k1, k2)) ** 2
    return math.sqrt(max(0.0, 1.0 - overlap))


def _switch_rule_distances(space, alpha, herm, sym, rng):
    from .unitaries import switch_disp_rotation, switch_disp_squeezer, switch_squeezer_rotation

    ket = _random_gaussian_ket(space, rng)
    gen_d = fock.displacement_generator(space, alpha)
    gen_s = fock.squeeze_generator(space, sym)
    gen_r = fock.rotation_generator(space, herm)

    worst = 0.0
    # D(alpha) S(z) = S(z) D(beta)
    lhs = fock.apply_generator(gen_d, fock.apply_generator(gen_s, ket))
    beta = switch_disp_squeezer(sym, alpha)
    rhs = fock.apply_generator(gen_s, fock.apply_generator(fock.displacement_generator(space, beta), ket))
    worst = max(worst, _pure_trace_distance(lhs, rhs))
    # S(z) R(phi) = R(phi) S(z')
    lhs = fock.apply_generator(gen_s, fock.apply_generator(gen_r, ket))
    zp = switch_squeezer_rotation(herm, sym)
    rhs = fock.apply_generator(gen_r, fock.apply_generator(fock.squeeze_generator(space, zp), ket))
    worst = max(worst, _pure_trace_distance(lhs, rhs))
    # D(alpha) R(phi) = R(phi) D(gamma)
    lhs = fock.apply_generator(gen_d, fock.apply_generator(gen_r, ket))
    gamma = switch_disp_rotation(herm, alpha)
    rhs = fock.apply_generator(gen_r, fock.apply_generator(fock.displacement_generator(space, gamma), ket))
    worst = max(worst, _pure_trace_distance(lhs, rhs))
    return worst


def check_oracle_entropy_agreement():
    worst = 0.0
    space = fock.FockSpace(cutoff=30)
    for nbar in (0.02, 0.5, 1.0):
        exact = fock.fock_entropy(fock.fock_thermal(nbar, space).rho)
        gauss = entropy_from_cov((2 * nbar + 1) * np.eye(2))
        worst = max(worst, abs(exact - gauss))
    two_mode = fock.FockSpace(cutoff=20, nmodes=2)
    marginal = fock.fock_partial_trace(fock.fock_tmsv(0.3, two_mode).rho, (21, 21), keep=(0,))
    worst = max(worst, abs(fock.fock_entropy(marginal) - entropy_from_cov(1.6 * np.eye(2))))
    return CheckResult("oracle-entropy-agreement", worst, 1e-5)


SUITES = (
    check_bogoliubov_roundtrip,
    check_bloch_messiah,
    check_takagi,
    check_williamson_grid,
    check_eca_pipeline,
    check_entropy_unitary_invariance,
    check_estimator_ordering,
    check_gram_validity,
    check_switching_rules_fock,
    check_oracle_entropy_agreement,
)


def run_checks():
    """Run every suite; failures are report content, not exceptions."""
    return [suite() for suite in SUITES]


def format_report(results):
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name} max_residual={r.residual:.3e} tol={r.tolerance:.0e} {status}")
    return lines
