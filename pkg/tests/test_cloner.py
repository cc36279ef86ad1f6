import math

import numpy as np
import pytest

from evebounds import fock
from evebounds.cloner import (
    ChannelParams,
    Constellation,
    bs_symplectic,
    displaced_thermal_ensemble,
    eve_average_covariance,
    eve_conditional_mean,
    eve_reduced_covariance,
    initial_covariance,
    qpsk,
    qpsk_average_covariance,
)
from evebounds.states import (
    GaussianState,
    apply_symplectic,
    average_covariance,
    entropy_from_cov,
    make_tmsv,
    omega,
    partial_trace_modes,
    williamson_standard_two_mode,
)

GRID = [(tau, nbar) for tau in np.linspace(0.05, 0.95, 10) for nbar in (0.01, 0.02, 0.1)]


class TestParamsAndConstellation:
    def test_channel_params_derived(self):
        p = ChannelParams(tau=0.36, nbar=0.01)
        assert p.t == pytest.approx(0.6)
        assert p.r == pytest.approx(0.8)
        assert p.t**2 + p.r**2 == pytest.approx(1.0)

    def test_channel_params_validation(self):
        with pytest.raises(ValueError):
            ChannelParams(tau=1.2, nbar=0.0)
        with pytest.raises(ValueError):
            ChannelParams(tau=0.5, nbar=-0.01)

    def test_qpsk_phases(self):
        c = qpsk(1.0)
        expected = [np.exp(1j * k * np.pi / 4) for k in (1, 3, 5, 7)]
        assert np.allclose(c.amplitudes, expected)
        assert np.allclose(np.abs(c.amplitudes.real), 1 / math.sqrt(2))
        assert np.allclose(np.abs(c.amplitudes.imag), 1 / math.sqrt(2))
        assert c.probs.sum() == pytest.approx(1.0)

    def test_qpsk_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            qpsk(0.0)

    def test_constellation_validation(self):
        with pytest.raises(ValueError, match="sum"):
            Constellation(amplitudes=[1.0, -1.0], probs=[0.5, 0.6])
        with pytest.raises(ValueError, match="nonnegative"):
            Constellation(amplitudes=[1.0, -1.0], probs=[1.5, -0.5])


class TestCovariancePipeline:
    def test_initial_covariance_vacuum_ancilla(self):
        assert np.allclose(initial_covariance(ChannelParams(tau=0.3, nbar=0.0)), np.eye(6))

    def test_initial_covariance_blocks(self):
        p = ChannelParams(tau=0.3, nbar=0.01)
        cov = initial_covariance(p)
        assert np.allclose(cov[:2, :2], np.eye(2))
        assert np.allclose(cov[2:, 2:], make_tmsv(0.01).cov)
        assert cov[2, 4] == pytest.approx(0.20100, abs=1e-5)

    def test_bs_identity_at_unit_transmittance(self):
        assert np.allclose(bs_symplectic(ChannelParams(tau=1.0, nbar=0.1)).s, np.eye(6))

    def test_bs_balanced(self):
        s = bs_symplectic(ChannelParams(tau=0.5, nbar=0.0)).s
        inv_sqrt2 = 1 / math.sqrt(2)
        assert np.allclose(s[0:2, 0:2], inv_sqrt2 * np.eye(2))
        assert np.allclose(s[0:2, 2:4], inv_sqrt2 * np.eye(2))
        assert np.allclose(s[2:4, 0:2], -inv_sqrt2 * np.eye(2))

    def test_bs_symplectic_form(self):
        s = bs_symplectic(ChannelParams(tau=0.3, nbar=0.0)).s
        assert np.max(np.abs(s @ omega(3) @ s.T - omega(3))) < 1e-12

    def test_eve_reduced_limits(self):
        full = eve_reduced_covariance(ChannelParams(tau=1.0, nbar=0.25))
        assert full.a == pytest.approx(full.b)
        assert full.c == pytest.approx(2 * math.sqrt(0.25**2 + 0.25))
        cut = eve_reduced_covariance(ChannelParams(tau=0.0, nbar=0.25))
        assert (cut.a, cut.b, cut.c) == (1.0, 1.5, 0.0)

    def test_eve_reduced_worked_point(self):
        std = eve_reduced_covariance(ChannelParams(tau=0.5, nbar=0.01))
        assert (std.a, std.b) == (1.01, 1.02)
        assert std.c == pytest.approx(0.142127, abs=1e-6)

    @pytest.mark.parametrize("tau,nbar", GRID)
    def test_pipeline_equality(self, tau, nbar):
        p = ChannelParams(tau=tau, nbar=nbar)
        state = GaussianState(mean=np.zeros(6), cov=initial_covariance(p))
        reduced = partial_trace_modes(apply_symplectic(state, bs_symplectic(p)), keep=(1, 2))
        assert np.max(np.abs(reduced.cov - eve_reduced_covariance(p).as_matrix())) < 1e-12

    @pytest.mark.parametrize("tau,nbar", [(0.3, 0.02), (0.7, 0.1)])
    def test_global_purity_bookkeeping(self, tau, nbar):
        # three-mode state is pure, so the eavesdropper's two modes carry
        # the same entropy as the receiver's single thermal mode
        p = ChannelParams(tau=tau, nbar=nbar)
        eve = entropy_from_cov(eve_reduced_covariance(p).as_matrix())
        bob = entropy_from_cov((2 * (1 - tau) * nbar + 1) * np.eye(2))
        assert abs(eve - bob) < 1e-9


class TestConditionalMean:
    def test_unit_transmittance(self):
        assert np.allclose(eve_conditional_mean(0.7 + 0.2j, ChannelParams(tau=1.0, nbar=0.0)), 0.0)

    def test_values(self):
        assert np.allclose(
            eve_conditional_mean(1.0, ChannelParams(tau=0.36, nbar=0.0)), [-1.6, 0, 0, 0]
        )
        assert np.allclose(
            eve_conditional_mean(np.exp(1j * np.pi / 4), ChannelParams(tau=0.0, nbar=0.0)),
            [-math.sqrt(2), -math.sqrt(2), 0, 0],
        )

    def test_matches_fock_oracle(self):
        # first and second moments of the conditional state, from the
        # three-mode pure-state simulation
        p = ChannelParams(tau=0.36, nbar=0.02)
        cutoff = 16
        d = cutoff + 1
        for alpha_i in (1.0, np.exp(1j * np.pi / 4)):
            ket_a, _ = fock.coherent_ket(alpha_i, cutoff)
            psi_ce, _ = fock.tmsv_ket(p.nbar, cutoff)
            psi = np.einsum("a,ce->ace", ket_a, psi_ce.reshape(d, d))
            bs2 = fock.fock_bs(p.tau, fock.FockSpace(cutoff=cutoff, nmodes=2)).reshape(d, d, d, d)
            out = np.einsum("bdac,ace->bde", bs2, psi)
            rho = np.einsum("bde,bfg->defg", out, out.conj()).reshape(d * d, d * d)
            mean, cov = fock.fock_moments(rho, fock.FockSpace(cutoff=cutoff, nmodes=2))
            assert np.allclose(mean, eve_conditional_mean(alpha_i, p), atol=1e-6)
            assert np.allclose(cov, eve_reduced_covariance(p).as_matrix(), atol=1e-5)


class TestDisplacedThermalEnsemble:
    def test_unit_transmittance_trivial(self):
        ens = displaced_thermal_ensemble(qpsk(1.0), ChannelParams(tau=1.0, nbar=0.05))
        assert np.allclose(ens.means, 0.0, atol=1e-12)
        assert ens.nu1p == pytest.approx(0.0, abs=1e-12)
        assert ens.nu2p == pytest.approx(0.0, abs=1e-12)

    def test_worked_point(self):
        ens = displaced_thermal_ensemble(qpsk(1.0), ChannelParams(tau=0.5, nbar=0.01))
        assert ens.nu1p == pytest.approx(0.005, abs=1e-12)
        assert ens.nu2p == pytest.approx(0.0, abs=1e-12)
        amps = ens.mode_amplitudes()
        assert np.allclose(np.abs(amps[:, 0]), 0.70886, atol=1e-5)
        assert np.allclose(np.abs(amps[:, 1]), 0.04987, atol=1e-5)

    def test_pure_loss_reduces_to_coherent(self):
        ens = displaced_thermal_ensemble(qpsk(0.8), ChannelParams(tau=0.0, nbar=0.0))
        amps = ens.mode_amplitudes()
        assert np.allclose(amps[:, 0], -qpsk(0.8).amplitudes, atol=1e-12)
        assert np.allclose(amps[:, 1], 0.0, atol=1e-12)
        assert ens.nu1p == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("tau,nbar", [(0.3, 0.01), (0.5, 0.02), (0.85, 0.1)])
    def test_closed_form_displacements(self, tau, nbar):
        p = ChannelParams(tau=tau, nbar=nbar)
        smap, _, _ = williamson_standard_two_mode(eve_reduced_covariance(p))
        w1, w2 = smap.s[0, 0], smap.s[0, 2]
        ens = displaced_thermal_ensemble(qpsk(1.0), p)
        amps = ens.mode_amplitudes()
        expected_1 = -w1 * p.r * qpsk(1.0).amplitudes
        expected_2 = w2 * p.r * np.conj(qpsk(1.0).amplitudes)
        assert np.max(np.abs(amps[:, 0] - expected_1)) < 1e-10
        assert np.max(np.abs(amps[:, 1] - expected_2)) < 1e-10

    @pytest.mark.parametrize("tau,nbar", [(0.3, 0.01), (0.6, 0.05)])
    def test_transformed_means_match_conditional(self, tau, nbar):
        # pushing the switched displacement back through the thermal
        # decomposition's map must restore the conditional means
        p = ChannelParams(tau=tau, nbar=nbar)
        smap, _, _ = williamson_standard_two_mode(eve_reduced_covariance(p))
        ens = displaced_thermal_ensemble(qpsk(1.0), p)
        for amp, mean in zip(qpsk(1.0).amplitudes, ens.means):
            assert np.allclose(smap.s @ mean, eve_conditional_mean(amp, p), atol=1e-10)


class TestAverageCovariance:
    def test_zero_amplitude_limit(self):
        p = ChannelParams(tau=0.5, nbar=0.01)
        cov = eve_average_covariance(qpsk(1e-9), p)
        ens = displaced_thermal_ensemble(qpsk(1e-9), p)
        assert np.allclose(cov, ens.common_covariance(), atol=1e-8)

    def test_pure_loss_qpsk(self):
        cov = eve_average_covariance(qpsk(1.0), ChannelParams(tau=0.0, nbar=0.0))
        assert np.allclose(cov, np.diag([3.0, 3.0, 1.0, 1.0]), atol=1e-12)

    @pytest.mark.parametrize("tau,nbar", GRID)
    def test_closed_form_matches_moments(self, tau, nbar):
        p = ChannelParams(tau=tau, nbar=nbar)
        numeric = eve_average_covariance(qpsk(1.0), p)
        closed = qpsk_average_covariance(1.0, p)
        assert np.max(np.abs(numeric - closed)) < 1e-10

    def test_transformed_average_matches_direct(self):
        # S (ensemble average) S^T = Sigma_Eve + spread of conditional means
        p = ChannelParams(tau=0.4, nbar=0.02)
        c = qpsk(1.0)
        smap, _, _ = williamson_standard_two_mode(eve_reduced_covariance(p))
        ens_cov = eve_average_covariance(c, p)
        direct = average_covariance(
            [eve_conditional_mean(a, p) for a in c.amplitudes],
            c.probs,
            eve_reduced_covariance(p).as_matrix(),
        )
        assert np.max(np.abs(smap.s @ ens_cov @ smap.s.T - direct)) < 1e-10
