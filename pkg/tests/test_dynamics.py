"""Time evolution: unitarity, encodings, memory summaries, mirror transfer.

The spectral propagator is cross-checked against a high-order explicit
integration of the Schroedinger equation (DOP853 at rtol 1e-12); everything
else rests on closed-form expectations (eigenstate phases, mirror symmetry)
or frozen values from the scan oracles.
"""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from dimerchain import (
    ChainSpec,
    DisorderConfig,
    build_hamiltonian,
    eigendecompose,
    eigenstate_state,
    evolve,
    gap_state,
    memory_report,
    mirror_pair_estimate,
    pst_run,
    pst_scan,
    site_state,
)
from dimerchain.dynamics import evolved_state


@pytest.fixture(scope="module")
def spec21():
    return ChainSpec.from_ratio("a", 21, 40.0)


@pytest.fixture(scope="module")
def spectrum21(spec21):
    return eigendecompose(build_hamiltonian(spec21))


class TestInitialStates:
    def test_site_state_is_unit_basis_vector(self):
        init = site_state(21, -10)
        assert init.amplitudes[0] == 1.0
        assert np.linalg.norm(init.amplitudes) == pytest.approx(1.0)

    def test_site_out_of_range(self):
        with pytest.raises(ValueError):
            site_state(21, 11)

    def test_eigenstate_index_checked(self, spectrum21):
        with pytest.raises(ValueError):
            eigenstate_state(spectrum21, 21)

    def test_gap_state_is_zero_mode(self, spectrum21, spec21):
        init = gap_state(spectrum21, spec21)
        n = int(np.argmin(np.abs(spectrum21.energies)))
        assert np.allclose(np.abs(init.amplitudes), np.abs(spectrum21.state(n)))


class TestEvolve:
    def test_fidelity_one_at_t_zero(self, spectrum21, spec21):
        traj = evolve(spectrum21, site_state(21, 0), [0.0])
        assert traj.fidelity[0] == pytest.approx(1.0, abs=1e-12)

    def test_eigenstate_injection_constant_fidelity_and_linear_phase(self, spectrum21):
        times = np.linspace(0.0, 40.0, 801)
        n = 7
        traj = evolve(spectrum21, eigenstate_state(spectrum21, n), times)
        assert np.max(np.abs(traj.fidelity - 1.0)) < 1e-12
        assert np.max(np.abs(traj.phase - (-spectrum21.energies[n] * times))) < 1e-10

    def test_unitarity_bounds(self, spectrum21):
        times = np.linspace(0.0, 200.0, 2001)
        traj = evolve(spectrum21, site_state(21, 3), times)
        assert np.all(traj.fidelity <= 1 + 1e-12)
        assert np.all(traj.mirror_fidelity <= 1 + 1e-12)
        assert np.all(traj.fidelity >= 0)

    def test_time_composability(self, spectrum21):
        init = site_state(21, 0)
        t1, t2 = 37.3, 81.9
        mid = evolved_state(spectrum21, init, t1)
        from dimerchain import InitialState

        two_step = evolved_state(spectrum21, InitialState(mid, "mid"), t2)
        direct = evolved_state(spectrum21, init, t1 + t2)
        assert np.max(np.abs(two_step - direct)) < 1e-10

    def test_mirror_injections_give_identical_transfer(self, spectrum21):
        times = np.linspace(0.0, 500.0, 501)
        right = evolve(spectrum21, site_state(21, 10), times)
        left = evolve(spectrum21, site_state(21, -10), times)
        assert np.array_equal(right.mirror_fidelity, left.mirror_fidelity)

    def test_times_must_be_sorted_nonnegative(self, spectrum21):
        init = site_state(21, 0)
        with pytest.raises(ValueError):
            evolve(spectrum21, init, [-1.0, 0.0])
        with pytest.raises(ValueError):
            evolve(spectrum21, init, [1.0, 0.5])

    def test_against_high_order_integrator(self):
        # criterion: spectral evolution matches DOP853 within 1e-8 up to t=1e3
        spec = ChainSpec.from_ratio("a", 7, 4.0)
        h = build_hamiltonian(spec)
        s = eigendecompose(h)
        full = np.diag(h.diag) + np.diag(h.offdiag, 1) + np.diag(h.offdiag, -1)
        psi0 = site_state(7, 0)

        def rhs(_, y):
            psi = y[:7] + 1j * y[7:]
            d = -1j * (full @ psi)
            return np.concatenate([d.real, d.imag])

        t_final = 1000.0
        y0 = np.concatenate([psi0.amplitudes.real, psi0.amplitudes.imag])
        sol = solve_ivp(rhs, (0.0, t_final), y0, method="DOP853",
                        rtol=1e-12, atol=1e-14)
        integrated = sol.y[:7, -1] + 1j * sol.y[7:, -1]
        spectral = evolved_state(s, psi0, t_final)
        assert np.max(np.abs(integrated - spectral)) < 1e-8


class TestMemoryReport:
    def test_site_encoding_clean(self, spec21):
        summary = memory_report(spec21, "site")
        assert 0.995 <= summary.mean_fidelity <= 0.999
        assert summary.fidelity_max <= 1 + 1e-12
        # oscillation set by the strong coupling
        assert 0.5 * spec21.strong < summary.dominant_frequency < 2.5 * spec21.strong
        assert summary.phase_drift == 0.0

    def test_eigenstate_encoding_clean(self, spec21):
        summary = memory_report(spec21, "eigenstate")
        assert summary.mean_fidelity == pytest.approx(1.0, abs=1e-12)
        # zero-mode storage: no phase advance
        assert np.max(np.abs(summary.phase)) < 1e-8

    def test_unknown_encoding(self, spec21):
        with pytest.raises(ValueError):
            memory_report(spec21, "dual-rail")

    def test_site_encoding_with_disorder(self, spec21):
        summary = memory_report(spec21, "site",
                                disorder=DisorderConfig(0.1, realizations=50, seed=7))
        assert 0.99 <= summary.mean_fidelity <= 1.0
        assert summary.phase_drift > 1e-3  # phase departs from the clean run
        # perturbed protected state stays deep inside the gap
        assert np.max(np.abs(summary.gap_energies)) < spec21.strong / 2

    def test_eigenstate_encoding_with_disorder_stays_at_unity(self, spec21):
        summary = memory_report(spec21, "eigenstate",
                                disorder=DisorderConfig(0.1, realizations=20, seed=7))
        assert abs(summary.mean_fidelity - 1.0) < 1e-12
        assert abs(summary.fidelity_min - 1.0) < 1e-12


class TestMirrorTransfer:
    def test_transfer_detected_frozen_values(self):
        spec = ChainSpec.from_ratio("b", 21, 5.0)
        result = pst_run(spec)
        assert result.transfer_detected
        assert result.t_mirror_units == pytest.approx(10723.95, rel=1e-3)  # frozen
        assert result.fidelity_at_mirror == pytest.approx(0.98261, abs=1e-4)
        assert result.fidelity_revival == pytest.approx(0.93373, abs=1e-4)

    def test_two_level_oracle_agreement(self):
        spec = ChainSpec.from_ratio("b", 21, 5.0)
        result = pst_run(spec)
        assert result.t_oracle_units == pytest.approx(result.t_mirror_units, rel=0.10)
        s = eigendecompose(build_hamiltonian(spec))
        splitting, t_est = mirror_pair_estimate(s, site_state(21, -10))
        assert splitting == pytest.approx(result.pair_splitting)
        assert t_est * spec.strong == pytest.approx(result.t_oracle_units)

    def test_no_transfer_in_weak_center_chain(self):
        # no end-localized pair: scan must report, not raise
        spec = ChainSpec.from_ratio("a", 21, 40.0)
        result = pst_run(spec, t_max_units=5000.0)
        assert not result.transfer_detected
        assert result.fidelity_at_mirror < 0.5

    def test_scan_trends(self):
        results = pst_scan("b", 21, [5.0, 10.0])
        assert results[0].t_mirror_units < results[1].t_mirror_units
        assert results[0].fidelity_at_mirror <= results[1].fidelity_at_mirror

    def test_injection_site_defaults_to_left_edge(self):
        spec = ChainSpec.from_ratio("b", 21, 5.0)
        assert pst_run(spec).inject_site == -10
