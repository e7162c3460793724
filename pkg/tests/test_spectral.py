"""Spectra: exact small systems, localization, census, band structure.

Expected numbers marked 'frozen' were computed with an independent dense
diagonalization (np.linalg.eigh on the materialized matrix) and, where
available, closed forms: the strongly coupled trimer has energies
(-sqrt(2)J, 0, sqrt(2)J); the weak-center zero mode lives on even sites
with amplitude ratio -weak/strong per two sites, giving a peak occupancy
of (1 + 2*sum_{j=1..m/2} r^(2j))^-1 at the middle site.
"""

import numpy as np
import pytest

from dimerchain import (
    ChainSpec,
    Hamiltonian,
    StructuralCensusError,
    band_profile,
    build_couplings,
    build_hamiltonian,
    compute_metadata,
    eigendecompose,
    locate_gap_states,
    max_occupancy,
    mirror_reflect,
    zero_subspace_projector,
)

SQRT2 = np.sqrt(2.0)


def dense_eigenvalues(h: Hamiltonian) -> np.ndarray:
    full = np.diag(h.diag) + np.diag(h.offdiag, 1) + np.diag(h.offdiag, -1)
    return np.linalg.eigvalsh(full)


class TestSmallSystemsExact:
    def test_trimer(self):
        s = eigendecompose(Hamiltonian(np.zeros(3), np.array([8.0, 8.0])))
        assert np.allclose(s.energies, [-SQRT2 * 8, 0.0, SQRT2 * 8], atol=1e-12)
        expected = np.array([
            [-0.5, -1 / SQRT2, 0.5],
            [1 / SQRT2, 0.0, 1 / SQRT2],
            [-0.5, 1 / SQRT2, 0.5],
        ])
        for n in range(3):
            v, e = s.state(n), expected[:, n]
            assert min(np.max(np.abs(v - e)), np.max(np.abs(v + e))) < 1e-12

    def test_dimer(self):
        s = eigendecompose(Hamiltonian(np.zeros(2), np.array([8.0])))
        assert np.allclose(s.energies, [-8.0, 8.0], atol=1e-12)
        r = 1 / SQRT2
        assert np.allclose(np.abs(s.states), [[r, r], [r, r]], atol=1e-12)
        assert max_occupancy(s).tolist() == pytest.approx([0.5, 0.5])

    def test_single_site(self):
        s = eigendecompose(Hamiltonian(np.array([2.5]), np.array([])))
        assert s.energies.tolist() == [2.5]


def peak_occupancy_closed_form(ratio: float, half_dimers: int) -> float:
    r2 = (1.0 / ratio) ** 2
    tail = sum(r2**j for j in range(1, half_dimers + 1))
    return 1.0 / (1.0 + 2.0 * tail)


class TestZeroMode:
    def test_unique_zero_mode_ratio40(self, spectrum_a101):
        zero = np.abs(spectrum_a101.energies) < 1e-10
        assert zero.sum() == 1

    def test_peak_occupancy_ratio40(self, spectrum_a101):
        n = int(np.argmin(np.abs(spectrum_a101.energies)))
        occ = spectrum_a101.state(n)[50] ** 2
        assert occ == pytest.approx(peak_occupancy_closed_form(40.0, 25), abs=1e-12)
        assert occ == pytest.approx(0.9987508, abs=1e-7)  # frozen

    def test_peak_occupancy_ratio4(self):
        s = eigendecompose(build_hamiltonian(ChainSpec.from_ratio("a", 101, 4.0)))
        n = int(np.argmin(np.abs(s.energies)))
        occ = s.state(n)[50] ** 2
        assert occ == pytest.approx(peak_occupancy_closed_form(4.0, 25), abs=1e-12)
        assert occ == pytest.approx(0.8823529, abs=1e-7)  # frozen

    def test_sublattice_structure(self):
        spec = ChainSpec.from_ratio("a", 101, 4.0)
        s = eigendecompose(build_hamiltonian(spec))
        v = s.state(int(np.argmin(np.abs(s.energies))))
        m = spec.m
        assert np.max(np.abs(v[1::2])) < 1e-8  # odd sublattice empty
        for i in range(0, m - 1, 2):
            if abs(v[m + i]) > 1e-6:
                assert v[m + i + 2] / v[m + i] == pytest.approx(-spec.weak / spec.strong, abs=1e-8)


class TestSpectrumInvariants:
    @pytest.mark.parametrize("family", ["a", "b"])
    @pytest.mark.parametrize("n", [5, 21, 101])
    def test_chiral_pairing(self, family, n):
        s = eigendecompose(build_hamiltonian(ChainSpec(family, n)))
        assert np.max(np.abs(s.energies + s.energies[::-1])) < 1e-10

    def test_orthonormality(self, spectrum_a101):
        gram = spectrum_a101.states.T @ spectrum_a101.states
        assert np.max(np.abs(gram - np.eye(101))) < 1e-10

    def test_parity_of_nondegenerate_states(self, spectrum_a101, spec_a101):
        meta = compute_metadata(spectrum_a101, spec_a101)
        for m in meta:
            if m.parity == 0:
                continue
            v = spectrum_a101.state(m.n)
            assert np.max(np.abs(mirror_reflect(v) - m.parity * v)) < 1e-8

    def test_deterministic_and_sign_fixed(self, spec_a101):
        s1 = eigendecompose(build_hamiltonian(spec_a101))
        s2 = eigendecompose(build_hamiltonian(spec_a101))
        assert np.array_equal(s1.states, s2.states)
        assert np.array_equal(s1.energies, s2.energies)
        peaks = np.argmax(np.abs(s1.states), axis=0)
        assert np.all(s1.states[peaks, np.arange(101)] > 0)

    @pytest.mark.parametrize("family", ["a", "b"])
    @pytest.mark.parametrize("n", [5, 7, 9, 11])
    @pytest.mark.parametrize("ratio", [40.0, 4.0, 1.5])
    def test_dense_oracle(self, family, n, ratio):
        h = build_hamiltonian(ChainSpec.from_ratio(family, n, ratio))
        s = eigendecompose(h)
        assert np.max(np.abs(s.energies - dense_eigenvalues(h))) < 1e-9


class TestGapStateCensus:
    @pytest.mark.parametrize("n", [5, 21, 101])
    def test_weak_center_counts(self, n):
        spec = ChainSpec("a", n)
        located = locate_gap_states(eigendecompose(build_hamiltonian(spec)), spec)
        assert [lab for _, lab in located] == ["in_gap"]

    @pytest.mark.parametrize("n", [5, 21, 101])
    def test_strong_center_counts(self, n):
        spec = ChainSpec("b", n)
        located = locate_gap_states(eigendecompose(build_hamiltonian(spec)), spec)
        labels = [lab for _, lab in located]
        assert labels.count("in_gap") == 3
        assert labels.count("outer_localized") == 2

    def test_strong_center_outer_energies(self, spectrum_b101):
        outer = spectrum_b101.energies[np.abs(spectrum_b101.energies) > 8.4]
        assert np.allclose(np.abs(outer), 11.3172435, atol=1e-6)  # frozen

    def test_count_mismatch_raises(self, spectrum_a101, spec_b101):
        # weak-center spectrum scored against the strong-center census
        with pytest.raises(StructuralCensusError):
            locate_gap_states(spectrum_a101, spec_b101)

    def test_non_strict_accepts_mismatch(self, spectrum_a101, spec_b101):
        located = locate_gap_states(spectrum_a101, spec_b101, strict=False)
        assert len(located) == 1


class TestZeroSubspaceProjector:
    def test_weak_center(self, spectrum_a101):
        p = zero_subspace_projector(spectrum_a101, 1e-6)
        assert np.trace(p) == pytest.approx(1.0, abs=1e-10)
        assert p[50, 50] == pytest.approx(0.998750781, abs=1e-8)  # frozen

    def test_strong_center(self, spectrum_b101):
        p = zero_subspace_projector(spectrum_b101, 1e-6)
        assert np.trace(p) == pytest.approx(3.0, abs=1e-10)
        assert np.max(np.abs(p @ p - p)) < 1e-10
        for site in (0, 100):
            assert p[site, site] == pytest.approx(0.9993750, abs=1e-7)  # frozen
        for site in (49, 51):
            assert p[site, site] == pytest.approx(0.4996875, abs=1e-7)  # frozen
        assert p[50, 50] < 1e-20

    def test_empty_window_gives_zero_matrix(self):
        s = eigendecompose(Hamiltonian(np.zeros(2), np.array([8.0])))
        assert np.array_equal(zero_subspace_projector(s, 0.8), np.zeros((2, 2)))

    def test_window_must_be_positive(self, spectrum_a101):
        with pytest.raises(ValueError):
            zero_subspace_projector(spectrum_a101, 0.0)


class TestBandProfile:
    def test_band_sizes(self, spectrum_a101, spec_a101, spectrum_b101, spec_b101):
        prof_a = band_profile(spectrum_a101, spec_a101)
        prof_b = band_profile(spectrum_b101, spec_b101)
        assert len(prof_a["lower"]) == len(prof_a["upper"]) == 50
        assert len(prof_b["lower"]) == len(prof_b["upper"]) == 48

    def test_measured_band_edges(self, spectrum_a101, spec_a101):
        # finite-chain edges sit inside the idealized window [strong-weak,
        # strong+weak] by the half-chain quantization offset ~weak*(1-cos(pi/26))
        upper = band_profile(spectrum_a101, spec_a101)["upper"]
        assert upper[-1] == pytest.approx(8.1985800095, abs=1e-9)  # frozen
        assert upper[0] == pytest.approx(7.8014925385, abs=1e-9)   # frozen
        assert 7.8 < upper[0] and upper[-1] < 8.2

    def test_double_degeneracy_pairing(self, spectrum_a101, spec_a101):
        upper = band_profile(spectrum_a101, spec_a101)["upper"]
        splittings = upper[1::2] - upper[0::2]
        gaps_between_pairs = upper[2::2] - upper[1:-1:2]
        assert np.max(splittings) < 5e-4          # frozen: measured 3.85e-4
        assert np.min(gaps_between_pairs) > 4e-3  # pairs well separated

    def test_cosine_dispersion_oracle(self, spectrum_a101, spec_a101):
        # pair means follow the dimer-chain dispersion strong + weak*cos(k pi/26)
        # up to second-order (weak^2/strong) shifts
        upper = band_profile(spectrum_a101, spec_a101)["upper"]
        pair_means = upper.reshape(25, 2).mean(axis=1)
        k = np.arange(1, 26)
        formula = spec_a101.strong + spec_a101.weak * np.cos(k * np.pi / 26)
        assert np.max(np.abs(np.sort(pair_means) - np.sort(formula))) < 3e-3

    def test_n5_weak_center_band_energies(self):
        s = eigendecompose(build_hamiltonian(ChainSpec("a", 5)))
        assert np.allclose(
            s.energies,
            [-8.00499844, -8.0, 0.0, 8.0, 8.00499844],  # frozen 5x5 brute force
            atol=1e-6,
        )


class TestMetadata:
    def test_ipr_range_and_peak(self, spectrum_a101, spec_a101):
        meta = compute_metadata(spectrum_a101, spec_a101)
        for m in meta:
            assert 0 < m.ipr <= 1
            assert abs(m.peak_site) <= 50
            assert 0 < m.peak_amp <= 1
        zero = next(m for m in meta if m.band_label == "in_gap")
        assert zero.peak_site == 0
        assert zero.ipr > 0.99  # essentially single-site

    def test_band_labels_partition(self, spectrum_b101, spec_b101):
        meta = compute_metadata(spectrum_b101, spec_b101)
        counts = {}
        for m in meta:
            counts[m.band_label] = counts.get(m.band_label, 0) + 1
        assert counts == {"lower_band": 48, "upper_band": 48,
                          "in_gap": 3, "outer_localized": 2}
