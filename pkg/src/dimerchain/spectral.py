"""Exact diagonalization and classification of chain eigenstates.

Everything downstream (disorder ensembles, time evolution) consumes the
Spectrum produced here. The solver is the tridiagonal-specialized LAPACK
path, and every decomposition is verified against the eigen-residual and
orthonormality contracts before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .chain import ChainSpec, Family, Hamiltonian, mirror_reflect

#: Default residual / orthonormality tolerance for verified decompositions.
RESIDUAL_TOL = 1e-10

#: Splitting below which a consecutive level pair is treated as degenerate
#: when assigning mirror parity (in units of the weak coupling).
PARITY_DEGENERACY_FACTOR = 1e-6

LOWER_BAND = "lower_band"
UPPER_BAND = "upper_band"
IN_GAP = "in_gap"
OUTER_LOCALIZED = "outer_localized"


class SolverConvergenceError(RuntimeError):
    """Eigendecomposition failed to converge or violated its contracts."""


class StructuralCensusError(RuntimeError):
    """Localized-state counts disagree with the family's expected census."""


@dataclass(frozen=True)
class Spectrum:
    """Verified eigendecomposition: ascending energies, orthonormal columns."""

    energies: np.ndarray
    states: np.ndarray  # states[:, n] pairs with energies[n]
    residual_tol: float = RESIDUAL_TOL

    @property
    def n_sites(self) -> int:
        return len(self.energies)

    def state(self, n: int) -> np.ndarray:
        return self.states[:, n]


@dataclass(frozen=True)
class StateMetadata:
    """Per-eigenstate localization and symmetry summary."""

    n: int
    energy: float
    parity: int  # +1 / -1, or 0 when degenerate/undefined
    ipr: float
    peak_site: int
    peak_amp: float
    band_label: str


def eigendecompose(h: Hamiltonian, residual_tol: float = RESIDUAL_TOL) -> Spectrum:
    """Diagonalize a tridiagonal Hamiltonian into a verified Spectrum.

    The eigenvector sign convention fixes the largest-magnitude entry of each
    column to be positive, which makes the output deterministic. A result
    that fails the residual or orthonormality checks raises
    SolverConvergenceError rather than returning unverified pairs.
    """
    n = h.n_sites
    if n == 1:
        energies, states = h.diag.copy(), np.ones((1, 1))
    else:
        try:
            energies, states = eigh_tridiagonal(h.diag, h.offdiag)
        except np.linalg.LinAlgError as err:  # pragma: no cover - LAPACK failure
            raise SolverConvergenceError(f"tridiagonal solver failed: {err}") from err

    # Deterministic sign: largest-magnitude entry positive (first on ties).
    peak = np.argmax(np.abs(states), axis=0)
    signs = np.sign(states[peak, np.arange(n)])
    signs[signs == 0] = 1.0
    states = states * signs

    scale = max(1.0, h.max_abs_entry)
    residual = _max_eigen_residual(h, energies, states)
    if residual > residual_tol * scale:
        raise SolverConvergenceError(
            f"eigen-residual {residual:.3e} exceeds {residual_tol:.1e} * {scale:g}"
        )
    gram_err = np.max(np.abs(states.T @ states - np.eye(n)))
    if gram_err > residual_tol:
        raise SolverConvergenceError(
            f"orthonormality defect {gram_err:.3e} exceeds {residual_tol:.1e}"
        )
    return Spectrum(energies=energies, states=states, residual_tol=residual_tol)


def _max_eigen_residual(h: Hamiltonian, energies: np.ndarray, states: np.ndarray) -> float:
    """Largest two-norm of H phi_n - E_n phi_n over all n."""
    hv = h.diag[:, None] * states
    if h.n_sites > 1:
        hv[:-1] += h.offdiag[:, None] * states[1:]
        hv[1:] += h.offdiag[:, None] * states[:-1]
    return float(np.max(np.linalg.norm(hv - states * energies[None, :], axis=0)))


def band_windows(spec: ChainSpec) -> dict:
    """Energy windows used for labeling, generous for ratios >= 4."""
    strong, weak = spec.strong, spec.weak
    return {
        LOWER_BAND: (-strong - 2 * weak, -strong + 2 * weak),
        UPPER_BAND: (strong - 2 * weak, strong + 2 * weak),
        IN_GAP: (-strong / 2, strong / 2),
        "outer_threshold": strong + 2 * weak,
    }


def band_label_of(energy: float, spec: ChainSpec) -> str:
    w = band_windows(spec)
    if abs(energy) < spec.strong / 2:
        return IN_GAP
    if abs(energy) > w["outer_threshold"]:
        return OUTER_LOCALIZED
    if energy < 0:
        return LOWER_BAND
    return UPPER_BAND


def locate_gap_states(s: Spectrum, spec: ChainSpec, strict: bool = True) -> list[tuple[int, str]]:
    """Indices and labels of the localized (in-gap and outer) states.

    For clean chains the counts are structural: the weak-center family hosts
    exactly one mid-gap state; the strong-center family hosts three mid-gap
    states plus one state beyond each band. With strict=True a count
    mismatch raises StructuralCensusError (it signals a construction or
    solver bug); pass strict=False for disordered spectra, where the same
    energy windows are applied without count enforcement.
    """
    located = [
        (n, band_label_of(e, spec))
        for n, e in enumerate(s.energies)
        if band_label_of(e, spec) in (IN_GAP, OUTER_LOCALIZED)
    ]
    if strict:
        n_gap = sum(1 for _, lab in located if lab == IN_GAP)
        n_outer = sum(1 for _, lab in located if lab == OUTER_LOCALIZED)
        expected = (1, 0) if spec.family is Family.WEAK_CENTER else (3, 2)
        if (n_gap, n_outer) != expected:
            raise StructuralCensusError(
                f"family {spec.family.value}: found {n_gap} in-gap and "
                f"{n_outer} outer states, expected {expected}"
            )
    return located


def zero_subspace_projector(s: Spectrum, e_window: float) -> np.ndarray:
    """Projector onto eigenstates with |E| < e_window.

    A basis-independent handle on the (numerically) degenerate zero-energy
    subspace: individual eigenvectors inside it are solver-dependent, the
    projector is not. An empty window yields the zero matrix.
    """
    if e_window <= 0:
        raise ValueError(f"e_window must be positive, got {e_window}")
    sel = np.abs(s.energies) < e_window
    v = s.states[:, sel]
    return v @ v.T


def band_profile(s: Spectrum, spec: ChainSpec) -> dict[str, np.ndarray]:
    """Sorted band energies, keyed 'lower' / 'upper'.

    For clean chains each band carries a cosine-like dispersion of width
    ~2*weak about ±strong (the bands of weakly coupled dimer sub-chains with
    effective hopping weak/2), with levels doubly degenerate on the scale of
    the weak coupling.
    """
    lower = np.sort([e for e in s.energies if band_label_of(e, spec) == LOWER_BAND])
    upper = np.sort([e for e in s.energies if band_label_of(e, spec) == UPPER_BAND])
    return {"lower": np.asarray(lower), "upper": np.asarray(upper)}


def mirror_parities(s: Spectrum, degeneracy_tol: float) -> np.ndarray:
    """Mirror parity per state: +1 / -1, 0 when degenerate/undefined.

    Levels closer than degeneracy_tol to a neighbour are grouped; pairs are
    re-diagonalized into symmetric/antisymmetric combinations, larger groups
    are reported undefined.
    """
    n = s.n_sites
    parities = np.zeros(n, dtype=int)
    groups = _degenerate_groups(s.energies, degeneracy_tol)
    for group in groups:
        if len(group) == 1:
            parities[group[0]] = _single_parity(s.states[:, group[0]])
        elif len(group) == 2:
            a, b = group
            va, vb = s.states[:, a], s.states[:, b]
            sym = va + mirror_reflect(va)
            if np.linalg.norm(sym) < 1e-8:
                sym = vb + mirror_reflect(vb)
            anti = va - mirror_reflect(va)
            if np.linalg.norm(anti) < 1e-8:
                anti = vb - mirror_reflect(vb)
            if np.linalg.norm(sym) > 1e-8 and np.linalg.norm(anti) > 1e-8:
                parities[a], parities[b] = 1, -1
        # groups of 3+ stay undefined (0)
    return parities


def _degenerate_groups(energies: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = [[0]]
    for n in range(1, len(energies)):
        if energies[n] - energies[n - 1] < tol:
            groups[-1].append(n)
        else:
            groups.append([n])
    return groups


def _single_parity(v: np.ndarray) -> int:
    p = float(v @ mirror_reflect(v))
    if abs(p) > 1 - 1e-8:
        return 1 if p > 0 else -1
    return 0


def compute_metadata(s: Spectrum, spec: ChainSpec) -> list[StateMetadata]:
    """Localization metrics and labels for every eigenstate."""
    m = spec.m
    amp2 = s.states**2
    iprs = np.sum(amp2**2, axis=0)
    peaks = np.argmax(np.abs(s.states), axis=0)
    parities = mirror_parities(s, PARITY_DEGENERACY_FACTOR * spec.weak)
    return [
        StateMetadata(
            n=n,
            energy=float(s.energies[n]),
            parity=int(parities[n]),
            ipr=float(iprs[n]),
            peak_site=int(peaks[n]) - m,
            peak_amp=float(abs(s.states[peaks[n], n])),
            band_label=band_label_of(s.energies[n], spec),
        )
        for n in range(s.n_sites)
    ]
