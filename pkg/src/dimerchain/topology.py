"""Topological classification of the two dimer configurations.

A bulk dimer pattern is a two-site unit cell with an intra-cell coupling and
an inter-cell coupling. Its Bloch Hamiltonian is off-diagonal with
q(k) = intra + inter * exp(-ik); the band energies are +-|q(k)| and the band
pseudospin polarization lies in the x-y plane. Whether q(k) encircles the
origin over one Brillouin-zone traversal distinguishes the two
configurations: winding 0 when the intra-cell bond dominates (A), winding 1
when the inter-cell bond dominates (B). The Zak phase of the lower band
differs by pi between the two, independent of the discretization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, Family

DEFAULT_K_POINTS = 1024


class GaplessCellError(ValueError):
    """|intra| = |inter| closes the gap; winding/Zak phase are undefined."""


@dataclass(frozen=True)
class UnitCell:
    """Two-site unit cell: intra-cell and inter-cell couplings."""

    intra: float
    inter: float
    label: str = ""

    def __post_init__(self):
        if self.intra <= 0 or self.inter <= 0:
            raise ValueError("cell couplings must be positive")

    def require_gapped(self):
        if self.intra == self.inter:
            raise GaplessCellError(
                f"intra = inter = {self.intra}: gapless, undefined winding"
            )


def cell_a(strong: float, weak: float) -> UnitCell:
    """Configuration A: strong bond inside the cell, weak bond between cells."""
    return UnitCell(intra=strong, inter=weak, label="A")


def cell_b(strong: float, weak: float) -> UnitCell:
    """Configuration B: A with strong and weak interchanged."""
    return UnitCell(intra=weak, inter=strong, label="B")


def bloch_offdiag(cell: UnitCell, k: np.ndarray) -> np.ndarray:
    """q(k) = intra + inter * exp(-ik)."""
    return cell.intra + cell.inter * np.exp(-1j * np.asarray(k))


def _bz_grid(k_points: int, close_loop: bool) -> np.ndarray:
    # Traversed from +pi to -pi so that configuration B winds positively
    # under the exp(-ik) convention.
    return np.linspace(np.pi, -np.pi, k_points + 1 if close_loop else k_points)


def winding_number(cell: UnitCell, k_points: int = DEFAULT_K_POINTS) -> int:
    """Signed number of times q(k) encircles the origin over one BZ loop.

    Angle increments are accumulated with branch tracking; at >= 16 points
    the per-step increment stays well below pi for any gapped cell.
    """
    if k_points < 16:
        raise ValueError(f"k_points must be >= 16, got {k_points}")
    cell.require_gapped()
    q = bloch_offdiag(cell, _bz_grid(k_points, close_loop=True))
    steps = np.diff(np.angle(q))
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    return int(round(steps.sum() / (2 * np.pi)))


def lower_band_states(cell: UnitCell, k: np.ndarray) -> np.ndarray:
    """Cell-periodic lower-band eigenvectors, one fixed gauge: (1, -q*/|q|)/sqrt(2)."""
    q = bloch_offdiag(cell, k)
    qhat = q / np.abs(q)
    u = np.stack([np.ones_like(qhat), -np.conj(qhat)], axis=1)
    return u / np.sqrt(2)


def zak_phase(cell: UnitCell, k_points: int = DEFAULT_K_POINTS) -> float:
    """Discretized Zak phase of the lower band, in [0, 2pi).

    Wilson-loop (product of neighbouring overlaps) form under the module's
    fixed periodic gauge. The absolute value is gauge-dependent and not
    contractual; differences between configurations are.
    """
    if k_points < 16:
        raise ValueError(f"k_points must be >= 16, got {k_points}")
    cell.require_gapped()
    k = _bz_grid(k_points, close_loop=False)
    u = lower_band_states(cell, k)
    overlaps = np.sum(np.conj(u) * np.roll(u, -1, axis=0), axis=1)
    phase = -np.angle(np.prod(overlaps))
    return float(phase % (2 * np.pi))


def zak_phase_difference(strong: float, weak: float, k_points: int = DEFAULT_K_POINTS) -> float:
    """zak(B) - zak(A), reduced to [0, 2pi)."""
    diff = zak_phase(cell_b(strong, weak), k_points) - zak_phase(cell_a(strong, weak), k_points)
    return float(diff % (2 * np.pi))


def pseudospin_path(cell: UnitCell, k_points: int = DEFAULT_K_POINTS):
    """(k, <sigma_x>, <sigma_y>) of the lower band across the BZ.

    The polarization of the extended states is confined to the x-y plane;
    the returned path encircles the origin exactly when the winding is 1.
    """
    cell.require_gapped()
    k = _bz_grid(k_points, close_loop=True)
    u = lower_band_states(cell, k)
    cross = np.conj(u[:, 0]) * u[:, 1]
    return k, 2 * np.real(cross), 2 * np.imag(cross)


@dataclass(frozen=True)
class Census:
    """Predicted localized states for a finite chain of the given family."""

    in_gap: int
    outer: int
    locations: tuple[str, ...]


def interface_census(spec: ChainSpec) -> Census:
    """Localized-state count predicted from the chain's interface structure.

    The weak-center family is a single interface between the two bulk
    configurations, binding one mid-gap state at the chain center. The
    strong-center family inserts a trimer defect between the two
    configurations and terminates both ends with weak bonds: three
    zero-energy states (both ends plus the odd trimer combination) and the
    two trimer levels split off beyond the bands.
    """
    if spec.family is Family.WEAK_CENTER:
        return Census(in_gap=1, outer=0, locations=("center",))
    return Census(in_gap=3, outer=2, locations=("end:-m", "center", "end:+m"))
