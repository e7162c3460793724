"""Dimerized spin chains in the single-excitation subspace.

Library for the two mirror-symmetric chain families with alternating
strong/weak couplings: exact spectra and localized in-gap states, diagonal
disorder ensembles, spectral time evolution (quantum memory, mirror state
transfer), and topological classification of the bulk dimer configurations.
"""

__version__ = "0.1.0"

from .chain import (
    ChainConfigError,
    ChainSpec,
    Family,
    Hamiltonian,
    build_couplings,
    build_hamiltonian,
    mirror_reflect,
)
from .disorder import (
    DEFAULT_REALIZATIONS,
    DEFAULT_SEED,
    DisorderConfig,
    DisorderResult,
    band_edge_spread,
    draw_onsite,
    ensemble_average,
    max_occupancy,
)
from .dynamics import (
    EIGENSTATE_ENCODING,
    SITE_ENCODING,
    InitialState,
    MemorySummary,
    PstResult,
    Trajectory,
    eigenstate_state,
    evolve,
    gap_state,
    memory_report,
    mirror_pair_estimate,
    pst_run,
    pst_scan,
    site_state,
)
from .spectral import (
    IN_GAP,
    LOWER_BAND,
    OUTER_LOCALIZED,
    UPPER_BAND,
    SolverConvergenceError,
    Spectrum,
    StateMetadata,
    StructuralCensusError,
    band_profile,
    compute_metadata,
    eigendecompose,
    locate_gap_states,
    zero_subspace_projector,
)
from .topology import (
    Census,
    GaplessCellError,
    UnitCell,
    cell_a,
    cell_b,
    interface_census,
    pseudospin_path,
    winding_number,
    zak_phase,
    zak_phase_difference,
)

__all__ = [
    "ChainConfigError",
    "ChainSpec",
    "Family",
    "Hamiltonian",
    "build_couplings",
    "build_hamiltonian",
    "mirror_reflect",
    "DEFAULT_REALIZATIONS",
    "DEFAULT_SEED",
    "DisorderConfig",
    "DisorderResult",
    "band_edge_spread",
    "draw_onsite",
    "ensemble_average",
    "max_occupancy",
    "EIGENSTATE_ENCODING",
    "SITE_ENCODING",
    "InitialState",
    "MemorySummary",
    "PstResult",
    "Trajectory",
    "eigenstate_state",
    "evolve",
    "gap_state",
    "memory_report",
    "mirror_pair_estimate",
    "pst_run",
    "pst_scan",
    "site_state",
    "IN_GAP",
    "LOWER_BAND",
    "OUTER_LOCALIZED",
    "UPPER_BAND",
    "SolverConvergenceError",
    "Spectrum",
    "StateMetadata",
    "StructuralCensusError",
    "band_profile",
    "compute_metadata",
    "eigendecompose",
    "locate_gap_states",
    "zero_subspace_projector",
    "Census",
    "GaplessCellError",
    "UnitCell",
    "cell_a",
    "cell_b",
    "interface_census",
    "pseudospin_path",
    "winding_number",
    "zak_phase",
    "zak_phase_difference",
]
