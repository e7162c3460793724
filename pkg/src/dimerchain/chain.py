"""Construction of symmetric dimerized spin chains in the one-excitation sector.

A chain of N spins (N odd) with alternating strong/weak exchange couplings is
fully described, in the single-excitation subspace, by a real symmetric
tridiagonal matrix: onsite energies on the diagonal and nearest-neighbour
couplings on the off-diagonal. Sites are labelled symmetrically about the
middle site, i = -m..m with m = (N-1)/2. Two mirror-symmetric families are
supported, distinguished by whether the middle site is weakly or strongly
coupled to its neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class ChainConfigError(ValueError):
    """Invalid chain parameters (even length, too short, bad couplings...)."""


class Family(Enum):
    """Coupling pattern of the middle site.

    WEAK_CENTER  ("a"): J(-1,0) = J(0,1) = weak; one interface at the center.
    STRONG_CENTER ("b"): J(-1,0) = J(0,1) = strong; trimer defect at the
    center plus weakly attached end sites.
    """

    WEAK_CENTER = "a"
    STRONG_CENTER = "b"

    @classmethod
    def coerce(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ChainConfigError(
                f"unknown family {value!r}; expected 'a' or 'b'"
            ) from None


@dataclass(frozen=True)
class ChainSpec:
    """Clean-chain parameters: family, odd site count, strong/weak couplings."""

    family: Family
    n_sites: int
    strong: float = 8.0
    weak: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "family", Family.coerce(self.family))
        n = self.n_sites
        if n != int(n) or n < 5:
            raise ChainConfigError(f"n_sites must be an integer >= 5, got {n}")
        if n % 2 == 0:
            raise ChainConfigError(f"n_sites must be odd, got {n}")
        if not (self.strong > 0 and self.weak > 0):
            raise ChainConfigError("couplings must be positive")
        if not self.weak < self.strong:
            raise ChainConfigError(
                f"dimerization requires weak < strong, got "
                f"weak={self.weak}, strong={self.strong}"
            )

    @property
    def m(self) -> int:
        return (self.n_sites - 1) // 2

    @property
    def ratio(self) -> float:
        return self.strong / self.weak

    def sites(self) -> np.ndarray:
        """Site labels -m..m, aligned with array indices 0..N-1."""
        return np.arange(-self.m, self.m + 1)

    def array_index(self, site: int) -> int:
        """Map a symmetric site label to the 0-based array index."""
        if not -self.m <= site <= self.m:
            raise ChainConfigError(f"site {site} outside chain -{self.m}..{self.m}")
        return int(site) + self.m

    @classmethod
    def from_ratio(cls, family, n_sites: int, ratio: float, strong: float = 8.0) -> "ChainSpec":
        if ratio <= 1:
            raise ChainConfigError(f"coupling ratio must exceed 1, got {ratio}")
        return cls(family=family, n_sites=n_sites, strong=strong, weak=strong / ratio)

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "n_sites": self.n_sites,
            "strong": self.strong,
            "weak": self.weak,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ChainSpec":
        try:
            return cls(
                family=payload["family"],
                n_sites=int(payload["n_sites"]),
                strong=float(payload["strong"]),
                weak=float(payload["weak"]),
            )
        except KeyError as missing:
            raise ChainConfigError(f"chain spec missing key {missing}") from None


@dataclass(frozen=True)
class Hamiltonian:
    """Real symmetric tridiagonal matrix stored as two arrays (O(N) memory)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or offdiag.ndim != 1:
            raise ChainConfigError("diag and offdiag must be one-dimensional")
        if len(offdiag) != len(diag) - 1:
            raise ChainConfigError(
                f"offdiag must have length {len(diag) - 1}, got {len(offdiag)}"
            )
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(offdiag))):
            raise ChainConfigError("non-finite Hamiltonian entries")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def n_sites(self) -> int:
        return len(self.diag)

    @property
    def max_abs_entry(self) -> float:
        off = np.max(np.abs(self.offdiag)) if len(self.offdiag) else 0.0
        return float(max(np.max(np.abs(self.diag)), off))


def build_couplings(spec: ChainSpec) -> np.ndarray:
    """Return the N-1 nearest-neighbour couplings J(i, i+1), i = -m..m-1.

    The pattern alternates between `strong` and `weak` and is mirror
    symmetric, J(i, i+1) = J(-i-1, -i). For the weak-center family the bond
    leaving an even site i >= 0 is weak; for the strong-center family it is
    strong. Bonds on the negative side are filled in by reflection, which
    keeps the mirror symmetry exact in floating point.
    """
    n, m = spec.n_sites, spec.m
    weak_center = spec.family is Family.WEAK_CENTER
    j = np.empty(n - 1)
    for k in range(n - 1):
        i = k - m  # left site of the bond
        right_half = i if i >= 0 else -i - 1
        if right_half % 2 == 0:
            j[k] = spec.weak if weak_center else spec.strong
        else:
            j[k] = spec.strong if weak_center else spec.weak
    return j


def build_hamiltonian(spec: ChainSpec, onsite=None) -> Hamiltonian:
    """Assemble the tridiagonal Hamiltonian; zero diagonal unless onsite given."""
    if onsite is None:
        diag = np.zeros(spec.n_sites)
    else:
        diag = np.asarray(onsite, dtype=float)
        if diag.shape != (spec.n_sites,):
            raise ChainConfigError(
                f"onsite energies must have length {spec.n_sites}, "
                f"got shape {diag.shape}"
            )
    return Hamiltonian(diag=diag, offdiag=build_couplings(spec))


def mirror_reflect(state: np.ndarray) -> np.ndarray:
    """Reflect a state about the middle site: entry at site i moves to -i."""
    state = np.asarray(state)
    if state.ndim != 1:
        raise ChainConfigError("mirror_reflect expects a one-dimensional state")
    return state[::-1].copy()
