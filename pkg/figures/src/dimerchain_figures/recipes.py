"""Figure recipes: which artifacts each figure needs, and loud validation.

A recipe names the tables a figure consumes and the columns it requires.
Loading checks the run manifest (the files must be registered artifacts and
the time-unit convention must match), the presence of every table, its
columns, and that it is non-empty. All violations raise RecipeError; the
renderers do no numerical work beyond plotting transforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

EXPECTED_TIME_UNITS = "1/strong"


class RecipeError(ValueError):
    """Missing/invalid artifacts for a figure."""


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: int
    description: str
    tables: dict[str, tuple[str, ...]]  # artifact stem -> required columns
    uses_time_axis: bool = False
    extra: dict = field(default_factory=dict)


SPECTRUM_COLUMNS = ("n", "energy", "parity", "ipr", "peak_site", "peak_amp", "band_label")
TRAJECTORY_COLUMNS = ("t", "re_overlap", "im_overlap", "fidelity", "mirror_fidelity", "phase")

RECIPES: dict[int, FigureRecipe] = {
    2: FigureRecipe(
        2,
        "eigenstate amplitude profiles at their (not-to-scale) energies",
        {
            "eigenstate_a_index": ("n", "energy", "file"),
            "eigenstate_b_index": ("n", "energy", "file"),
        },
        extra={"profile_columns": ("site", "amplitude")},
    ),
    3: FigureRecipe(
        3,
        "energy spectra with in-gap and outer localized levels",
        {"spectrum_a": SPECTRUM_COLUMNS, "spectrum_b": SPECTRUM_COLUMNS},
    ),
    4: FigureRecipe(
        4,
        "disorder-averaged maximum site occupancies per disorder scale",
        {
            "disorder_a": ("site", "e_scale", "rho_bar"),
            "disorder_b": ("site", "e_scale", "rho_bar"),
        },
    ),
    5: FigureRecipe(
        5,
        "disorder-averaged spectra per disorder scale",
        {
            "avg_spectrum_a": ("n", "e_scale", "mean_energy", "std_energy"),
            "avg_spectrum_b": ("n", "e_scale", "mean_energy", "std_energy"),
        },
    ),
    6: FigureRecipe(
        6,
        "storage fidelity and phase dynamics, clean versus disordered",
        {"memory": ("encoding", "ratio", "e_scale", "t", "fidelity", "phase")},
        uses_time_axis=True,
    ),
    7: FigureRecipe(
        7,
        "mirror transfer: trajectory, mirroring time, and transfer fidelity",
        {
            "pst_trajectory": TRAJECTORY_COLUMNS,
            "pst_scan": ("ratio", "t_mirror", "fidelity_at_mirror",
                         "fidelity_revival"),
        },
        uses_time_axis=True,
    ),
}


@dataclass
class RunData:
    """Validated tables for one figure, keyed by artifact stem."""

    recipe: FigureRecipe
    data_dir: Path
    tables: dict[str, pd.DataFrame]
    manifest: dict

    def load_referenced(self, filename: str, columns: tuple[str, ...]) -> pd.DataFrame:
        """Load a file referenced from an index table (figure 2 profiles)."""
        return _read_table(self.data_dir / filename, columns)


def _read_table(path: Path, columns: tuple[str, ...]) -> pd.DataFrame:
    if not path.exists():
        alt = path.with_suffix(".json" if path.suffix == ".csv" else ".csv")
        if alt.exists():
            path = alt
        else:
            raise RecipeError(f"required artifact {path.name} not found in {path.parent}")
    if path.suffix == ".json":
        frame = pd.DataFrame(json.loads(path.read_text()))
    else:
        frame = pd.read_csv(path)
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise RecipeError(f"{path.name} is missing required columns {missing}")
    if frame.empty:
        raise RecipeError(f"{path.name} holds no data rows")
    return frame


def load_run(figure_id: int, data_dir) -> RunData:
    """Validate and load everything a figure needs from one run directory."""
    if figure_id not in RECIPES:
        raise RecipeError(f"figure id {figure_id} out of range; known: {sorted(RECIPES)}")
    recipe = RECIPES[figure_id]
    data_dir = Path(data_dir)

    manifest_path = data_dir / "manifest.json"
    if not manifest_path.exists():
        raise RecipeError(f"run manifest not found in {data_dir}")
    manifest = json.loads(manifest_path.read_text())
    if recipe.uses_time_axis and manifest.get("time_units") != EXPECTED_TIME_UNITS:
        raise RecipeError(
            f"time units mismatch: manifest says {manifest.get('time_units')!r}, "
            f"renderer expects {EXPECTED_TIME_UNITS!r}"
        )
    registered = set(manifest.get("artifacts", {}))

    tables = {}
    for stem, columns in recipe.tables.items():
        if not any(name.startswith(stem + ".") for name in registered):
            raise RecipeError(f"{stem} is not a registered artifact of this run")
        tables[stem] = _read_table(data_dir / f"{stem}.csv", columns)
    return RunData(recipe=recipe, data_dir=data_dir, tables=tables, manifest=manifest)
