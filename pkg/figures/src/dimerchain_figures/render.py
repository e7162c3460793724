"""Renderers for figures 2-7 plus the render_figure entry point.

All physics numbers come from the CSV artifacts; rendering applies plotting
transforms only (offsets, grouping, axis breaks). Energy-stacked panels
(figures 2 and 4) follow the broken-axis convention: profiles sit at evenly
spaced baselines labeled by their energy or disorder scale, so the vertical
axis is not to scale and gap regions are omitted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import RECIPES, RecipeError, RunData, load_run

GRAYSCALE = {0.0: "black", 0.1: "dimgray", 1.0: "gray", 1.5: "lightgray"}
FAMILY_TITLES = {"a": "(a) weak-center chain", "b": "(b) strong-center chain"}


def _grayscale(e_scale: float) -> str:
    return GRAYSCALE.get(float(e_scale), "tab:blue")


def render_figure2(run: RunData, axes):
    for ax, family in zip(axes, ("a", "b")):
        index = run.tables[f"eigenstate_{family}_index"].sort_values("energy")
        columns = run.recipe.extra["profile_columns"]
        for row_pos, (_, entry) in enumerate(index.iterrows()):
            profile = run.load_referenced(entry["file"], columns)
            ax.plot(profile["site"], row_pos + 0.42 * profile["amplitude"],
                    lw=0.9, color="black")
            ax.axhline(row_pos, lw=0.3, color="0.85", zorder=0)
        ax.set_yticks(range(len(index)))
        ax.set_yticklabels([f"{e:.4g}" for e in index["energy"]], fontsize=7)
        ax.set_xlabel("site $i$")
        ax.set_title(FAMILY_TITLES[family], fontsize=9)
    axes[0].set_ylabel("amplitude at energy (axis not to scale,\ngap regions omitted)")


def render_figure3(run: RunData, axes):
    markers = {"lower_band": ".", "upper_band": ".", "in_gap": "o",
               "outer_localized": "s"}
    colors = {"lower_band": "0.4", "upper_band": "0.4", "in_gap": "crimson",
              "outer_localized": "navy"}
    for ax, family in zip(axes, ("a", "b")):
        table = run.tables[f"spectrum_{family}"]
        for label, group in table.groupby("band_label"):
            ax.scatter(group["n"], group["energy"], s=14,
                       marker=markers.get(label, "."),
                       color=colors.get(label, "0.4"), label=label)
        ax.set_xlabel("level index $n$")
        ax.set_title(FAMILY_TITLES[family], fontsize=9)
        ax.legend(fontsize=6, loc="upper left")
    axes[0].set_ylabel("energy")
    # zoom on the doubly degenerate lower band of the weak-center chain
    table_a = run.tables["spectrum_a"]
    lower = table_a[table_a["band_label"] == "lower_band"]
    inset = axes[0].inset_axes([0.45, 0.12, 0.5, 0.3])
    inset.scatter(lower["n"], lower["energy"], s=6, color="0.4")
    inset.set_title("lower band zoom", fontsize=6)
    inset.tick_params(labelsize=5)


def render_figure4(run: RunData, axes):
    for ax, family in zip(axes, ("a", "b")):
        table = run.tables[f"disorder_{family}"]
        scales = sorted(table["e_scale"].unique())
        for row_pos, e_scale in enumerate(scales):
            block = table[table["e_scale"] == e_scale]
            ax.plot(block["site"], row_pos + 0.9 * block["rho_bar"],
                    color=_grayscale(e_scale), lw=1.0)
            ax.axhline(row_pos, lw=0.3, color="0.9", zorder=0)
        ax.set_yticks(range(len(scales)))
        ax.set_yticklabels([f"E={e:g}" for e in scales], fontsize=7)
        ax.set_xlabel("site $i$")
        ax.set_title(FAMILY_TITLES[family], fontsize=9)
    axes[0].set_ylabel(r"$\bar{\rho}_i$ per disorder scale "
                       "(axis not to scale, gap regions omitted)")


def render_figure5(run: RunData, axes):
    for ax, family in zip(axes, ("a", "b")):
        table = run.tables[f"avg_spectrum_{family}"]
        for e_scale, block in table.groupby("e_scale"):
            ax.errorbar(block["n"], block["mean_energy"], yerr=block["std_energy"],
                        fmt=".", ms=3, lw=0.5, color=_grayscale(e_scale),
                        label=f"E={e_scale:g}")
        ax.set_xlabel("level index $n$")
        ax.set_title(FAMILY_TITLES[family], fontsize=9)
        ax.legend(fontsize=6)
    axes[0].set_ylabel("ensemble-averaged energy")


def render_figure6(run: RunData, axes):
    table = run.tables["memory"]
    top, bottom = axes
    main_ratio = table["ratio"].max()

    def block(encoding, ratio, e_scale):
        sel = ((table["encoding"] == encoding) & (table["ratio"] == ratio)
               & (table["e_scale"] == e_scale))
        return table[sel]

    for encoding, e_scale, style, color in (
        ("site", 0.0, "-", "tab:green"),
        ("eigenstate", 0.0, "-", "tab:orange"),
        ("eigenstate", 0.1, "--", "tab:blue"),
    ):
        rows = block(encoding, main_ratio, e_scale)
        if not rows.empty:
            top.plot(rows["t"], rows["fidelity"], style, lw=1.0, color=color,
                     label=f"{encoding}, E={e_scale:g}")
    top.set_ylabel("fidelity")
    top.set_xlabel("t (1/strong)")
    top.legend(fontsize=6)

    for ratio, color in zip(sorted(table["ratio"].unique()),
                            ("tab:purple", "tab:red", "tab:brown")):
        clean = block("site", ratio, 0.0)
        noisy = block("site", ratio, 0.1)
        if not clean.empty:
            bottom.plot(clean["t"], clean["phase"], "-", lw=1.0, color=color,
                        label=f"ratio {ratio:g}, clean")
        if not noisy.empty:
            bottom.plot(noisy["t"], noisy["phase"], "--", lw=1.0, color=color,
                        label=f"ratio {ratio:g}, E=0.1")
    bottom.set_ylabel("phase (rad)")
    bottom.set_xlabel("t (1/strong)")
    bottom.legend(fontsize=6, ncol=2)


def render_figure7(run: RunData, axes):
    traj = run.tables["pst_trajectory"]
    scan = run.tables["pst_scan"].sort_values("ratio")
    pa, pb, pc = axes
    pa.plot(traj["t"], traj["fidelity"], color="crimson", lw=0.9,
            label="initial site")
    pa.plot(traj["t"], traj["mirror_fidelity"], color="0.5", lw=0.9,
            label="mirror site")
    pa.set_xlabel("t (1/strong)")
    pa.set_ylabel("fidelity")
    pa.legend(fontsize=6)
    pb.semilogy(scan["ratio"], scan["t_mirror"], "o-", color="black")
    pb.set_xlabel("coupling ratio")
    pb.set_ylabel(r"$t_M$ (1/strong)")
    pc.plot(scan["ratio"], scan["fidelity_at_mirror"], "o-", color="black")
    pc.set_xlabel("coupling ratio")
    pc.set_ylabel(r"$F(t_M)$")
    pc.set_ylim(0.9, 1.005)


LAYOUTS = {
    2: ((1, 2), (9.0, 5.0), render_figure2),
    3: ((1, 2), (9.0, 4.0), render_figure3),
    4: ((1, 2), (9.0, 4.5), render_figure4),
    5: ((1, 2), (9.0, 4.0), render_figure5),
    6: ((2, 1), (7.0, 6.0), render_figure6),
    7: ((1, 3), (10.0, 3.2), render_figure7),
}


def render(figure_id: int, data_dir, out_file) -> Path:
    """Render one figure from a run directory to an image file."""
    run = load_run(figure_id, data_dir)
    (nrows, ncols), figsize, renderer = LAYOUTS[figure_id]
    fig, axes = plt.subplots(nrows, ncols, figsize=figsize)
    try:
        renderer(run, np.atleast_1d(axes).ravel())
        fig.suptitle(f"figure {figure_id}: {run.recipe.description}", fontsize=9)
        fig.tight_layout()
        out_file = Path(out_file)
        fig.savefig(out_file, dpi=150)
    finally:
        plt.close(fig)
    return out_file


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figure",
        description="Render a figure from dimerchain CLI artifacts.",
    )
    parser.add_argument("figure_id", type=int, help="figure id (2-7)")
    parser.add_argument("--data", required=True, help="run directory with CSVs and manifest")
    parser.add_argument("--out", default=None,
                        help="output image (default: <data>/figure<id>.png)")
    args = parser.parse_args(argv)
    out = args.out or str(Path(args.data) / f"figure{args.figure_id}.png")
    try:
        path = render(args.figure_id, args.data, out)
    except RecipeError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
