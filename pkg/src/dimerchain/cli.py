"""Command-line interface: run experiments, emit CSV/JSON artifacts.

Every run writes a manifest (fully resolved configuration plus sha256 of
each artifact) next to its outputs; re-running with ``--config
manifest.json`` reproduces the files byte for byte. Figure presets pin all
parameters for one-command reproduction of the reference plots.

Exit codes: 0 ok, 2 configuration error, 3 solver/structural error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import load_manifest, write_manifest, write_table
from .chain import ChainConfigError, ChainSpec, build_hamiltonian
from .disorder import (
    DEFAULT_REALIZATIONS,
    DEFAULT_SEED,
    DisorderConfig,
    ensemble_average,
)
from .dynamics import (
    EIGENSTATE_ENCODING,
    SITE_ENCODING,
    evolve,
    gap_state,
    memory_report,
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
    StructuralCensusError,
    compute_metadata,
    eigendecompose,
    locate_gap_states,
)
from .topology import (
    DEFAULT_K_POINTS,
    GaplessCellError,
    cell_a,
    cell_b,
    interface_census,
    pseudospin_path,
    winding_number,
    zak_phase_difference,
)


class ConfigError(ValueError):
    """Bad CLI/file configuration."""


CHAIN_KEYS = ("family", "sites", "strong", "weak", "ratio")

COMMAND_DEFAULTS: dict[str, dict] = {
    "spectrum": {"family": "a", "sites": 101, "strong": 8.0, "weak": 0.2},
    "eigenstates": {"family": "a", "sites": 101, "strong": 8.0, "weak": 0.2,
                    "states": "auto"},
    "disorder": {"family": "a", "sites": 101, "strong": 8.0, "weak": 0.2,
                 "disorder": 0.0, "realizations": DEFAULT_REALIZATIONS,
                 "seed": DEFAULT_SEED},
    "evolve": {"family": "a", "sites": 101, "strong": 8.0, "weak": 0.2,
               "inject": "gapstate", "tmax": 1000.0, "samples": 4001,
               "raw_time": False},
    "memory": {"family": "a", "sites": 21, "strong": 8.0, "weak": 0.2,
               "tmax": 1000.0, "samples": 4001, "disorder": 0.0,
               "realizations": DEFAULT_REALIZATIONS, "seed": DEFAULT_SEED},
    "pst": {"family": "b", "sites": 21, "strong": 8.0, "weak": 1.6,
            "ratios": "", "tmax": 0.0, "coarse_points": 20_000,
            "trace": False},
    "classify": {"family": "a", "sites": 101, "strong": 8.0, "weak": 0.2,
                 "kpoints": DEFAULT_K_POINTS},
}

TRAJECTORY_HEADER = ["t", "re_overlap", "im_overlap", "fidelity",
                     "mirror_fidelity", "phase"]


def _chain_spec(cfg: dict) -> ChainSpec:
    strong = float(cfg["strong"])
    weak = float(cfg["weak"])
    ratio = cfg.get("ratio")
    if ratio not in (None, 0, 0.0):
        if "weak" in cfg.get("_explicit", ()):
            raise ConfigError("--weak and --ratio are mutually exclusive")
        if float(ratio) <= 1:
            raise ConfigError(f"--ratio must exceed 1, got {ratio}")
        weak = strong / float(ratio)
    return ChainSpec(family=cfg["family"], n_sites=int(cfg["sites"]),
                     strong=strong, weak=weak)


def _resolved_chain_config(cfg: dict, spec: ChainSpec) -> dict:
    return {"family": spec.family.value, "sites": spec.n_sites,
            "strong": spec.strong, "weak": spec.weak}


# ---------------------------------------------------------------------------
# command implementations; each returns (resolved_config, [artifact paths])
# ---------------------------------------------------------------------------

def _spectrum_rows(spec: ChainSpec):
    s = eigendecompose(build_hamiltonian(spec))
    meta = compute_metadata(s, spec)
    rows = [[m.n, m.energy, m.parity, m.ipr, m.peak_site, m.peak_amp, m.band_label]
            for m in meta]
    return s, rows


def run_spectrum(cfg: dict, out_dir: Path, fmt: str, stem: str = "spectrum"):
    spec = _chain_spec(cfg)
    _, rows = _spectrum_rows(spec)
    header = ["n", "energy", "parity", "ipr", "peak_site", "peak_amp", "band_label"]
    path = write_table(out_dir, stem, header, rows, fmt)
    return _resolved_chain_config(cfg, spec), [path]


def _showcase_states(s, spec) -> list[int]:
    meta = compute_metadata(s, spec)
    picks = {m.n for m in meta if m.band_label in (IN_GAP, OUTER_LOCALIZED)}
    for label in (LOWER_BAND, UPPER_BAND):
        band = [m.n for m in meta if m.band_label == label]
        if band:
            picks.update({band[0], band[len(band) // 2], band[-1]})
    return sorted(picks)


def run_eigenstates(cfg: dict, out_dir: Path, fmt: str, prefix: str = "eigenstate"):
    spec = _chain_spec(cfg)
    s = eigendecompose(build_hamiltonian(spec))
    selection = cfg.get("states", "auto")
    if selection == "auto":
        indices = _showcase_states(s, spec)
    else:
        try:
            indices = sorted({int(tok) for tok in str(selection).split(",") if tok.strip()})
        except ValueError:
            raise ConfigError(f"--states expects 'auto' or comma-separated integers, got {selection!r}")
        bad = [n for n in indices if not 0 <= n < spec.n_sites]
        if bad:
            raise ConfigError(f"state indices {bad} outside 0..{spec.n_sites - 1}")
    sites = spec.sites()
    artifacts = []
    index_rows = []
    for n in indices:
        rows = [[int(site), float(amp)] for site, amp in zip(sites, s.state(n))]
        artifacts.append(write_table(out_dir, f"{prefix}_n{n:03d}", ["site", "amplitude"], rows, fmt))
        index_rows.append([n, float(s.energies[n]), artifacts[-1].name])
    artifacts.append(write_table(out_dir, f"{prefix}_index", ["n", "energy", "file"], index_rows, fmt))
    resolved = _resolved_chain_config(cfg, spec)
    resolved["states"] = ",".join(str(n) for n in indices)
    return resolved, artifacts


def run_disorder(cfg: dict, out_dir: Path, fmt: str,
                 stem_occ: str = "disorder", stem_avg: str = "avg_spectrum",
                 e_values=None):
    spec = _chain_spec(cfg)
    if e_values is None:
        e_values = [float(cfg["disorder"])]
    realizations = int(cfg["realizations"])
    seed = int(cfg["seed"])
    occ_rows, avg_rows = [], []
    for e_scale in e_values:
        result = ensemble_average(spec, DisorderConfig(e_scale, realizations, seed))
        occ_rows += [[int(site), e_scale, float(r)]
                     for site, r in zip(spec.sites(), result.rho_bar)]
        avg_rows += [[n, e_scale, float(me), float(se)]
                     for n, (me, se) in enumerate(zip(result.avg_energies, result.std_energies))]
    paths = [
        write_table(out_dir, stem_occ, ["site", "e_scale", "rho_bar"], occ_rows, fmt),
        write_table(out_dir, stem_avg, ["n", "e_scale", "mean_energy", "std_energy"], avg_rows, fmt),
    ]
    resolved = _resolved_chain_config(cfg, spec)
    resolved.update({"disorder": e_values if len(e_values) > 1 else e_values[0],
                     "realizations": realizations, "seed": seed})
    return resolved, paths


def _trajectory_rows(traj, strong: float):
    return [
        [float(t * strong), float(o.real), float(o.imag), float(f), float(mf), float(p)]
        for t, o, f, mf, p in zip(traj.times, traj.overlap, traj.fidelity,
                                  traj.mirror_fidelity, traj.phase)
    ]


def run_evolve(cfg: dict, out_dir: Path, fmt: str):
    spec = _chain_spec(cfg)
    s = eigendecompose(build_hamiltonian(spec))
    inject = str(cfg["inject"])
    if inject == "gapstate":
        init = gap_state(s, spec)
    else:
        try:
            init = site_state(spec.n_sites, int(inject))
        except ValueError as err:
            raise ConfigError(f"--inject expects a site index or 'gapstate': {err}")
    tmax = float(cfg["tmax"])
    if tmax <= 0:
        raise ConfigError(f"--tmax must be positive, got {tmax}")
    t_raw = tmax if cfg.get("raw_time") else tmax / spec.strong
    times = np.linspace(0.0, t_raw, int(cfg["samples"]))
    traj = evolve(s, init, times)
    path = write_table(out_dir, "trajectory", TRAJECTORY_HEADER,
                       _trajectory_rows(traj, spec.strong), fmt)
    resolved = _resolved_chain_config(cfg, spec)
    resolved.update({"inject": inject, "tmax": tmax,
                     "samples": int(cfg["samples"]),
                     "raw_time": bool(cfg.get("raw_time", False))})
    return resolved, [path]


MEMORY_HEADER = ["encoding", "ratio", "e_scale", "t", "fidelity", "phase"]


def _memory_rows(summary, ratio: float):
    return [
        [summary.encoding, ratio, summary.e_scale, float(tu), float(f), float(p)]
        for tu, f, p in zip(summary.times_units, summary.fidelity, summary.phase)
    ]


def _memory_scalars(summary, ratio: float) -> dict:
    return {
        "encoding": summary.encoding,
        "ratio": ratio,
        "e_scale": summary.e_scale,
        "mean_fidelity": summary.mean_fidelity,
        "fidelity_min": summary.fidelity_min,
        "fidelity_max": summary.fidelity_max,
        "dominant_frequency": summary.dominant_frequency,
        "phase_drift": summary.phase_drift,
        "gap_energy_mean": float(np.mean(summary.gap_energies)),
        "gap_energy_spread": float(np.max(summary.gap_energies) - np.min(summary.gap_energies)),
    }


def run_memory(cfg: dict, out_dir: Path, fmt: str):
    spec = _chain_spec(cfg)
    horizon = float(cfg["tmax"])
    samples = int(cfg["samples"])
    e_scale = float(cfg["disorder"])
    disorder = None
    if e_scale > 0:
        disorder = DisorderConfig(e_scale, int(cfg["realizations"]), int(cfg["seed"]))
    rows, scalars = [], []
    for encoding in (SITE_ENCODING, EIGENSTATE_ENCODING):
        clean = memory_report(spec, encoding, horizon, samples)
        rows += _memory_rows(clean, spec.ratio)
        scalars.append(_memory_scalars(clean, spec.ratio))
        if disorder is not None:
            noisy = memory_report(spec, encoding, horizon, samples, disorder)
            rows += _memory_rows(noisy, spec.ratio)
            scalars.append(_memory_scalars(noisy, spec.ratio))
    paths = [write_table(out_dir, "memory", MEMORY_HEADER, rows, fmt)]
    summary_path = Path(out_dir) / "memory_summary.json"
    summary_path.write_text(json.dumps(scalars, indent=2, sort_keys=True) + "\n")
    paths.append(summary_path)
    resolved = _resolved_chain_config(cfg, spec)
    resolved.update({"tmax": horizon, "samples": samples, "disorder": e_scale,
                     "realizations": int(cfg["realizations"]), "seed": int(cfg["seed"])})
    return resolved, paths


def run_pst(cfg: dict, out_dir: Path, fmt: str):
    spec = _chain_spec(cfg)
    ratios_text = str(cfg.get("ratios", "")).strip()
    if ratios_text:
        try:
            ratios = [float(tok) for tok in ratios_text.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"--ratios expects comma-separated numbers, got {ratios_text!r}")
    else:
        ratios = [spec.ratio]
    tmax = float(cfg.get("tmax") or 0.0)
    run_kwargs = {"coarse_points": int(cfg["coarse_points"])}
    if tmax > 0:
        run_kwargs["t_max_units"] = tmax
    results = pst_scan(spec.family, spec.n_sites, ratios, strong=spec.strong, **run_kwargs)
    rows = [[r.ratio, r.t_mirror_units, r.fidelity_at_mirror, r.fidelity_revival,
             r.t_oracle_units, r.transfer_detected] for r in results]
    paths = [write_table(out_dir, "pst_scan",
                         ["ratio", "t_mirror", "fidelity_at_mirror",
                          "fidelity_revival", "t_oracle", "transfer_detected"],
                         rows, fmt)]
    if cfg.get("trace"):
        first = results[0]
        trace_spec = ChainSpec.from_ratio(spec.family, spec.n_sites, ratios[0],
                                          strong=spec.strong)
        s = eigendecompose(build_hamiltonian(trace_spec))
        init = site_state(trace_spec.n_sites, -trace_spec.m)
        t_end = 2.4 * first.t_mirror_units / trace_spec.strong
        traj = evolve(s, init, np.linspace(0.0, t_end, int(cfg["coarse_points"]) // 4 + 1))
        paths.append(write_table(out_dir, "pst_trajectory", TRAJECTORY_HEADER,
                                 _trajectory_rows(traj, trace_spec.strong), fmt))
    resolved = _resolved_chain_config(cfg, spec)
    resolved.update({"ratios": ",".join(format(r, "g") for r in ratios),
                     "tmax": tmax, "coarse_points": int(cfg["coarse_points"]),
                     "trace": bool(cfg.get("trace", False))})
    return resolved, paths


def run_classify(cfg: dict, out_dir: Path, fmt: str):
    spec = _chain_spec(cfg)
    k_points = int(cfg["kpoints"])
    cells = {"a": cell_a(spec.strong, spec.weak), "b": cell_b(spec.strong, spec.weak)}
    paths = []
    for name, cell in cells.items():
        k, sx, sy = pseudospin_path(cell, k_points)
        rows = [[float(kk), float(x), float(y)] for kk, x, y in zip(k, sx, sy)]
        paths.append(write_table(out_dir, f"pseudospin_{name}", ["k", "sx", "sy"], rows, fmt))

    census = interface_census(spec)
    s = eigendecompose(build_hamiltonian(spec))
    located = locate_gap_states(s, spec)  # raises StructuralCensusError on mismatch
    found_gap = sum(1 for _, lab in located if lab == IN_GAP)
    found_outer = sum(1 for _, lab in located if lab == OUTER_LOCALIZED)
    payload = {
        "winding": {"A": winding_number(cells["a"], k_points),
                    "B": winding_number(cells["b"], k_points)},
        "zak_difference": zak_phase_difference(spec.strong, spec.weak, k_points),
        "census": {"in_gap": census.in_gap, "outer": census.outer,
                   "locations": list(census.locations)},
        "diagonalization": {"in_gap": found_gap, "outer": found_outer},
        "consistent": (found_gap, found_outer) == (census.in_gap, census.outer),
    }
    out_path = Path(out_dir) / "classification.json"
    out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    paths.append(out_path)
    resolved = _resolved_chain_config(cfg, spec)
    resolved["kpoints"] = k_points
    return resolved, paths


COMMANDS = {
    "spectrum": run_spectrum,
    "eigenstates": run_eigenstates,
    "disorder": run_disorder,
    "evolve": run_evolve,
    "memory": run_memory,
    "pst": run_pst,
    "classify": run_classify,
}


# ---------------------------------------------------------------------------
# figure presets: pinned parameters reproducing the reference figures
# ---------------------------------------------------------------------------

FIGURE_E_VALUES = [0.0, 0.1, 1.0, 1.5]


def preset_figure2(out_dir: Path, fmt: str):
    artifacts = []
    for family in ("a", "b"):
        cfg = {"family": family, "sites": 101, "strong": 8.0, "weak": 0.2,
               "states": "auto"}
        _, paths = run_eigenstates(cfg, out_dir, fmt, prefix=f"eigenstate_{family}")
        artifacts += paths
    return {"families": "a,b", "sites": 101, "strong": 8.0, "weak": 0.2}, artifacts


def preset_figure3(out_dir: Path, fmt: str):
    artifacts = []
    for family in ("a", "b"):
        cfg = {"family": family, "sites": 101, "strong": 8.0, "weak": 0.2}
        _, paths = run_spectrum(cfg, out_dir, fmt, stem=f"spectrum_{family}")
        artifacts += paths
    return {"families": "a,b", "sites": 101, "strong": 8.0, "weak": 0.2}, artifacts


def _preset_disorder(out_dir: Path, fmt: str):
    artifacts = []
    for family in ("a", "b"):
        cfg = {"family": family, "sites": 101, "strong": 8.0, "weak": 0.2,
               "realizations": DEFAULT_REALIZATIONS, "seed": DEFAULT_SEED,
               "disorder": 0.0}
        _, paths = run_disorder(cfg, out_dir, fmt, stem_occ=f"disorder_{family}",
                                stem_avg=f"avg_spectrum_{family}",
                                e_values=FIGURE_E_VALUES)
        artifacts += paths
    resolved = {"families": "a,b", "sites": 101, "strong": 8.0, "weak": 0.2,
                "disorder": FIGURE_E_VALUES,
                "realizations": DEFAULT_REALIZATIONS, "seed": DEFAULT_SEED}
    return resolved, artifacts


def preset_figure4(out_dir: Path, fmt: str):
    return _preset_disorder(out_dir, fmt)


def preset_figure5(out_dir: Path, fmt: str):
    return _preset_disorder(out_dir, fmt)


def preset_figure6(out_dir: Path, fmt: str):
    rows, scalars = [], []
    disorder = DisorderConfig(0.1, DEFAULT_REALIZATIONS, DEFAULT_SEED)
    for ratio in (40.0, 20.0, 10.0):
        spec = ChainSpec.from_ratio("a", 21, ratio)
        encodings = (SITE_ENCODING, EIGENSTATE_ENCODING) if ratio == 40.0 else (SITE_ENCODING,)
        for encoding in encodings:
            clean = memory_report(spec, encoding)
            noisy = memory_report(spec, encoding, disorder=disorder)
            rows += _memory_rows(clean, ratio) + _memory_rows(noisy, ratio)
            scalars += [_memory_scalars(clean, ratio), _memory_scalars(noisy, ratio)]
    paths = [write_table(out_dir, "memory", MEMORY_HEADER, rows, fmt)]
    summary_path = Path(out_dir) / "memory_summary.json"
    summary_path.write_text(json.dumps(scalars, indent=2, sort_keys=True) + "\n")
    paths.append(summary_path)
    resolved = {"family": "a", "sites": 21, "strong": 8.0, "ratios": "40,20,10",
                "disorder": 0.1, "realizations": DEFAULT_REALIZATIONS,
                "seed": DEFAULT_SEED, "tmax": 1000.0, "samples": 4001}
    return resolved, paths


def preset_figure7(out_dir: Path, fmt: str):
    cfg = {"family": "b", "sites": 21, "strong": 8.0, "weak": 1.6,
           "ratios": "5,10,20", "tmax": 0.0, "coarse_points": 20_000,
           "trace": True}
    return run_pst(cfg, out_dir, fmt)


PRESETS = {2: preset_figure2, 3: preset_figure3, 4: preset_figure4,
           5: preset_figure5, 6: preset_figure6, 7: preset_figure7}


# ---------------------------------------------------------------------------
# argument parsing and config resolution
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default '.')")
    parser.add_argument("--format", default=argparse.SUPPRESS, choices=("csv", "json"),
                        help="tabular artifact format (default csv)")
    parser.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON config file or a previously emitted manifest.json")


def _add_chain(parser: argparse.ArgumentParser):
    parser.add_argument("--family", default=argparse.SUPPRESS, choices=("a", "b"),
                        help="chain family: a = weak-center, b = strong-center")
    parser.add_argument("--sites", type=int, default=argparse.SUPPRESS,
                        help="odd number of sites")
    parser.add_argument("--strong", type=float, default=argparse.SUPPRESS,
                        help="strong coupling")
    parser.add_argument("--weak", type=float, default=argparse.SUPPRESS,
                        help="weak coupling")
    parser.add_argument("--ratio", type=float, default=argparse.SUPPRESS,
                        help="coupling ratio; sets weak = strong/ratio")


def _add_disorder(parser: argparse.ArgumentParser):
    parser.add_argument("--disorder", type=float, default=argparse.SUPPRESS,
                        help="disorder scale E (onsite spread E*strong)")
    parser.add_argument("--realizations", type=int, default=argparse.SUPPRESS,
                        help="ensemble size")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="base RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimerchain",
        description="Dimerized spin chains: spectra, disorder robustness, "
                    "quantum memory, state transfer, topological classification.",
    )
    parser.add_argument("--version", action="version", version=f"dimerchain {__version__}")
    parser.add_argument("--figure", type=int, choices=sorted(PRESETS),
                        help="run a pinned preset reproducing one reference figure")
    _add_common(parser)
    parser.set_defaults(out=None, format=None, config=None)

    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("spectrum", help="full spectrum with per-state metadata")
    _add_common(p); _add_chain(p)

    p = sub.add_parser("eigenstates", help="amplitude profiles of selected eigenstates")
    _add_common(p); _add_chain(p)
    p.add_argument("--states", default=argparse.SUPPRESS,
                   help="'auto' or comma-separated eigenstate indices")

    p = sub.add_parser("disorder", help="ensemble-averaged occupancies and spectra")
    _add_common(p); _add_chain(p); _add_disorder(p)

    p = sub.add_parser("evolve", help="time evolution of one injected state")
    _add_common(p); _add_chain(p)
    p.add_argument("--inject", default=argparse.SUPPRESS,
                   help="site index or 'gapstate'")
    p.add_argument("--tmax", type=float, default=argparse.SUPPRESS,
                   help="horizon in 1/strong units (raw with --raw-time)")
    p.add_argument("--samples", type=int, default=argparse.SUPPRESS,
                   help="number of time samples")
    p.add_argument("--raw-time", dest="raw_time", action="store_true",
                   default=argparse.SUPPRESS, help="interpret --tmax as raw time")

    p = sub.add_parser("memory", help="storage fidelity/phase for both encodings")
    _add_common(p); _add_chain(p); _add_disorder(p)
    p.add_argument("--tmax", type=float, default=argparse.SUPPRESS,
                   help="horizon in 1/strong units")
    p.add_argument("--samples", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("pst", help="mirror state transfer scan")
    _add_common(p); _add_chain(p)
    p.add_argument("--ratios", default=argparse.SUPPRESS,
                   help="comma-separated coupling ratios to scan")
    p.add_argument("--tmax", type=float, default=argparse.SUPPRESS,
                   help="scan horizon in 1/strong units (default: auto)")
    p.add_argument("--coarse-points", dest="coarse_points", type=int,
                   default=argparse.SUPPRESS, help="coarse scan grid size")
    p.add_argument("--trace", action="store_true", default=argparse.SUPPRESS,
                   help="also write the trajectory for the first ratio")

    p = sub.add_parser("classify", help="winding, Zak phase difference, state census")
    _add_common(p); _add_chain(p)
    p.add_argument("--kpoints", type=int, default=argparse.SUPPRESS,
                   help="Brillouin-zone samples")

    return parser


def _load_config_file(path: str) -> tuple[str | None, dict]:
    payload = load_manifest(path) if path.endswith("manifest.json") else json.loads(Path(path).read_text())
    if not isinstance(payload, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    if "artifacts" in payload and isinstance(payload.get("config"), dict):
        return payload.get("command"), dict(payload["config"])
    command = payload.pop("command", None)
    return command, payload


def resolve_run(args: argparse.Namespace) -> tuple[str, dict]:
    """Merge built-in defaults, config file, and explicit flags (flags win)."""
    file_command, file_cfg = (None, {})
    if args.config:
        file_command, file_cfg = _load_config_file(args.config)

    command = args.command or file_command
    if args.figure is not None:
        if command:
            raise ConfigError("--figure is a standalone preset; do not combine with a command")
        return f"figure{args.figure}", {}
    if command is None:
        raise ConfigError("no command given (and no --figure preset)")
    if command.startswith("figure"):
        if command[6:].isdigit() and int(command[6:]) in PRESETS:
            return command, {}
        raise ConfigError(f"unknown preset {command!r}")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")

    defaults = dict(COMMAND_DEFAULTS[command])
    allowed = set(defaults) | {"ratio", "families"}
    unknown = set(file_cfg) - allowed - {"out", "format"}
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {sorted(unknown)}")

    explicit = {k: v for k, v in vars(args).items()
                if k in allowed and k not in ("command",)}
    cfg = {**defaults, **{k: v for k, v in file_cfg.items() if k in allowed}, **explicit}
    cfg["_explicit"] = tuple(explicit)
    return command, cfg


def _emit_error(kind: str, message: str):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        command, cfg = resolve_run(args)
        fmt = args.format or cfg.pop("format", None) or "csv"
        out_dir = Path(args.out or cfg.pop("out", None) or ".")
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as err:
            raise OSError(f"cannot create output directory {out_dir}: {err}") from err

        if command.startswith("figure"):
            resolved, artifacts = PRESETS[int(command[6:])](out_dir, fmt)
        else:
            resolved, artifacts = COMMANDS[command](cfg, out_dir, fmt)
        write_manifest(out_dir, command, resolved, artifacts)
        return 0
    except (ConfigError, ChainConfigError, GaplessCellError) as err:
        _emit_error("config", str(err))
        return 2
    except (SolverConvergenceError, StructuralCensusError) as err:
        _emit_error("solver", str(err))
        return 3
    except OSError as err:
        _emit_error("io", str(err))
        return 4


if __name__ == "__main__":
    sys.exit(main())
