"""Batch front end: ``auxnet <scenario> --config cfg.json --out dir``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .config import ScenarioConfig, load_config
from .const import (
    EXIT_INVALID_CONFIG,
    EXIT_NUMERICAL_FAILURE,
    EXIT_OK,
    INTEGRATION_VERSION,
    MANIFEST_FILENAME,
    SCENARIOS,
)
from .dynamics import compare_lee
from .exceptions import ConfigError, DomainError, NumericalError
from .network import (
    DefectChainParams,
    LeeParams,
    PartitionedHamiltonian,
    PtBicParams,
    assemble_composite,
    build_defect_chain,
    build_pt_bic,
    lee_synthesis_values,
    network_from_json,
    validate,
)
from .output import write_csv, write_json, write_manifest, write_plot
from .reduction import EffectiveOperator, ReductionKind, weak_coupling_ratio
from .scattering import (
    bound_state_poles,
    invisibility_deviation,
    lee_bound_energies,
    lee_phase,
    nearest_composite_eigenvalue,
    transmission_sweep,
)
from .spectra import (
    align_phase,
    bic_index,
    bic_overlap,
    embed_bic_composite,
    gap_states,
    odd_site_mass,
    pt_threshold_vs_size,
    spectrum,
    verify_bic,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunResult:
    files: tuple[str, ...]
    runtime: float


def _run_defect(cfg: ScenarioConfig) -> list[str]:
    prm = cfg.parameters
    written: list[str] = []
    curves = []
    transmission_rows = []
    pole_rows = []
    plot_curves = []
    for u_aux in prm["u_values"]:
        p = DefectChainParams.invisible(prm["theta"], u_aux, kappa=prm["kappa"], n_trunc=prm["n_trunc"])
        sweep = transmission_sweep(p, prm["n_q"])
        for q, energy, t, r in zip(sweep.q, sweep.energy, sweep.t, sweep.r):
            transmission_rows.append((u_aux, q, energy, abs(t) ** 2, np.angle(t), abs(r) ** 2))
        plot_curves.append((sweep.energy, sweep.transmittance, f"U = {u_aux:g}"))

        poles = bound_state_poles(u_aux, prm["theta"], prm["kappa"])
        oracle = build_defect_chain(p) if prm["bound_state_oracle"] and poles else None
        for pole in poles:
            check = nearest_composite_eigenvalue(oracle, pole.energy) if oracle is not None else complex("nan")
            pole_rows.append(
                (u_aux, pole.y.real, pole.y.imag, pole.energy.real, pole.energy.imag, check.real, check.imag)
            )
        curves.append(
            {
                "u_aux": u_aux,
                "omega": p.omega,
                "sigma": p.sigma,
                "max_transmittance_deviation": invisibility_deviation(p, prm["e_max"], prm["n_q"]),
                "bound_state_energies": [pole.energy for pole in poles],
            }
        )
        _LOGGER.info("defect U=%g: %d bound states", u_aux, len(poles))

    if cfg.wants("csv"):
        write_csv(cfg.output / "transmission.csv", ("U", "q", "E", "abs_t2", "arg_t", "abs_r2"), transmission_rows)
        write_csv(
            cfg.output / "bound_states.csv",
            ("U", "y_re", "y_im", "E_re", "E_im", "E_composite_re", "E_composite_im"),
            pole_rows,
        )
        written += ["transmission.csv", "bound_states.csv"]
    if cfg.wants("json"):
        write_json(cfg.output / "summary.json", {"theta": prm["theta"], "e_max": prm["e_max"], "curves": curves})
        written.append("summary.json")
    if cfg.wants("svg"):
        write_plot(cfg.output / "transmission.svg", plot_curves, xlabel="E / kappa", ylabel="|t|^2")
        written.append("transmission.svg")
    return written


def _run_lee(cfg: ScenarioConfig) -> list[str]:
    prm = cfg.parameters
    p = LeeParams(
        kappa=prm["kappa"],
        sigma=prm["sigma"],
        g_imag=prm["g_imag"],
        theta=prm["theta"],
        omega=prm["omega"],
        n_trunc=prm["n_trunc"],
    )
    synthesis = lee_synthesis_values(p, prm["e_ref"])
    comparison = compare_lee(p, prm["t_max"], prm["dt"], prm["e_ref"])
    e1, e2 = lee_bound_energies(p.sigma, p.g_imag, p.kappa)
    try:
        phase: str | None = lee_phase(p.sigma, p.g_imag, p.kappa).value
    except DomainError:
        phase = None
    _LOGGER.info(
        "lee: beat %.4f, extracted %.4f (exact) / %.4f (synthesized)",
        comparison.beat_frequency,
        comparison.dominant_frequency,
        comparison.dominant_frequency_synth,
    )

    written: list[str] = []
    exact, synth = comparison.series_exact, comparison.series_synth
    if cfg.wants("csv"):
        write_csv(cfg.output / "pt_compare.csv", ("t", "P_exact", "P_synth"), zip(exact.times, exact.values, synth.values))
        written.append("pt_compare.csv")
    if cfg.wants("json"):
        write_json(
            cfg.output / "summary.json",
            {
                "E1": e1,
                "E2": e2,
                "phase": phase,
                "synthesis": synthesis,
                "beat_frequency": comparison.beat_frequency,
                "dominant_frequency_exact": comparison.dominant_frequency,
                "dominant_frequency_synth": comparison.dominant_frequency_synth,
                "linf_gap": comparison.linf_gap,
                "echo_time": comparison.echo_time,
            },
        )
        written.append("summary.json")
    if cfg.wants("svg"):
        write_plot(
            cfg.output / "occupation.svg",
            [(exact.times, exact.values, "exact"), (synth.times, synth.values, "synthesized")],
            xlabel="t kappa",
            ylabel="P(t)",
        )
        written.append("occupation.svg")
    return written


def _run_ptbic(cfg: ScenarioConfig) -> list[str]:
    prm = cfg.parameters
    p = PtBicParams(kappa=prm["kappa"], omega=prm["omega"], u_aux=prm["u_aux"], n_trunc=prm["n_trunc"])
    report = spectrum(assemble_composite(build_pt_bic(p)))
    gaps = gap_states(report, p.kappa)
    idx = bic_index(report)
    residual = verify_bic(p)
    analytic = align_phase(embed_bic_composite(p))
    analytic = analytic / np.linalg.norm(analytic)
    numeric = align_phase(report.vectors[:, idx])
    _LOGGER.info("ptbic: max |Im E| = %.3e, %d gap states", report.max_abs_imag, len(gaps))

    written: list[str] = []
    if cfg.wants("csv"):
        write_csv(
            cfg.output / "spectrum.csv",
            ("index", "E_re", "E_im", "R"),
            zip(range(report.n_sites), report.energies.real, report.energies.imag, report.participation),
        )
        labels = [str(n) for n in range(-p.n_half, p.n_half + 1)] + ["a1", "a2"]
        write_csv(
            cfg.output / "bic_state.csv",
            ("site", "analytic_re", "analytic_im", "numeric_re", "numeric_im"),
            zip(labels, analytic.real, analytic.imag, numeric.real, numeric.imag),
        )
        written += ["spectrum.csv", "bic_state.csv"]
    if cfg.wants("json"):
        write_json(
            cfg.output / "summary.json",
            {
                "n_sites": report.n_sites,
                "g": p.g,
                "max_abs_imag": report.max_abs_imag,
                "pt_unbroken": report.max_abs_imag <= prm["eps_imag"],
                "gap_energies": report.energies[gaps],
                "bic_energy": report.energies[idx],
                "bic_participation": report.participation[idx],
                "bic_overlap": bic_overlap(report, p),
                "bic_odd_site_mass": odd_site_mass(report.vectors[:, idx], p),
                "bic_residual": residual.__dict__,
            },
        )
        written.append("summary.json")
    if cfg.wants("svg"):
        write_plot(
            cfg.output / "participation.svg",
            [(report.energies.real, report.participation, "")],
            xlabel="Re E / kappa",
            ylabel="participation ratio R",
            scatter=True,
        )
        written.append("participation.svg")
    return written


def _reduce_network(prm: dict) -> PartitionedHamiltonian:
    if prm["network_file"] is not None:
        try:
            doc = json.loads(Path(prm["network_file"]).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot load network file {prm['network_file']}: {err}") from err
        return network_from_json(doc)
    if prm["network"] is not None:
        return network_from_json(prm["network"])
    return build_defect_chain(DefectChainParams.invisible(prm["theta"], prm["u_aux"], n_trunc=prm["n_trunc"]))


def _run_reduce(cfg: ScenarioConfig) -> list[str]:
    prm = cfg.parameters
    network = _reduce_network(prm)
    energy = prm["energy"]
    energy = complex(*energy) if isinstance(energy, list) else complex(energy)
    kind = ReductionKind(prm["kind"])
    h_eff = EffectiveOperator(network, kind, energy).matrix()
    report = validate(network)
    summary = {
        "kind": kind.value,
        "energy": energy if kind is ReductionKind.EXACT else None,
        "n_sys": network.n_sys,
        "m_aux": network.m_aux,
        "violations": [v.__dict__ for v in report.violations],
        "symmetry_deviation": float(np.max(np.abs(h_eff - h_eff.T))),
        "weak_coupling_ratio": weak_coupling_ratio(network) if kind is ReductionKind.MARKOV else None,
    }
    rows = [(int(i), int(j), h_eff[i, j].real, h_eff[i, j].imag) for i, j in zip(*np.nonzero(h_eff))]
    written: list[str] = []
    if cfg.wants("csv"):
        write_csv(cfg.output / "effective.csv", ("i", "j", "re", "im"), rows)
        written.append("effective.csv")
    if cfg.wants("json"):
        write_json(cfg.output / "summary.json", summary)
        written.append("summary.json")
    return written


def _run_sweep(cfg: ScenarioConfig) -> list[str]:
    prm = cfg.parameters
    base = PtBicParams(kappa=prm["kappa"], omega=prm["omega"])
    points = pt_threshold_vs_size(
        prm["sizes"],
        base,
        (prm["u_min"], prm["u_max"]),
        prm["eps_imag"],
        max_workers=prm["max_workers"],
    )
    written: list[str] = []
    if cfg.wants("csv"):
        write_csv(cfg.output / "threshold.csv", ("n_sites", "u_threshold"), ((pt.n_sites, pt.u_threshold) for pt in points))
        written.append("threshold.csv")
    if cfg.wants("json"):
        write_json(
            cfg.output / "summary.json",
            {"u_range": [prm["u_min"], prm["u_max"]], "thresholds": [pt.__dict__ for pt in points]},
        )
        written.append("summary.json")
    if cfg.wants("svg"):
        write_plot(
            cfg.output / "threshold.svg",
            [([pt.n_sites for pt in points], [pt.u_threshold for pt in points], "")],
            xlabel="N",
            ylabel="U_threshold / kappa",
        )
        written.append("threshold.svg")
    return written


RUNNERS: dict[str, Callable[[ScenarioConfig], list[str]]] = {
    "defect": _run_defect,
    "lee": _run_lee,
    "ptbic": _run_ptbic,
    "reduce": _run_reduce,
    "sweep": _run_sweep,
}


def run(cfg: ScenarioConfig) -> RunResult:
    """Run one scenario into ``cfg.output`` and write its manifest."""
    try:
        cfg.output.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise ConfigError(f"cannot create output directory {cfg.output}: {err}") from err
    started = time.perf_counter()
    files = RUNNERS[cfg.scenario](cfg)
    runtime = time.perf_counter() - started
    write_manifest(
        cfg.output / MANIFEST_FILENAME,
        scenario=cfg.scenario,
        parameters=cfg.parameters,
        defaults_filled=cfg.defaults_filled,
        files=files,
        runtime=runtime,
    )
    _LOGGER.info("%s finished in %.2f s: %s", cfg.scenario, runtime, ", ".join(files))
    return RunResult(files=tuple(files) + (MANIFEST_FILENAME,), runtime=runtime)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auxnet",
        description="Synthesize and analyze tight-binding networks with auxiliary non-Hermitian sites.",
    )
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", type=Path, default=None, help="JSON scenario config (defaults if omitted)")
    parser.add_argument("--out", type=Path, required=True, help="output directory")
    parser.add_argument("--format", dest="formats", default=None, help="comma-separated subset of csv,json,svg")
    parser.add_argument("--seedless", action="store_true", help="accepted for compatibility; runs are deterministic")
    parser.add_argument("--version", action="version", version=f"%(prog)s {INTEGRATION_VERSION}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        cfg = load_config(args.config, args.scenario, args.out, args.formats)
        run(cfg)
    except (ConfigError, ValueError) as err:
        _LOGGER.error("Invalid configuration: %s", err)
        return EXIT_INVALID_CONFIG
    except NumericalError as err:
        _LOGGER.error("Numerical failure (%s): %s", type(err).__name__, err)
        return EXIT_NUMERICAL_FAILURE
    return EXIT_OK
