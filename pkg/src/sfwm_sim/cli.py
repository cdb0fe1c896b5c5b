"""Command-line front end.

    sfwm-sim <spectrum|circuit|gamma|car> --config FILE [--out DIR] [--svg] [--seed N]

Exit codes: 0 ok, 2 config error, 3 data error, 4 numeric domain error.
`SFWM_SIM_CONFIG_PATH` adds search directories for bare config file names.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import photon_transmission, segment_contributions, selection_ratio
from .coincidence import (
    RateModel,
    build_histogram,
    car_from_histogram,
    predict_rates,
    read_timestamps_csv,
    synthesize_timestamps,
    write_timestamps_csv,
)
from .config import (
    CircuitRun,
    config_hash,
    load_config,
    parse_car_config,
    parse_circuit_config,
    parse_gamma_config,
    parse_spectrum_config,
)
from .csvio import write_histogram_csv, write_mismatch_csv, write_spectrum_csv
from .dispersion import wavelength_from_angular_frequency
from .engine import bandwidth_3db_hz, biphoton_spectrum, detuning_band_to_omega, total_mismatch
from .errors import ConfigError, DataError, DomainError, SfwmError
from .modefield import MaterialConstants, ModeFieldGrid, gamma_report, read_mode_field_csv
from .svgplot import write_line_plot
from .templates import build_template, evaluate_circuit


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_spectrum(args) -> int:
    doc = load_config(args.config)
    run = parse_spectrum_config(doc, n_points_override=args.grid_points)
    out = _out_dir(args)
    omega_c = run.pump.omega_c
    svg_series: dict[str, np.ndarray] = {}
    for spec, label in run.waveguides:
        spectrum = biphoton_spectrum(spec, run.pump, run.grid, label=label)
        delta_k = np.asarray(total_mismatch(spec, run.pump, run.grid.omegas))
        write_spectrum_csv(out / f"{label}_spectrum.csv", spectrum, omega_c, run.doc_hash)
        write_mismatch_csv(
            out / f"{label}_mismatch.csv", run.grid, omega_c, delta_k, run.doc_hash
        )
        width = bandwidth_3db_hz(spectrum) if spectrum.flux_density.max() > 0 else 0.0
        print(f"{label}: 3 dB bandwidth {width / 1e12:.3f} THz -> {label}_spectrum.csv")
        svg_series[label] = spectrum.flux_density
    if args.svg:
        write_line_plot(
            out / "spectra.svg",
            run.grid.detunings_hz(omega_c) / 1e12,
            svg_series,
            "detuning (THz)",
            "flux density (photons/s/Hz)",
            "biphoton spectra",
        )
        print(f"plot -> {out / 'spectra.svg'}")
    return 0


SELECTION_THRESHOLD = 10.0


def _circuit_report_lines(report) -> list[str]:
    setup = report.setup
    verdict = "met" if report.ratio >= SELECTION_THRESHOLD else "NOT met"
    lines = [
        f"circuit: {setup.name}",
        f"pump mode: {setup.pump.mode}",
        f"selection band (detuning): {setup.band_detuning_hz[0] / 1e12:g} "
        f"to {setup.band_detuning_hz[1] / 1e12:g} THz",
        f"designated segments: {', '.join(setup.designated_segments)}",
        f"selection ratio: {report.ratio:.6g}",
        f"selection threshold (>= {SELECTION_THRESHOLD:g}): {verdict}",
    ]
    if setup.delay_probe_node:
        lines.append(
            f"inter-pulse delay at {setup.delay_probe_node}: "
            f"{report.inter_pulse_delay_s * 1e12:.2f} ps"
        )
    return lines


def cmd_circuit(args) -> int:
    if args.template is not None:
        doc = {"template": args.template, "all_strip": bool(args.all_strip)}
        run = CircuitRun(
            args.template, bool(args.all_strip), None, None, None, None, None, (),
            None, config_hash(doc),
        )
    else:
        if args.config is None:
            raise ConfigError("circuit: give --config FILE or --template NAME")
        run = parse_circuit_config(load_config(args.config))
        if args.all_strip:
            if run.template is None:
                raise ConfigError("--all-strip only applies to template runs")
            run = CircuitRun(
                run.template, True, None, None, None, None, None, (), None, run.doc_hash
            )
    out = _out_dir(args)

    if run.template is not None:
        setup = build_template(run.template, all_strip=run.all_strip)
        report = evaluate_circuit(setup)
        contributions, band, ratio = report.contributions, report.band_omega, report.ratio
        omega_c, grid = setup.pump.omega_c, setup.grid
        name, designated = setup.name, set(setup.designated_segments)
        lines = _circuit_report_lines(report)
    else:
        contributions = segment_contributions(
            run.graph, run.pump, run.grid, run.input_ports, run.detection_node
        )
        band = detuning_band_to_omega(run.pump.omega_c, run.band_detuning_hz)
        ratio = selection_ratio(contributions, band, run.designated_segments)
        omega_c, grid = run.pump.omega_c, run.grid
        name, designated = "circuit", set(run.designated_segments)
        lines = [
            f"circuit: custom graph ({len(run.graph.nodes)} nodes)",
            f"selection ratio: {ratio:.6g}",
        ]

    summary_path = out / f"{name}_summary.csv"
    with summary_path.open("w") as fh:
        fh.write(f"# config_sha256={run.doc_hash}\n")
        fh.write(f"# selection_ratio={ratio!r}\n")
        fh.write("segment,designated,pump_powers_w,transmission,band_flux_per_s\n")
        for contrib in contributions:
            write_spectrum_csv(
                out / f"{name}_{contrib.segment_id}_spectrum.csv",
                contrib.spectrum,
                omega_c,
                run.doc_hash,
            )
            powers = "/".join(repr(p) for p in contrib.pump_powers_w)
            fh.write(
                f"{contrib.segment_id},{int(contrib.segment_id in designated)},"
                f"{powers},{repr(contrib.transmission)},{repr(contrib.band_flux(band))}\n"
            )
    report_path = out / f"{name}_report.txt"
    report_path.write_text(
        f"# config_sha256={run.doc_hash}\n" + "\n".join(lines) + "\n"
    )
    for line in lines:
        print(line)
    print(f"summary -> {summary_path}")

    if args.svg:
        series = {c.segment_id: c.spectrum.flux_density for c in contributions}
        write_line_plot(
            out / f"{name}_contributions.svg",
            grid.detunings_hz(omega_c) / 1e12,
            series,
            "detuning (THz)",
            "flux density (photons/s/Hz)",
            f"{name}: per-segment contributions",
        )
    return 0


def _scaled_grid(grid: ModeFieldGrid, factor: float) -> ModeFieldGrid:
    return ModeFieldGrid(
        grid.x_coords,
        grid.y_coords,
        grid.e_field * factor,
        grid.h_field * factor,
        grid.core_mask,
    )


def cmd_gamma(args) -> int:
    doc = load_config(args.config)
    run = parse_gamma_config(doc)
    grid = read_mode_field_csv(run.mode_field_csv)
    constants = MaterialConstants(n0=run.n0, n2_m2_per_w=run.n2_m2_per_w)
    report = gamma_report(grid, run.omega, constants)
    lines = [
        f"mode field: {run.mode_field_csv}",
        f"wavelength: {wavelength_from_angular_frequency(run.omega) * 1e9:.2f} nm",
        f"core |E|^4 integral: {report['core_quartic_integral']:.6e} V^4/m^2",
        f"poynting integral: {report['poynting_integral_w']:.6e} W",
        f"gamma: {report['gamma_per_w_m']:.4f} /(W m)",
    ]
    if args.verify_scale:
        scaled = gamma_report(_scaled_grid(grid, 3.0), run.omega, constants)
        rel = abs(scaled["gamma_per_w_m"] - report["gamma_per_w_m"]) / report["gamma_per_w_m"]
        lines.append(f"scale invariance (fields x3): relative change {rel:.3e}")
    out = _out_dir(args)
    (out / "gamma_report.txt").write_text(
        f"# config_sha256={run.doc_hash}\n" + "\n".join(lines) + "\n"
    )
    for line in lines:
        print(line)
    return 0


def cmd_car(args) -> int:
    doc = load_config(args.config)
    run = parse_car_config(doc)
    out = _out_dir(args)
    predicted = None
    if run.synthesize is not None:
        params = dict(run.synthesize)
        duration = params.pop("duration_s")
        model = RateModel(bin_width_s=run.bin_width_s, **params)
        signal, idler = synthesize_timestamps(model, duration, seed=args.seed)
        write_timestamps_csv(out / "timestamps.csv", signal, idler)
        predicted = predict_rates(model, peak_bins=5)
    else:
        signal, idler = read_timestamps_csv(run.timestamps_csv)
    hist = build_histogram(signal, idler, run.bin_width_s, run.window_s)
    car = car_from_histogram(hist, guard_bins=run.guard_bins)
    write_histogram_csv(out / "histogram.csv", hist, run.doc_hash)

    center = hist.central_bin
    lines = [
        f"events: {signal.size} signal, {idler.size} idler",
        f"histogram: {hist.n_bins} bins x {hist.bin_width_s * 1e12:.1f} ps",
        f"peak window bins: [{center - 2}, {center + 2}] (5 bins centered on {center})",
        f"guard bins: {run.guard_bins}",
        f"CAR: {car:.4f}",
    ]
    if predicted is not None:
        lines.append(
            f"predicted CAR (5-bin window): {predicted['car']:.4f} "
            f"(singles {predicted['singles_signal_hz']:.1f}/{predicted['singles_idler_hz']:.1f} Hz)"
        )
    (out / "car_report.txt").write_text(
        f"# config_sha256={run.doc_hash}\n" + "\n".join(lines) + "\n"
    )
    for line in lines:
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfwm-sim",
        description="SFWM biphoton spectra, circuit noise budgets and CAR analysis.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, config_required: bool = True) -> None:
        p.add_argument("--config", required=config_required, help="YAML run configuration")
        p.add_argument("--out", default=".", help="output directory (default: cwd)")
        p.add_argument("--svg", action="store_true", help="also write SVG plots")
        p.add_argument("--seed", type=int, default=0, help="RNG seed for synthetic data")

    p_spectrum = sub.add_parser("spectrum", help="phase mismatch and biphoton spectra")
    common(p_spectrum)
    p_spectrum.add_argument("--grid-points", type=int, default=None, help="override grid points")
    p_spectrum.set_defaults(func=cmd_spectrum)

    p_circuit = sub.add_parser("circuit", help="per-segment circuit contributions")
    common(p_circuit, config_required=False)
    p_circuit.add_argument("--template", choices=("app1_timebin", "app2_path"), default=None)
    p_circuit.add_argument(
        "--all-strip", action="store_true", help="force every waveguide to strip parameters"
    )
    p_circuit.set_defaults(func=cmd_circuit)

    p_gamma = sub.add_parser("gamma", help="effective nonlinear coefficient from mode fields")
    common(p_gamma)
    p_gamma.add_argument(
        "--verify-scale", action="store_true", help="check amplitude-scale invariance"
    )
    p_gamma.set_defaults(func=cmd_gamma)

    p_car = sub.add_parser("car", help="coincidence histogram and CAR")
    common(p_car)
    p_car.set_defaults(func=cmd_car)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 4
    except SfwmError as exc:  # fallback for future subclasses
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
