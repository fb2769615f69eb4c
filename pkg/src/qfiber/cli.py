"""Config-driven command-line entry point.

Subcommands ``run-bs``, ``run-spfwm``, ``run-multimode`` and
``run-semiclassical`` read a scenario file, integrate it and write
``trajectory.csv``, ``summary.json`` and a PNG figure into the output
directory.  ``validate`` parses a config and reports problems without
running anything.

Exit codes: 0 success, 1 configuration error, 2 invariant abort during
propagation.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from .config import ConfigError, ScenarioConfig, parse_config, render_config
from .lindblad import DensityMatrix, PropagationAborted, propagate
from .models import build_bragg, build_multimode, build_spfwm, phase_match
from .plotting import (
    save_multimode_figure,
    save_semiclassical_figure,
    save_two_mode_figure,
)
from .semiclassical import SpectralField, integrate_mean_field

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ABORT = 2


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _initial_state(space, state: tuple) -> DensityMatrix:
    if state[0] == "vacuum":
        return DensityMatrix.vacuum(space)
    if state[0] == "fock":
        return DensityMatrix.fock(space, state[1:])
    return DensityMatrix.coherent_product(space, state[1:])


def _sample_points(length_km: float, samples: int):
    if length_km == 0.0:
        return [0.0]
    return np.linspace(0.0, length_km, samples)


def _write_quantum_csv(path: Path, traj, two_mode: bool):
    records = traj.records
    n_modes = len(records[0].number_means)
    cols = ["z_km"]
    if two_mode:
        d0, d1 = records[0].joint_probs.shape
        cols += [f"P_{a}_{b}" for a in range(d0) for b in range(d1)]
        cols += ["n_s_mean", "n_i_mean", "re_b_s", "im_b_s", "re_b_i", "im_b_i"]
    else:
        cols += [f"n_{k}_mean" for k in range(n_modes)]
        for k in range(n_modes):
            cols += [f"re_b_{k}", f"im_b_{k}"]
    cols += ["trace_err", "min_eig"]

    lines = [",".join(cols)]
    for rec in records:
        row = [_fmt(rec.z_km)]
        if two_mode:
            row += [_fmt(v) for v in rec.joint_probs.ravel()]
        row += [_fmt(v) for v in rec.number_means]
        for amp in rec.amp_means:
            row += [_fmt(amp.real), _fmt(amp.imag)]
        row += [_fmt(rec.invariants.trace_err), _fmt(rec.invariants.min_eig)]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def _write_semiclassical_csv(path: Path, z, rows, delta_w: float):
    n = rows.shape[1]
    cols = ["z_km"]
    for k in range(n):
        cols += [f"re_A_{k}", f"im_A_{k}"]
    cols += [f"power_W_{k}" for k in range(n)] + ["total_power_W"]
    lines = [",".join(cols)]
    for zv, row in zip(z, rows):
        powers = np.abs(row) ** 2 * delta_w**2 / (2.0 * np.pi)
        out = [_fmt(zv)]
        for a in row:
            out += [_fmt(a.real), _fmt(a.imag)]
        out += [_fmt(p) for p in powers] + [_fmt(powers.sum())]
        lines.append(",".join(out))
    path.write_text("\n".join(lines) + "\n")


def _run_quantum(config: ScenarioConfig, outdir: Path) -> dict:
    if config.model == "bs":
        system = build_bragg(config.params)
    elif config.model == "spfwm":
        system = build_spfwm(config.params)
    else:
        system = build_multimode(config.params)
    rho0 = _initial_state(system.space, config.initial_state)
    samples = _sample_points(config.length_km, config.samples)
    traj = propagate(system, rho0, config.length_km, config.integrator, samples)

    two_mode = system.space.n_modes == 2
    _write_quantum_csv(outdir / "trajectory.csv", traj, two_mode)
    if two_mode:
        save_two_mode_figure(traj, str(outdir / "trajectory.png"), f"{config.model} run")
    else:
        save_multimode_figure(traj, str(outdir / "trajectory.png"), f"{config.model} run")

    final = traj.records[-1]
    summary = {
        "final_z_km": final.z_km,
        "final_number_means": list(final.number_means),
        "final_amp_means": [[a.real, a.imag] for a in final.amp_means],
        "max_trace_err": max(r.invariants.trace_err for r in traj.records),
        "max_herm_err": max(r.invariants.herm_err for r in traj.records),
        "min_eig": min(r.invariants.min_eig for r in traj.records),
    }
    if config.model in ("bs", "spfwm"):
        report = phase_match(config.params)
        summary["wavenumbers_km^-1"] = report.wavenumbers
        summary["phase_mismatch_km^-1"] = report.mismatch
    return summary


def _run_semiclassical(config: ScenarioConfig, outdir: Path) -> dict:
    field = SpectralField(config.params, np.array(config.amplitudes, dtype=complex))
    samples = _sample_points(config.length_km, config.samples)
    z, rows = integrate_mean_field(field, config.length_km, config.mean_field, samples)
    _write_semiclassical_csv(outdir / "trajectory.csv", z, rows, config.params.delta_w)
    powers = np.abs(rows) ** 2 * config.params.delta_w**2 / (2.0 * np.pi)
    save_semiclassical_figure(z, powers, str(outdir / "trajectory.png"), "mean-field run")
    return {
        "final_z_km": float(z[-1]),
        "final_amplitudes": [[a.real, a.imag] for a in rows[-1]],
        "final_powers_W": [float(p) for p in powers[-1]],
        "total_power_in_W": float(powers[0].sum()),
        "total_power_out_W": float(powers[-1].sum()),
    }


def run_scenario(config: ScenarioConfig, outdir: Path) -> dict:
    """Execute one scenario, writing all artifacts; returns the summary dict."""
    outdir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    if config.model == "semiclassical":
        summary = _run_semiclassical(config, outdir)
    else:
        summary = _run_quantum(config, outdir)
    summary["model"] = config.model
    summary["wall_time_s"] = time.perf_counter() - start
    summary["config"] = render_config(config)
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def _load_config(path: str, expect_model: str | None, overrides: dict) -> ScenarioConfig:
    text = Path(path).read_text()
    config = parse_config(text)
    if expect_model is not None and config.model != expect_model:
        raise ConfigError([(0, f"config declares model {config.model!r}, expected {expect_model!r}")])
    if overrides.get("step") is not None:
        if overrides["step"] <= 0:
            raise ConfigError([(0, "--step must be positive")])
        config = dataclasses.replace(
            config,
            integrator=dataclasses.replace(config.integrator, step_km=overrides["step"]),
            mean_field=dataclasses.replace(config.mean_field, step_km=overrides["step"]),
        )
    if overrides.get("samples") is not None:
        if overrides["samples"] < 2:
            raise ConfigError([(0, "--samples must be at least 2")])
        config = dataclasses.replace(config, samples=overrides["samples"])
    if overrides.get("nmax") is not None:
        if overrides["nmax"] < 0:
            raise ConfigError([(0, "--nmax must be non-negative")])
        config = dataclasses.replace(
            config, params=dataclasses.replace(config.params, n_max=overrides["nmax"])
        )
    return config


def _validate(config: ScenarioConfig) -> int:
    """Short self-test of the configured scenario; one pass/fail line per property."""
    checks: list[tuple[str, bool]] = []

    rendered = render_config(config)
    checks.append(("config round-trip", parse_config(rendered) == config))

    if config.model == "semiclassical":
        field = SpectralField(config.params, np.array(config.amplitudes, dtype=complex))
        length = min(config.length_km, 10.0 * config.mean_field.step_km)
        z, rows = integrate_mean_field(field, length, config.mean_field, [0.0, length] if length else None)
        checks.append(("amplitudes stay finite", bool(np.all(np.isfinite(rows)))))
    else:
        if config.model == "bs":
            system = build_bragg(config.params)
        elif config.model == "spfwm":
            system = build_spfwm(config.params)
        else:
            system = build_multimode(config.params)
        checks.append(("Hamiltonian Hermitian", system.hamiltonian.is_hermitian()))
        rho0 = _initial_state(system.space, config.initial_state)
        length = min(config.length_km, 10.0 * config.integrator.step_km)
        traj = propagate(
            system, rho0, length, config.integrator, [0.0, length] if length else None
        )
        inv = traj.records[-1].invariants
        checks.append(("trace preserved", inv.trace_err <= 1e-9))
        checks.append(("state Hermitian", inv.herm_err <= 1e-10))
        checks.append(("state positive", inv.min_eig >= -1e-8))
        if config.model in ("bs", "spfwm"):
            report = phase_match(config.params)
            print(f"info: phase mismatch {report.mismatch:.6g} km^-1")

    failed = False
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}: {name}")
        failed = failed or not ok
    return EXIT_ABORT if failed else EXIT_OK


def _add_run_parser(sub, name: str, help_text: str):
    p = sub.add_parser(name, help=help_text)
    p.add_argument("--config", required=True, help="scenario file path")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--step", type=float, default=None, help="override step size (km)")
    p.add_argument("--nmax", type=int, default=None, help="override Fock truncation")
    p.add_argument("--samples", type=int, default=None, help="override sample count")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfiber",
        description="Quantum and mean-field nonlinear fiber propagation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub, "run-bs", "two-pump frequency-translation run")
    _add_run_parser(sub, "run-spfwm", "degenerate pair-generation run")
    _add_run_parser(sub, "run-multimode", "discretized multimode run")
    _add_run_parser(sub, "run-semiclassical", "classical mean-field run")
    v = sub.add_parser("validate", help="parse a scenario file and report problems")
    v.add_argument("--config", required=True, help="scenario file path")
    return parser


_MODEL_BY_COMMAND = {
    "run-bs": "bs",
    "run-spfwm": "spfwm",
    "run-multimode": "multimode",
    "run-semiclassical": "semiclassical",
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            config = _load_config(args.config, None, {})
            return _validate(config)
        overrides = {"step": args.step, "nmax": args.nmax, "samples": args.samples}
        config = _load_config(args.config, _MODEL_BY_COMMAND[args.command], overrides)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        summary = run_scenario(config, Path(args.output))
    except PropagationAborted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    print(f"wrote {args.output}/trajectory.csv, summary.json, trajectory.png")
    print(f"completed {config.model} run in {summary['wall_time_s']:.3f} s")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
