"""End-to-end reproduction pipeline: design, optional holography, verify.

A PipelineConfig round-trips losslessly through a flat key=value file; CLI
flags override file values. Runs are deterministic for a fixed config and
seed, including the bytes of every artifact written.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .eigensolver import DiscrepancyReport, bound_states, compare_spectrum
from .grid import default_grid
from .hologram import (
    make_state,
    optimize_phase,
    potential_to_target,
    propagate,
    extract_profile,
    sr_intensity_error,
    uniform_illumination,
)
from .sequences import first_lucky, first_primes
from .susy import KINETIC_HALF, KINETIC_UNIT, ChainError, design_potential

__all__ = [
    "ADMIT_EDGE_WINDOW",
    "PipelineConfig",
    "PipelineReport",
    "PipelineStageError",
    "parse_sequence_spec",
    "kinetic_from_name",
    "run_pipeline",
]

# The designed top level sits exactly at the continuum edge; in a finite box
# it reappears just above. Admitting states up to edge + this window captures
# it while staying clear of the next box state (first spacings ~0.011/0.046
# at half_width 12).
ADMIT_EDGE_WINDOW = 0.025


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, original: Exception):
        super().__init__(f"stage {stage!r} failed: {original}")
        self.stage = stage
        self.original = original


def kinetic_from_name(name: str) -> float:
    table = {"half": KINETIC_HALF, "unit": KINETIC_UNIT}
    if name not in table:
        raise ValueError(f"kinetic convention must be one of {sorted(table)}, got {name!r}")
    return table[name]


def parse_sequence_spec(spec: str) -> np.ndarray:
    """primes:N | lucky:N | file:path -> ascending level array."""
    kind, _, arg = spec.partition(":")
    if not arg:
        raise ValueError(f"sequence spec {spec!r} needs the form kind:argument")
    if kind == "primes":
        return first_primes(int(arg)).astype(np.float64)
    if kind == "lucky":
        return first_lucky(int(arg)).astype(np.float64)
    if kind == "file":
        levels = np.atleast_1d(np.loadtxt(arg, dtype=np.float64))
        if levels.size < 2 or np.any(np.diff(levels) <= 0):
            raise ValueError(f"{arg}: levels must be at least two, strictly increasing")
        return levels
    raise ValueError(f"unknown sequence kind {kind!r} (use primes/lucky/file)")


@dataclass
class PipelineConfig:
    sequence: str = "primes:10"
    half_width: float = 12.0
    spacing: float = 0.005
    kinetic: str = "half"
    hologram: bool = False
    holo_m: int = 64
    holo_sr: int = 100
    holo_d: int = 9
    holo_iters: int = 500
    seed: int = 1
    outdir: str = "pipeline_out"

    def write(self, path) -> None:
        with open(path, "w") as fh:
            for f in fields(self):
                fh.write(f"{f.name}={getattr(self, f.name)!r}\n")

    @classmethod
    def read(cls, path) -> "PipelineConfig":
        raw = {}
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                raw[key.strip()] = value.strip()
        kwargs = {}
        for f in fields(cls):
            if f.name not in raw:
                continue
            text = raw[f.name]
            if f.type == "bool":
                kwargs[f.name] = text in ("True", "true", "1")
            elif f.type == "int":
                kwargs[f.name] = int(text)
            elif f.type == "float":
                kwargs[f.name] = float(text)
            else:
                kwargs[f.name] = text.strip("'\"")
        return cls(**kwargs)


@dataclass
class PipelineReport:
    config: PipelineConfig
    targets: np.ndarray
    eigenvalues: np.ndarray
    continuum_edge: float
    report: DiscrepancyReport
    files: dict
    hologram_sr_error: float | None = None
    elapsed_s: float = 0.0

    @property
    def all_round(self) -> bool:
        return (
            self.eigenvalues.size == self.targets.size and self.report.all_round
        )

    def as_dict(self) -> dict:
        # elapsed time stays off the report so identical runs write identical bytes
        payload = {
            "sequence": self.config.sequence,
            "targets": self.targets.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "continuum_edge": self.continuum_edge,
            "all_round": self.all_round,
            "files": self.files,
        }
        payload.update(self.report.as_dict())
        if self.hologram_sr_error is not None:
            payload["hologram_sr_error"] = self.hologram_sr_error
        return payload


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_intensity_csv(path, x_sr, intensity, tmap) -> None:
    with open(path, "w") as fh:
        fh.write(f"# ceiling={tmap.ceiling!r}\n")
        fh.write(f"# span={tmap.span!r}\n")
        fh.write(f"# norm={tmap.norm!r}\n")
        fh.write(f"# asymptote={tmap.asymptote!r}\n")
        fh.write(f"# sr_length={tmap.sr_length!r}\n")
        fh.write(f"# grid_half_width={tmap.grid_half_width!r}\n")
        fh.write(f"# grid_points={tmap.grid_points!r}\n")
        fh.write("x,I\n")
        for xi, ii in zip(x_sr, intensity):
            fh.write(f"{float(xi)!r},{float(ii)!r}\n")


def run_pipeline(config: PipelineConfig) -> PipelineReport:
    """design -> (optional hologram synth + extract) -> eigensolve -> compare."""
    t0 = time.perf_counter()
    try:
        targets = parse_sequence_spec(config.sequence)
        kinetic = kinetic_from_name(config.kinetic)
    except (ValueError, OSError) as err:
        raise PipelineStageError("sequence", err) from err

    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}

    try:
        grid = default_grid(config.half_width, config.spacing)
        designed = design_potential(targets, grid, kinetic)
    except (ValueError, ChainError) as err:
        raise PipelineStageError("design", err) from err
    pot_path = outdir / "potential.csv"
    designed.write_csv(pot_path)
    files["potential"] = str(pot_path)

    solve_input = designed
    holo_err = None
    if config.hologram:
        try:
            amp, tmap = potential_to_target(designed, config.holo_sr)
            state = make_state(
                config.holo_m, amp, seed=config.seed, steepness_d=config.holo_d, target_map=tmap
            )
            illumination = uniform_illumination(config.holo_m)
            result = optimize_phase(state, illumination, max_iters=config.holo_iters)
            field = propagate(result.state, illumination)
            holo_err = sr_intensity_error(field, result.state)
            reconstructed = extract_profile(field, result.state)
        except ValueError as err:
            raise PipelineStageError("hologram", err) from err
        phase_path = outdir / "phase.csv"
        np.savetxt(phase_path, result.state.phase, delimiter=",")
        files["phase"] = str(phase_path)
        intensity = np.abs(field.values[result.state.signal_mask]) ** 2
        x_sr = np.linspace(-tmap.span, tmap.span, tmap.sr_length)
        intensity_path = outdir / "intensity.csv"
        _write_intensity_csv(intensity_path, x_sr, intensity, tmap)
        files["intensity"] = str(intensity_path)
        cost_path = outdir / "cost_history.json"
        _write_json(cost_path, result.history.tolist())
        files["cost_history"] = str(cost_path)
        rec_path = outdir / "potential_reconstructed.csv"
        reconstructed.write_csv(rec_path)
        files["potential_reconstructed"] = str(rec_path)
        solve_input = reconstructed

    try:
        spectrum = bound_states(solve_input, kinetic, margin=-ADMIT_EDGE_WINDOW)
    except ValueError as err:
        raise PipelineStageError("solve", err) from err
    eigenvalues = spectrum.eigenvalues
    if eigenvalues.size != targets.size:
        raise PipelineStageError(
            "solve",
            RuntimeError(
                f"expected {targets.size} levels, found {eigenvalues.size} below the edge window"
            ),
        )
    report = compare_spectrum(eigenvalues, targets)

    spectrum_path = outdir / "spectrum.json"
    _write_json(
        spectrum_path,
        {
            "eigenvalues": eigenvalues.tolist(),
            "continuum_edge": spectrum.continuum_edge,
            "kinetic_scale": kinetic,
            "node_counts": spectrum.node_counts.tolist(),
        },
    )
    files["spectrum"] = str(spectrum_path)

    out = PipelineReport(
        config=config,
        targets=targets,
        eigenvalues=eigenvalues,
        continuum_edge=spectrum.continuum_edge,
        report=report,
        files=files,
        hologram_sr_error=holo_err,
        elapsed_s=time.perf_counter() - t0,
    )
    report_path = outdir / "report.json"
    _write_json(report_path, out.as_dict())
    files["report"] = str(report_path)
    return out
