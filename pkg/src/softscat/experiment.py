"""End-to-end experiment runs: synthesize data, transform, image, report.

``run_experiment`` executes the pipeline

    shape -> discretize -> series solve -> near-field data -> noise ->
    aperture -> operators N, Q, R -> F = Q N Q^T R -> filter fit ->
    grid images -> metrics

and optionally writes ``W_<tag>.csv`` / ``W_<tag>.pgm`` per functional plus
``manifest.txt`` (and a ``data/`` bundle, operator dumps) into an output
directory.  Given the same configuration and seed the CSV outputs are
byte-identical across runs.
"""

from __future__ import annotations

import datetime
import logging
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import io
from .config import ConfigError, ExperimentConfig
from .forward import NearFieldData, add_noise, evaluate_nearfield, solve_forward
from .geometry import distance_to_region, in_region, make_shape, max_radius, source_circle
from .imaging import (ApertureMask, FilterPolynomial, ImageGrid, SamplingGrid,
                      apply_aperture, evaluate_grid, fit_filter)
from .xform import (OperatorMatrix, assemble_dirichlet_to_farfield, assemble_nearfield,
                    assemble_reflection, far_field_transform)

logger = logging.getLogger(__name__)


class NumericalError(Exception):
    """A numerical guard tripped (e.g. boundary residual too large)."""


@dataclass(frozen=True)
class FunctionalMetrics:
    argmax: np.ndarray
    argmax_distance: float
    exterior_mean: float
    interior_mean: float
    noise_correlation: Optional[float] = None


@dataclass(frozen=True)
class RunManifest:
    config: ExperimentConfig
    residual_max: float
    kept_modes: int
    norm_F: float
    filter_coeffs: np.ndarray
    filter_fit_residual: float
    metrics: dict
    started: str
    finished: str
    rng_description: str = "numpy PCG64 via SeedSequence(seed).spawn"

    def diagnostics_lines(self) -> list[str]:
        def fmt(x):
            return repr(float(x))

        lines = [
            f"info.started = {self.started}",
            f"info.finished = {self.finished}",
            f"info.rng = {self.rng_description}",
            f"metric.residual_max = {fmt(self.residual_max)}",
            f"metric.kept_modes = {self.kept_modes}",
            f"metric.norm_F = {fmt(self.norm_F)}",
            f"metric.filter_c1 = {fmt(self.filter_coeffs[0])}",
            f"metric.filter_c2 = {fmt(self.filter_coeffs[1])}",
            f"metric.filter_c3 = {fmt(self.filter_coeffs[2])}",
            f"metric.filter_fit_residual = {fmt(self.filter_fit_residual)}",
        ]
        for tag, m in self.metrics.items():
            lines += [
                f"metric.{tag}.argmax_x = {fmt(m.argmax[0])}",
                f"metric.{tag}.argmax_y = {fmt(m.argmax[1])}",
                f"metric.{tag}.argmax_distance = {fmt(m.argmax_distance)}",
                f"metric.{tag}.exterior_mean = {fmt(m.exterior_mean)}",
                f"metric.{tag}.interior_mean = {fmt(m.interior_mean)}",
            ]
            if m.noise_correlation is not None:
                lines.append(f"metric.{tag}.noise_correlation = {fmt(m.noise_correlation)}")
        return lines


@dataclass(frozen=True)
class ExperimentResult:
    images: dict
    manifest: RunManifest
    data: NearFieldData
    operator: OperatorMatrix
    filter_poly: FilterPolynomial


EXTERIOR_BAND = 0.5    # metrics average the image where dist(z, obstacle) > this


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    return float(np.corrcoef(a, b)[0, 1])


def _transform(data: NearFieldData, config: ExperimentConfig) -> OperatorMatrix:
    N = assemble_nearfield(data)
    Q = assemble_dirichlet_to_farfield(config.gamma_radius, config.k, config.n,
                                       config.m_kernel)
    R = assemble_reflection(config.n, config.m_kernel)
    return far_field_transform(N, Q, R)


def _image(tag: str, config: ExperimentConfig, grid: SamplingGrid,
           operator: OperatorMatrix, filter_poly: FilterPolynomial,
           data: NearFieldData) -> ImageGrid:
    return evaluate_grid(tag, grid, k=config.k, operator=operator,
                         filter_poly=filter_poly, data=data,
                         p1=config.p1, p2=config.p2, rho=config.rho)


def run_experiment(config: ExperimentConfig, out_dir=None, save_data: bool = False,
                   dump_operators: bool = False) -> ExperimentResult:
    config.validate()
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()

    shape = make_shape(config.shape)
    if max_radius(shape) >= config.gamma_radius:
        raise ConfigError("gamma_radius: the measurement circle must enclose the obstacle")
    gamma = source_circle(config.gamma_radius, config.n)

    sol = solve_forward(shape, gamma, config.k, m_forward=config.m_forward,
                        n_boundary=config.n_boundary, tau_rel=config.tau_rel)
    logger.info("forward solve: residual %.3e with %d/%d modes kept",
                sol.residual_max, sol.kept_modes, len(sol.orders))
    if sol.residual_max > config.residual_guard:
        raise NumericalError(
            f"boundary residual {sol.residual_max:.3e} exceeds the guard "
            f"{config.residual_guard:.3e}")

    clean = evaluate_nearfield(sol, gamma)
    noisy = add_noise(clean, config.delta, config.seed)
    mask = ApertureMask(arcs=config.aperture)
    if not mask.is_full():
        clean = apply_aperture(clean, mask)
        noisy = apply_aperture(noisy, mask)

    operator = _transform(noisy, config)
    filter_poly = fit_filter(operator, config.alpha)

    grid = SamplingGrid(half_width=config.grid_half_width, n=config.grid_n)
    points = grid.points()
    dist = distance_to_region(shape, points)
    exterior = dist > EXTERIOR_BAND
    interior = in_region(shape, points)

    reference_ff = None
    if config.delta > 0 and "FF" in config.functionals:
        reference_ff = _image("FF", config, grid, _transform(clean, config), None, clean)

    images, metrics = {}, {}
    for tag in config.functionals:
        img = _image(tag, config, grid, operator, filter_poly, noisy)
        images[tag] = img
        argmax = img.argmax_point()
        flat = img.values.ravel()
        corr = None
        if tag == "FF" and reference_ff is not None:
            corr = pearson(reference_ff.values, img.values)
        metrics[tag] = FunctionalMetrics(
            argmax=argmax,
            argmax_distance=float(distance_to_region(shape, argmax[None, :])[0]),
            exterior_mean=float(flat[exterior].mean()),
            interior_mean=float(flat[interior].mean()),
            noise_correlation=corr,
        )

    finished = datetime.datetime.now(datetime.timezone.utc).isoformat()
    manifest = RunManifest(
        config=config,
        residual_max=sol.residual_max,
        kept_modes=sol.kept_modes,
        norm_F=operator.norm2(),
        filter_coeffs=filter_poly.coeffs,
        filter_fit_residual=filter_poly.fit_residual,
        metrics=metrics,
        started=started,
        finished=finished,
    )
    result = ExperimentResult(images=images, manifest=manifest, data=noisy,
                              operator=operator, filter_poly=filter_poly)
    if out_dir is not None:
        _write_outputs(result, out_dir, save_data=save_data, dump_operators=dump_operators)
    return result


def _write_outputs(result: ExperimentResult, out_dir, save_data: bool,
                   dump_operators: bool) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for tag, image in result.images.items():
        io.write_image_csv(os.path.join(out_dir, f"W_{tag}.csv"), image)
        io.write_image_pgm(os.path.join(out_dir, f"W_{tag}.pgm"), image)
    io.write_manifest(os.path.join(out_dir, "manifest.txt"), result.manifest.config,
                      result.manifest.diagnostics_lines())
    if save_data:
        io.write_nearfield_bundle(os.path.join(out_dir, "data"), result.data,
                                  shape_name=result.manifest.config.shape)
    if dump_operators:
        io.write_operator_csv(os.path.join(out_dir, "operators"), result.operator)


def compare_runs(dir_a, dir_b) -> dict:
    """Compare two run directories: correlation, max difference, argmax shift."""
    report = {}
    for tag in ("FF", "TDSM", "CD"):
        path_a = os.path.join(dir_a, f"W_{tag}.csv")
        path_b = os.path.join(dir_b, f"W_{tag}.csv")
        if not (os.path.exists(path_a) and os.path.exists(path_b)):
            continue
        img_a = io.read_image_csv(path_a)
        img_b = io.read_image_csv(path_b)
        if img_a.values.shape != img_b.values.shape or \
                not np.allclose(img_a.xs, img_b.xs) or not np.allclose(img_a.ys, img_b.ys):
            raise ConfigError(f"{tag}: sampling grids do not match")
        report[tag] = {
            "correlation": pearson(img_a.values, img_b.values),
            "max_abs_diff": float(np.max(np.abs(img_a.values - img_b.values))),
            "argmax_displacement": float(np.linalg.norm(img_a.argmax_point()
                                                        - img_b.argmax_point())),
        }
    if not report:
        raise ConfigError("no common image files found in the two directories")
    return report


def format_comparison(report: dict) -> str:
    lines = []
    for tag, stats in report.items():
        lines.append(f"{tag}: correlation={stats['correlation']:.6f} "
                     f"max_abs_diff={stats['max_abs_diff']:.3e} "
                     f"argmax_displacement={stats['argmax_displacement']:.4f}")
    return "\n".join(lines)
