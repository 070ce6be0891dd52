"""softscat: direct sampling reconstruction of sound-soft obstacles from
simulated near-field point-source measurements in 2D."""

from .config import ExperimentConfig, PRESETS, preset_config
from .experiment import compare_runs, run_experiment
from .forward import (NearFieldData, SeriesSolution, add_noise, disk_coefficients,
                      disk_nearfield, evaluate_nearfield, evaluate_series, solve_forward)
from .geometry import (BoundaryDiscretization, RadialShape, SourceCurve, discretize,
                       fundamental_solution, fundamental_solution_dnu, make_shape,
                       source_circle)
from .imaging import (ApertureMask, FilterPolynomial, ImageGrid, ProbeVector,
                      SamplingGrid, apply_aperture, evaluate_grid, fit_filter,
                      indicator_cauchy, indicator_far_field, indicator_filtered,
                      probe_vector)
from .xform import (OperatorMatrix, assemble_dirichlet_to_farfield, assemble_nearfield,
                    assemble_reflection, far_field_transform,
                    reflection_truncation_error)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
