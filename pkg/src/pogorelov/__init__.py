"""Radial bump metrics, C^{1,1} embeddings, and their verification labs.

The package builds a one-parameter family of rotationally symmetric metrics
that are flat on an inner disc and C^{2,1} overall, embeds them as C^{1,1}
surfaces of revolution, assembles countably many of them into a single
planar metric field with shrinking discs accumulating at a point, and ships
numerical checks for every quantitative property involved: curvature
identities and expansions, one-sided jumps, norm decay, and the convex /
ruling / sagitta / affine-segment lemmas.
"""

__version__ = "0.1.0"

from .exceptions import (CaseRejectedError, ConfigurationError, ConsistencyError,
                         DomainError, GeneratorExhaustedError, ParameterError,
                         PogorelovError, SingularEvaluationError)
from .profile import (RadialProfile, SmoothnessReport, embeddable_window,
                      make_flat_profile, make_pogorelov_profile,
                      make_sinh_profile, make_sphere_profile, smoothness_report)
from .curvature import (closed_form_K, curvature_table, expansion_fit,
                        first_zero_past_branch, gauss_curvature,
                        lower_bound_window)
from .embedding import (JumpReport, ProfileCurve, RevolutionMesh, build_mesh,
                        discrete_gauss, discrete_mean, induced_metric_residual,
                        integrate_profile, jump_analysis, mean_curvature_scan,
                        write_curve_csv, write_obj)
from .assembly import (DiscLayout, MetricField, build_layout, eval_metric,
                       grid_dump, make_metric_field, metric_derivatives)
from .regularity import (CauchyTable, NormReport, cauchy_check, decay_fit,
                         estimate_norm_table, estimate_norms, gluing_mismatch)
from .lemma_lab import (BoundCheck, Chord, ConvexCase, MappedDisc, RuledSample,
                        affine_segment_detect, chords_in_smaller_side,
                        cone_ruling, convex_bound_check, cylinder_patch,
                        cylinder_ruling, generate_convex_cases, planar_disc,
                        ruling_curvature_fit, run_convex_suite, sagitta,
                        sphere_cap, tangent_developable_ruling, validate_case)
from .verify import VerifyReport, run_all
from . import kernels

__all__ = [
    "__version__",
    # exceptions
    "PogorelovError", "ParameterError", "DomainError", "ConfigurationError",
    "ConsistencyError", "GeneratorExhaustedError", "SingularEvaluationError",
    "CaseRejectedError",
    # profile
    "RadialProfile", "SmoothnessReport", "make_pogorelov_profile",
    "make_flat_profile", "make_sphere_profile", "make_sinh_profile",
    "smoothness_report", "embeddable_window",
    # curvature
    "gauss_curvature", "closed_form_K", "expansion_fit", "lower_bound_window",
    "first_zero_past_branch", "curvature_table",
    # embedding
    "ProfileCurve", "JumpReport", "RevolutionMesh", "integrate_profile",
    "jump_analysis", "build_mesh", "write_obj", "write_curve_csv",
    "discrete_gauss", "discrete_mean", "mean_curvature_scan",
    "induced_metric_residual",
    # assembly
    "DiscLayout", "MetricField", "build_layout", "make_metric_field",
    "eval_metric", "metric_derivatives", "grid_dump",
    # regularity
    "NormReport", "CauchyTable", "estimate_norms", "estimate_norm_table",
    "decay_fit", "cauchy_check", "gluing_mismatch",
    # lemma lab
    "ConvexCase", "BoundCheck", "RuledSample", "MappedDisc",
    "generate_convex_cases", "validate_case", "convex_bound_check",
    "run_convex_suite", "cylinder_ruling", "cone_ruling",
    "tangent_developable_ruling", "ruling_curvature_fit", "sagitta",
    "planar_disc", "cylinder_patch", "sphere_cap", "affine_segment_detect",
    "Chord", "chords_in_smaller_side",
    # verify
    "VerifyReport", "run_all",
    # kernels
    "kernels",
]
