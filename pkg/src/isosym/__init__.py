"""Rearrangement inequalities, isoperimetric profiles and Sobolev-Poincare
checks for the measures ``alpha_r^{-1} exp(-|x|^r) dx`` and finite spaces."""

from .discrete_oracle import (DiscreteMetricSpace, continuum_crosscheck, extension, grid_space,
                              iso_profile_bruteforce, lip_modulus, perimeter_h,
                              rearrange_by_definition)
from .inequality_suite import (InequalityReport, Tolerance, check_concentration,
                               check_hardy_condition, check_ledoux, check_linfty_embedding,
                               check_lp_loglq, check_ls_poincare, check_main,
                               check_perdida_and_harhar, check_poincare_median,
                               check_polya_szego, check_talenti_mazya)
from .iso_profiles import (ProfileWeightedOperator, estimate_operator_norm, kernel_integral,
                           power_tester, power_testers, q_operator)
from .model_measures import (IsoProfile, ModelMeasure, asymptotic_profile, cdf, density,
                             iso_profile, laplace_profile, profile_grid, quadrature_nodes,
                             quantile, sample)
from .rearrangement import (QuantileFunction, SampledFunction, distribution,
                            gradient_integral_above, maximal_average, median, rearrange)
from .ri_norms import RINormSpec, deviation_from_mean, ls_norm, norm, parse_norm

__version__ = "0.1.0"

__all__ = [
    "DiscreteMetricSpace", "continuum_crosscheck", "extension", "grid_space",
    "iso_profile_bruteforce", "lip_modulus", "perimeter_h", "rearrange_by_definition",
    "InequalityReport", "Tolerance", "check_concentration", "check_hardy_condition",
    "check_ledoux", "check_linfty_embedding", "check_lp_loglq", "check_ls_poincare",
    "check_main", "check_perdida_and_harhar", "check_poincare_median", "check_polya_szego",
    "check_talenti_mazya",
    "ProfileWeightedOperator", "estimate_operator_norm", "kernel_integral", "power_tester",
    "power_testers", "q_operator",
    "IsoProfile", "ModelMeasure", "asymptotic_profile", "cdf", "density", "iso_profile",
    "laplace_profile", "profile_grid", "quadrature_nodes", "quantile", "sample",
    "QuantileFunction", "SampledFunction", "distribution", "gradient_integral_above",
    "maximal_average", "median", "rearrange",
    "RINormSpec", "deviation_from_mean", "ls_norm", "norm", "parse_norm",
]
