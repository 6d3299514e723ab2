"""Numerical laboratory for reconstructing C2 fields from their retarded
wave operator, with analytic test fields, singularity-free spherical
quadrature, convergence certification and a reporting CLI."""

from .fields import (BUMP_RADIUS, FieldSpec, PartialBundle, SpaceTimePoint,
                     bump_profile, fd_partials, field_partials,
                     field_partials_many, field_value, field_values,
                     shell_wave, static_bump, translated_bump)
from .kernel import (ADVANCED, RETARDED, KernelConfig, SingularKernelError,
                     boundary_term_estimate, dalembertian,
                     dalembertian_integrand, dalembertian_many,
                     epsilon_ball_estimate, regularized_kernel, retarded_time)
from .quadrature import (ConvergenceRecord, IntegrandEvaluationError,
                         QuadratureConfig, UnboundedSupportError,
                         angular_product_rule, convergence_study,
                         integrate_retarded, support_radius)
from .identity import (DecayConditionError, DegenerateLightConeError,
                       VerificationReport, counterexample_spec,
                       counterexample_study, delta_shell_collapse,
                       derivative_commutation_check, retarded_potential,
                       static_green_identity, verify_pointwise)

__all__ = [
    "ADVANCED", "BUMP_RADIUS", "RETARDED",
    "ConvergenceRecord", "DecayConditionError", "DegenerateLightConeError",
    "FieldSpec", "IntegrandEvaluationError", "KernelConfig", "PartialBundle",
    "QuadratureConfig", "SingularKernelError", "SpaceTimePoint",
    "UnboundedSupportError", "VerificationReport",
    "angular_product_rule", "boundary_term_estimate", "bump_profile",
    "convergence_study", "counterexample_spec", "counterexample_study",
    "dalembertian", "dalembertian_integrand", "dalembertian_many",
    "delta_shell_collapse", "derivative_commutation_check",
    "epsilon_ball_estimate", "fd_partials", "field_partials",
    "field_partials_many", "field_value", "field_values",
    "integrate_retarded", "regularized_kernel", "retarded_potential",
    "retarded_time", "shell_wave", "static_bump", "static_green_identity",
    "support_radius", "translated_bump", "verify_pointwise",
]

__version__ = "0.1.0"
