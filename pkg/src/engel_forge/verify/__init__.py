"""Verification harness for Engel-word bounds on series lengths."""

from .bounds import bound_f, bound_f1, exponent_vector, factorize, omega, prec_compare
from .checks import (VerificationReport, verify_abelian_by_cyclic_identity, verify_baer, verify_coprime_facts,
                     verify_fitting_bound, verify_full_commutator_cover, verify_generalized_fitting_bound,
                     verify_kernel_avoidance_bound, verify_nonsoluble_bound, verify_prec_order,
                     verify_subnormal_radicals, verify_wreath_generation)
from .suite import SuiteConfig, SuiteResult, plan_tasks, replay, run_suite

__all__ = [
    "bound_f", "bound_f1", "exponent_vector", "factorize", "omega", "prec_compare",
    "VerificationReport",
    "verify_abelian_by_cyclic_identity", "verify_baer", "verify_coprime_facts", "verify_fitting_bound",
    "verify_full_commutator_cover", "verify_generalized_fitting_bound", "verify_kernel_avoidance_bound",
    "verify_nonsoluble_bound", "verify_prec_order", "verify_subnormal_radicals", "verify_wreath_generation",
    "SuiteConfig", "SuiteResult", "plan_tasks", "replay", "run_suite",
]
