"""Ray class field invariants over imaginary quadratic fields.

Construct field invariants from Siegel-function quotients, recover their
exact integer minimal polynomials through Galois orbits, and decide prime
representability p = x^2 + n*y^2 with congruence side conditions.
"""

__version__ = "0.1.0"

from .fields import (AlgebraicIntegerZTheta, ImagQuadField, PrimeLocal,
                     RayModulus, beta_of_lemma, check_small_gi_table,
                     degree_drop_test, euler_phi_ideal, g_i_order, k_p,
                     kronecker, make_field, omega_f, ray_class_degree,
                     ray_modulus)
from .forms import (FormClassGroup, QuadForm, beta_q_matrix,
                    enumerate_reduced_forms, theta_of_form)
from .reciprocity import (GaloisElement, SL2Lift, WGroup, act_on_index,
                          build_w_group, decompose_gl2, galois_orbit,
                          principal_class_matrix, ray_class_order)
from .siegel import (IndexVector, InvariantSpec, PrecisionContext,
                     SiegelValue, bernoulli2, build_invariant,
                     fractional_reduce, invariant_value,
                     m_exponent_theorem51, m_exponent_theorem62,
                     modular_level, modularity_check, siegel_eval,
                     sr_invariant)
from .minpoly import (IntegralityFailure, MultiplicityMismatch, OrbitValues,
                      PolyZ, approx_polynomial, discriminant, evaluate_orbit,
                      factor_trial, reconstruct_polynomial,
                      reconstruction_report, resultant, unit_check)
from .dioph import (DiophQuery, PreconditionExcluded,
                    brute_force_representation, criterion, cross_validate,
                    root_mod_p)

__all__ = [
    "AlgebraicIntegerZTheta", "ImagQuadField", "PrimeLocal", "RayModulus",
    "beta_of_lemma", "check_small_gi_table", "degree_drop_test",
    "euler_phi_ideal", "g_i_order", "k_p", "kronecker", "make_field",
    "omega_f", "ray_class_degree", "ray_modulus",
    "FormClassGroup", "QuadForm", "beta_q_matrix", "enumerate_reduced_forms",
    "theta_of_form",
    "GaloisElement", "SL2Lift", "WGroup", "act_on_index", "build_w_group",
    "decompose_gl2", "galois_orbit", "principal_class_matrix",
    "ray_class_order",
    "IndexVector", "InvariantSpec", "PrecisionContext", "SiegelValue",
    "bernoulli2", "build_invariant", "fractional_reduce", "invariant_value",
    "m_exponent_theorem51", "m_exponent_theorem62", "modular_level",
    "modularity_check", "siegel_eval", "sr_invariant",
    "IntegralityFailure", "MultiplicityMismatch", "OrbitValues", "PolyZ",
    "approx_polynomial", "discriminant", "evaluate_orbit", "factor_trial",
    "reconstruct_polynomial", "reconstruction_report", "resultant",
    "unit_check",
    "DiophQuery", "PreconditionExcluded", "brute_force_representation",
    "criterion", "cross_validate", "root_mod_p",
]
