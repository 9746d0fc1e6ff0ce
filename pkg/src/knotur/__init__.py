"""Uncertainty relations for a quantum particle on a (p, q) torus knot."""
from .errors import *  # noqa: F401,F403
from .geometry import (KnotSpec, ParameterizationKind, Point3, TorusSpec,
                       commutator_rhs_thin, embed, embed_exact, embed_thin, new_knot,
                       new_torus_from_radii, new_torus_from_scale,
                       radius_identity_residual, tangent, thin_exact_sup_error)
from .quantum import (Commutator, ExpectationReport, QuadratureConfig, Relation,
                      Source, Superposition, URReport, WeightPreset, combined_ur,
                      equal_superposition, expect_coordinate, expect_Lz_power,
                      make_superposition, mean_resultant_length, quadrature_integrate,
                      robertson_pair, standard_deviations)
from .analytic import (ChoiceClass, CircleSpec, ClosedFormReport, TwoModeState,
                       circle_baseline, classify, closed_first_moments,
                       closed_form_report, closed_mrl_and_combined,
                       closed_second_moments, closed_sigmas, closed_ur_bounds, kron,
                       resonance_mismatches)

__version__ = "0.1.0"
