"""Grand Lebesgue and Wiener amalgam norms on finite measure models.

The package works with functions sampled on finitely many atoms. Three
model families are supported: cyclic groups with uniform weights,
interval discretizations, and counting measure on an integer range.
On top of those it provides the grand Lebesgue norm (a supremum of
weighted classical norms over a shrinking exponent window), windowed
amalgam norms that mix a local and a global exponent, bounded uniform
partitions of unity, convolution on finite abelian groups together with
a submultiplicativity checker, and a continuous-versus-discrete
equivalence report for amalgam norms.
"""

from .amalgam import (Bupu, BupuValidation, EquivalenceReport, Window,
                      WellSpreadReport, amalgam_norm, control_function,
                      discrete_amalgam_norm, discrete_space_bounds,
                      discrete_space_norm, equivalence_report,
                      make_triangular_bupu, make_uniform_bupu,
                      step_function_from_coefficients, translate_window,
                      validate_bupu, well_spread_check)
from .convolution import (AmalgamAlgebraReport, FiniteAbelianGroup,
                          SubmultiplicativityReport, WitnessReport,
                          amalgam_submultiplicativity_check, convolve,
                          noncompact_witness, submultiplicativity_check)
from .core import (COUNTING, CYCLIC, INTERVAL, PROBABILITY, EpsilonGrid,
                   GrandExponent, MeasureSpace, SampledFunction, grand_factor,
                   lp_norm, make_epsilon_grid)
from .grand import (ClosureReport, EmbeddingConstants, EpsilonProfile,
                    closure_criterion, embedding_constants, epsilon_profile,
                    grand_norm, grand_sequence_norm)
from .iofmt import (canonical_json, load_function, profile_csv_text,
                    render_report, write_function)

__version__ = "0.1.0"

__all__ = [
    "AmalgamAlgebraReport",
    "Bupu",
    "BupuValidation",
    "COUNTING",
    "CYCLIC",
    "ClosureReport",
    "EmbeddingConstants",
    "EpsilonGrid",
    "EpsilonProfile",
    "EquivalenceReport",
    "FiniteAbelianGroup",
    "GrandExponent",
    "INTERVAL",
    "MeasureSpace",
    "PROBABILITY",
    "SampledFunction",
    "SubmultiplicativityReport",
    "WellSpreadReport",
    "Window",
    "WitnessReport",
    "amalgam_norm",
    "amalgam_submultiplicativity_check",
    "canonical_json",
    "closure_criterion",
    "control_function",
    "convolve",
    "discrete_amalgam_norm",
    "discrete_space_bounds",
    "discrete_space_norm",
    "embedding_constants",
    "epsilon_profile",
    "equivalence_report",
    "grand_factor",
    "grand_norm",
    "grand_sequence_norm",
    "load_function",
    "lp_norm",
    "make_epsilon_grid",
    "make_triangular_bupu",
    "make_uniform_bupu",
    "noncompact_witness",
    "profile_csv_text",
    "render_report",
    "step_function_from_coefficients",
    "submultiplicativity_check",
    "translate_window",
    "validate_bupu",
    "well_spread_check",
    "write_function",
]
