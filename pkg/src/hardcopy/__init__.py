"""Hard-copying scale-free random graph process.

Each step either adds a vertex with ``m`` preferentially attached edges
(probability ``alpha``) or clones a uniformly chosen vertex together with all
of its edges. The package simulates the process, enumerates it exactly for
tiny sizes, and evaluates the limit degree sequence and growth laws.
"""
from .analytic import (asymptotic_exponent, default_epsilons, expected_edges_exact,
                       kumar_exponent, lemma_bounds, limit_degree_sequence, mu)
from .ensemble import (compare_to_theory, degree_histogram, qs_diagnostics, run_ensemble,
                       variance_growth_fit)
from .graph import InvalidParameter, MultiGraph, StepDelta, new_initial
from .oracle import check_against_recurrence, exact_expectations
from .powerlaw import FitError, PowerLawFit, fit_power_law
from .process import (HardCopyParams, KumarParams, RegimeWarning, evolve, make_rng,
                      run_kumar, sample_pa_neighbor, simulate, step_hard_copy, step_kumar,
                      validate_hard_copy)

__version__ = "0.1.0"
