"""Package initialization"""

from diagnostics.assumptions import (AssumptionReport, check_assumptions, correction_mean,
                                     descent_margin, sapa_sigma_closed_form, sigma_squared)
from diagnostics.empirical import empirical_rate, iterations_to_accuracy
from diagnostics.oracles import prox_oracle
from diagnostics.reference import (ReferenceMethod, ReferenceSolution, distance_fn,
                                   distance_to_argmin, project_to_argmin,
                                   quadratic_growth_slack, reference_optimum)

__all__ = [
    'AssumptionReport', 'check_assumptions', 'correction_mean', 'descent_margin',
    'sapa_sigma_closed_form', 'sigma_squared', 'empirical_rate', 'iterations_to_accuracy',
    'prox_oracle', 'ReferenceMethod', 'ReferenceSolution', 'distance_fn',
    'distance_to_argmin', 'project_to_argmin', 'quadratic_growth_slack', 'reference_optimum',
]
