"""Package initialization"""

from synthetic.generator import (GeneratorConfig, generate_conditioned_matrix, generate_instance,
                                 generate_logistic_instance, generate_ols_instance)

__all__ = ['GeneratorConfig', 'generate_conditioned_matrix', 'generate_instance',
           'generate_logistic_instance', 'generate_ols_instance']
