"""The extended Hietarinta-Viallet map in exact representations."""
from .projective import (MapParams, ProjectiveState, iterate_pn, iterate_projective,
                         orbit, r_value, step_projective)
from .chain import (CONVENTIONS, FactorChain, IdentityViolation, apply_T, even_step,
                    extend_chain, factor_chain, odd_step, recurrence_step, seed_chain)
from .reduced import ReducedFraction, exp_pattern, periodic_pattern, x_reduced
from .identity import ProductReport, product_identity_check
from .gauge import (DegenerateGauge, GaugeSeq, covariant_image, gauge_exponents,
                    gauge_sequence, transformed_arguments)

__all__ = [
    "MapParams", "ProjectiveState", "iterate_pn", "iterate_projective", "orbit", "r_value",
    "step_projective", "CONVENTIONS", "FactorChain", "IdentityViolation", "apply_T",
    "even_step", "extend_chain", "factor_chain", "odd_step", "recurrence_step", "seed_chain",
    "ReducedFraction", "exp_pattern", "periodic_pattern", "x_reduced", "ProductReport",
    "product_identity_check", "DegenerateGauge", "GaugeSeq", "covariant_image",
    "gauge_exponents", "gauge_sequence", "transformed_arguments",
]
