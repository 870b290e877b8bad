"""Mechanical verification of the structural identities."""
from .report import (OUTCOMES, UNKNOWN, VACUOUS, VERIFIED, VIOLATED, CheckReport, Instance,
                     merge, to_csv, to_jsonl)
from .structural import (check_coprime, check_degrees, check_exp_pattern, check_irreducible,
                         check_ord_a, check_product_identity, check_unit_factors, coprime_pairs)
from .appendix import (ZState, check_congruences, congruence_exact, congruence_residue,
                       z_exact, z_shadow, z_signs)
from .gauge_check import check_gauge_covariance, symbolic_match, numeric_match
from .suite import SUITES, exit_status, run_suite, suite_jobs
