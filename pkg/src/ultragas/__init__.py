"""Partition functions of log-Coulomb gases on nonarchimedean unit balls
and the projective line: exact chain sums, a quadratic recurrence, grand
series factorization laws, and a digit-model Monte Carlo oracle."""

__version__ = "0.1.0"

from .chains import (
    Branch,
    ReducedChain,
    count_reduced_chains,
    enumerate_reduced_chains,
    validate_chain,
)
from .engine import (
    Observables,
    Space,
    observables,
    z_ball,
    z_coset_oracle,
    z_P,
    z_proj,
    z_proj_cells,
    z_R,
    z_space,
)
from .errors import DomainError, PoleError
from .exponents import ExponentSpec, e_lambda, in_domain
from .grand import (
    EgfSeries,
    egf,
    series_mul,
    series_pow,
    series_scale_fugacity,
    verify_all,
    verify_power_law_q,
    verify_power_law_q1,
    verify_rp_factorization,
)
from .recurrence import RecurrenceTable, f_table, q_to_1_limit, z_proj_fast, z_R_fast
from .sampler import DigitPoint, McEstimate, SpherePoint, dist, mc_estimate, sphere_dist
from .scalars import BiRational

__all__ = [
    "__version__",
    "Branch",
    "ReducedChain",
    "count_reduced_chains",
    "enumerate_reduced_chains",
    "validate_chain",
    "ExponentSpec",
    "e_lambda",
    "in_domain",
    "DomainError",
    "PoleError",
    "Space",
    "Observables",
    "observables",
    "z_ball",
    "z_R",
    "z_P",
    "z_proj",
    "z_proj_cells",
    "z_coset_oracle",
    "z_space",
    "BiRational",
    "RecurrenceTable",
    "f_table",
    "z_R_fast",
    "z_proj_fast",
    "q_to_1_limit",
    "EgfSeries",
    "egf",
    "series_mul",
    "series_pow",
    "series_scale_fugacity",
    "verify_power_law_q",
    "verify_power_law_q1",
    "verify_rp_factorization",
    "verify_all",
    "DigitPoint",
    "SpherePoint",
    "McEstimate",
    "dist",
    "sphere_dist",
    "mc_estimate",
]
