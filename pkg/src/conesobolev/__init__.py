"""Weighted Sobolev inequalities on convex cones.

Structural conditions on homogeneous weight pairs, constants of the
optimal transport bound, grid verification of the quotient, discrete
transport checks and a scenario runner with text and CSV reports.
"""

from .conditions import (
    HOLDS,
    INCONCLUSIVE,
    REFUTED,
    ConditionReport,
    c0_ratio,
    check_c1,
    concavity_sufficient,
    estimate_best_c0,
    monomial_c0,
    rigidity_floor,
)
from .config import Scenario, emit_config, load_config, parse_config
from .constants import (
    PANSU_CONSTANT,
    ConstantResult,
    TestDensity,
    additive_k0,
    ckn_parameters,
    density_moments,
    heisenberg_constant,
    k0_general,
    k0_p1,
    k0_sharp_equal,
    talenti_constant,
    transport_prefactor,
)
from .core import (
    Constant,
    ConvexCone,
    ExponentSet,
    MarcusLopes,
    Monomial,
    Power,
    Product,
    RadialPower,
    SumPower,
    derive_exponents,
    euler_residual,
    validate_exponents,
)
from .report import emit_report, run_scenario
from .transport import (
    DiscreteMeasure,
    QuadraticPotential,
    RadialPotential,
    barycentric_map,
    integrated_chain_check,
    is_cyclically_monotone,
    monge_ampere_residual,
    pointwise_divergence_check,
    solve_discrete_ot,
)
from .verifier import (
    GridFunction,
    maximize_quotient,
    necessity_probe_log,
    necessity_probe_shift,
    rayleigh_quotient,
    sobolev_quotient,
    spectral_gap_bound,
)

__version__ = "0.1.0"

__all__ = [
    "HOLDS",
    "INCONCLUSIVE",
    "REFUTED",
    "ConditionReport",
    "c0_ratio",
    "check_c1",
    "concavity_sufficient",
    "estimate_best_c0",
    "monomial_c0",
    "rigidity_floor",
    "Scenario",
    "emit_config",
    "load_config",
    "parse_config",
    "PANSU_CONSTANT",
    "ConstantResult",
    "TestDensity",
    "additive_k0",
    "ckn_parameters",
    "density_moments",
    "heisenberg_constant",
    "k0_general",
    "k0_p1",
    "k0_sharp_equal",
    "talenti_constant",
    "transport_prefactor",
    "Constant",
    "ConvexCone",
    "ExponentSet",
    "MarcusLopes",
    "Monomial",
    "Power",
    "Product",
    "RadialPower",
    "SumPower",
    "derive_exponents",
    "euler_residual",
    "validate_exponents",
    "emit_report",
    "run_scenario",
    "DiscreteMeasure",
    "QuadraticPotential",
    "RadialPotential",
    "barycentric_map",
    "integrated_chain_check",
    "is_cyclically_monotone",
    "monge_ampere_residual",
    "pointwise_divergence_check",
    "solve_discrete_ot",
    "GridFunction",
    "maximize_quotient",
    "necessity_probe_log",
    "necessity_probe_shift",
    "rayleigh_quotient",
    "sobolev_quotient",
    "spectral_gap_bound",
]
