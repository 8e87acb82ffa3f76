"""renyisc - quantum Rényi divergences and strong-converse bounds."""

# GUARDRAIL: single source of truth for the version; pyproject.toml reads it via
# [tool.setuptools.dynamic] (static AST, no import needed at build time).
__version__ = "0.1.0"

from .cqcoding import (  # noqa: E402
    Codebook,
    CqChannel,
    InputDistribution,
    SharedRandomnessCode,
    coding_exponent_curve,
    coding_upper_bound,
    direct_sum_reduction_check,
    helstrom_success,
    joint_state,
    pgm_success,
    renyi_capacity,
    renyi_mutual_info,
)
from .divergences import (  # noqa: E402
    DivergenceResult,
    ProbDist,
    RenyiOrder,
    classical_renyi,
    divergence,
    holder_check,
    measured_renyi,
    petz_renyi,
    relative_entropy,
    sandwiched_renyi,
    variational_objective_measured,
    variational_objective_sandwiched,
)
from .hypotest import (  # noqa: E402
    ExponentCurve,
    TestOutcome,
    nfold_tradeoff,
    regularized_measured_sequence,
    sc_bound,
    sc_exponent_curve,
)
from .opalg import DensityOperator, Effect, Povm, Pvm  # noqa: E402

# GUARDRAIL: only names actually bound above; submodules are imported explicitly.
__all__ = [
    "Codebook",
    "CqChannel",
    "DensityOperator",
    "DivergenceResult",
    "Effect",
    "ExponentCurve",
    "InputDistribution",
    "Povm",
    "ProbDist",
    "Pvm",
    "RenyiOrder",
    "SharedRandomnessCode",
    "TestOutcome",
    "classical_renyi",
    "coding_exponent_curve",
    "coding_upper_bound",
    "direct_sum_reduction_check",
    "divergence",
    "helstrom_success",
    "holder_check",
    "joint_state",
    "measured_renyi",
    "nfold_tradeoff",
    "petz_renyi",
    "pgm_success",
    "regularized_measured_sequence",
    "relative_entropy",
    "renyi_capacity",
    "renyi_mutual_info",
    "sandwiched_renyi",
    "sc_bound",
    "sc_exponent_curve",
    "variational_objective_measured",
    "variational_objective_sandwiched",
]
