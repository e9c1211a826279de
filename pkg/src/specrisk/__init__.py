"""Spectral risk measures, extremal norms, and risk-averse training on
weighted empirical samples.

The compute kernels have a compiled (Cython) implementation and a pure-Python
fallback; whichever is available is selected at import time and reported by
``BACKEND``.
"""

from ._backend import BACKEND, get_backend
from .combination import (
    Combiner,
    combine,
    combine_to_distortion,
    csiszar_conjugate,
    perspective,
    symmetrize,
)
from .distortion import Distortion, QuasiconcaveFn, least_concave_majorant
from .empirical_core import LossSample, Rearrangement, load_csv, rearrange
from .errors import DomainError, InvalidInputError, NumericalError, SpecRiskError
from .evaluation import (
    Curve,
    cvar_breakpoint_grid,
    cvar_curve,
    gini,
    lorenz_breakpoint_grid,
    lorenz_curve,
    second_order_dominates,
)
from .kusuoka import (
    KusuokaSet,
    comonotone_additivity_witness,
    default_grid,
    kusuoka_risk,
    marcinkiewicz_family,
    tm_family,
)
from .optimizer import (
    ModelState,
    Objective,
    minimize,
    pca_init,
    pca_losses,
    pca_objective,
    pca_star,
    quadratic_objective,
    run_experiment,
    spectral_weights,
    subgroup_regression_objective,
    subgroup_risk,
)
from .risk_measures import (
    RiskSpec,
    choquet_integral,
    cvar,
    cvar_regret,
    dutch,
    equivalence_constant,
    evaluate,
    marcinkiewicz_norm,
    maxvar,
    rim,
    rim_variational,
    spectral_risk,
    tm_norm,
    top_fraction_average,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Combiner",
    "Curve",
    "Distortion",
    "DomainError",
    "InvalidInputError",
    "KusuokaSet",
    "LossSample",
    "ModelState",
    "NumericalError",
    "Objective",
    "QuasiconcaveFn",
    "Rearrangement",
    "RiskSpec",
    "SpecRiskError",
    "choquet_integral",
    "combine",
    "combine_to_distortion",
    "comonotone_additivity_witness",
    "csiszar_conjugate",
    "cvar",
    "cvar_breakpoint_grid",
    "cvar_curve",
    "cvar_regret",
    "default_grid",
    "dutch",
    "equivalence_constant",
    "evaluate",
    "get_backend",
    "gini",
    "kusuoka_risk",
    "least_concave_majorant",
    "load_csv",
    "lorenz_breakpoint_grid",
    "lorenz_curve",
    "marcinkiewicz_family",
    "marcinkiewicz_norm",
    "maxvar",
    "minimize",
    "pca_init",
    "pca_losses",
    "pca_objective",
    "pca_star",
    "perspective",
    "quadratic_objective",
    "rearrange",
    "rim",
    "rim_variational",
    "run_experiment",
    "second_order_dominates",
    "spectral_risk",
    "spectral_weights",
    "subgroup_regression_objective",
    "subgroup_risk",
    "symmetrize",
    "tm_family",
    "tm_norm",
    "top_fraction_average",
]
