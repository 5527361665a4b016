"""Robust-regression model selection with complexity-based criteria."""

from .complexity import c0, c0_rho_h, c1, expected_rho_quadrature, expected_rho_univariate
from .criteria import CRITERION_NAMES, CriterionContext, CriterionScore, score, score_all
from .mest import (
    Dataset,
    HuberConfig,
    HuberIRLSRegressor,
    K_C0,
    K_CLASSIC,
    RobustFit,
    huber_psi,
    huber_rho,
    huber_weight,
    irls_fit,
    mad_scale,
)
from .search import (
    SelectionResult,
    SubsetModel,
    SubsetSelector,
    enumerate_subsets,
    select_best,
    tune_k_c0,
    tuning_report,
)
from .simulate import (
    ExperimentCell,
    MixtureSpec,
    SimScenario,
    run_mae_experiment,
    run_selection_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "CRITERION_NAMES",
    "CriterionContext",
    "CriterionScore",
    "Dataset",
    "ExperimentCell",
    "HuberConfig",
    "HuberIRLSRegressor",
    "K_C0",
    "K_CLASSIC",
    "MixtureSpec",
    "RobustFit",
    "SelectionResult",
    "SimScenario",
    "SubsetModel",
    "SubsetSelector",
    "c0",
    "c0_rho_h",
    "c1",
    "enumerate_subsets",
    "expected_rho_quadrature",
    "expected_rho_univariate",
    "huber_psi",
    "huber_rho",
    "huber_weight",
    "irls_fit",
    "mad_scale",
    "run_mae_experiment",
    "run_selection_experiment",
    "score",
    "score_all",
    "select_best",
    "tune_k_c0",
    "tuning_report",
]
