"""Monte Carlo data generators and experiment runners.

Predictors are correlated heavy-tailed draws built from a shared Burr III
factor; errors are a two-block contaminated normal with deterministic block
sizes. Two experiments are provided: a prediction-MAE comparison of the two
tuning constants, and a true-model hit-count comparison of the selection
criteria over all candidate subsets.

Replications use independent RNG substreams keyed by (seed, replication,
attempt), so results are deterministic and independent of execution order or
parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .criteria import CRITERION_NAMES, CriterionContext, score
from .mest import Dataset, HuberConfig, K_C0, K_CLASSIC, irls_fit
from .search import enumerate_subsets

__all__ = [
    "MixtureSpec",
    "SimScenario",
    "ExperimentCell",
    "TRUE_MASK",
    "burr3_sample",
    "burr3_cdf",
    "gen_predictors",
    "gen_errors",
    "gen_response",
    "mae",
    "run_mae_experiment",
    "run_selection_experiment",
    "table1_scenarios",
    "table2_scenarios",
]

#: bitmask of the data-generating subset {x1, x2, x3}
TRUE_MASK = 0b00111

#: contaminant families from the study design
CONTAMINANTS = {"shift": (5.0, 10.0), "scale": (0.0, 50.0)}


@dataclass(frozen=True)
class MixtureSpec:
    n1: int
    n2: int
    mu1: float = 0.0
    sigma1: float = 1.0
    mu2: float = 5.0
    sigma2: float = 10.0

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0 or self.n1 + self.n2 == 0:
            raise ValueError("need nonnegative block sizes with n1 + n2 > 0")
        if self.sigma1 <= 0 or self.sigma2 <= 0:
            raise ValueError("component scales must be positive")

    @property
    def n(self) -> int:
        return self.n1 + self.n2


@dataclass(frozen=True)
class SimScenario:
    n: int
    lc: float
    contaminant: str = "shift"
    alpha: float = 0.9
    burr_c: float = 2.0
    burr_kappa: float = 20.0
    beta_true: tuple[float, ...] = (1.0, 1.0, 1.0, 0.0, 0.0)
    sigma_model: float = 1.0
    r: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.lc <= 1.0:
            raise ValueError("contamination fraction must be in [0, 1]")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.burr_c <= 0 or self.burr_kappa <= 0:
            raise ValueError("Burr shapes must be positive")
        if self.r < 1:
            raise ValueError("need at least one replication")
        if self.contaminant not in CONTAMINANTS:
            raise ValueError(f"contaminant must be one of {sorted(CONTAMINANTS)}")

    @property
    def mixture(self) -> MixtureSpec:
        n2 = round(self.n * self.lc)
        mu2, sigma2 = CONTAMINANTS[self.contaminant]
        return MixtureSpec(n1=self.n - n2, n2=n2, mu2=mu2, sigma2=sigma2)


@dataclass
class ExperimentCell:
    scenario: SimScenario
    outputs: dict = field(default_factory=dict)


def burr3_sample(c: float, kappa: float, rng: np.random.Generator, size=None):
    """Inverse-CDF draw from Burr III: x = (u^(-1/kappa) - 1)^(-1/c)."""
    if c <= 0 or kappa <= 0:
        raise ValueError("Burr shapes must be positive")
    u = rng.random(size)
    return (u ** (-1.0 / kappa) - 1.0) ** (-1.0 / c)


def burr3_cdf(x, c: float, kappa: float):
    """F(x) = (1 + x^-c)^-kappa for x > 0."""
    x = np.asarray(x, dtype=float)
    return (1.0 + x ** (-c)) ** (-kappa)


def gen_predictors(n: int, alpha: float, burr_c: float, burr_kappa: float,
                   rng: np.random.Generator) -> np.ndarray:
    """Five candidate columns sharing a common Burr III factor."""
    z = burr3_sample(burr_c, burr_kappa, rng, size=(n, 6))
    return math.sqrt(1.0 - alpha**2) * z[:, :5] + alpha * z[:, 5:6]


def gen_errors(spec: MixtureSpec, rng: np.random.Generator) -> np.ndarray:
    """Clean block then contaminant block, concatenated without shuffling."""
    clean = rng.normal(spec.mu1, spec.sigma1, spec.n1)
    contaminated = rng.normal(spec.mu2, spec.sigma2, spec.n2)
    return np.concatenate([clean, contaminated])


def gen_response(X: np.ndarray, beta_true, sigma_model: float,
                 errors: np.ndarray) -> np.ndarray:
    beta_true = np.asarray(beta_true, dtype=float)
    if X.shape[1] != beta_true.size or X.shape[0] != errors.size:
        raise ValueError("dimension mismatch between X, beta_true and errors")
    return X @ beta_true + sigma_model * errors


def mae(y: np.ndarray, yhat: np.ndarray) -> float:
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape:
        raise ValueError("length mismatch")
    return float(np.mean(np.abs(y - yhat)))


def _draw_dataset(scenario: SimScenario, rng: np.random.Generator):
    X = gen_predictors(scenario.n, scenario.alpha, scenario.burr_c,
                       scenario.burr_kappa, rng)
    errors = gen_errors(scenario.mixture, rng)
    y = gen_response(X, scenario.beta_true, scenario.sigma_model, errors)
    design = np.column_stack([np.ones(scenario.n), X])
    return Dataset(design, y)


_MAX_ATTEMPTS = 4


def _with_retries(scenario: SimScenario, rep: int, worker):
    """Run one replication, redrawing the data on numerical failure."""
    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng([scenario.seed, rep, attempt])
        data = _draw_dataset(scenario, rng)
        try:
            return worker(data), attempt
        except (ValueError, np.linalg.LinAlgError):
            continue
    raise RuntimeError(f"replication {rep} failed {_MAX_ATTEMPTS} times")


def _run(scenario: SimScenario, one_rep, n_jobs: int):
    if n_jobs == 1:
        results = [one_rep(t) for t in range(scenario.r)]
    else:
        results = Parallel(n_jobs=n_jobs)(
            delayed(one_rep)(t) for t in range(scenario.r)
        )
    return results


def run_mae_experiment(scenario: SimScenario, n_jobs: int = 1,
                       k_pair: tuple[float, float] = (K_CLASSIC, K_C0)) -> ExperimentCell:
    """In-sample MAE of the full five-predictor fit under both tuning constants."""

    def worker(data: Dataset):
        out = []
        for k in k_pair:
            fit = irls_fit(data, HuberConfig(k=k))
            out.append(mae(data.y, data.X @ fit.beta))
        return out

    def one_rep(t: int):
        return _with_retries(scenario, t, worker)

    results = _run(scenario, one_rep, n_jobs)
    maes = np.array([r[0] for r in results])
    redraws = sum(r[1] for r in results)
    if redraws > max(1, scenario.r // 100):
        raise RuntimeError(f"too many redrawn replications: {redraws}")
    return ExperimentCell(scenario, {
        "mae": {f"k={k:g}": float(maes[:, i].mean()) for i, k in enumerate(k_pair)},
        "redraws": redraws,
    })


def run_selection_experiment(scenario: SimScenario,
                             criteria_list=CRITERION_NAMES,
                             n_jobs: int = 1,
                             k: float = K_C0) -> ExperimentCell:
    """True-model hit counts per criterion over all candidate subsets."""
    criteria_list = tuple(criteria_list)
    if not criteria_list:
        return ExperimentCell(scenario, {"hits": {}, "redraws": 0})
    config = HuberConfig(k=k)
    subsets = enumerate_subsets(len(scenario.beta_true))

    def worker(data: Dataset):
        scored = []
        for subset in subsets:
            cols = [0] + [i + 1 for i in subset.indices()]
            sub = Dataset(data.X[:, cols], data.y)
            try:
                fit = irls_fit(sub, config)
            except (ValueError, np.linalg.LinAlgError):
                continue
            ctx = CriterionContext(fit=fit, data=sub, k=k)
            scored.append((subset, {name: score(name, ctx).value
                                    for name in criteria_list}))
        if not scored:
            raise ValueError("all subsets failed")
        hits = {}
        for name in criteria_list:
            best = min(scored, key=lambda it: (it[1][name], it[0].size, it[0].mask))
            hits[name] = best[0].mask == TRUE_MASK
        return hits

    def one_rep(t: int):
        return _with_retries(scenario, t, worker)

    results = _run(scenario, one_rep, n_jobs)
    redraws = sum(r[1] for r in results)
    if redraws > max(1, scenario.r // 100):
        raise RuntimeError(f"too many redrawn replications: {redraws}")
    counts = {name: int(sum(r[0][name] for r in results)) for name in criteria_list}
    return ExperimentCell(scenario, {"hits": counts, "redraws": redraws})


_TABLE_GRID = [(30, 0.10), (30, 0.20), (30, 0.30), (30, 0.50),
               (50, 0.10), (50, 0.20), (50, 0.30), (50, 0.50),
               (100, 0.10), (100, 0.20), (100, 0.30), (100, 0.50)]


def table1_scenarios(contaminant: str = "shift", r: int = 1000,
                     seed: int = 0) -> list[SimScenario]:
    """The 12 (n, LC) cells of the tuning-constant MAE study."""
    return [SimScenario(n=n, lc=lc, contaminant=contaminant, r=r, seed=seed)
            for n, lc in _TABLE_GRID]


def table2_scenarios(r: int = 1000, seed: int = 0) -> list[SimScenario]:
    """The 12 (n, LC) cells of the criterion hit-count study (shift contaminant)."""
    return table1_scenarios("shift", r=r, seed=seed)
