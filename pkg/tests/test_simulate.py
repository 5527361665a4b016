import numpy as np
import pytest
from scipy import stats

from robustsel.simulate import (
    CONTAMINANTS,
    MixtureSpec,
    SimScenario,
    TRUE_MASK,
    burr3_cdf,
    burr3_sample,
    gen_errors,
    gen_predictors,
    gen_response,
    mae,
    run_mae_experiment,
    run_selection_experiment,
    table1_scenarios,
    table2_scenarios,
)


def test_true_mask_is_first_three():
    assert TRUE_MASK == 0b00111


# ---------------------------------------------------------------- Burr III

def test_burr3_cdf_shape():
    x = np.array([0.1, 1.0, 5.0, 50.0])
    F = burr3_cdf(x, 2.0, 20.0)
    assert np.all(np.diff(F) > 0)
    assert np.all((F > 0) & (F < 1))
    assert burr3_cdf(1e9, 2.0, 20.0) == pytest.approx(1.0, abs=1e-6)


def test_burr3_sample_ks():
    rng = np.random.default_rng(0)
    x = burr3_sample(2.0, 20.0, rng, size=5000)
    assert np.all(x > 0)
    stat, pval = stats.kstest(x, lambda v: burr3_cdf(v, 2.0, 20.0))
    assert pval > 0.01


def test_burr3_validation():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        burr3_sample(-1.0, 20.0, rng)


def test_predictor_correlation_oracle():
    """Shared-factor construction gives pairwise correlation alpha^2 = 0.81.

    Checked at shape c = 4 where the Burr III variance is finite; the default
    c = 2 has infinite variance, so a correlation oracle is ill-posed there.
    """
    rng = np.random.default_rng(1)
    X = gen_predictors(20000, 0.9, 4.0, 20.0, rng)
    assert X.shape == (20000, 5)
    off = np.corrcoef(X.T)[np.triu_indices(5, 1)]
    assert np.all(np.abs(off - 0.81) < 0.05)


# ---------------------------------------------------------------- mixtures

def test_mixture_validation():
    with pytest.raises(ValueError):
        MixtureSpec(n1=-1, n2=2)
    with pytest.raises(ValueError):
        MixtureSpec(n1=0, n2=0)
    with pytest.raises(ValueError):
        MixtureSpec(n1=2, n2=2, sigma2=0.0)


def test_scenario_mixture_blocks():
    sc = SimScenario(n=30, lc=0.2, contaminant="shift")
    mix = sc.mixture
    assert (mix.n1, mix.n2) == (24, 6)
    assert (mix.mu2, mix.sigma2) == CONTAMINANTS["shift"]
    sc = SimScenario(n=50, lc=0.3, contaminant="scale")
    assert (sc.mixture.n1, sc.mixture.n2) == (35, 15)
    assert (sc.mixture.mu2, sc.mixture.sigma2) == (0.0, 50.0)


def test_scenario_validation():
    with pytest.raises(ValueError):
        SimScenario(n=30, lc=1.5)
    with pytest.raises(ValueError):
        SimScenario(n=30, lc=0.1, contaminant="cauchy")
    with pytest.raises(ValueError):
        SimScenario(n=30, lc=0.1, r=0)


def test_gen_errors_blocks():
    rng = np.random.default_rng(2)
    e = gen_errors(MixtureSpec(n1=2000, n2=2000, mu2=5.0, sigma2=10.0), rng)
    assert e.shape == (4000,)
    assert abs(np.mean(e[:2000])) < 0.1  # clean block centered at 0
    assert abs(np.mean(e[2000:]) - 5.0) < 1.0  # contaminant block centered at 5
    assert np.std(e[2000:]) > 5 * np.std(e[:2000])


def test_gen_response_mismatch():
    with pytest.raises(ValueError):
        gen_response(np.ones((10, 5)), np.ones(4), 1.0, np.zeros(10))
    with pytest.raises(ValueError):
        gen_response(np.ones((10, 5)), np.ones(5), 1.0, np.zeros(9))


def test_mae_identities():
    y = np.array([1.0, 2.0, 3.0])
    assert mae(y, y) == 0.0
    assert mae(y, y + 0.5) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        mae(y, np.ones(2))


# ---------------------------------------------------------------- experiments

def test_mae_experiment_perfect_fit():
    sc = SimScenario(n=30, lc=0.0, sigma_model=0.0, r=5, seed=0)
    cell = run_mae_experiment(sc)
    for v in cell.outputs["mae"].values():
        assert v == pytest.approx(0.0, abs=1e-8)


def test_mae_experiment_deterministic():
    sc = SimScenario(n=30, lc=0.2, r=20, seed=7)
    a = run_mae_experiment(sc).outputs
    b = run_mae_experiment(sc).outputs
    assert a == b
    c = run_mae_experiment(sc, n_jobs=2).outputs
    assert a == c  # parallelism must not change aggregates


def test_mae_contamination_monotone_in_lc():
    # scale contaminant at n = 30: MAE rises with the contamination level
    maes = []
    for lc in (0.1, 0.2, 0.3, 0.5):
        sc = SimScenario(n=30, lc=lc, contaminant="scale", r=500, seed=0)
        out = run_mae_experiment(sc).outputs["mae"]
        maes.append((out["k=1.345"], out["k=0.887592"]))
    for j in range(2):
        col = [m[j] for m in maes]
        assert all(b > a for a, b in zip(col, col[1:]))


def test_selection_experiment_basics():
    sc = SimScenario(n=30, lc=0.1, r=5, seed=0)
    cell = run_selection_experiment(sc)
    hits = cell.outputs["hits"]
    assert set(hits) == {"AIC", "AIC_H", "AIC_R", "RICOMP_IFIM", "RICOMP_M", "RICOMP_C0RH"}
    assert all(0 <= v <= sc.r for v in hits.values())
    again = run_selection_experiment(sc)
    assert again.outputs == cell.outputs


def test_selection_experiment_criteria_subset():
    sc = SimScenario(n=30, lc=0.1, r=3, seed=1)
    cell = run_selection_experiment(sc, criteria_list=("AIC",))
    assert set(cell.outputs["hits"]) == {"AIC"}


def test_table_grids():
    t1 = table1_scenarios("scale", r=10, seed=3)
    assert len(t1) == 12
    assert {(s.n, s.lc) for s in t1} == {
        (n, lc) for n in (30, 50, 100) for lc in (0.10, 0.20, 0.30, 0.50)
    }
    assert all(s.contaminant == "scale" and s.r == 10 for s in t1)
    t2 = table2_scenarios(r=10)
    assert all(s.contaminant == "shift" for s in t2)
