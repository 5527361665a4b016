"""Command-line front end.

Subcommands: fit, select, tune-k, simulate-mae, simulate-select, report.
Machine-readable tables go to ``<out>/<command>_<timestamp>.<format>`` next to
a plain ``summary.txt``; fit/select also emit normal probability-plot
coordinates for the standardized residuals (and optionally an SVG rendering).

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import CRITERION_NAMES, CriterionContext, score
from .linalg import NotSPDError, RankDeficiencyError
from .mest import (
    AllTailError,
    Dataset,
    DegenerateScaleError,
    HuberConfig,
    K_C0,
    irls_fit,
)
from .search import DegenerateObjectiveError, NoRootError, select_best, tuning_report
from .simulate import (
    SimScenario,
    mae,
    run_mae_experiment,
    run_selection_experiment,
    table1_scenarios,
    table2_scenarios,
)
from .specfun import norm_cdf

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

_NUMERICAL_ERRORS = (
    RankDeficiencyError,
    NotSPDError,
    DegenerateScaleError,
    AllTailError,
    DegenerateObjectiveError,
    NoRootError,
    np.linalg.LinAlgError,
    RuntimeError,
)


class DataError(ValueError):
    """Problem with an input file or its contents."""


def ingest_csv(path: str | Path, response_column: str) -> Dataset:
    """Read a headered numeric CSV into a Dataset with a prepended intercept."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"empty file: {path}")
        header = [h.strip() for h in header]
        if response_column not in header:
            raise DataError(
                f"response column {response_column!r} not in header {header}"
            )
        y_idx = header.index(response_column)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DataError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
            parsed = []
            for col, cell in zip(header, row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DataError(f"non-numeric cell at row {lineno}, column {col!r}: {cell!r}")
            rows.append(parsed)
    if not rows:
        raise DataError(f"no data rows in {path}")
    arr = np.array(rows)
    if arr.shape[0] < arr.shape[1]:
        raise DataError(f"fewer rows ({arr.shape[0]}) than columns ({arr.shape[1]})")
    y = arr[:, y_idx]
    X = np.delete(arr, y_idx, axis=1)
    names = tuple(h for i, h in enumerate(header) if i != y_idx)
    design = np.column_stack([np.ones(len(y)), X])
    return Dataset(design, y, names=names)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_table(rows: list[dict], path: Path, fmt: str) -> None:
    if fmt == "json":
        with path.open("w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True, default=_fmt)
            fh.write("\n")
        return
    delim = "," if fmt == "csv" else "\t"
    cols = list(rows[0].keys())
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delim, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in cols])


def probplot_rows(residuals: np.ndarray, sigma: float) -> list[dict]:
    """Sorted standardized residuals against standard normal quantiles."""
    u = np.sort(np.asarray(residuals, dtype=float) / sigma)
    n = u.size
    # Blom-free plotting positions (i - 0.5)/n inverted through the normal CDF
    quantiles = [_norm_ppf((i + 0.5) / n) for i in range(n)]
    return [
        {"theoretical_quantile": float(q), "standardized_residual": float(r)}
        for q, r in zip(quantiles, u)
    ]


def _norm_ppf(q: float) -> float:
    # bisection on the CDF; plenty for plot coordinates
    lo, hi = -10.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if norm_cdf(mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def emit_report(results: dict, config: argparse.Namespace) -> list[Path]:
    """Write the machine-readable table, summary, and optional plot files."""
    rows = results.get("rows")
    if not rows:
        raise DataError("nothing to report: empty results")
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    fmt = config.format
    written = []
    table_path = out / f"{results['command']}_{stamp}.{fmt}"
    _write_table(rows, table_path, fmt)
    written.append(table_path)
    summary_path = out / "summary.txt"
    with summary_path.open("w") as fh:
        for line in results.get("summary", []):
            fh.write(line + "\n")
    written.append(summary_path)
    prob = results.get("probplot")
    if prob:
        prob_path = out / f"{results['command']}_probplot_{stamp}.{fmt}"
        _write_table(prob, prob_path, fmt)
        written.append(prob_path)
        if getattr(config, "with_plots", False):
            written.append(_render_probplot(prob, out / f"{results['command']}_probplot_{stamp}.svg"))
    return written


def _render_probplot(prob_rows: list[dict], path: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    q = [r["theoretical_quantile"] for r in prob_rows]
    s = [r["standardized_residual"] for r in prob_rows]
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(q, s, "+", color="tab:blue")
    lim = [min(q), max(q)]
    ax.plot(lim, lim, "--", color="gray")
    ax.set_xlabel("theoretical normal quantile")
    ax.set_ylabel("standardized residual")
    ax.set_title("Normal probability plot of residuals")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def _scenario_rows_header(sc: SimScenario) -> dict:
    mix = sc.mixture
    return {"n": sc.n, "lc": sc.lc, "n1": mix.n1, "n2": mix.n2}


def cmd_fit(args) -> dict:
    data = ingest_csv(args.input, args.response)
    fit = irls_fit(data, HuberConfig(k=args.k))
    names = ("intercept",) + data.names
    rows = [
        {"term": name, "estimate": float(b)}
        for name, b in zip(names, fit.beta)
    ]
    yhat = data.X @ fit.beta
    summary = [
        f"fit: n={data.n} p={data.p} k={args.k:g}",
        f"sigma={fit.sigma!r} iterations={fit.iterations} converged={fit.converged}",
        "coefficients: " + ", ".join(f"{n}={b:.6g}" for n, b in zip(names, fit.beta)),
        f"in-sample MAE={mae(data.y, yhat)!r}",
    ]
    return {
        "command": "fit",
        "rows": rows,
        "summary": summary,
        "probplot": probplot_rows(fit.residuals, fit.sigma),
    }


def cmd_select(args) -> dict:
    data = ingest_csv(args.input, args.response)
    result = select_best(data, args.criterion, HuberConfig(k=args.k))
    rows = []
    for rank, (subset, sc) in enumerate(result.ranked, start=1):
        rows.append({
            "rank": rank,
            "subset": subset.label(data.names),
            "mask": subset.mask,
            "criterion": sc.criterion,
            "value": sc.value,
            "lack_of_fit": sc.lack_of_fit,
            "penalty": sc.penalty,
        })
    best_subset, best_score = result.best
    best_fit = result.fits[best_subset.mask]
    names = ("intercept",) + tuple(data.names[i] for i in best_subset.indices())
    cols = [0] + [i + 1 for i in best_subset.indices()]
    yhat = data.X[:, cols] @ best_fit.beta
    summary = [
        f"select: criterion={args.criterion} k={args.k:g} "
        f"subsets={len(result.ranked)} failed={len(result.failed)}",
        f"best subset {best_subset.label(data.names)} value={best_score.value!r}",
        "model: y = " + " + ".join(f"{b:.4f}*{n}" for n, b in zip(names, best_fit.beta)),
        f"in-sample MAE={mae(data.y, yhat)!r}",
    ]
    for subset, err in result.failed:
        summary.append(f"failed subset {subset.label(data.names)}: {err}")
    return {
        "command": "select",
        "rows": rows,
        "summary": summary,
        "probplot": probplot_rows(best_fit.residuals, best_fit.sigma),
    }


def cmd_tune_k(args) -> dict:
    report = tuning_report(p_values=range(1, args.tune_p + 1))
    rows = []
    for p, entry in report["per_dimension"].items():
        for mode, cell in entry.items():
            rows.append({
                "p": p,
                "gamma_mode": mode,
                "k_root": cell["k_root"] if cell["k_root"] is not None else "degenerate",
                "c0_rho_h_identity_at_1.345": cell["c0_rho_h_identity_at_k_eval"],
                "matches_published_k": cell.get("matches_published_k", False),
                "matches_published_value": cell["matches_published_value"],
            })
    pub = report["published"]
    summary = [
        f"published: k_c0={pub['k_c0']} penalty(I) at k=1.345={pub['c0_rho_h_identity_at_1.345']}",
    ]
    for row in rows:
        summary.append(
            f"p={row['p']} mode={row['gamma_mode']}: root={row['k_root']} "
            f"value@1.345={row['c0_rho_h_identity_at_1.345']!r} "
            f"matches_k={row['matches_published_k']} matches_value={row['matches_published_value']}"
        )
    return {"command": "tune-k", "rows": rows, "summary": summary}


def _sim_scenarios(args, table) -> list[SimScenario]:
    if args.n is not None and args.lc is not None:
        return [SimScenario(n=args.n, lc=args.lc, contaminant=args.contaminant,
                            r=args.r, seed=args.seed)]
    return table(r=args.r, seed=args.seed)


def cmd_simulate_mae(args) -> dict:
    scenarios = _sim_scenarios(
        args, lambda r, seed: table1_scenarios(args.contaminant, r=r, seed=seed)
    )
    rows = []
    for sc in scenarios:
        cell = run_mae_experiment(sc, n_jobs=args.jobs)
        row = _scenario_rows_header(sc)
        row.update(cell.outputs["mae"])
        row["redraws"] = cell.outputs["redraws"]
        rows.append(row)
    summary = [f"simulate-mae: contaminant={args.contaminant} r={args.r} seed={args.seed}"]
    summary += [", ".join(f"{k}={_fmt(v)}" for k, v in row.items()) for row in rows]
    return {"command": "simulate-mae", "rows": rows, "summary": summary}


def cmd_simulate_select(args) -> dict:
    scenarios = _sim_scenarios(args, table2_scenarios)
    rows = []
    for sc in scenarios:
        cell = run_selection_experiment(sc, n_jobs=args.jobs, k=args.k)
        row = _scenario_rows_header(sc)
        row.update(cell.outputs["hits"])
        row["redraws"] = cell.outputs["redraws"]
        rows.append(row)
    summary = [f"simulate-select: r={args.r} seed={args.seed} k={args.k:g}"]
    summary += [", ".join(f"{k}={_fmt(v)}" for k, v in row.items()) for row in rows]
    return {"command": "simulate-select", "rows": rows, "summary": summary}


def cmd_report(args) -> dict:
    """Re-render a previously written JSON results table as a summary."""
    path = Path(args.input)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    try:
        rows = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"not a JSON results table: {exc}")
    if not isinstance(rows, list) or not rows:
        raise DataError("expected a non-empty JSON list of row objects")
    summary = [f"report: {path}"]
    summary += [", ".join(f"{k}={v}" for k, v in row.items()) for row in rows]
    return {"command": "report", "rows": rows, "summary": summary}


def _load_config_file(path: str) -> dict:
    cfg = {}
    p = Path(path)
    if not p.is_file():
        raise DataError(f"config file not found: {p}")
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"config line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


_CONFIG_TYPES = {
    "k": float, "r": int, "n": int, "lc": float, "seed": int, "jobs": int,
    "tune_p": int,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustsel",
        description="Robust regression model selection toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, data=False, sim=False):
        p.add_argument("--config", help="key=value config file (flags take precedence)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "tsv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--k", type=float, default=K_C0, help="Huber tuning constant")
        if data:
            p.add_argument("--input", required=True, help="CSV dataset with header")
            p.add_argument("--response", required=True, help="response column name")
            p.add_argument("--with-plots", action="store_true", dest="with_plots")
        if sim:
            p.add_argument("--r", type=int, default=1000, help="replications")
            p.add_argument("--n", type=int, default=None, help="sample size (single cell)")
            p.add_argument("--lc", type=float, default=None, help="contamination fraction")
            p.add_argument("--contaminant", choices=("shift", "scale"), default="shift")
            p.add_argument("--jobs", type=int, default=1, help="parallel workers")

    p_fit = sub.add_parser("fit", help="robust fit of the full model")
    common(p_fit, data=True)
    p_fit.set_defaults(func=cmd_fit)

    p_sel = sub.add_parser("select", help="exhaustive subset selection")
    common(p_sel, data=True)
    p_sel.add_argument("--criterion", choices=CRITERION_NAMES, default="RICOMP_C0RH")
    p_sel.set_defaults(func=cmd_select)

    p_tune = sub.add_parser("tune-k", help="tuning-constant diagnostics report")
    common(p_tune)
    p_tune.add_argument("--tune-p", type=int, default=6, dest="tune_p",
                        help="report dimensions 1..P")
    p_tune.set_defaults(func=cmd_tune_k)

    p_mae = sub.add_parser("simulate-mae", help="tuning-constant MAE study")
    common(p_mae, sim=True)
    p_mae.set_defaults(func=cmd_simulate_mae)

    p_ss = sub.add_parser("simulate-select", help="criterion hit-count study")
    common(p_ss, sim=True)
    p_ss.set_defaults(func=cmd_simulate_select)

    p_rep = sub.add_parser("report", help="summarize a JSON results table")
    common(p_rep)
    p_rep.add_argument("--input", required=True, help="JSON results table")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # config file values sit between hard-coded defaults and explicit flags
    if "--config" in argv:
        try:
            cfg_path = argv[argv.index("--config") + 1]
        except IndexError:
            parser.error("--config requires a path")
        try:
            cfg = _load_config_file(cfg_path)
        except DataError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA
        typed = {}
        for key, value in cfg.items():
            conv = _CONFIG_TYPES.get(key, str)
            try:
                typed[key] = conv(value)
            except ValueError:
                print(f"error: config value for {key} is not {conv.__name__}: {value!r}",
                      file=sys.stderr)
                return EXIT_DATA
        for action in parser._subparsers._group_actions[0].choices.values():
            action.set_defaults(**{k: v for k, v in typed.items()
                                   if k in {a.dest for a in action._actions}})
    args = parser.parse_args(argv)
    try:
        results = args.func(args)
        written = emit_report(results, args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
