"""Report serialization: delimited files, JSON, summaries, and figure data.

CSV rows follow one fixed column order so files from different suites can be
concatenated; floats are printed with 17 significant digits so a round trip
through text is exact for doubles.  Figure rendering is optional and kept
behind a lazy matplotlib import with the Agg backend, writing PNG files next
to the data they display.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from .harness import Report

CSV_COLUMNS = (
    "suite",
    "case_id",
    "k",
    "n",
    "alpha",
    "h",
    "lhs",
    "rhs",
    "margin",
    "empirical_constant",
    "pass",
)


def format_float(value) -> str:
    return "%.17g" % float(value)


def _csv_cell(row: Report, column: str) -> str:
    if column == "suite":
        return row.suite
    if column == "case_id":
        return row.case_id
    if column == "pass":
        return "True" if row.passed else "False"
    if column == "empirical_constant":
        return "" if row.empirical_constant is None else format_float(row.empirical_constant)
    if column in ("lhs", "rhs", "margin"):
        return format_float(getattr(row, column))
    value = row.params.get(column)
    if value is None:
        return ""
    if column in ("k", "n"):
        return str(int(value))
    return format_float(value)


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_cell(row, c) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def write_csv(rows, path: str) -> str:
    with open(path, "w") as fh:
        fh.write(rows_to_csv(rows))
    return path


def rows_to_json(rows) -> str:
    records = []
    for row in rows:
        records.append(
            {
                "suite": row.suite,
                "case_id": row.case_id,
                "params": row.params,
                "lhs": row.lhs,
                "rhs": row.rhs,
                "margin": row.margin,
                "empirical_constant": row.empirical_constant,
                "pass": row.passed,
            }
        )
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def write_json(rows, path: str) -> str:
    with open(path, "w") as fh:
        fh.write(rows_to_json(rows))
    return path


def summary_lines(rows_by_suite: dict) -> list[str]:
    """One line per suite plus a total; counts match the per-suite files."""
    lines = []
    total_rows = 0
    total_fail = 0
    for name in sorted(rows_by_suite):
        rows = rows_by_suite[name]
        fails = sum(1 for r in rows if not r.passed)
        total_rows += len(rows)
        total_fail += fails
        worst = min((r.margin for r in rows), default=float("nan"))
        lines.append(
            f"{name}: rows={len(rows)} failures={fails} worst_margin={format_float(worst)}"
        )
    lines.append(f"total: rows={total_rows} failures={total_fail}")
    return lines


def write_summary(rows_by_suite: dict, path: str) -> str:
    with open(path, "w") as fh:
        fh.write("\n".join(summary_lines(rows_by_suite)) + "\n")
    return path


def series_to_csv(x_name: str, x_values, series: dict) -> str:
    """Plot data layout: one x column followed by one column per series."""
    names = list(series)
    lines = [",".join([x_name] + names)]
    cols = [np.asarray(series[name], dtype=float) for name in names]
    xs = np.asarray(x_values, dtype=float)
    for i in range(xs.size):
        lines.append(",".join([format_float(xs[i])] + [format_float(c[i]) for c in cols]))
    return "\n".join(lines) + "\n"


def write_series(path: str, x_name: str, x_values, series: dict) -> str:
    with open(path, "w") as fh:
        fh.write(series_to_csv(x_name, x_values, series))
    return path


def _figure(path: str, x_name: str, x_values, series: dict, title: str, logy: bool) -> str:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = np.asarray(x_values, dtype=float)
    for name, values in series.items():
        ax.plot(xs, np.asarray(values, dtype=float), marker="o", markersize=3, label=name)
    ax.set_xlabel(x_name)
    ax.set_title(title)
    if logy:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def constants_series(k_values) -> tuple[list, dict]:
    from .kernels import constants_table

    table = constants_table(k_values)
    ks = [row["k"] for row in table]
    series = {
        "b0": [row["b0"] for row in table],
        "b1": [row["b1"] for row in table],
        "lambda_l1": [row["lambda_l1"] for row in table],
        "K_2k": [row["K_2k"] for row in table],
    }
    return ks, series


def w_profile_series(k_values=(1, 2, 3), grid_size: int = 24) -> tuple[np.ndarray, dict]:
    """Maximal functional of a fixed analytic sample function on a width grid."""
    from .harness import SMOOTH_LIBRARY, gen_corpus, CorpusCase
    from .wfunctional import w_star_profile

    f = gen_corpus([CorpusCase(kind="smooth_named", name="exp_cos")])[0]
    kmax = max(k_values)
    deltas = (math.pi / kmax) * np.arange(1, grid_size + 1) / (grid_size + 1.0)
    series = {}
    for k in k_values:
        series[f"k={k}"] = w_star_profile(f, k, deltas)
    return deltas, series


def spline_convergence_series(r_values=(2, 4), n_values=(4, 8, 16, 32)) -> tuple[list, dict]:
    """Measured spline residuals for a smooth sample against the derivative bound."""
    from .bestapprox import spline_favard
    from .kernels import favard_constant
    from .periodic import TrigPolynomial, sup_norm

    f = TrigPolynomial(np.array([0.0, 1.0, 0.4]), np.array([0.0, 0.3]))
    series = {}
    for r in r_values:
        dnorm = sup_norm(f.derivative(r).handle("d"))
        fav = favard_constant(r)
        series[f"residual r={r}"] = [spline_favard(f.handle("f"), n, r)[1] for n in n_values]
        series[f"bound r={r}"] = [fav * n**-r * dnorm for n in n_values]
    return list(n_values), series


def minimax_bracket_series(n: int = 5) -> tuple[list, dict]:
    """Certified error bracket per iteration for a square-wave approximation."""
    from .bestapprox import trig_minimax
    from .harness import CorpusCase, gen_corpus

    f = gen_corpus([CorpusCase(kind="step_sign_cos", n=n)])[0]
    result = trig_minimax(f, n - 1, tol=1e-10)
    history = list(result.bracket_history)
    iters = list(range(1, len(history) + 1))
    return iters, {
        "lower": [lo for lo, _ in history],
        "upper": [hi for _, hi in history],
    }


STANDARD_FIGURES = {
    "constants": ("k", lambda: constants_series(range(1, 21)), "kernel and smoothness constants", False),
    "w_profile": ("delta", w_profile_series, "maximal functional width profile", False),
    "spline_convergence": ("n", spline_convergence_series, "spline residual vs knot density", True),
    "minimax_bracket": ("iteration", minimax_bracket_series, "certified minimax error bracket", False),
}


def render_report(out_dir: str, names=None, figures: bool = True) -> list[str]:
    """Emit the standard plot-data files, each with a PNG rendering beside it."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name in names or sorted(STANDARD_FIGURES):
        if name not in STANDARD_FIGURES:
            raise ValueError(f"unknown report figure {name!r}")
        x_name, builder, title, logy = STANDARD_FIGURES[name]
        xs, series = builder()
        written.append(write_series(os.path.join(out_dir, f"{name}.csv"), x_name, xs, series))
        if figures:
            written.append(_figure(os.path.join(out_dir, f"{name}.png"), x_name, xs, series, title, logy))
    return written
