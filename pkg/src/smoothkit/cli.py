"""Command line frontend.

Subcommands expose the constant tables, the width functional, the modulus,
the best-approximation engine, the verification suites, and a report mode
that renders figures next to its data files.  All outputs are deterministic
for a fixed flag set: report rows are sorted, floats are printed at full
precision, and every random draw derives from the --seed value.

Exit codes: 0 success, 1 at least one failed inequality row, 2 usage or
configuration errors, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import reporting
from .bestapprox import NonConvergenceError, SingularCollocationError, trig_minimax
from .differences import omega, omega_profile
from .harness import (
    CorpusCase,
    SuiteParams,
    UnknownSuiteError,
    SUITES,
    default_corpus_cases,
    gen_corpus,
    run_suite,
    suite_defaults,
)
from .kernels import constants_table, lambda_kernel, lambda_vertices
from .periodic import QuadratureError, Resolution, TrigPolynomial
from .wfunctional import WParams, w_norm, w_star

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(ValueError):
    pass


def parse_int_range(text: str) -> tuple[int, ...]:
    """Accept 'a..b', a comma list, or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty range {text!r}")
            return tuple(range(lo, hi + 1))
        if "," in text:
            return tuple(int(part) for part in text.split(",") if part.strip())
        return (int(text),)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad integer range {text!r}") from exc


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def parse_function_spec(text: str, seed: int = 0):
    """Small spec language for one-off inputs.

    cos:m / sin:m       pure harmonics
    step:n              square wave with n oscillations
    random:deg[:seed]   seeded random polynomial, sup norm one
    highpass:n[:seed]   random polynomial with harmonics below n removed
    smooth:name         entry of the analytic sample library
    """
    parts = text.split(":")
    kind = parts[0]
    try:
        if kind in ("cos", "sin"):
            m = int(parts[1])
            case = CorpusCase(kind="high_harmonic", n=m, name=kind, seed=seed)
        elif kind == "step":
            case = CorpusCase(kind="step_sign_cos", n=int(parts[1]), seed=seed)
        elif kind == "random":
            local = int(parts[2]) if len(parts) > 2 else seed
            case = CorpusCase(kind="random_trig", degree=int(parts[1]), seed=local)
        elif kind == "highpass":
            local = int(parts[2]) if len(parts) > 2 else seed
            case = CorpusCase(kind="highpass_random", n=int(parts[1]), seed=local)
        elif kind == "smooth":
            case = CorpusCase(kind="smooth_named", name=parts[1], seed=seed)
        else:
            raise UsageError(f"unknown function spec {text!r}")
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad function spec {text!r}: {exc}") from exc
    return gen_corpus([case], seed)[0]


def _ensure_out(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _write_table(path: str, header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for value in row:
            if isinstance(value, str):
                cells.append(value)
            elif isinstance(value, (int, np.integer)):
                cells.append(str(int(value)))
            else:
                cells.append(reporting.format_float(value))
        lines.append(",".join(cells))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    known = {"corpus", "suites", "resolution", "tolerances"}
    extra = set(config) - known
    if extra:
        raise UsageError(f"unknown config keys: {sorted(extra)}")
    return config


def _resolution_from_config(config: dict) -> Resolution:
    section = config.get("resolution") or {}
    try:
        return Resolution(
            grid_size=int(section.get("grid_size", 1024)),
            refine_tol=float(section.get("refine_tol", 1e-10)),
            max_refine_iters=int(section.get("max_refine_iters", 50)),
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad resolution section: {exc}") from exc


def _suite_params(name: str, config: dict, args) -> SuiteParams:
    base = suite_defaults(name)
    overrides = {}
    for entry in config.get("suites", []):
        if isinstance(entry, dict) and entry.get("name") == name:
            overrides = {k: v for k, v in entry.items() if k != "name"}
    tolerances = config.get("tolerances") or {}
    if name in tolerances:
        overrides["tolerance"] = float(tolerances[name])
    fields = dict(
        k_range=tuple(overrides.get("k_range", base.k_range)),
        n_range=tuple(overrides.get("n_range", base.n_range)),
        alpha_list=tuple(overrides.get("alpha_list", base.alpha_list)),
        h_grid_size=int(overrides.get("h_grid_size", base.h_grid_size)),
        tolerance=float(overrides.get("tolerance", base.tolerance)),
        case_count=int(overrides.get("case_count", base.case_count)),
        seed=int(overrides.get("seed", base.seed)),
    )
    if args.k is not None:
        fields["k_range"] = parse_int_range(args.k)
    if args.n is not None:
        fields["n_range"] = parse_int_range(args.n)
    if args.alpha is not None:
        fields["alpha_list"] = parse_float_list(args.alpha)
    if args.tol is not None:
        fields["tolerance"] = args.tol
    if args.cases is not None:
        fields["case_count"] = args.cases
    fields["seed"] = args.seed
    try:
        return SuiteParams(**fields)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad suite parameters for {name!r}: {exc}") from exc


def _cmd_constants(args) -> int:
    out = _ensure_out(args.out)
    ks = parse_int_range(args.k)
    table = constants_table(ks)
    header = ("k", "b0", "b1", "lambda_l1", "K_2k")
    rows = [(r["k"], r["b0"], r["b1"], r["lambda_l1"], r["K_2k"]) for r in table]
    if args.format == "json":
        path = os.path.join(out, "constants.json")
        with open(path, "w") as fh:
            json.dump([dict(zip(header, row)) for row in rows], fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        path = _write_table(os.path.join(out, "constants.csv"), header, rows)
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_kernel(args) -> int:
    out = _ensure_out(args.out)
    ks = parse_int_range(args.k)
    rows = []
    for k in ks:
        table = lambda_vertices(k)
        for i, b in enumerate(table.b):
            rows.append((k, i, str(b.numerator), str(b.denominator), float(b)))
    path = _write_table(
        os.path.join(out, "kernel_vertices.csv"),
        ("k", "i", "numerator", "denominator", "value"),
        rows,
    )
    print(f"wrote {path}")
    if args.h is not None:
        k = ks[0]
        kern = lambda_kernel(k, args.h)
        sample_rows = list(zip(kern.breakpoints, kern.vertex_values))
        spath = _write_table(
            os.path.join(out, "kernel_samples.csv"), ("x", "value"), sample_rows
        )
        print(f"wrote {spath}")
        print(f"abs_integral={reporting.format_float(kern.abs_integral())}")
    return EXIT_OK


def _cmd_w(args) -> int:
    out = _ensure_out(args.out)
    f = parse_function_spec(args.fn, args.seed)
    k = int(args.k)
    if args.grid:
        deltas = (math.pi / k) * np.arange(1, args.grid + 1) / (args.grid + 1.0)
        values = [w_norm(f, WParams(k, float(d))) for d in deltas]
        stars = [w_star(f, k, float(d)) for d in deltas]
        path = _write_table(
            os.path.join(out, "w_profile.csv"),
            ("h", "w_norm", "w_star"),
            list(zip(deltas, values, stars)),
        )
    else:
        h = args.h if args.h is not None else 0.5 * math.pi / k
        if not 0.0 < h < math.pi / k:
            raise UsageError(f"h must lie in (0, pi/{k})")
        path = _write_table(
            os.path.join(out, "w.csv"),
            ("k", "h", "w_norm", "w_star"),
            [(k, h, w_norm(f, WParams(k, h)), w_star(f, k, h))],
        )
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_omega(args) -> int:
    out = _ensure_out(args.out)
    f = parse_function_spec(args.fn, args.seed)
    r = int(args.r)
    if args.grid:
        deltas = math.pi * np.arange(1, args.grid + 1) / float(args.grid)
        values = omega_profile(f, r, deltas)
        path = _write_table(
            os.path.join(out, "omega_profile.csv"),
            ("delta", "omega"),
            list(zip(deltas, values)),
        )
    else:
        delta = args.delta if args.delta is not None else math.pi / 2
        path = _write_table(
            os.path.join(out, "omega.csv"),
            ("r", "delta", "omega"),
            [(r, delta, omega(f, r, delta))],
        )
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_bestapprox(args) -> int:
    out = _ensure_out(args.out)
    f = parse_function_spec(args.fn, args.seed)
    result = trig_minimax(f, args.degree, tol=args.tol if args.tol is not None else 1e-8)
    path = _write_table(
        os.path.join(out, "bestapprox.csv"),
        ("degree", "error", "bracket_low", "bracket_high", "iterations"),
        [(args.degree, result.error, result.bracket_low, result.bracket_high, result.iterations)],
    )
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    config = _load_config(args.config)
    res = _resolution_from_config(config)
    out = _ensure_out(args.out)
    if args.suite:
        names = []
        for chunk in args.suite:
            names.extend(part.strip() for part in chunk.split(",") if part.strip())
    else:
        names = [entry["name"] for entry in config.get("suites", [])] or sorted(SUITES)
    for name in names:
        if name not in SUITES:
            raise UnknownSuiteError(name, SUITES)
    if config.get("corpus"):
        cases = [CorpusCase.from_dict(rec) for rec in config["corpus"]]
    else:
        cases = default_corpus_cases()
    corpus = gen_corpus(cases, args.seed, res)
    rows_by_suite = {}
    failures = 0
    for name in names:
        params = _suite_params(name, config, args)
        rows = run_suite(name, params, corpus)
        rows_by_suite[name] = rows
        ext = "json" if args.format == "json" else "csv"
        path = os.path.join(out, f"{name}.{ext}")
        if args.format == "json":
            reporting.write_json(rows, path)
        else:
            reporting.write_csv(rows, path)
        fails = sum(1 for r in rows if not r.passed)
        failures += fails
        status = "pass" if fails == 0 else f"FAIL ({fails} rows)"
        print(f"{name}: {len(rows)} rows, {status} -> {path}")
    spath = reporting.write_summary(rows_by_suite, os.path.join(out, "summary.txt"))
    print(f"wrote {spath}")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _cmd_report(args) -> int:
    out = _ensure_out(args.out)
    names = None
    if args.figures:
        names = [part.strip() for part in args.figures.split(",") if part.strip()]
    try:
        written = reporting.render_report(out, names)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothkit",
        description="periodic smoothness functionals, kernels, and inequality verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fn_flag=False):
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        if fn_flag:
            p.add_argument(
                "--fn",
                default="cos:4",
                help="function spec: cos:m, sin:m, step:n, random:deg[:seed], "
                "highpass:n[:seed], smooth:name",
            )

    p = sub.add_parser("constants", help="vertex and smoothness constant table")
    p.add_argument("--k", default="1..10", help="order range a..b or comma list")
    common(p)
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("kernel", help="exact kernel vertex table")
    p.add_argument("--k", default="1..6")
    p.add_argument("--h", type=float, default=None, help="also sample the kernel at width h")
    common(p)
    p.set_defaults(handler=_cmd_kernel)

    p = sub.add_parser("w", help="width functional of one function")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--grid", type=int, default=0, help="emit a profile on this many widths")
    common(p, fn_flag=True)
    p.set_defaults(handler=_cmd_w)

    p = sub.add_parser("omega", help="modulus of smoothness of one function")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--grid", type=int, default=0)
    common(p, fn_flag=True)
    p.set_defaults(handler=_cmd_omega)

    p = sub.add_parser("bestapprox", help="best uniform approximation by low degree")
    p.add_argument("--degree", type=int, default=4)
    common(p, fn_flag=True)
    p.set_defaults(handler=_cmd_bestapprox)

    p = sub.add_parser("verify", help="run inequality suites on a seeded corpus")
    p.add_argument("--suite", action="append", help="suite id or comma list (repeatable)")
    p.add_argument("--k", default=None, help="order range a..b")
    p.add_argument("--n", default=None, help="degree range a..b")
    p.add_argument("--alpha", default=None, help="comma list of alpha values")
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON run configuration")
    common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("report", help="standard figures with their data files")
    p.add_argument("--figures", default=None, help="comma list; default renders all")
    common(p)
    p.set_defaults(handler=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.handler(args)
    except (UsageError, UnknownSuiteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergenceError, QuadratureError, SingularCollocationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
