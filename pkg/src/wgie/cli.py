"""Command-line front end.

Exit codes: 0 success, 2 configuration or validation error, 3 numerical failure.

Models are given either as ``--family NAME --params k=v ...`` or as
``--model`` holding a JSON document (inline or a file path) of the form
``{"family": "gamma", "params": {"shape": 2, "rate": 1}}``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .datasets import BUILTIN
from .distributions import FAMILIES, Window, model_from_spec
from .entropy import EntropyOrder, interval_shannon, weighted_interval_entropy, wgie
from .estimation import FITTERS, airplane_table, fit, ks_test
from .modelsel import eta_grid, kappa_grid, rank_models, uv_grid, wgie_difference_grid
from .simulation import DEFAULT_SIZES, DEFAULT_WINDOWS, SimConfig, run_monte_carlo

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


# ----------------------------------------------------------------------
# parsing helpers
# ----------------------------------------------------------------------

def parse_window(text: str) -> Window:
    try:
        a, b = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like t1,t2 (got {text!r})") from None
    try:
        return Window(a, b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_params(items) -> dict:
    out = {}
    for item in items or ():
        for part in item.split(","):
            if not part:
                continue
            key, sep, val = part.partition("=")
            if not sep:
                raise ConfigError(f"parameter {part!r} is not key=value")
            try:
                out[key.strip()] = float(val)
            except ValueError:
                raise ConfigError(f"parameter {key!r} needs a number, got {val!r}") from None
    return out


def load_model(args):
    if getattr(args, "model", None):
        text = args.model
        path = Path(text)
        if path.is_file():
            text = path.read_text()
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--model is neither a JSON file nor inline JSON: {exc}") from None
        return model_from_spec(spec)
    if not args.family:
        raise ConfigError("give a model with --family/--params or --model")
    return model_from_spec({"family": args.family, "params": parse_params(args.params)})


def load_orders(args) -> list[EntropyOrder]:
    alphas = args.alpha or [0.5]
    betas = args.beta or [1.2]
    if len(alphas) != len(betas):
        raise ConfigError("--alpha and --beta must be given the same number of times")
    return [EntropyOrder(a, b) for a, b in zip(alphas, betas)]


def load_data(ref: str | None, column: str | None = None) -> tuple[str, np.ndarray]:
    if not ref:
        raise ConfigError("--data is required (a file path, 'plane7912' or 'bearings')")
    if ref.lower() in BUILTIN:
        return ref.lower(), BUILTIN[ref.lower()].copy()
    path = Path(ref)
    if not path.is_file():
        raise ConfigError(f"no such data file or built-in dataset: {ref}")
    text = path.read_text()
    if column:
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows or column not in rows[0]:
            raise ConfigError(f"column {column!r} not found in {ref}")
        raw = [r[column] for r in rows if r[column].strip()]
    else:
        raw = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        raw = [r for r in raw if r]
    try:
        values = np.array([float(r) for r in raw])
    except ValueError as exc:
        raise ConfigError(f"bad value in {ref}: {exc}") from None
    if values.size == 0:
        raise ConfigError(f"{ref} holds no values")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ConfigError(f"{ref}: lifetimes must be finite and > 0")
    return path.name, values


# ----------------------------------------------------------------------
# output
# ----------------------------------------------------------------------

def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.10g}")
    return x


def _csv_cell(x):
    x = _num(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.10g}"
    return "" if x is None else str(x)


def _json_cell(x):
    x = _num(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: _json_cell(v) for k, v in r.items()} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(list(rows[0]))
        for r in rows:
            wr.writerow([_csv_cell(v) for v in r.values()])
    return buf.getvalue()


def emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _params(model) -> str:
    return ";".join(f"{k}={_csv_cell(v)}" for k, v in model.to_spec()["params"].items())


def _windows(args, model):
    if args.window:
        return args.window
    lo, hi = model.support
    return [Window(lo, hi)]


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_compute(args) -> list[dict]:
    model = load_model(args)
    rows = []
    for w in _windows(args, model):
        for o in load_orders(args):
            v = wgie(model, w, o, method=args.method)
            row = {"family": model.family, "params": _params(model), "t1": w.t1, "t2": w.t2,
                   "alpha": o.alpha, "beta": o.beta, "wgie": v.value, "method": v.method.value,
                   "est_error": v.est_error}
            if args.relatives:
                row["interval_shannon"] = interval_shannon(model, w)
                row["weighted_interval_entropy"] = weighted_interval_entropy(model, w)
            rows.append(row)
    return rows


def cmd_bounds_check(args) -> list[dict]:
    model = load_model(args)
    rows = []
    for w in _windows(args, model):
        for o in load_orders(args):
            for r in bnd.all_bounds(model, w, o):
                rows.append({"t1": w.t1, "t2": w.t2, "alpha": o.alpha, "beta": o.beta,
                             "theorem": r.theorem_id.value, "hypothesis_holds": r.hypothesis_holds,
                             "lhs": r.lhs, "sense": r.sense, "rhs": r.rhs, "margin": r.margin,
                             "satisfied": r.satisfied, "informative": r.informative})
    return rows


def cmd_uniqueness(args) -> list[dict]:
    model = load_model(args)
    rows = []
    for w in _windows(args, model):
        for o in load_orders(args):
            rep = bnd.uniqueness_diagnostic(model, w, o)
            for d in (rep.t1_side, rep.t2_side):
                rows.append({"t1": w.t1, "t2": w.t2, "alpha": o.alpha, "beta": o.beta,
                             "side": d.side.value, "stationary_point": d.stationary_point,
                             "value_at_stationary": d.value_at_stationary, "n_roots": d.n_roots,
                             "roots": ";".join(_csv_cell(r) for r in d.roots), "gfr_value": d.gfr_value,
                             "gfr_is_root": d.gfr_is_root, "regime": d.regime,
                             "hypothesis_holds": rep.hypothesis_theorem or rep.hypothesis_remark,
                             "warning": d.warning})
    return rows


def _families(args, default):
    fams = []
    for item in args.family_list or [default]:
        fams.extend(f for f in item.split(",") if f)
    unknown = [f for f in fams if f not in FITTERS]
    if unknown:
        raise ConfigError(f"cannot fit {unknown}; choose from {sorted(FITTERS)}")
    return fams


def cmd_fit(args) -> list[dict]:
    name, data = load_data(args.data, args.column)
    rows = []
    for fam in _families(args, "exponential"):
        r = fit(fam, data)
        rows.append({"data": name, "n": data.size, "family": fam, "params": _params(r.model),
                     "loglik": r.loglik, "converged": r.converged, "iterations": r.iterations})
    return rows


def cmd_gof(args) -> list[dict]:
    name, data = load_data(args.data, args.column)
    rows = []
    for fam in _families(args, "exponential"):
        r = fit(fam, data)
        ks = ks_test(data, r.model, ties=args.ties, method=args.ks_method)
        rows.append({"data": name, "family": fam, "params": _params(r.model), "statistic": ks.statistic,
                     "p_value": ks.p_value, "n": ks.n, "ties": ks.ties.value, "p_method": ks.method.value})
    return rows


def cmd_simulate(args) -> str:
    if args.seed is None:
        raise ConfigError("simulate needs --seed")
    model = load_model(args) if (args.family or args.model) else model_from_spec(
        {"family": "exponential", "params": {"theta": 2.0}})
    orders = load_orders(args)
    if len(orders) != 1:
        raise ConfigError("simulate takes exactly one (alpha, beta)")
    cfg = SimConfig(model=model, windows=tuple(args.window or DEFAULT_WINDOWS),
                    sample_sizes=tuple(args.n or DEFAULT_SIZES), replications=args.reps,
                    order=orders[0], seed=args.seed, protocol=args.protocol)
    rep = run_monte_carlo(cfg, workers=args.workers)
    if args.format == "csv":
        return rep.to_csv()
    rows = [{"window_t1": r.window.t1, "window_t2": r.window.t2, "n": r.n, "mean_estimate": r.mean_estimate,
             "bias": r.bias, "mse": r.mse, "true_value": r.true_value, "failures": r.failures}
            for r in rep.rows]
    return render(rows, "json")


def cmd_compare(args) -> list[dict]:
    name, data = load_data(args.data, args.column)
    fams = _families(args, "ee,gamma,weibull")
    orders = load_orders(args)
    grid = uv_grid(args.grid)
    rows = []
    for o in orders:
        ranking = rank_models(data, fams, o, grid)
        for r in ranking:
            rows.append({"data": name, "alpha": o.alpha, "beta": o.beta, "rank": r.rank, "family": r.family,
                         "params": _params(r.fit.model), "grid_mean_wgie": r.summary,
                         "converged": r.fit.converged})
        if args.grid_dir:
            out = Path(args.grid_dir)
            out.mkdir(parents=True, exist_ok=True)
            tag = f"a{o.alpha:g}_b{o.beta:g}"
            for r in ranking:
                (out / f"kappa_{r.family}_{tag}.csv").write_text(kappa_grid(r.fit.model, o, grid).to_csv())
                (out / f"eta_{r.family}_{tag}.csv").write_text(eta_grid(r.fit.model, o, grid).to_csv())
            top = ranking[0]
            for r in ranking[1:]:
                g = wgie_difference_grid(top.fit.model, r.fit.model, o, grid)
                (out / f"diff_{top.family}_{r.family}_{tag}.csv").write_text(g.to_csv())
    return rows


def cmd_datasets(args) -> list[dict]:
    names = [args.name] if args.name else sorted(BUILTIN)
    rows = []
    for nm in names:
        if nm not in BUILTIN:
            raise ConfigError(f"unknown dataset {nm!r}; choose from {sorted(BUILTIN)}")
        v = BUILTIN[nm]
        rows.append({"name": nm, "count": v.size, "min": float(v.min()), "max": float(v.max()),
                     "values": " ".join(f"{x:g}" for x in v)})
    return rows


def cmd_airplane(args) -> list[dict]:
    name, data = load_data(args.data or "plane7912", args.column)
    rows = []
    for r in airplane_table(data):
        rows.append({"data": name, "alpha": r.alpha, "beta": r.beta, "t1": r.t1, "t2": r.t2,
                     "published": r.published, "truncated_fit": r.truncated, "theta_truncated": r.theta_truncated,
                     "full_fit": r.full, "theta_full": r.theta_full, "closer": r.closer})
    return rows


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def _model_flags(p):
    p.add_argument("--family", help=f"one of {', '.join(sorted(FAMILIES))}")
    p.add_argument("--params", nargs="*", metavar="K=V", help="model parameters, e.g. theta=2")
    p.add_argument("--model", help="JSON model spec, inline or a file path")


def _order_flags(p):
    p.add_argument("--alpha", type=float, action="append", help="repeatable; paired with --beta")
    p.add_argument("--beta", type=float, action="append")


def _common(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write output here instead of stdout")


def _data_flags(p, families=True):
    p.add_argument("--data", help="FILE, plane7912 or bearings")
    p.add_argument("--column", help="CSV column holding the values")
    if families:
        p.add_argument("--fit-family", dest="family_list", action="append",
                       help=f"families to fit (repeatable or comma separated): {', '.join(sorted(FITTERS))}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wgie", description="Weighted generalized interval entropy toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="WGIE for model/window/order tuples")
    _model_flags(p), _order_flags(p), _common(p)
    p.add_argument("--window", type=parse_window, action="append", help="t1,t2 (repeatable; inf allowed)")
    p.add_argument("--method", choices=("auto", "closed_form", "quadrature"), default="auto")
    p.add_argument("--relatives", action="store_true", help="also print interval Shannon entropies")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("bounds-check", help="evaluate every bound at each window")
    _model_flags(p), _order_flags(p), _common(p)
    p.add_argument("--window", type=parse_window, action="append")
    p.set_defaults(func=cmd_bounds_check)

    p = sub.add_parser("uniqueness", help="roots of the GFR characteristic equations")
    _model_flags(p), _order_flags(p), _common(p)
    p.add_argument("--window", type=parse_window, action="append")
    p.set_defaults(func=cmd_uniqueness)

    p = sub.add_parser("fit", help="maximum-likelihood fits")
    _data_flags(p), _common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("gof", help="fit and Kolmogorov-Smirnov test")
    _data_flags(p), _common(p)
    p.add_argument("--ties", choices=("keep", "unique"), default="keep")
    p.add_argument("--ks-method", choices=("exact", "asymptotic"), default="exact")
    p.set_defaults(func=cmd_gof)

    p = sub.add_parser("simulate", help="Monte-Carlo bias/MSE study")
    _model_flags(p), _order_flags(p), _common(p)
    p.add_argument("--window", type=parse_window, action="append")
    p.add_argument("--n", type=int, action="append", help="sample size (repeatable)")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--protocol", choices=("truncated", "full"), default="truncated")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="rank fitted models by grid-mean WGIE")
    _data_flags(p), _order_flags(p), _common(p)
    p.add_argument("--grid", type=int, default=30, help="points per axis of the (u, v) grid")
    p.add_argument("--grid-dir", help="write kappa, eta and difference surfaces here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("datasets", help="print the bundled datasets")
    p.add_argument("--name")
    _common(p)
    p.set_defaults(func=cmd_datasets)

    p = sub.add_parser("airplane", help="airplane-data estimates under both fitting protocols")
    _data_flags(p, families=False), _common(p)
    p.set_defaults(func=cmd_airplane)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
        text = result if isinstance(result, str) else render(result, args.format)
        emit(text, args.out)
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
