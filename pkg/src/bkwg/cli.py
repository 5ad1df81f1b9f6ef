"""Command line front end.

Five subcommands: ``fit`` (one model on one dataset), ``compare``
(several nested models ranked by AIC), ``eval`` (pointwise curves for
explicit parameters), ``sample`` (seeded random variates) and
``plotdata`` (CSV bundle for histogram/pdf/cdf/hazard displays, plus
rendered PNG figures unless suppressed).

Exit codes are a stable contract: 0 success, 1 usage error, 2 data
parse error, 3 non-convergence.  Every command is deterministic for
fixed flags, seed, and input bytes.  The default seed comes from the
``BKWG_SEED`` environment variable (0 when unset) and is overridden by
``--seed``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import BKwParams
from .baseline import FAMILIES
from .datasets import DATASET_IDS, dataset_note, load_dataset
from .estimation import Dataset, ModelSpec, fit_mle

__all__ = ["RunConfig", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOCONV = 3

_MODEL_TAGS = ("bkw", "kw", "beta", "baseline_only")
_EVAL_WHAT = ("pdf", "cdf", "sf", "hrf", "rhrf", "chrf", "quantile")


class UsageError(Exception):
    pass


class DataParseError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything one invocation needs, resolved from flags."""

    command: str
    baseline: str = "weibull"
    models: tuple = ("bkw",)
    data: str = ""
    seed: int = 0
    restarts: int = 20
    out_format: str = "table"
    grid_size: int = 200
    level: float = 0.95
    what: str = "pdf"
    points: tuple = ()
    count: int = 0
    shape_params: dict = field(default_factory=dict)
    baseline_params: tuple = ()
    out: str = ""
    outdir: str = "."
    bins: int = 0
    hazard: bool = False
    no_figures: bool = False


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_seed():
    raw = os.environ.get("BKWG_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BKWG_SEED must be an integer, got {raw!r}")


def _build_parser():
    top = _Parser(
        prog="bkwg",
        description=(
            "Fit, evaluate and sample the generated four-shape "
            "distribution family over pluggable baselines."
        ),
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, with_data=True):
        if with_data:
            p.add_argument(
                "--data",
                required=True,
                metavar="PATH|ID",
                help=(
                    "data file (whitespace/comma separated, # comments) or "
                    f"bundled id {'/'.join(DATASET_IDS)}; bundled ids take "
                    "precedence over same-named files"
                ),
            )
        p.add_argument(
            "--baseline",
            default="weibull",
            metavar="FAMILY",
            help=f"baseline family: {', '.join(sorted(FAMILIES))}",
        )
        p.add_argument(
            "--seed",
            type=int,
            default=None,
            help="restart/sampling seed (default: BKWG_SEED env var or 0)",
        )

    def add_fit_flags(p):
        p.add_argument(
            "--restarts", type=int, default=20,
            help="number of optimizer starts (default 20)",
        )
        p.add_argument(
            "--level", type=float, default=0.95,
            help="confidence level for the intervals (default 0.95)",
        )
        p.add_argument(
            "--format", dest="out_format", default="table",
            choices=("table", "csv", "json-lines"),
            help="output format (default table)",
        )

    p_fit = sub.add_parser("fit", help="fit one model to a dataset")
    add_common(p_fit)
    p_fit.add_argument(
        "--model", default="bkw", metavar="TAG",
        help=f"model tag: {', '.join(_MODEL_TAGS)} (default bkw)",
    )
    add_fit_flags(p_fit)

    p_cmp = sub.add_parser(
        "compare", help="fit several models and rank them by AIC"
    )
    add_common(p_cmp)
    p_cmp.add_argument(
        "--models", default="beta,kw,bkw", metavar="TAGS",
        help="comma-separated model tags (default beta,kw,bkw)",
    )
    add_fit_flags(p_cmp)

    p_eval = sub.add_parser(
        "eval", help="evaluate a curve at explicit parameter values"
    )
    add_common(p_eval, with_data=False)
    p_eval.add_argument(
        "--what", default="pdf", choices=_EVAL_WHAT,
        help="which curve to evaluate (default pdf)",
    )
    p_eval.add_argument(
        "--params", default="", metavar="K=V,...",
        help="shape parameters a,b,m,n (unlisted ones default to 1)",
    )
    p_eval.add_argument(
        "--baseline-params", required=True, metavar="V,...",
        help="baseline parameter values, comma separated, family order",
    )
    p_eval.add_argument(
        "--points", required=True, metavar="V,...",
        help="evaluation points (probabilities for --what quantile)",
    )

    p_samp = sub.add_parser("sample", help="draw seeded random variates")
    add_common(p_samp, with_data=False)
    p_samp.add_argument("--count", type=int, required=True)
    p_samp.add_argument(
        "--params", default="", metavar="K=V,...",
        help="shape parameters a,b,m,n (unlisted ones default to 1)",
    )
    p_samp.add_argument(
        "--baseline-params", required=True, metavar="V,...",
    )
    p_samp.add_argument(
        "--out", default="", metavar="FILE",
        help="output file (default stdout), one value per line",
    )

    p_plot = sub.add_parser(
        "plotdata",
        help="emit histogram/pdf/cdf/hazard CSV files and figures",
    )
    add_common(p_plot)
    p_plot.add_argument(
        "--model", default="bkw", metavar="TAG",
        help=f"model tag to fit: {', '.join(_MODEL_TAGS)} (default bkw)",
    )
    p_plot.add_argument("--restarts", type=int, default=20)
    p_plot.add_argument(
        "--params", default="", metavar="K=V,...",
        help="explicit shape parameters; skips fitting when given "
        "together with --baseline-params",
    )
    p_plot.add_argument(
        "--baseline-params", default="", metavar="V,...",
        help="explicit baseline parameters (with --params skips fitting)",
    )
    p_plot.add_argument(
        "--grid-size", type=int, default=200,
        help="number of curve points (default 200)",
    )
    p_plot.add_argument(
        "--bins", type=int, default=0,
        help="histogram bin count (default: Freedman-Diaconis rule)",
    )
    p_plot.add_argument(
        "--hazard", action="store_true",
        help="also emit the fitted hazard curve",
    )
    p_plot.add_argument(
        "--no-figures", action="store_true",
        help="emit only the CSV files, no PNG rendering",
    )
    p_plot.add_argument(
        "--outdir", default=".", metavar="DIR",
        help="directory for the emitted files (default .)",
    )
    return top


_TOKEN = re.compile(r"[^\s,]+")


def _load_data(arg):
    """Resolve a --data argument to a Dataset: bundled id first, then
    file path with line/column-reported parse errors."""
    if arg in DATASET_IDS:
        return load_dataset(arg), dataset_note(arg)
    if not os.path.isfile(arg):
        raise UsageError(
            f"no such data file or bundled dataset id: {arg!r} "
            f"(bundled: {', '.join(DATASET_IDS)})"
        )
    values = []
    with open(arg, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.split("#", 1)[0]
            for tok in _TOKEN.finditer(body):
                try:
                    values.append(float(tok.group()))
                except ValueError:
                    raise DataParseError(
                        f"{arg}: line {lineno}, column {tok.start() + 1}: "
                        f"cannot parse {tok.group()!r} as a number"
                    ) from None
    if not values:
        raise DataParseError(f"{arg}: no data values found")
    try:
        return Dataset(values, label=arg), ""
    except ValueError as exc:
        raise DataParseError(f"{arg}: {exc}") from None


def _parse_shapes(text):
    shapes = {}
    if text.strip():
        for item in text.split(","):
            if "=" not in item:
                raise UsageError(
                    f"--params items must look like a=0.5, got {item!r}"
                )
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in ("a", "b", "m", "n"):
                raise UsageError(
                    f"unknown shape parameter {key!r} (use a, b, m, n)"
                )
            try:
                shapes[key] = float(val)
            except ValueError:
                raise UsageError(
                    f"cannot parse {val!r} as a number for {key}"
                ) from None
    return shapes


def _parse_floats(text, flag):
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            out.append(float(item))
        except ValueError:
            raise UsageError(
                f"{flag}: cannot parse {item!r} as a number"
            ) from None
    if not out:
        raise UsageError(f"{flag} needs at least one value")
    return tuple(out)


def _explicit_params(cfg):
    shapes = dict(a=1.0, b=1.0, m=1.0, n=1.0)
    shapes.update(cfg.shape_params)
    try:
        return BKwParams(
            m=shapes["m"],
            n=shapes["n"],
            a=shapes["a"],
            b=shapes["b"],
            family=cfg.baseline,
            baseline_params=cfg.baseline_params,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _model_spec(cfg, tag):
    if tag not in _MODEL_TAGS:
        raise UsageError(
            f"unknown model tag {tag!r} (use {', '.join(_MODEL_TAGS)})"
        )
    try:
        return ModelSpec(tag, cfg.baseline)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _fmt(x):
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".6g")


def _fit_header_lines(cfg, dataset, note, tag):
    lines = [
        f"dataset: {dataset.label} (n={len(dataset)})",
    ]
    if note:
        lines.append(f"note: {note}")
    lines.append(f"model: {tag} on {cfg.baseline} baseline")
    lines.append(f"seed: {cfg.seed}  restarts: {cfg.restarts}")
    return lines


def _fit_rows(fit):
    rows = []
    for name, est, se, lo, hi in zip(
        fit.free_names, fit.free_estimates, fit.std_errors,
        fit.ci_low, fit.ci_high,
    ):
        rows.append((name, est, se, lo, hi))
    return rows


def _render_fit_table(cfg, dataset, note, tag, fit, out):
    pct = f"{100.0 * fit.level:g}"
    for line in _fit_header_lines(cfg, dataset, note, tag):
        print(line, file=out)
    print("", file=out)
    header = (
        "parameter", "estimate", "std.error",
        f"ci{pct}.low", f"ci{pct}.high",
    )
    rows = [header] + [
        tuple([name] + [_fmt(v) for v in vals])
        for name, *vals in _fit_rows(fit)
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    for r in rows:
        print(
            "  ".join(
                cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                for i, cell in enumerate(r)
            ),
            file=out,
        )
    print("", file=out)
    print(f"loglik: {_fmt(fit.loglik)}", file=out)
    print(f"aic: {_fmt(fit.aic)}", file=out)
    print(
        f"converged: {'yes' if fit.converged else 'no'} "
        f"(max|score| {_fmt(fit.grad_norm_at_opt)})",
        file=out,
    )
    if fit.cov_singular:
        print(
            "standard errors unavailable: information matrix "
            "not invertible",
            file=out,
        )


def _render_fit_csv(cfg, dataset, note, tag, fit, out):
    print("parameter,estimate,std_error,ci_low,ci_high", file=out)
    for name, est, se, lo, hi in _fit_rows(fit):
        print(
            f"{name},{_fmt(est)},{_fmt(se)},{_fmt(lo)},{_fmt(hi)}",
            file=out,
        )
    print(f"loglik,{_fmt(fit.loglik)},,,", file=out)
    print(f"aic,{_fmt(fit.aic)},,,", file=out)
    print(f"converged,{int(fit.converged)},,,", file=out)


def _render_fit_jsonl(cfg, dataset, note, tag, fit, out):
    for name, est, se, lo, hi in _fit_rows(fit):
        print(
            json.dumps(
                {
                    "parameter": name,
                    "estimate": float(est),
                    "std_error": None if math.isnan(se) else float(se),
                    "ci_low": None if math.isnan(lo) else float(lo),
                    "ci_high": None if math.isnan(hi) else float(hi),
                },
                sort_keys=True,
            ),
            file=out,
        )
    print(
        json.dumps(
            {
                "summary": {
                    "dataset": dataset.label,
                    "note": note,
                    "model": tag,
                    "baseline": cfg.baseline,
                    "n": len(dataset),
                    "seed": cfg.seed,
                    "restarts": cfg.restarts,
                    "loglik": float(fit.loglik),
                    "aic": float(fit.aic),
                    "converged": bool(fit.converged),
                    "level": float(fit.level),
                }
            },
            sort_keys=True,
        ),
        file=out,
    )


_RENDERERS = {
    "table": _render_fit_table,
    "csv": _render_fit_csv,
    "json-lines": _render_fit_jsonl,
}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_fit(cfg):
    dataset, note = _load_data(cfg.data)
    tag = cfg.models[0]
    spec = _model_spec(cfg, tag)
    fit = fit_mle(
        spec, dataset,
        restarts=cfg.restarts, seed=cfg.seed, level=cfg.level,
    )
    _RENDERERS[cfg.out_format](cfg, dataset, note, tag, fit, sys.stdout)
    return EXIT_OK if fit.converged else EXIT_NOCONV


def cmd_compare(cfg):
    dataset, note = _load_data(cfg.data)
    results = []
    for tag in cfg.models:
        spec = _model_spec(cfg, tag)
        try:
            fit = fit_mle(
                spec, dataset,
                restarts=cfg.restarts, seed=cfg.seed, level=cfg.level,
            )
            results.append((tag, fit, None))
        except (ValueError, RuntimeError) as exc:
            results.append((tag, None, str(exc)))

    def sort_key(item):
        _, fit, err = item
        if fit is None or not math.isfinite(fit.aic):
            return (1, 0.0)
        return (0, fit.aic)

    ranked = sorted(results, key=sort_key)
    best_tag = next(
        (tag for tag, fit, _ in ranked if fit is not None), None
    )
    print("models ranked by AIC (lowest first, * = preferred)")
    for tag, fit, err in ranked:
        marker = " *" if tag == best_tag else ""
        if fit is None:
            print(f"== {tag}: fit failed: {err}")
            continue
        print(
            f"== {tag}{marker}  aic={_fmt(fit.aic)}  "
            f"loglik={_fmt(fit.loglik)}"
        )
        _RENDERERS[cfg.out_format](cfg, dataset, note, tag, fit, sys.stdout)
    any_bad = any(fit is None or not fit.converged for _, fit, _ in results)
    return EXIT_NOCONV if any_bad else EXIT_OK


def cmd_eval(cfg):
    p = _explicit_params(cfg)
    fns = {
        "pdf": core.pdf,
        "cdf": core.cdf,
        "sf": core.sf,
        "hrf": core.hrf,
        "rhrf": core.rhrf,
        "chrf": core.chrf,
        "quantile": core.quantile,
    }
    fn = fns[cfg.what]
    if cfg.what == "quantile":
        for u in cfg.points:
            if not 0.0 <= u <= 1.0:
                raise UsageError(
                    f"quantile points must be probabilities in [0, 1], "
                    f"got {u}"
                )
    print("point,value")
    for x in cfg.points:
        print(f"{_fmt(x)},{format(fn(p, x), '.12g')}")
    return EXIT_OK


def cmd_sample(cfg):
    if cfg.count < 0:
        raise UsageError("--count must be >= 0")
    p = _explicit_params(cfg)
    draws = (
        np.empty(0)
        if cfg.count == 0
        else core.sample(p, cfg.count, seed=cfg.seed)
    )
    text = "".join(format(v, ".17g") + "\n" for v in draws)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _write_csv(path, header, columns):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(format(v, ".12g") for v in row) + "\n")


def cmd_plotdata(cfg):
    dataset, note = _load_data(cfg.data)
    vals = np.sort(dataset.values)
    exit_code = EXIT_OK
    if cfg.shape_params or cfg.baseline_params:
        if not (cfg.shape_params and cfg.baseline_params):
            raise UsageError(
                "explicit parameters need both --params and "
                "--baseline-params"
            )
        p = _explicit_params(cfg)
        fit_line = "parameters: explicit"
    else:
        tag = cfg.models[0]
        spec = _model_spec(cfg, tag)
        fit = fit_mle(spec, dataset, restarts=cfg.restarts, seed=cfg.seed)
        p = fit.estimates
        fit_line = (
            f"parameters: fitted {tag} (loglik {_fmt(fit.loglik)}, "
            f"aic {_fmt(fit.aic)}, converged "
            f"{'yes' if fit.converged else 'no'})"
        )
        if not fit.converged:
            exit_code = EXIT_NOCONV

    os.makedirs(cfg.outdir, exist_ok=True)
    wrote = []

    bins = cfg.bins if cfg.bins > 0 else "fd"
    dens, edges = np.histogram(vals, bins=bins, density=True)
    path = os.path.join(cfg.outdir, "histogram.csv")
    _write_csv(
        path,
        ("bin_left", "bin_right", "density"),
        (edges[:-1], edges[1:], dens),
    )
    wrote.append(path)

    low = p.family.support_low(p.baseline_params.values)
    hi = float(vals[-1]) * 1.02
    grid = np.linspace(low, hi, cfg.grid_size + 1)[1:]
    pdfv = np.array([core.pdf(p, t) for t in grid])
    path = os.path.join(cfg.outdir, "pdf_curve.csv")
    _write_csv(path, ("t", "pdf"), (grid, pdfv))
    wrote.append(path)

    ecdf = np.arange(1, vals.size + 1) / vals.size
    path = os.path.join(cfg.outdir, "ecdf.csv")
    _write_csv(path, ("t", "ecdf"), (vals, ecdf))
    wrote.append(path)

    cdfv = np.array([core.cdf(p, t) for t in grid])
    path = os.path.join(cfg.outdir, "cdf_curve.csv")
    _write_csv(path, ("t", "cdf"), (grid, cdfv))
    wrote.append(path)

    hazv = None
    if cfg.hazard:
        hazv = np.array([core.hrf(p, t) for t in grid])
        path = os.path.join(cfg.outdir, "hazard_curve.csv")
        _write_csv(path, ("t", "hazard"), (grid, hazv))
        wrote.append(path)

    if not cfg.no_figures:
        wrote.extend(
            _render_figures(
                cfg.outdir, vals, edges, dens, grid, pdfv, ecdf, cdfv, hazv
            )
        )

    print(f"dataset: {dataset.label} (n={vals.size})")
    if note:
        print(f"note: {note}")
    print(fit_line)
    print("histogram: density-scaled (bins integrate to 1)")
    for path in wrote:
        print(f"wrote {path}")
    return exit_code


def _render_figures(outdir, vals, edges, dens, grid, pdfv, ecdf, cdfv, hazv):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    meta = {"metadata": {"Date": None}}  # keep PNG bytes reproducible
    written = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(
        edges[:-1], dens, width=np.diff(edges), align="edge",
        color="0.85", edgecolor="0.4", label="data",
    )
    finite = np.isfinite(pdfv)
    ax.plot(grid[finite], pdfv[finite], "k-", lw=1.5, label="fitted pdf")
    ax.set_xlabel("t")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    path = os.path.join(outdir, "figure_pdf.png")
    fig.savefig(path, **meta)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.step(vals, ecdf, where="post", color="0.5", label="empirical cdf")
    ax.plot(grid, cdfv, "k-", lw=1.5, label="fitted cdf")
    ax.set_xlabel("t")
    ax.set_ylabel("cdf")
    ax.legend()
    fig.tight_layout()
    path = os.path.join(outdir, "figure_cdf.png")
    fig.savefig(path, **meta)
    plt.close(fig)
    written.append(path)

    if hazv is not None:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        finite = np.isfinite(hazv)
        ax.plot(grid[finite], hazv[finite], "k-", lw=1.5)
        ax.set_xlabel("t")
        ax.set_ylabel("hazard rate")
        fig.tight_layout()
        path = os.path.join(outdir, "figure_hazard.png")
        fig.savefig(path, **meta)
        plt.close(fig)
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _config_from_namespace(ns):
    seed = ns.seed if getattr(ns, "seed", None) is not None else _env_seed()
    cfg = RunConfig(command=ns.command, seed=seed)
    cfg.baseline = getattr(ns, "baseline", cfg.baseline)
    cfg.data = getattr(ns, "data", "")
    cfg.restarts = getattr(ns, "restarts", cfg.restarts)
    cfg.out_format = getattr(ns, "out_format", cfg.out_format)
    cfg.level = getattr(ns, "level", cfg.level)
    cfg.grid_size = getattr(ns, "grid_size", cfg.grid_size)
    if cfg.restarts < 1 and ns.command in ("fit", "compare", "plotdata"):
        raise UsageError("--restarts must be >= 1")
    if not 0.0 < cfg.level < 1.0:
        raise UsageError("--level must be strictly between 0 and 1")
    if cfg.grid_size < 2:
        raise UsageError("--grid-size must be >= 2")

    if ns.command == "fit":
        cfg.models = (ns.model,)
    elif ns.command == "compare":
        cfg.models = tuple(
            tag.strip() for tag in ns.models.split(",") if tag.strip()
        )
        if not cfg.models:
            raise UsageError("--models needs at least one tag")
    elif ns.command == "eval":
        cfg.what = ns.what
        cfg.shape_params = _parse_shapes(ns.params)
        cfg.baseline_params = _parse_floats(
            ns.baseline_params, "--baseline-params"
        )
        cfg.points = _parse_floats(ns.points, "--points")
    elif ns.command == "sample":
        cfg.count = ns.count
        cfg.shape_params = _parse_shapes(ns.params)
        cfg.baseline_params = _parse_floats(
            ns.baseline_params, "--baseline-params"
        )
        cfg.out = ns.out
    elif ns.command == "plotdata":
        cfg.models = (ns.model,)
        cfg.shape_params = _parse_shapes(ns.params)
        if ns.baseline_params.strip():
            cfg.baseline_params = _parse_floats(
                ns.baseline_params, "--baseline-params"
            )
        cfg.bins = ns.bins
        cfg.hazard = ns.hazard
        cfg.no_figures = ns.no_figures
        cfg.outdir = ns.outdir
    return cfg


_COMMANDS = {
    "fit": cmd_fit,
    "compare": cmd_compare,
    "eval": cmd_eval,
    "sample": cmd_sample,
    "plotdata": cmd_plotdata,
}


def main(argv=None):
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = _config_from_namespace(ns)
        return _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataParseError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
