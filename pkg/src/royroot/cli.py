"""Command-line front end.

Subcommands: ``cdf``, ``quantile``, ``table``, ``curve``, ``mc``, ``bench``.
Parameters are accepted either as the beta triple (--s/--m/--n) or as raw
MANOVA dimensions (--p/--mdim/--ndim), never both.  Records go to stdout or
--out as CSV (header row, 10 significant digits) or JSON lines; summaries and
error records are JSON on stderr.  Exit codes: 0 success, 2 invalid
arguments, 3 numerical failure.
"""

import csv
import io
import json
import sys
import time
import warnings
from dataclasses import dataclass

import click
import numpy as np

from .approx import approx_cdf_from_beta, approx_quantile_from_beta
from .errors import DomainError, RoyRootError
from .exact import exact_cdf, exact_quantile
from .montecarlo import McConfig, empirical_cdf
from .params import BetaParams, FieldKind, ManovaDims, beta_to_manova, manova_to_beta

RECORD_COLUMNS = [
    "s", "m", "n", "field", "method", "theta", "alpha", "value",
    "normalization_residual", "elapsed_seconds", "warnings",
]
CURVE_COLUMNS = ["s", "m", "n", "field", "theta", "cdf_exact", "cdf_approx"]
MC_COLUMNS = ["index", "theta"]
BENCH_COLUMNS = [
    "case", "s", "m", "n", "theta", "first_call_seconds", "eval_seconds",
    "target_seconds", "within_target",
]

BENCH_CASES = {
    "s1": (BetaParams(1, 0.0, 0.0), 0.001),
    "s54": (BetaParams(54, -0.5, 22.5), 1.0),
    "s200": (BetaParams(200, -0.5, 149.5), 15.0),
}


@dataclass
class DistributionQuery:
    """Parsed request crossing the CLI/library boundary."""

    params: BetaParams
    method: str
    theta: float | None = None
    alpha: float | None = None


def _fail(code: int, exc: BaseException) -> None:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    click.echo(json.dumps(record), err=True)
    sys.exit(code)


def _resolve_params(s, m, n, p, mdim, ndim, use_complex) -> BetaParams:
    field = FieldKind.COMPLEX if use_complex else FieldKind.REAL
    beta_given = [v is not None for v in (s, m, n)]
    dims_given = [v is not None for v in (p, mdim, ndim)]
    if any(beta_given) and any(dims_given):
        _fail(2, DomainError("supply either --s/--m/--n or --p/--mdim/--ndim, not both"))
    try:
        if all(beta_given):
            return BetaParams(s=s, m=m, n=n, field_kind=field)
        if all(dims_given):
            return manova_to_beta(ManovaDims(p=p, m_dim=mdim, n_dim=ndim), field)
    except DomainError as exc:
        _fail(2, exc)
    _fail(2, DomainError("supply all of --s/--m/--n or all of --p/--mdim/--ndim"))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _emit(records, columns, fmt, out_path) -> None:
    if fmt == "jsonl":
        text = "\n".join(json.dumps({c: r.get(c) for c in columns}) for r in records) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in records:
            writer.writerow([_fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    if out_path is None:
        click.echo(text, nl=False)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _record(params, method, *, theta=None, alpha=None, value=None,
            residual=None, elapsed=None, warn_list=()):
    return {
        "s": params.s,
        "m": params.m,
        "n": params.n,
        "field": params.field_kind.value,
        "method": method,
        "theta": theta,
        "alpha": alpha,
        "value": value,
        "normalization_residual": residual,
        "elapsed_seconds": elapsed,
        "warnings": "; ".join(warn_list) if warn_list else "",
    }


def _evaluate(query: DistributionQuery):
    params, method = query.params, query.method
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t0 = time.perf_counter()
        residual = None
        if query.theta is not None:
            if method == "exact":
                res = exact_cdf(params, query.theta)
                value, residual = res.value, res.diagnostics.normalization_residual
            else:
                value = approx_cdf_from_beta(params.s, params.m, params.n, query.theta)
        else:
            if method == "exact":
                value = exact_quantile(params, query.alpha)
                residual = exact_cdf(params, value).diagnostics.normalization_residual
            else:
                value = approx_quantile_from_beta(params.s, params.m, params.n, query.alpha)
        elapsed = time.perf_counter() - t0
    return _record(params, method, theta=query.theta, alpha=query.alpha, value=value,
                   residual=residual, elapsed=elapsed,
                   warn_list=[str(w.message) for w in caught])


def _eval_cdf(params, theta, method):
    return _evaluate(DistributionQuery(params=params, method=method, theta=theta))


def _eval_quantile(params, alpha, method):
    return _evaluate(DistributionQuery(params=params, method=method, alpha=alpha))


def _methods(method):
    return ["exact", "approx"] if method == "both" else [method]


def _parse_list(text, caster, name):
    try:
        vals = [caster(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError as exc:
        _fail(2, DomainError(f"could not parse --{name} list {text!r}: {exc}"))
    if not vals:
        _fail(2, DomainError(f"--{name} list is empty"))
    return vals


def param_options(fn):
    for dec in reversed([
        click.option("--s", type=int, default=None, help="Number of eigenvalues."),
        click.option("--m", type=float, default=None, help="First beta exponent (> -1)."),
        click.option("--n", type=float, default=None, help="Second beta exponent (> -1)."),
        click.option("--p", type=int, default=None, help="MANOVA variable count."),
        click.option("--mdim", type=int, default=None, help="Columns of X (>= p)."),
        click.option("--ndim", type=int, default=None, help="Columns of Y (>= p)."),
        click.option("--complex", "use_complex", is_flag=True,
                     help="Complex Gaussian ensemble instead of real."),
    ]):
        fn = dec(fn)
    return fn


def output_options(fn):
    for dec in reversed([
        click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]),
                     default="csv", show_default=True, help="Record format."),
        click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True),
                     default=None, help="Output file (default: stdout)."),
    ]):
        fn = dec(fn)
    return fn


@click.group()
@click.version_option(package_name="royroot")
def main():
    """Null distribution of Roy's largest-root statistic.

    Exact CDF and quantiles for real and complex multivariate beta matrices,
    Tracy-Widom based approximations, percentage-point tables, CDF curves,
    and a Monte Carlo validation harness.
    """


@main.command()
@param_options
@click.option("--theta", type=float, required=True, help="Evaluation point in [0, 1].")
@click.option("--method", type=click.Choice(["exact", "approx", "both"]),
              default="exact", show_default=True)
@output_options
def cdf(s, m, n, p, mdim, ndim, use_complex, theta, method, fmt, out_path):
    """Evaluate the CDF at one point."""
    params = _resolve_params(s, m, n, p, mdim, ndim, use_complex)
    try:
        records = [_eval_cdf(params, theta, mth) for mth in _methods(method)]
    except DomainError as exc:
        _fail(2, exc)
    except (RoyRootError, ArithmeticError) as exc:
        _fail(3, exc)
    _emit(records, RECORD_COLUMNS, fmt, out_path)


@main.command()
@param_options
@click.option("--alpha", type=float, required=True, help="Probability level in (0, 1).")
@click.option("--method", type=click.Choice(["exact", "approx", "both"]),
              default="exact", show_default=True)
@output_options
def quantile(s, m, n, p, mdim, ndim, use_complex, alpha, method, fmt, out_path):
    """Percentage point: the theta with CDF(theta) = alpha."""
    params = _resolve_params(s, m, n, p, mdim, ndim, use_complex)
    try:
        records = [_eval_quantile(params, alpha, mth) for mth in _methods(method)]
    except DomainError as exc:
        _fail(2, exc)
    except (RoyRootError, ArithmeticError) as exc:
        _fail(3, exc)
    _emit(records, RECORD_COLUMNS, fmt, out_path)


@main.command()
@click.option("--s", "s_list", required=True, help="Comma-separated s grid.")
@click.option("--m", "m_list", required=True, help="Comma-separated m grid.")
@click.option("--n", "n_list", required=True, help="Comma-separated n grid.")
@click.option("--alpha", "alpha_list", required=True,
              help="Comma-separated probability levels, strictly increasing.")
@click.option("--complex", "use_complex", is_flag=True)
@click.option("--method", type=click.Choice(["exact", "approx", "both"]),
              default="exact", show_default=True)
@output_options
def table(s_list, m_list, n_list, alpha_list, use_complex, method, fmt, out_path):
    """Percentage-point table over a parameter grid."""
    ss = _parse_list(s_list, int, "s")
    ms = _parse_list(m_list, float, "m")
    ns = _parse_list(n_list, float, "n")
    alphas = _parse_list(alpha_list, float, "alpha")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        _fail(2, DomainError("--alpha levels must be strictly increasing"))
    if not all(0.0 < a < 1.0 for a in alphas):
        _fail(2, DomainError("--alpha levels must lie in (0, 1)"))
    field = FieldKind.COMPLEX if use_complex else FieldKind.REAL
    records, failed = [], 0
    for sv in ss:
        for mv in ms:
            for nv in ns:
                try:
                    params = BetaParams(s=sv, m=mv, n=nv, field_kind=field)
                except DomainError as exc:
                    _fail(2, exc)
                for av in alphas:
                    for mth in _methods(method):
                        try:
                            records.append(_eval_quantile(params, av, mth))
                        except (RoyRootError, ArithmeticError) as exc:
                            failed += 1
                            records.append(_record(
                                params, mth, alpha=av,
                                warn_list=[f"{type(exc).__name__}: {exc}"],
                            ))
    _emit(records, RECORD_COLUMNS, fmt, out_path)
    if failed:
        _fail(3, RoyRootError(f"{failed} table cell(s) failed"))


@main.command()
@param_options
@click.option("--grid-size", type=int, default=200, show_default=True,
              help="Number of grid points, endpoints included.")
@click.option("--method", type=click.Choice(["exact", "approx", "both"]),
              default="both", show_default=True)
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Also render the curve(s) to this image file.")
@output_options
def curve(s, m, n, p, mdim, ndim, use_complex, grid_size, method, plot_path, fmt, out_path):
    """CDF curve data on a uniform theta grid (plot-ready)."""
    from .report import curve_points, max_abs_gap, render_curve_figure

    params = _resolve_params(s, m, n, p, mdim, ndim, use_complex)
    if grid_size < 2:
        _fail(2, DomainError("--grid-size must be at least 2"))
    want_exact = method in ("exact", "both")
    want_approx = method in ("approx", "both")
    if want_approx and params.field_kind is FieldKind.COMPLEX:
        _fail(2, DomainError("the approximation covers the real case only"))
    try:
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            theta, exact_col, approx_col = curve_points(
                params, grid_size, exact=want_exact, approx=want_approx)
    except DomainError as exc:
        _fail(2, exc)
    except (RoyRootError, ArithmeticError) as exc:
        _fail(3, exc)
    records = []
    for i, t in enumerate(theta):
        records.append({
            "s": params.s, "m": params.m, "n": params.n,
            "field": params.field_kind.value, "theta": float(t),
            "cdf_exact": float(exact_col[i]) if exact_col is not None else None,
            "cdf_approx": float(approx_col[i]) if approx_col is not None else None,
        })
    _emit(records, CURVE_COLUMNS, fmt, out_path)
    summary = {"s": params.s, "m": params.m, "n": params.n, "grid_size": grid_size}
    if want_exact and want_approx:
        summary["max_abs_gap"] = max_abs_gap(exact_col, approx_col)
    click.echo(json.dumps(summary), err=True)
    if plot_path is not None:
        render_curve_figure(theta, exact_col, approx_col, params, plot_path)


@main.command()
@param_options
@click.option("--replicates", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Render empirical vs exact CDF to this image file.")
@output_options
def mc(s, m, n, p, mdim, ndim, use_complex, replicates, seed, plot_path, fmt, out_path):
    """Monte Carlo sampling run with an exact-CDF comparison summary."""
    from .report import render_mc_figure

    params = _resolve_params(s, m, n, p, mdim, ndim, use_complex)
    try:
        dims = beta_to_manova(params)
        cfg = McConfig(dims=dims, field_kind=params.field_kind,
                       replicates=replicates, seed=seed)
    except DomainError as exc:
        _fail(2, exc)
    try:
        ecdf = empirical_cdf(cfg)
        deciles = [0.1 * k for k in range(1, 10)]
        devs = [abs(float(ecdf.evaluate(exact_quantile(params, d))) - d) for d in deciles]
    except (RoyRootError, ArithmeticError, np.linalg.LinAlgError) as exc:
        _fail(3, exc)
    records = [{"index": i, "theta": float(v)} for i, v in enumerate(ecdf.sorted_samples)]
    _emit(records, MC_COLUMNS, fmt, out_path)
    summary = {
        "p": dims.p, "mdim": dims.m_dim, "ndim": dims.n_dim,
        "field": params.field_kind.value,
        "replicates": replicates, "seed": seed, "resamples": ecdf.resamples,
        "max_decile_deviation": max(devs),
    }
    click.echo(json.dumps(summary), err=True)
    if plot_path is not None:
        render_mc_figure(ecdf.sorted_samples, params, plot_path)


@main.command()
@click.option("--cases", default="s1,s54,s200", show_default=True,
              help="Comma-separated case names from: " + ", ".join(BENCH_CASES))
@click.option("--theta", type=float, default=0.5, show_default=True,
              help="Evaluation point used for timing.")
@output_options
def bench(cases, theta, fmt, out_path):
    """Wall-clock timing of the exact CDF on named cases (report-only)."""
    names = [tok.strip() for tok in cases.split(",") if tok.strip()]
    unknown = [nm for nm in names if nm not in BENCH_CASES]
    if unknown:
        _fail(2, DomainError(f"unknown bench case(s): {', '.join(unknown)}"))
    records = []
    for nm in names:
        params, target = BENCH_CASES[nm]
        t0 = time.perf_counter()
        exact_cdf(params, theta)  # includes one-time evaluation-plan calibration
        first_call = time.perf_counter() - t0
        t1 = time.perf_counter()
        exact_cdf(params, theta)
        eval_seconds = time.perf_counter() - t1
        records.append({
            "case": nm, "s": params.s, "m": params.m, "n": params.n,
            "theta": theta,
            "first_call_seconds": first_call,
            "eval_seconds": eval_seconds,
            "target_seconds": target,
            "within_target": eval_seconds < target,
        })
    _emit(records, BENCH_COLUMNS, fmt, out_path)


if __name__ == "__main__":
    main()
