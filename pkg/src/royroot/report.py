"""Curve emission and figure rendering for the reporting commands.

The CLI's report path writes delimited data first and, on request, renders a
matplotlib figure next to it.  The grid/gap helpers live here so the test
suite measures exactly what the CLI emits.
"""

import numpy as np

from .exact import exact_cdf
from .params import BetaParams

__all__ = [
    "curve_points",
    "max_abs_gap",
    "render_curve_figure",
    "render_mc_figure",
]


def curve_points(params: BetaParams, grid_size: int = 200,
                 exact: bool = True, approx: bool = True):
    """CDF values on an inclusive uniform grid over [0, 1].

    Returns ``(theta, exact_col, approx_col)``; a column is ``None`` when not
    requested.  The approximate column takes its limit values 0 and 1 at the
    endpoints, where the logit transform is undefined.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    theta = np.linspace(0.0, 1.0, grid_size)
    exact_col = approx_col = None
    if exact:
        exact_col = np.array([exact_cdf(params, t).value for t in theta])
    if approx:
        from .approx import approx_cdf_from_beta

        vals = np.empty(grid_size)
        vals[0], vals[-1] = 0.0, 1.0
        for i in range(1, grid_size - 1):
            vals[i] = approx_cdf_from_beta(params.s, params.m, params.n, theta[i])
        approx_col = vals
    return theta, exact_col, approx_col


def max_abs_gap(exact_col, approx_col) -> float:
    """Largest pointwise distance between the two CDF columns."""
    return float(np.max(np.abs(np.asarray(exact_col) - np.asarray(approx_col))))


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_curve_figure(theta, exact_col, approx_col, params: BetaParams, path):
    """Plot the emitted CDF curve(s) to an image file."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    label = f"s={params.s}, m={params.m:g}, n={params.n:g}"
    if exact_col is not None:
        ax.plot(theta, exact_col, "-", lw=1.5, label=f"exact ({label})")
    if approx_col is not None:
        ax.plot(theta, approx_col, ":", lw=1.8, label=f"approx ({label})")
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("CDF")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="lower right", fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mc_figure(sorted_samples, params: BetaParams, path, exact_grid=60):
    """Plot the empirical CDF of the samples against the exact curve."""
    plt = _pyplot()
    samples = np.asarray(sorted_samples)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ecdf_y = np.arange(1, samples.size + 1) / samples.size
    ax.step(samples, ecdf_y, where="post", lw=1.0, label=f"empirical ({samples.size} reps)")
    lo = max(0.0, float(samples[0]) * 0.9)
    hi = min(1.0, float(samples[-1]) * 1.1)
    grid = np.linspace(lo, hi, exact_grid)
    ax.plot(grid, [exact_cdf(params, t).value for t in grid], "--", lw=1.5, label="exact")
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("CDF")
    ax.legend(loc="lower right", fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
