"""Exact null distribution of the largest multivariate-beta eigenvalue.

The CDF of the largest eigenvalue is a normalizing constant times the
Pfaffian (real case) or determinant (complex case) of a matrix whose entries
are incomplete beta functions and iterated integrals of them:

    real:     F(t) = C(s, m, n) * sqrt(det A(t)),   A skew-symmetric,
              a_ij = E(t; m+j, m+i) - E(t; m+i, m+j),
              E(x; a, b) = int_0^x u^(a-1) (1-u)^n B(u; b, n+1) du,
    complex:  F(t) = C'(s, m, n) * det A(t),
              a_ij = B(t; m+i+j-1, n+1).

E is never integrated numerically: it satisfies a two-term ladder -- a
beta-squared base at equal arguments, a first-argument ascent that costs one
incomplete beta per step, and a reflection identity for swapped arguments --
so a full matrix assembly needs O(s) incomplete-beta evaluations.

Everything is carried in log scale: the normalizing constant is a sum of
log-gammas, the matrix is symmetrically rescaled by d_i = 1/B(m+i, n+1)
(recorded in ``scale_log``), and the determinant contributes through a
pivoted factorization's log.  When double precision cannot reproduce
F(1) = 1 (the recursion subtracts nearby quantities, and the determinant of
the scaled matrix sits far below its entry scale for large s), evaluation
escalates to the arbitrary-precision kernel in :mod:`royroot.mparith` with a
digit budget calibrated against that same self-check.
"""

import math
import time
import warnings
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpfr
from scipy import special as sc
from scipy.optimize import brentq

from . import mparith
from .errors import (
    ConvergenceError,
    DomainError,
    PfaffianSignError,
    PrecisionError,
)
from .params import BetaParams, FieldKind
from .special import DEFAULT_ACCURACY, AccuracySpec, inc_beta_lower

__all__ = [
    "Diagnostics",
    "DistributionResult",
    "SkewPfaffianMatrix",
    "log_norm_constant",
    "script_e",
    "build_pfaffian_matrix",
    "log_pfaffian",
    "exact_cdf",
    "exact_quantile",
]

# Self-check tolerances: |F(1) - 1| must stay below these for a path to be
# trusted (fast) or accepted (escalated).
FAST_RESIDUAL_TOL = 1e-8
MP_RESIDUAL_TOL = 1e-10

_MAX_DPS = 4000
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class Diagnostics:
    """Self-check and effort record attached to every distribution value.

    ``normalization_residual`` is |F(1) - 1| from the evaluation path that
    produced the value; ``iterations`` counts evaluation passes at the
    requested point (a second pass means the fast path tripped its
    cancellation alarm and the call was re-run at escalated precision).
    """

    normalization_residual: float
    iterations: int
    elapsed_seconds: float


@dataclass(frozen=True)
class DistributionResult:
    value: float
    log_value: float
    diagnostics: Diagnostics

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise DomainError(f"probability out of [0, 1]: {self.value!r}")


@dataclass(frozen=True)
class SkewPfaffianMatrix:
    """Even-order skew-symmetric matrix with its diagonal-scaling record.

    ``entries`` holds the rescaled matrix D A D (strictly upper triangle
    authoritative, lower filled by negation); ``scale_log`` is chosen so that
    log Pf(A) = log Pf(entries) + scale_log.
    """

    order: int
    entries: np.ndarray
    scale_log: float = 0.0

    def __post_init__(self):
        e = self.entries
        if e.shape != (self.order, self.order):
            raise DomainError(f"entries shape {e.shape} does not match order {self.order}")
        if self.order % 2 != 0:
            raise DomainError("Pfaffian matrices must have even order")
        if np.any(np.diagonal(e) != 0.0) or not np.array_equal(e.T, -e):
            raise DomainError("entries are not skew-symmetric")

    @classmethod
    def from_entries(cls, entries, scale_log: float = 0.0) -> "SkewPfaffianMatrix":
        e = np.asarray(entries, dtype=float)
        return cls(order=e.shape[0], entries=e, scale_log=scale_log)


# ---------------------------------------------------------------------------
# normalizing constants
# ---------------------------------------------------------------------------

def log_norm_constant(params: BetaParams) -> float:
    """log of the joint-density normalizing constant, via log-gamma sums."""
    s, m, n = params.s, params.m, params.n
    i = np.arange(1, s + 1, dtype=float)
    if params.field_kind is FieldKind.REAL:
        terms = (
            sc.gammaln((i + 2.0 * m + 2.0 * n + s + 2.0) / 2.0)
            - sc.gammaln(i / 2.0)
            - sc.gammaln((i + 2.0 * m + 1.0) / 2.0)
            - sc.gammaln((i + 2.0 * n + 1.0) / 2.0)
        )
        return float((s / 2.0) * np.log(np.pi) + np.sum(terms))
    terms = (
        sc.gammaln(m + n + s + i)
        - sc.gammaln(i)
        - sc.gammaln(i + m)
        - sc.gammaln(i + n)
    )
    return float(np.sum(terms))


def _log_norm_constant_mp(params):
    """Same constant on mpfr values, at the active precision."""
    s = params.s
    m, n = mpfr(params.m), mpfr(params.n)
    acc = mpfr(0)
    if params.field_kind is FieldKind.REAL:
        for i in range(1, s + 1):
            acc += (
                gmpy2.lgamma((i + 2 * m + 2 * n + s + 2) / 2)[0]
                - gmpy2.lgamma(mpfr(i) / 2)[0]
                - gmpy2.lgamma((i + 2 * m + 1) / 2)[0]
                - gmpy2.lgamma((i + 2 * n + 1) / 2)[0]
            )
        return acc + mpfr(s) / 2 * gmpy2.log(gmpy2.const_pi())
    for i in range(1, s + 1):
        acc += (
            gmpy2.lgamma(m + n + s + i)[0]
            - gmpy2.lgamma(mpfr(i))[0]
            - gmpy2.lgamma(i + m)[0]
            - gmpy2.lgamma(i + n)[0]
        )
    return acc


# ---------------------------------------------------------------------------
# the iterated integral E and its ladder
# ---------------------------------------------------------------------------

def script_e(x: float, a: float, b: float, n: float) -> float:
    """E(x; a, b) = int_0^x t^(a-1) (1-t)^n B(t; b, n+1) dt, by recursion.

    Evaluated without quadrature: from the equal-argument base
    E(x; a, a) = B(x; a, n+1)^2 / 2 the second argument is raised one unit at
    a time, and swapped arguments use the reflection
    E(x; b, a) = B(x; a, n+1) B(x; b, n+1) - E(x; a, b).  The ladder only
    reaches integer separations b - a.
    """
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"script_e requires a, b > 0, got a={a!r}, b={b!r}")
    if not n > -1.0:
        raise DomainError(f"script_e requires n > -1, got {n!r}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"script_e requires x in [0, 1], got {x!r}")
    sep = b - a
    k = round(sep)
    if abs(sep - k) > 1e-9:
        raise DomainError(
            f"recursion reaches only integer separations b - a, got {sep!r}"
        )

    def ascend(lo: float, steps: int) -> float:
        val = inc_beta_lower(x, lo, n + 1.0) ** 2 / 2.0
        cur = lo
        for _ in range(steps):
            val = (cur * val - inc_beta_lower(x, lo + cur, 2.0 * n + 2.0)) / (cur + n + 1.0)
            cur += 1.0
        return val

    if k >= 0:
        return ascend(a, k)
    swapped = ascend(b, -k)
    return inc_beta_lower(x, a, n + 1.0) * inc_beta_lower(x, b, n + 1.0) - swapped


# ---------------------------------------------------------------------------
# matrix assembly, double precision (real case)
# ---------------------------------------------------------------------------

def build_pfaffian_matrix(params: BetaParams, theta: float) -> SkewPfaffianMatrix:
    """Assemble the rescaled skew-symmetric CDF matrix at the given point.

    Row i is generated by the single recursion of the evaluation algorithm:
    one beta-squared base per row, then the one-unit second-argument ascent
    across columns, with the reflection folded into the entry formula.  The
    stored matrix is D A D with d_i = 1/B(m+i, n+1) (border index unscaled),
    which keeps entries O(1); the log of the removed factor is recorded in
    ``scale_log``.
    """
    if params.field_kind is not FieldKind.REAL:
        raise DomainError("the Pfaffian form applies to the real case only")
    if not (0.0 <= theta <= 1.0):
        raise DomainError(f"theta must lie in [0, 1], got {theta!r}")
    s, m, n = params.s, params.m, params.n
    order = s if s % 2 == 0 else s + 1
    idx = np.arange(1, s + 1, dtype=float)
    lb1 = sc.betaln(m + idx, n + 1.0)
    i1 = sc.betainc(m + idx, n + 1.0, theta)
    if s > 1:
        ks = np.arange(2, 2 * s, dtype=float)  # k = i + j
        lb2 = sc.betaln(2.0 * m + ks, 2.0 * n + 2.0)
        i2 = sc.betainc(2.0 * m + ks, 2.0 * n + 2.0, theta)
        bad = np.isnan(i1).any() or np.isnan(i2).any()
    else:
        bad = np.isnan(i1).any()
    if bad:
        raise ConvergenceError(
            f"incomplete beta failed to converge assembling s={s}, m={m}, n={n}"
        )
    a = np.zeros((order, order))
    for i in range(1, s + 1):
        if i == s:
            break
        js = np.arange(i, s, dtype=float)  # produces columns j+1 = i+1 .. s
        kpos = (i + js).astype(int) - 2
        log_r = lb2[kpos] - lb1[i - 1] - lb1[i:s] - np.log(m + js + n + 1.0)
        ladder = i1[i - 1] ** 2 / 2.0 - np.cumsum(i2[kpos] * np.exp(log_r))
        a[i - 1, i:s] = i1[i - 1] * i1[i:s] - 2.0 * ladder
    if s % 2 == 1:
        a[:s, s] = i1
    a = a - a.T
    return SkewPfaffianMatrix(order=order, entries=a, scale_log=float(np.sum(lb1)))


def log_pfaffian(matrix: SkewPfaffianMatrix) -> tuple[int, float]:
    """(sign, log|Pf|) of the original (unscaled) matrix, via sqrt(det).

    The determinant comes from a pivoted factorization of the stored
    entries; ``scale_log`` is added back.  For the matrices arising from a
    CDF the Pfaffian is nonnegative, so a negative determinant is reported
    as a cancellation alarm rather than a value; a determinant of exactly
    zero (or one that underflows) yields sign 0.
    """
    sign, logdet = np.linalg.slogdet(matrix.entries)
    if sign == 0 or logdet == -np.inf:
        return 0, -np.inf
    if sign < 0:
        raise PfaffianSignError(
            "negative determinant for a skew-symmetric matrix: "
            "double precision lost the cancellation"
        )
    return 1, 0.5 * float(logdet) + matrix.scale_log


def _log_cdf_fast_real(params, theta):
    """log F(theta) through the double-precision Pfaffian path."""
    sign, log_pf = log_pfaffian(build_pfaffian_matrix(params, theta))
    if sign == 0:
        return -np.inf
    return log_norm_constant(params) + log_pf


def _log_cdf_fast_complex(params, theta):
    """log F(theta) for the complex case: plain determinant of beta entries."""
    s, m, n = params.s, params.m, params.n
    i = np.arange(1, s + 1)
    aa = m + np.add.outer(i, i) - 1.0
    lb = sc.betaln(aa, n + 1.0)
    ii = sc.betainc(aa, n + 1.0, theta)
    if np.isnan(ii).any():
        raise ConvergenceError(
            f"incomplete beta failed to converge assembling s={s}, m={m}, n={n}"
        )
    c = 0.5 * sc.betaln(m + 2.0 * i - 1.0, n + 1.0)
    scaled = ii * np.exp(lb - c[:, None] - c[None, :])
    sign, logdet = np.linalg.slogdet(scaled)
    if sign == 0 or logdet == -np.inf:
        return -np.inf
    if sign < 0:
        raise PfaffianSignError(
            "negative determinant for a positive-definite beta-moment matrix: "
            "double precision lost the cancellation"
        )
    return log_norm_constant(params) + float(logdet) + 2.0 * float(np.sum(c))


# ---------------------------------------------------------------------------
# escalated-precision assembly
# ---------------------------------------------------------------------------

def _log_cdf_mp_real(params, theta, digits):
    s = params.s
    with mparith.precision_context(digits):
        m, n = mpfr(params.m), mpfr(params.n)
        th = mpfr(theta)
        order = s if s % 2 == 0 else s + 1
        lb1 = [mparith.lbeta(m + i, n + 1) for i in range(1, s + 1)]
        i1 = [mparith.betainc_reg(m + i, n + 1, th) for i in range(1, s + 1)]
        lb2 = {k: mparith.lbeta(2 * m + k, 2 * n + 2) for k in range(2, 2 * s)}
        i2 = {k: mparith.betainc_reg(2 * m + k, 2 * n + 2, th) for k in range(2, 2 * s)}
        rows = [[mpfr(0)] * order for _ in range(order)]
        for i in range(1, s + 1):
            ladder = i1[i - 1] ** 2 / 2
            for j in range(i, s):
                k = i + j
                r = i2[k] * gmpy2.exp(lb2[k] - lb1[i - 1] - lb1[j] - gmpy2.log(m + j + n + 1))
                ladder -= r
                val = i1[i - 1] * i1[j] - 2 * ladder
                rows[i - 1][j] = val
                rows[j][i - 1] = -val
        if s % 2 == 1:
            for i in range(s):
                rows[i][s] = i1[i]
                rows[s][i] = -i1[i]
        sign, logdet = mparith.lu_slogdet(rows)
        if sign == 0:
            return mpfr("-inf")
        if sign < 0:
            raise PrecisionError("negative determinant at escalated precision")
        scale_log = sum(lb1, mpfr(0))
        return _log_norm_constant_mp(params) + logdet / 2 + scale_log


def _log_cdf_mp_complex(params, theta, digits):
    s = params.s
    with mparith.precision_context(digits):
        m, n = mpfr(params.m), mpfr(params.n)
        th = mpfr(theta)
        lb = {k: mparith.lbeta(m + k, n + 1) for k in range(1, 2 * s)}
        ii = {k: mparith.betainc_reg(m + k, n + 1, th) for k in range(1, 2 * s)}
        c = [lb[2 * i - 1] / 2 for i in range(1, s + 1)]
        rows = [
            [ii[i + j - 1] * gmpy2.exp(lb[i + j - 1] - c[i - 1] - c[j - 1])
             for j in range(1, s + 1)]
            for i in range(1, s + 1)
        ]
        sign, logdet = mparith.lu_slogdet(rows)
        if sign == 0:
            return mpfr("-inf")
        if sign < 0:
            raise PrecisionError("negative determinant at escalated precision")
        return _log_norm_constant_mp(params) + logdet + 2 * sum(c, mpfr(0))


def _log_cdf_mp(params, theta, digits):
    if params.field_kind is FieldKind.REAL:
        return _log_cdf_mp_real(params, theta, digits)
    return _log_cdf_mp_complex(params, theta, digits)


def _initial_digits(params) -> int:
    """Digit budget estimate from the depth of the F(1) = 1 cancellation.

    The scaled matrix at the right endpoint has determinant exp(-2L) with
    O(1) entries, L being the log normalizing constant plus the scaling log.
    With a geometrically graded spectrum the factorization must resolve
    roughly twice the per-pivot deficit, 2 * (2L / ln 10) / order digits;
    the 1.55 slack and the additive guard are calibrated empirically.
    """
    s, m, n = params.s, params.m, params.n
    i = np.arange(1, s + 1, dtype=float)
    if params.field_kind is FieldKind.REAL:
        order = s + (s % 2)
        bulk = log_norm_constant(params) + float(np.sum(sc.betaln(m + i, n + 1.0)))
        est = 4.0 * bulk / (order * _LN10)
    else:
        bulk = log_norm_constant(params) + float(np.sum(sc.betaln(m + 2.0 * i - 1.0, n + 1.0)))
        est = 2.0 * bulk / (s * _LN10)
    return max(30, int(math.ceil(1.55 * max(est, 0.0))) + 25)


# ---------------------------------------------------------------------------
# evaluation plans: fast path when the self-check allows, escalate otherwise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _EvalPlan:
    digits: int | None  # None = double-precision fast path
    residual: float
    attempts: int


def _residual_fast(params) -> float:
    fast = _log_cdf_fast_real if params.field_kind is FieldKind.REAL else _log_cdf_fast_complex
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            log_f1 = fast(params, 1.0)
            res = abs(math.exp(log_f1) - 1.0) if log_f1 < 700.0 else math.inf
    except (PfaffianSignError, OverflowError):
        res = math.inf
    return res if math.isfinite(res) else math.inf


@lru_cache(maxsize=512)
def _resolve_mp_plan(params: BetaParams) -> _EvalPlan:
    digits = _initial_digits(params)
    attempts = 0
    residual = math.inf
    while digits <= _MAX_DPS:
        attempts += 1
        try:
            with mparith.precision_context(digits):
                log_f1 = _log_cdf_mp(params, 1.0, digits)
                residual = abs(float(gmpy2.exp(log_f1) - 1))
        except PrecisionError:
            residual = math.inf
        if residual <= MP_RESIDUAL_TOL:
            return _EvalPlan(digits=digits, residual=residual, attempts=attempts)
        digits = int(digits * 1.6) + 10
    raise PrecisionError(
        f"normalization self-check failed for {params} even at {_MAX_DPS} digits",
        residual=residual,
    )


@lru_cache(maxsize=512)
def _resolve_plan(params: BetaParams) -> _EvalPlan:
    residual = _residual_fast(params)
    if residual <= FAST_RESIDUAL_TOL:
        return _EvalPlan(digits=None, residual=residual, attempts=1)
    mp_plan = _resolve_mp_plan(params)
    return _EvalPlan(
        digits=mp_plan.digits,
        residual=mp_plan.residual,
        attempts=mp_plan.attempts + 1,
    )


# ---------------------------------------------------------------------------
# public CDF / quantile
# ---------------------------------------------------------------------------

def exact_cdf(params: BetaParams, theta: float) -> DistributionResult:
    """CDF of the largest eigenvalue at ``theta``, with self-check diagnostics.

    Points at or beyond the support boundaries clamp to 0 and 1 before any
    matrix work.  The normalization residual |F(1) - 1| of the evaluation
    path that served this query is always reported.
    """
    start = time.perf_counter()
    plan = _resolve_plan(params)
    passes = 0
    if theta <= 0.0:
        value, log_value = 0.0, -math.inf
    elif theta >= 1.0:
        value, log_value = 1.0, 0.0
    else:
        fast = _log_cdf_fast_real if params.field_kind is FieldKind.REAL else _log_cdf_fast_complex
        log_f = None
        if plan.digits is None:
            passes += 1
            try:
                log_f = fast(params, theta)
            except PfaffianSignError:
                log_f = None  # cancellation at this point only; escalate below
        if log_f is None:
            mp_plan = plan if plan.digits is not None else _resolve_mp_plan(params)
            # deep-tail points cancel harder than the theta = 1 calibration
            # point, so the digit budget may need further per-call growth
            digits = mp_plan.digits
            while True:
                passes += 1
                try:
                    log_f = float(_log_cdf_mp(params, theta, digits))
                    break
                except PrecisionError:
                    digits = int(digits * 1.6) + 10
                    if digits > _MAX_DPS:
                        raise
            plan = mp_plan
        log_value = min(log_f, 0.0)
        value = min(1.0, max(0.0, math.exp(log_value)))
    elapsed = time.perf_counter() - start
    return DistributionResult(
        value=value,
        log_value=log_value,
        diagnostics=Diagnostics(
            normalization_residual=plan.residual,
            iterations=max(passes, 1),
            elapsed_seconds=elapsed,
        ),
    )


def _quantile_bracket(params, prob, cdf):
    """Initial bracket for the quantile search.

    For real parameters the Tracy-Widom approximation supplies a seed that is
    widened in logit space until it straddles the target; anything that goes
    wrong falls back to the full interval, which the clamped CDF handles.
    """
    if params.field_kind is not FieldKind.REAL:
        return 0.0, 1.0
    try:
        from .approx import approx_quantile_from_beta, tw_params_from_beta

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            seed = approx_quantile_from_beta(params.s, params.m, params.n, prob)
            sigma = tw_params_from_beta(params.s, params.m, params.n).sigma
    except Exception:
        return 0.0, 1.0
    if not (0.0 < seed < 1.0):
        return 0.0, 1.0
    lo = hi = seed
    flo = fhi = cdf(seed) - prob
    step = 2.0 * sigma
    while flo > 0.0:
        hi, fhi = lo, flo
        lo = float(sc.expit(sc.logit(lo) - step))
        step *= 2.0
        if not 0.0 < lo < hi:
            lo, flo = 0.0, -prob
            break
        flo = cdf(lo) - prob
    step = 2.0 * sigma
    while fhi < 0.0:
        lo, flo = hi, fhi
        hi = float(sc.expit(sc.logit(hi) + step))
        step *= 2.0
        if not lo < hi < 1.0:
            hi, fhi = 1.0, 1.0 - prob
            break
        fhi = cdf(hi) - prob
    if not lo < hi:
        return 0.0, 1.0
    return lo, hi


def exact_quantile(params: BetaParams, prob: float,
                   accuracy: AccuracySpec = DEFAULT_ACCURACY) -> float:
    """The theta with exact_cdf(params, theta) = prob, to 1e-9 in probability.

    Bracketed monotone root-finding (Brent); the CDF's own monotonicity
    guarantees convergence on any sign-changing bracket.
    """
    if not (0.0 < prob < 1.0):
        raise DomainError(f"prob must lie in (0, 1), got {prob!r}")

    def f(th):
        return exact_cdf(params, th).value - prob

    lo, hi = _quantile_bracket(params, prob, lambda th: exact_cdf(params, th).value)
    try:
        theta = brentq(
            f, lo, hi,
            xtol=1e-15,
            rtol=4.0 * np.finfo(float).eps,
            maxiter=accuracy.max_iter,
        )
    except RuntimeError as exc:
        raise ConvergenceError(
            f"quantile root-finding exhausted {accuracy.max_iter} iterations"
        ) from exc
    if abs(f(theta)) > 1e-9:
        raise ConvergenceError(
            f"quantile root-finding stalled at prob={prob} for {params}"
        )
    return float(theta)
