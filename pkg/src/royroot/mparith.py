"""Arbitrary-precision arithmetic kernel backing the escalated evaluation path.

Double precision cannot resolve the cancellation inside the CDF recursion and
the subsequent determinant once the eigenvalue count grows; this module
supplies the same primitives on gmpy2 ``mpfr`` values at a caller-chosen
number of decimal digits: log-beta through lgamma, the regularized lower
incomplete beta via the standard continued fraction (modified Lentz, with the
x <-> 1-x switch), and a partially pivoted LU log-determinant.

gmpy2 contexts are thread-local, so these helpers stay reentrant; every entry
point takes effect inside ``precision_context``.
"""

import math
from contextlib import contextmanager

import gmpy2
from gmpy2 import mpfr

from .errors import ConvergenceError

_BITS_PER_DIGIT = math.log2(10.0)


@contextmanager
def precision_context(digits: int):
    """Activate a thread-local mpfr context with roughly ``digits`` decimals."""
    bits = int(math.ceil(digits * _BITS_PER_DIGIT)) + 8
    with gmpy2.context(precision=bits):
        yield


def lbeta(a, b):
    """log B(a, b) at the active precision."""
    return gmpy2.lgamma(a)[0] + gmpy2.lgamma(b)[0] - gmpy2.lgamma(a + b)[0]


def _beta_cf(a, b, x, max_iter):
    """Continued fraction for I_x(a, b), modified Lentz recurrence."""
    ctx = gmpy2.get_context()
    eps = mpfr(2) ** (6 - ctx.precision)
    tiny = mpfr(2) ** (-8 * ctx.precision)
    qab, qap, qam = a + b, a + 1, a - 1
    c = mpfr(1)
    d = 1 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1 / d
    h = d
    for it in range(1, max_iter):
        it2 = 2 * it
        # even step
        num = it * (b - it) * x / ((qam + it2) * (a + it2))
        d = 1 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        h *= d * c
        # odd step
        num = -(a + it) * (qab + it) * x / ((a + it2) * (qap + it2))
        d = 1 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < eps:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction stalled at (a={a}, b={b}, x={x})"
    )


def betainc_reg(a, b, x, max_iter: int = 100000):
    """Regularized lower incomplete beta I_x(a, b) on mpfr values."""
    if x <= 0:
        return mpfr(0)
    if x >= 1:
        return mpfr(1)
    lfront = a * gmpy2.log(x) + b * gmpy2.log1p(-x) - lbeta(a, b)
    if x < (a + 1) / (a + b + 2):
        return gmpy2.exp(lfront) * _beta_cf(a, b, x, max_iter) / a
    return 1 - gmpy2.exp(lfront) * _beta_cf(b, a, 1 - x, max_iter) / b


def lu_slogdet(rows):
    """Sign and log|det| of a square matrix given as nested mpfr lists.

    Partially pivoted in-place elimination.  mpfr's enormous exponent range
    means pivot products never over- or underflow, so the log is taken on
    block-accumulated products rather than per pivot.
    """
    n = len(rows)
    sign = 1
    log_abs = mpfr(0)
    acc = mpfr(1)
    for k in range(n):
        piv_val, piv_row = abs(rows[k][k]), k
        for i in range(k + 1, n):
            v = abs(rows[i][k])
            if v > piv_val:
                piv_val, piv_row = v, i
        if piv_val == 0:
            return 0, mpfr("-inf")
        if piv_row != k:
            rows[k], rows[piv_row] = rows[piv_row], rows[k]
            sign = -sign
        akk = rows[k][k]
        acc *= akk
        if k % 32 == 31:
            if acc < 0:
                sign = -sign
                acc = -acc
            log_abs += gmpy2.log(acc)
            acc = mpfr(1)
        rowk = rows[k]
        for i in range(k + 1, n):
            rowi = rows[i]
            f = rowi[k] / akk
            if f:
                rowi[k] = mpfr(0)
                for j in range(k + 1, n):
                    rowi[j] -= f * rowk[j]
    if acc < 0:
        sign = -sign
        acc = -acc
    log_abs += gmpy2.log(acc)
    return sign, log_abs
