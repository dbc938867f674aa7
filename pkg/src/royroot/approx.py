"""Closed-form asymptotic approximations of the largest-root distribution.

For large s the logit of the largest eigenvalue, centered and scaled,
approaches the Tracy-Widom law of order 1:

    (log(T/(1-T)) - mu) / sigma  ~  TW1,

with centering and scaling determined by the raw MANOVA dimensions
(p, m_dim, n_dim):

    gamma = arccos((m_dim + n_dim - 2p) / (m_dim + n_dim - 1))
    phi   = arccos((m_dim - n_dim) / (m_dim + n_dim - 1))
    mu    = 2 log tan((gamma + phi) / 2)
    sigma^3 = 16 / ((m_dim + n_dim - 1)^2 sin^2(gamma + phi) sin gamma sin phi)

TW1 itself is replaced by a moment-matched shifted gamma surrogate,
F1(x) ~= P(k, (x + alpha)/delta) with fixed constants k = 46.446,
delta = 0.186054, alpha = 9.84801, which yields closed forms for both the
approximate CDF and its inverse.  The regime of validity is beta-parameter
m >= -1/2, n >= 0 with s large; outside it the functions still evaluate but
emit :class:`ApproximationValidityWarning`.
"""

import math
import warnings
from dataclasses import dataclass

from scipy.special import expit, logit

from .errors import ApproximationValidityWarning, DomainError
from .params import BetaParams, ManovaDims, manova_floats
from .special import reg_inc_gamma_p, reg_inc_gamma_p_inv

__all__ = [
    "ShiftedGammaConstants",
    "SHIFTED_GAMMA",
    "TwApproxParams",
    "tw_params",
    "tw_params_from_beta",
    "tw1_cdf_approx",
    "tw1_quantile_approx",
    "approx_cdf",
    "approx_cdf_from_beta",
    "approx_quantile",
    "approx_quantile_from_beta",
]


@dataclass(frozen=True)
class ShiftedGammaConstants:
    """Moment-matched shifted-gamma surrogate for TW1; never recomputed."""

    k: float = 46.446
    delta: float = 0.186054
    alpha: float = 9.84801


SHIFTED_GAMMA = ShiftedGammaConstants()


@dataclass(frozen=True)
class TwApproxParams:
    """Centering/scaling of the logit limit plus the two auxiliary angles."""

    mu: float
    sigma: float
    gamma_angle: float
    phi_angle: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        for name in ("gamma_angle", "phi_angle"):
            v = getattr(self, name)
            if not (0.0 < v < math.pi):
                raise DomainError(f"{name} must lie in (0, pi), got {v!r}")


def _tw_raw(p: float, m_dim: float, n_dim: float) -> TwApproxParams:
    tot = m_dim + n_dim - 1.0
    if not tot > 0:
        raise DomainError(f"need m_dim + n_dim - 1 > 0, got {tot!r}")
    cg = (m_dim + n_dim - 2.0 * p) / tot
    cp = (m_dim - n_dim) / tot
    if not (-1.0 <= cg <= 1.0 and -1.0 <= cp <= 1.0):
        raise DomainError(
            f"arccos arguments out of [-1, 1] for (p={p}, m_dim={m_dim}, n_dim={n_dim})"
        )
    gamma = math.acos(cg)
    phi = math.acos(cp)
    denom = tot * tot * math.sin(gamma + phi) ** 2 * math.sin(gamma) * math.sin(phi)
    if not denom > 0:
        raise DomainError("degenerate angles: sigma^3 denominator is not positive")
    mu = 2.0 * math.log(math.tan((gamma + phi) / 2.0))
    sigma = (16.0 / denom) ** (1.0 / 3.0)
    # stated validity of the limit, in beta parameters
    beta_m = (n_dim - p - 1.0) / 2.0
    beta_n = (m_dim - p - 1.0) / 2.0
    if beta_m < -0.5 - 1e-12 or beta_n < -1e-12:
        warnings.warn(
            f"Tracy-Widom approximation outside its validity region "
            f"(requires m >= -1/2 and n >= 0; got m={beta_m}, n={beta_n})",
            ApproximationValidityWarning,
            stacklevel=3,
        )
    return TwApproxParams(mu=mu, sigma=sigma, gamma_angle=gamma, phi_angle=phi)


def tw_params(dims: ManovaDims) -> TwApproxParams:
    """Logit-limit parameters for raw MANOVA dimensions."""
    return _tw_raw(float(dims.p), float(dims.m_dim), float(dims.n_dim))


def tw_params_from_beta(s: int, m: float, n: float) -> TwApproxParams:
    """Same, entered through beta-law parameters (dimensions may be fractional)."""
    return _tw_raw(*manova_floats(BetaParams(s=s, m=m, n=n)))


def tw1_cdf_approx(x: float, constants: ShiftedGammaConstants = SHIFTED_GAMMA) -> float:
    """Shifted-gamma surrogate for the TW1 CDF; zero at and below -alpha."""
    arg = (x + constants.alpha) / constants.delta
    if arg <= 0.0:
        return 0.0
    return reg_inc_gamma_p(constants.k, arg)


def tw1_quantile_approx(y: float, constants: ShiftedGammaConstants = SHIFTED_GAMMA) -> float:
    """Inverse surrogate: delta * Pinv(k, y) - alpha for y in (0, 1)."""
    if not (0.0 < y < 1.0):
        raise DomainError(f"y must lie in (0, 1), got {y!r}")
    return constants.delta * reg_inc_gamma_p_inv(constants.k, y) - constants.alpha


def _approx_cdf_raw(tw: TwApproxParams, theta: float,
                    constants: ShiftedGammaConstants) -> float:
    if not (0.0 < theta < 1.0):
        raise DomainError(f"theta must lie strictly in (0, 1), got {theta!r}")
    arg = (float(logit(theta)) - tw.mu + tw.sigma * constants.alpha) / (tw.sigma * constants.delta)
    if arg <= 0.0:
        return 0.0
    return reg_inc_gamma_p(constants.k, arg)


def _approx_quantile_raw(tw: TwApproxParams, y: float,
                         constants: ShiftedGammaConstants) -> float:
    x = tw1_quantile_approx(y, constants)
    return float(expit(tw.sigma * x + tw.mu))


def approx_cdf(dims: ManovaDims, theta: float,
               constants: ShiftedGammaConstants = SHIFTED_GAMMA) -> float:
    """Approximate CDF of the largest root at ``theta`` for the given dims."""
    return _approx_cdf_raw(tw_params(dims), theta, constants)


def approx_cdf_from_beta(s: int, m: float, n: float, theta: float,
                         constants: ShiftedGammaConstants = SHIFTED_GAMMA) -> float:
    """Approximate CDF entered through beta-law parameters."""
    return _approx_cdf_raw(tw_params_from_beta(s, m, n), theta, constants)


def approx_quantile(dims: ManovaDims, y: float,
                    constants: ShiftedGammaConstants = SHIFTED_GAMMA) -> float:
    """Closed-form approximate quantile: inverse logit of the TW1 surrogate."""
    return _approx_quantile_raw(tw_params(dims), y, constants)


def approx_quantile_from_beta(s: int, m: float, n: float, y: float,
                              constants: ShiftedGammaConstants = SHIFTED_GAMMA) -> float:
    """Approximate quantile entered through beta-law parameters."""
    return _approx_quantile_raw(tw_params_from_beta(s, m, n), y, constants)
