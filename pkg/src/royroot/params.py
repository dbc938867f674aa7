"""Parameter records for the largest-root law and the MANOVA dimension mapping.

Two coordinate systems describe the same null model.  Practitioners hold raw
MANOVA dimensions (p, m_dim, n_dim): X is p x m_dim, Y is p x n_dim, and the
statistic is the largest eigenvalue of (A+B)^{-1} B with A = X X^T,
B = Y Y^T.  Distribution tables are indexed by the multivariate beta triple
(s, m, n) instead.  For real Gaussian data the translation is

    s = p,    m = (n_dim - p - 1) / 2,    n = (m_dim - p - 1) / 2,

while for complex (circular Gaussian) data the eigenvalue density carries
unhalved exponents and the translation is

    s = p,    m = n_dim - p,    n = m_dim - p.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError


class FieldKind(Enum):
    """Scalar field of the underlying Gaussian ensemble."""

    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class BetaParams:
    """Multivariate beta eigenvalue-law parameters.

    ``s`` is the number of eigenvalues; ``m`` and ``n`` are the density
    exponents and must exceed -1 for integrability.
    """

    s: int
    m: float
    n: float
    field_kind: FieldKind = FieldKind.REAL

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s < 1:
            raise DomainError(f"s must be a positive integer, got {self.s!r}")
        if not (self.m > -1.0):
            raise DomainError(f"m must exceed -1, got {self.m!r}")
        if not (self.n > -1.0):
            raise DomainError(f"n must exceed -1, got {self.n!r}")
        if not isinstance(self.field_kind, FieldKind):
            raise DomainError(f"field_kind must be a FieldKind, got {self.field_kind!r}")


@dataclass(frozen=True)
class ManovaDims:
    """Raw MANOVA dimensions: p variables, m_dim and n_dim sample columns."""

    p: int
    m_dim: int
    n_dim: int

    def __post_init__(self):
        for name in ("p", "m_dim", "n_dim"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")
        if self.m_dim < self.p or self.n_dim < self.p:
            raise DomainError(
                f"need m_dim >= p and n_dim >= p, got p={self.p}, "
                f"m_dim={self.m_dim}, n_dim={self.n_dim}"
            )


def manova_to_beta(dims: ManovaDims, field_kind: FieldKind = FieldKind.REAL) -> BetaParams:
    """Translate MANOVA dimensions into beta-law parameters for the given field."""
    if field_kind is FieldKind.REAL:
        m = (dims.n_dim - dims.p - 1) / 2.0
        n = (dims.m_dim - dims.p - 1) / 2.0
    else:
        m = float(dims.n_dim - dims.p)
        n = float(dims.m_dim - dims.p)
    return BetaParams(s=dims.p, m=m, n=n, field_kind=field_kind)


def beta_to_manova(params: BetaParams) -> ManovaDims:
    """Invert :func:`manova_to_beta`; fails if the dimensions are not integral."""
    if params.field_kind is FieldKind.REAL:
        m_dim = 2.0 * params.n + params.s + 1.0
        n_dim = 2.0 * params.m + params.s + 1.0
    else:
        m_dim = params.n + params.s
        n_dim = params.m + params.s
    mi, ni = round(m_dim), round(n_dim)
    if abs(m_dim - mi) > 1e-9 or abs(n_dim - ni) > 1e-9:
        raise DomainError(
            f"(s={params.s}, m={params.m}, n={params.n}) does not correspond "
            f"to integer MANOVA dimensions"
        )
    return ManovaDims(p=params.s, m_dim=int(mi), n_dim=int(ni))


def manova_floats(params: BetaParams) -> tuple[float, float, float]:
    """Real-valued (p, m_dim, n_dim) for asymptotic formulas.

    Unlike :func:`beta_to_manova` this never requires integrality; the
    Tracy-Widom parameter displays are smooth in the dimensions.
    """
    p = float(params.s)
    return p, 2.0 * params.n + p + 1.0, 2.0 * params.m + p + 1.0
