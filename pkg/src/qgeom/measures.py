"""Hilbert-Schmidt and Bures eigenvalue densities and exact volumes.

Densities live on the ordered chamber ``l_1 >= ... >= l_N`` of the
probability simplex, with respect to ``dl_1 ... dl_{N-1}`` times the
invariant measure on the flag manifold. Integrals over the full simplex
therefore pick up a factor ``N!``.

Boundary convention: any eigenvalue equal to zero makes the Bures density
and the Bures/HS ratio singular; both then return ``+inf`` (a sentinel the
Monte Carlo engine rejects and counts). Ties in the interior make both
Vandermonde-type densities vanish.
"""

from dataclasses import dataclass
import math
import operator

import numpy as np

from .errors import DomainError, ValidationError
from .specfun import log_E, log_ball_volume, log_gamma
from .states import Spectrum

__all__ = [
    "HS",
    "BURES",
    "LogVolume",
    "log_hs_eigen_density",
    "log_bures_eigen_density",
    "log_density_ratio",
    "log_density_ratio_floor",
    "hs_eigen_density",
    "bures_eigen_density",
    "density_ratio",
    "exact_hs_volume",
    "exact_bures_volume",
    "log_hemisphere_volume",
    "vrad",
    "vr_ratio",
]

HS = "hs"
BURES = "bures"
_METRICS = (HS, BURES)

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class LogVolume:
    """A volume kept as its natural log, tagged by metric and dimension ``d``."""

    log_value: float
    metric: str
    d: int

    def __post_init__(self):
        if self.metric not in _METRICS:
            raise ValidationError(f"unknown metric {self.metric!r}")
        lv = float(self.log_value)
        if math.isnan(lv) or lv == math.inf:
            raise ValidationError(f"log volume must be finite or -inf, got {lv}")
        object.__setattr__(self, "log_value", lv)
        object.__setattr__(self, "d", operator.index(self.d))

    @property
    def value(self):
        """Linear-scale volume; may overflow to ``inf`` or underflow to 0."""
        return math.exp(self.log_value) if self.log_value < 709.0 else math.inf


def _values(s):
    if isinstance(s, Spectrum):
        return s.values
    return np.asarray(s, dtype=float)


def _pairs(N):
    return np.triu_indices(N, 1)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def log_hs_eigen_density(s):
    """``ln( sqrt(N) prod_{i<j} (l_i - l_j)^2 )``; ``-inf`` on ties."""
    lam = _values(s)
    N = lam.shape[-1]
    i, j = _pairs(N)
    with np.errstate(divide="ignore"):
        vdm = np.log(np.abs(lam[..., i] - lam[..., j])).sum(axis=-1)
    return _out(0.5 * math.log(N) + 2.0 * vdm)


def _bures_prefactor(N):
    return 0.5 * (2 - N - N * N) * _LN2


def log_bures_eigen_density(s):
    """Log of the Bures eigenvalue density.

    ``2^{(2-N-N^2)/2} / sqrt(l_1...l_N) * prod_{i<j} (l_i-l_j)^2/(l_i+l_j)``.
    Returns ``+inf`` when any eigenvalue is zero.
    """
    lam = _values(s)
    N = lam.shape[-1]
    i, j = _pairs(N)
    boundary = np.any(lam <= 0.0, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lv = (
            _bures_prefactor(N)
            - 0.5 * np.log(lam).sum(axis=-1)
            + (2.0 * np.log(np.abs(lam[..., i] - lam[..., j])) - np.log(lam[..., i] + lam[..., j])).sum(axis=-1)
        )
    return _out(np.where(boundary, np.inf, lv))


def log_density_ratio(s):
    """Log of the Radon-Nikodym derivative dV_B/dV_HS at spectrum ``s``.

    The Vandermonde factors cancel, so the ratio is finite on interior ties:
    ``2^{(2-N-N^2)/2} / (sqrt(N) sqrt(l_1...l_N) prod_{i<j}(l_i+l_j))``.
    ``+inf`` on the boundary.
    """
    lam = _values(s)
    N = lam.shape[-1]
    i, j = _pairs(N)
    boundary = np.any(lam <= 0.0, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lv = (
            _bures_prefactor(N)
            - 0.5 * math.log(N)
            - 0.5 * np.log(lam).sum(axis=-1)
            - np.log(lam[..., i] + lam[..., j]).sum(axis=-1)
        )
    return _out(np.where(boundary, np.inf, lv))


def log_density_ratio_floor(N):
    """``ln(2^{1-N^2} N^{(N^2-1)/2})``, the minimum of the density ratio,
    attained at the maximally mixed spectrum."""
    return (1 - N * N) * _LN2 + 0.5 * (N * N - 1) * math.log(N)


def _exp(lv):
    return _out(np.exp(lv))


def hs_eigen_density(s):
    """Hilbert-Schmidt eigenvalue density (linear scale)."""
    return _exp(log_hs_eigen_density(s))


def bures_eigen_density(s):
    """Bures eigenvalue density (linear scale, ``inf`` on the boundary)."""
    return _exp(log_bures_eigen_density(s))


def density_ratio(s):
    """dV_B/dV_HS (linear scale, ``inf`` on the boundary)."""
    return _exp(log_density_ratio(s))


def _check_N(N):
    N = operator.index(N)
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    return N


def exact_hs_volume(N):
    """``V_HS(D) = (2 pi)^{N(N-1)/2} sqrt(N) E(N) / Gamma(N^2)``."""
    N = _check_N(N)
    lv = 0.5 * N * (N - 1) * math.log(2.0 * math.pi) + 0.5 * math.log(N) + log_E(N) - log_gamma(N * N)
    return LogVolume(lv, HS, N * N - 1)


def exact_bures_volume(N):
    """``V_B(D) = 2^{1-N^2} pi^{N^2/2} / Gamma(N^2/2)``."""
    N = _check_N(N)
    lv = (1 - N * N) * _LN2 + 0.5 * N * N * math.log(math.pi) - log_gamma(0.5 * N * N)
    return LogVolume(lv, BURES, N * N - 1)


def log_hemisphere_volume(d, radius=0.5):
    """Log of the d-dimensional volume of a hemisphere of ``S^d`` (in R^{d+1})."""
    d = operator.index(d)
    return 0.5 * (d + 1) * math.log(math.pi) + d * math.log(radius) - log_gamma(0.5 * (d + 1))


def vrad(v):
    """Radius of the Euclidean ``d``-ball with the same volume as ``v``."""
    return math.exp((v.log_value - log_ball_volume(v.d)) / v.d)


def vr_ratio(numerator, denominator):
    """``(V(K) / V(L))^{1/d}`` for two volumes of the same metric and ``d``."""
    if numerator.metric != denominator.metric:
        raise ValidationError(f"metric mismatch: {numerator.metric} vs {denominator.metric}")
    if numerator.d != denominator.d:
        raise ValidationError(f"dimension mismatch: {numerator.d} vs {denominator.d}")
    return math.exp((numerator.log_value - denominator.log_value) / numerator.d)
