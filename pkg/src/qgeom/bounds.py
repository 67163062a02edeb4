"""Two-sided Bures-volume bounds and their explicit constants.

The central object is the Selberg-type Gamma product ``I(p)`` that controls
the Hoelder upper estimate of a Bures volume by the Hilbert-Schmidt volume
of the same set. On top of it sit the explicit finite-N constants
(``c1``, ``theorem2_bound``) and the evaluators for the separable/PPT
corollaries, whose universal constants are caller-supplied.
"""

from dataclasses import dataclass, field
import math
import operator

import numpy as np

from .errors import DomainError, UnsupportedError, ValidationError
from .measures import exact_bures_volume, exact_hs_volume, vrad
from .specfun import GAMMA_RECIPROCAL_BOUND, log_factorial, log_flag_volume, log_gamma

__all__ = [
    "BoundReport",
    "PUBLISHED_C2",
    "DEFAULT_C2",
    "DEFAULT_BIG_C2",
    "DEFAULT_C3",
    "selberg_exponent",
    "log_I",
    "lemma1_sandwich",
    "c1",
    "theorem2_p",
    "theorem2_bound",
    "theorem2_ratio",
    "theorem2_constant",
    "gamma_ratio",
    "alpha_D",
    "corollary1_bounds",
    "corollary2_bounds",
    "s_vs_ppt_scaling",
]

_LN2 = math.log(2.0)

#: Published (c2(N), C2(N)) pairs for the separable-state corollary.
PUBLISHED_C2 = {4: (0.2272, 5.2785), 6: (0.2306, 4.6436), 8: (0.2318, 4.2955)}
DEFAULT_C2, DEFAULT_BIG_C2 = PUBLISHED_C2[4]
DEFAULT_C3 = math.exp(-0.25) / math.sqrt(6.0)

# Slack allowed when checking that a subset's HS volume does not exceed V_HS(D).
_VOLUME_SLACK = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """Lower/upper log-bounds for a volume-type quantity.

    ``lower_log`` / ``upper_log`` are natural logs (``None`` when a side is
    not provided). ``parameters`` records the auxiliary values used.
    """

    N: int
    lower_log: float = None
    upper_log: float = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.lower_log, self.upper_log
        if lo is not None and hi is not None and lo > hi:
            raise ValidationError(f"inconsistent bounds: lower {lo} > upper {hi}")

    @property
    def lower(self):
        return None if self.lower_log is None else math.exp(self.lower_log)

    @property
    def upper(self):
        return None if self.upper_log is None else math.exp(self.upper_log)


def _index(name, value, lowest):
    value = operator.index(value)
    if value < lowest:
        raise DomainError(f"{name} must be an integer >= {lowest}, got {value}")
    return value


def selberg_exponent(p):
    """``(p-1)/(2p-1)``, rejecting the singular band ``[1/2, 1]``."""
    p = float(p)
    if not math.isfinite(p):
        raise DomainError(f"p must be finite, got {p}")
    if 0.5 <= p <= 1.0:
        raise DomainError(
            f"p = {p} lies in the singular band [1/2, 1]: the Gamma argument "
            "j (p-1)/(2p-1) is nonpositive or undefined there"
        )
    return (p - 1.0) / (2.0 * p - 1.0)


def log_I(N, p):
    """``ln I(p)`` for ``p`` outside ``[1/2, 1]``.

    With ``b = (p-1)/(2p-1)``::

        I(p) = Z_N / (N! Gamma(b N^2)) * prod_j Gamma(1 + j b) Gamma(j b) / Gamma(1 + b)

    which is the integral over all states of
    ``prod_{i<j} |l_i - l_j|^{2b} prod_i l_i^{b-1}``.
    """
    N = _index("N", N, 2)
    b = selberg_exponent(p)
    if not b > 0.0:
        raise DomainError(f"Gamma argument (p-1)/(2p-1) = {b} must be positive")
    g1b = log_gamma(1.0 + b)
    prod = math.fsum(log_gamma(1.0 + j * b) + log_gamma(j * b) - g1b for j in range(1, N + 1))
    return prod - log_factorial(N) - log_gamma(b * N * N) + log_flag_volume(N)


def lemma1_sandwich(N, log_V_HS_K, p):
    """Bounds on ``ln V_B(K)`` in terms of ``ln V_HS(K)``, for ``p > 1``.

    Lower: ``V_B(K) >= 2^{1-N^2} N^{(N^2-1)/2} V_HS(K)``.
    Upper: ``2^{(N^2+N-2)/2} V_B(K) <= (V_HS(K)/sqrt N)^{1/2p} I(p)^{(2p-1)/2p}``.
    """
    N = _index("N", N, 2)
    p = float(p)
    if not p > 1.0:
        raise DomainError(f"p must be > 1, got {p}")
    lv = float(log_V_HS_K)
    full = exact_hs_volume(N).log_value
    if lv > full + _VOLUME_SLACK:
        raise ValidationError(f"ln V_HS(K) = {lv} exceeds ln V_HS(D) = {full}")
    n2 = N * N
    lower = (1 - n2) * _LN2 + 0.5 * (n2 - 1) * math.log(N) + lv
    upper = (
        -0.5 * (n2 + N - 2) * _LN2
        + (lv - 0.5 * math.log(N)) / (2.0 * p)
        + (2.0 * p - 1.0) / (2.0 * p) * log_I(N, p)
    )
    return BoundReport(N, lower, upper, {"p": p})


def c1(N):
    """Optimal finite-N constant ``d^{1/4} vrad_HS(D) / (2 vrad_B(D))``."""
    N = _index("N", N, 2)
    d = N * N - 1
    return d**0.25 * vrad(exact_hs_volume(N)) / (2.0 * vrad(exact_bures_volume(N)))


def _log_e_over_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    return 1.0 - math.log(alpha)


def theorem2_p(N, alpha):
    """Exponent choice ``p(N, alpha)`` and ``beta = (p-1)/(2p-1)``.

    ``L = N^2 ln(e/alpha)``, ``p = (L-1)/(L-2)``, ``beta = 1/L``.
    """
    N = operator.index(N)
    if N < 4:
        raise UnsupportedError(f"the explicit VR_B bound needs N >= 4, got {N}")
    L = N * N * _log_e_over_alpha(alpha)
    return (L - 1.0) / (L - 2.0), 1.0 / L


def _log_theorem2_bound(N, alpha):
    p, beta = theorem2_p(N, alpha)
    d = N * N - 1
    return (
        _LN2
        + math.log(GAMMA_RECIPROCAL_BOUND) / 3.0
        + math.log(alpha) / (2.0 * p)
        + (1.0 - 1.0 / (2.0 * p)) / (N + 1) * -math.log(beta)
        + log_gamma(0.5 * N * N) / d
        - log_gamma(N * N) / (2.0 * p * d)
    )


def theorem2_bound(N, alpha):
    """Explicit upper bound on ``VR_B(K, D)`` given ``alpha = VR_HS(K, D)``."""
    return math.exp(_log_theorem2_bound(N, alpha))


def theorem2_ratio(N, alpha):
    """``theorem2_bound / (sqrt(alpha) exp(ln ln(e/alpha) / 2N))``."""
    lle = math.log1p(-math.log(alpha)) if 0.0 < alpha <= 1.0 else math.nan
    return math.exp(_log_theorem2_bound(N, alpha) - 0.5 * math.log(alpha) - lle / (2.0 * N))


def theorem2_constant(N, alpha_min=1e-12, points=200):
    """Maximum of ``theorem2_ratio`` over a log-spaced alpha grid in [alpha_min, 1]."""
    grid = np.logspace(math.log10(alpha_min), 0.0, points)
    return max(theorem2_ratio(N, float(a)) for a in grid)


def gamma_ratio(N):
    """``Gamma(N^2/2)^{1/d} / Gamma(N^2)^{1/2d}``, tending to ``1/sqrt 2``."""
    N = _index("N", N, 2)
    d = N * N - 1
    return math.exp((log_gamma(0.5 * N * N) - 0.5 * log_gamma(N * N)) / d)


def alpha_D(D):
    """``(1/2) log_D(1 + 1/D) - (1/(2 D^2)) log_D(D + 1)``."""
    D = _index("D", D, 2)
    lnD = math.log(D)
    return 0.5 * math.log1p(1.0 / D) / lnD - math.log(D + 1.0) / (2.0 * D * D * lnD)


def _positive(name, value):
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


def corollary1_bounds(D, n, c2=DEFAULT_C2, C2=DEFAULT_BIG_C2):
    """Bounds on ``VR_B(S, D)`` for ``(C^D)^{(x) n}``, many small subsystems.

    ``c2 / N^{1/2 + a_D} <= VR_B <= C2 sqrt((D n ln n)^{1/2} / N^{1/2 + a_D})``.
    """
    D = _index("D", D, 2)
    n = _index("n", n, 2)
    c2 = _positive("c2", c2)
    C2 = _positive("C2", C2)
    a = alpha_D(D)
    lnN = n * math.log(D)
    expo = 0.5 + a
    lower = math.log(c2) - expo * lnN
    upper = math.log(C2) + 0.5 * (0.5 * math.log(D * n * math.log(n)) - expo * lnN)
    return BoundReport(D**n, lower, upper, {"D": D, "n": n, "alpha_D": a, "c2": c2, "C2": C2})


def corollary2_bounds(D, n, c3=DEFAULT_C3, C3=DEFAULT_BIG_C2):
    """Bounds on ``VR_B(S, D)`` for ``(C^D)^{(x) n}``, few large subsystems.

    ``c3^n / N^{1/2 - 1/2n} <= VR_B <= C3 sqrt((n ln n)^{1/2} / N^{1/2 - 1/2n})``.
    """
    D = _index("D", D, 2)
    n = _index("n", n, 2)
    c3 = _positive("c3", c3)
    C3 = _positive("C3", C3)
    lnN = n * math.log(D)
    expo = 0.5 - 0.5 / n
    lower = n * math.log(c3) - expo * lnN
    upper = math.log(C3) + 0.5 * (0.5 * math.log(n * math.log(n)) - expo * lnN)
    return BoundReport(D**n, lower, upper, {"D": D, "n": n, "c3": c3, "C3": C3})


def s_vs_ppt_scaling(D, c4, C4):
    """Envelopes ``c4 D^{-1/2} <= VR_B(S, PPT) <= C4 D^{-1/4}`` on ``C^D (x) C^D``."""
    D = _index("D", D, 2)
    c4 = _positive("c4", c4)
    C4 = _positive("C4", C4)
    lnD = math.log(D)
    return BoundReport(D * D, math.log(c4) - 0.5 * lnD, math.log(C4) - 0.25 * lnD, {"D": D, "c4": c4, "C4": C4})
