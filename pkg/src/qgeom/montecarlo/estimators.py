"""Monte Carlo estimators of HS/Bures probabilities, volumes and volume radii.

Bures quantities are obtained by self-normalised importance sampling over
the Hilbert-Schmidt ensemble, with weight equal to the pointwise ratio of
the two eigenvalue densities. The flag-manifold factor cancels in every
probability, so only spectra enter the weights.

Each estimator splits the ``n`` draws into chunks (see ``rng.run_chunks``);
a chunk returns a small vector of sums and the sums are merged by a fixed
pairwise tree, which makes the output independent of the thread count.
"""

import csv
from dataclasses import asdict, dataclass
import logging
import math
import operator
import time

import numpy as np

from ..bounds import selberg_exponent
from ..errors import DomainError, NumericError, UnsupportedError, ValidationError
from ..measures import BURES, HS, log_bures_eigen_density, log_density_ratio, log_density_ratio_floor
from ..specfun import log_factorial, log_flag_volume, log_gamma
from .predicates import as_predicate
from .rng import DEFAULT_CHUNK_SIZE, pairwise_sum, run_chunks
from .samplers import batch_spectra, dirichlet_points, hs_states, states_from_spectra

__all__ = [
    "MIN_SAMPLES",
    "EstimateWithError",
    "estimate_hs_probability",
    "estimate_bures_probability",
    "estimate_bures_volume",
    "estimate_bures_volume_of_D",
    "estimate_vr",
    "estimate_selberg_integral",
    "dump_weighted_samples",
]

log = logging.getLogger(__name__)

MIN_SAMPLES = 1000
Z95 = 1.96
ESS_WARNING_FRACTION = 0.01
# Slack on the importance-weight floor check (log scale).
_FLOOR_SLACK = 1e-9


@dataclass(frozen=True)
class EstimateWithError:
    """Point estimate with standard error and a 95% interval.

    ``ci95`` defaults to ``estimate +/- 1.96 std_error``; estimators pass an
    explicit one-sided interval when the estimate sits on a hard boundary.
    """

    estimate: float
    std_error: float
    n_samples: int
    n_rejected_singular: int
    seed: int
    elapsed_ms: int
    ci95: tuple = None
    warning: str = None
    ess: float = None

    def __post_init__(self):
        object.__setattr__(self, "estimate", float(self.estimate))
        object.__setattr__(self, "std_error", float(self.std_error))
        if not self.std_error >= 0.0:
            raise ValidationError(f"std_error must be >= 0, got {self.std_error}")
        if self.n_samples <= 0:
            raise ValidationError("an estimate needs at least one accepted sample")
        if self.ci95 is None:
            half = Z95 * self.std_error
            object.__setattr__(self, "ci95", (self.estimate - half, self.estimate + half))

    @property
    def log_estimate(self):
        return math.log(self.estimate) if self.estimate > 0 else -math.inf

    @property
    def log_std_error(self):
        """Delta-method standard error of ``ln estimate``."""
        return self.std_error / self.estimate if self.estimate > 0 else math.inf

    def to_dict(self):
        out = asdict(self)
        out["ci95"] = list(self.ci95)
        return out


def _check_n(n):
    n = operator.index(n)
    if n < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {n}")
    return n


def _check_N(N):
    N = operator.index(N)
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    return N


def _elapsed(t0):
    return int(round((time.perf_counter() - t0) * 1000))


class _Chunked:
    """Shared plumbing: run workers, merge sums, time the run."""

    def __init__(self, n, seed, chunks, threads, chunk_size):
        self.n = _check_n(n)
        self.seed = operator.index(seed)
        self.chunks = chunks
        self.threads = threads
        self.chunk_size = chunk_size
        self.t0 = time.perf_counter()

    def run(self, worker):
        return run_chunks(worker, self.n, self.seed, self.chunks, self.threads, self.chunk_size)

    def elapsed(self):
        return _elapsed(self.t0)


def _hs_draws(N, m, stream):
    rng = stream.generator()
    rho = hs_states(N, m, rng)
    return rho, batch_spectra(rho)


def estimate_hs_probability(N, predicate, n, seed, *, chunks=None, threads=None, chunk_size=DEFAULT_CHUNK_SIZE):
    """Probability of a set under the normalised Hilbert-Schmidt measure.

    Plain hit-or-miss over ``hs_states`` draws, binomial standard error.
    """
    N = _check_N(N)
    pred = as_predicate(predicate)
    run = _Chunked(n, seed, chunks, threads, chunk_size)

    def worker(stream, m):
        rho, spectra = _hs_draws(N, m, stream)
        hit = pred(spectra, rho)
        return np.array([m, np.count_nonzero(hit)], dtype=float)

    total = pairwise_sum(run.run(worker))
    m, hits = int(total[0]), total[1]
    p = hits / m
    se = math.sqrt(max(p * (1.0 - p), 0.0) / m)
    return EstimateWithError(p, se, m, 0, run.seed, run.elapsed())


def _bures_chunk(N, pred, stream, m, keep_rows=False):
    rho, spectra = _hs_draws(N, m, stream)
    logw = log_density_ratio(spectra)
    ok = np.isfinite(logw)
    floor = log_density_ratio_floor(N)
    if np.any(logw[ok] < floor - _FLOOR_SLACK):
        worst = float(logw[ok].min())
        raise NumericError(f"importance weight below its analytic floor: ln w = {worst} < {floor}")
    w = np.where(ok, np.exp(np.where(ok, logw, floor) - floor), 0.0)
    hit = pred(spectra, rho) & ok
    wh = np.where(hit, w, 0.0)
    sums = np.array(
        [np.count_nonzero(ok), np.count_nonzero(~ok), w.sum(), wh.sum(), (w * w).sum(), (wh * w).sum()],
        dtype=float,
    )
    if keep_rows:
        return sums, (spectra, np.exp(logw), ok)
    return sums


def _snis(total, n):
    used, rejected, sw, swh, sww, swwh = total
    if used <= 0:
        raise NumericError("every draw was rejected as singular")
    r = swh / sw
    var = (swwh * (1.0 - 2.0 * r) + r * r * sww) / (sw * sw)
    ess = sw * sw / sww
    warning = None
    if ess < ESS_WARNING_FRACTION * n:
        warning = f"effective sample size {ess:.1f} is below {ESS_WARNING_FRACTION:.0%} of {n} draws"
        log.warning(warning)
    if rejected:
        log.info("rejected %d singular draws", int(rejected))
    return r, math.sqrt(max(var, 0.0)), int(used), int(rejected), ess, warning


def _dirichlet_chunk(N, pred, stream, m, a):
    """SNIS sums for Bures draws proposed from sorted Dirichlet(a) spectra.

    Weight ``f_B / q`` with ``q`` the Dirichlet density on the chamber
    (up to the ``N!`` and flag factors, restored by the caller).
    """
    rng = stream.generator()
    lam = -np.sort(-dirichlet_points(N, m, rng, a), axis=-1)
    logf = log_bures_eigen_density(lam)
    ok = logf < np.inf
    rho = states_from_spectra(lam, rng) if pred.needs_states else None
    hit = pred(lam, rho) & ok
    with np.errstate(divide="ignore"):
        log_q = log_gamma(N * a) - N * log_gamma(a) + (a - 1.0) * np.log(lam).sum(axis=-1)
    w = np.where(ok, np.exp(np.where(ok, logf - log_q, 0.0)), 0.0)
    wh = np.where(hit, w, 0.0)
    return np.array(
        [np.count_nonzero(ok), np.count_nonzero(~ok), w.sum(), wh.sum(), (w * w).sum(), (wh * w).sum()],
        dtype=float,
    )


def _check_alpha(a):
    a = float(a)
    if not a > 0.0:
        raise DomainError(f"proposal_alpha must be > 0, got {a!r}")
    return a


def estimate_bures_probability(
    N,
    predicate,
    n,
    seed,
    *,
    proposal="hs",
    proposal_alpha=0.5,
    chunks=None,
    threads=None,
    chunk_size=DEFAULT_CHUNK_SIZE,
):
    """``V_B(K) / V_B(D)`` by self-normalised importance sampling.

    Parameters
    ----------
    proposal : {"hs", "dirichlet"}
        ``"hs"`` draws from the HS ensemble with weight ``dV_B/dV_HS``
        (floor-checked on every draw). These weights have infinite variance
        near the boundary, so the ESS fraction decays slowly with ``n``.
        ``"dirichlet"`` draws sorted Dirichlet(``proposal_alpha``) spectra
        with Haar eigenvectors; at ``alpha = 1/2`` the weight is bounded.

    Notes
    -----
    The estimate is ``sum w 1_K / sum w`` with delta-method standard error
    ``sqrt(sum w^2 (1_K - R)^2) / sum w``. Boundary draws (infinite weight)
    are rejected and counted.
    """
    N = _check_N(N)
    pred = as_predicate(predicate)
    if proposal == "hs":
        worker = lambda stream, m: _bures_chunk(N, pred, stream, m)  # noqa: E731
    elif proposal == "dirichlet":
        a = _check_alpha(proposal_alpha)
        worker = lambda stream, m: _dirichlet_chunk(N, pred, stream, m, a)  # noqa: E731
    else:
        raise DomainError(f"proposal must be 'hs' or 'dirichlet', got {proposal!r}")
    run = _Chunked(n, seed, chunks, threads, chunk_size)
    total = pairwise_sum(run.run(worker))
    r, se, used, rejected, ess, warning = _snis(total, run.n)
    return EstimateWithError(r, se, used, rejected, run.seed, run.elapsed(), warning=warning, ess=ess)


def dump_weighted_samples(fh, N, predicate, n, seed, *, chunks=None, threads=None, chunk_size=DEFAULT_CHUNK_SIZE):
    """Run the Bures importance sampler and write every draw as CSV.

    Columns: ``lambda_1..lambda_N, weight, accepted`` where ``weight`` is
    the Bures/HS density ratio and ``accepted`` is 0 for rejected singular
    draws. Rows are written and flushed chunk by chunk in chunk order.
    Returns the ``EstimateWithError`` of the same run.
    """
    N = _check_N(N)
    pred = as_predicate(predicate)
    run = _Chunked(n, seed, chunks, threads, chunk_size)
    parts = run.run(lambda stream, m: _bures_chunk(N, pred, stream, m, keep_rows=True))
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([f"lambda_{i}" for i in range(1, N + 1)] + ["weight", "accepted"])
    for _, (spectra, weights, ok) in parts:
        for lam, w, a in zip(spectra, weights, ok):
            writer.writerow([repr(float(x)) for x in lam] + [repr(float(w)), int(a)])
        fh.flush()
    total = pairwise_sum([p[0] for p in parts])
    r, se, used, rejected, ess, warning = _snis(total, run.n)
    return EstimateWithError(r, se, used, rejected, run.seed, run.elapsed(), warning=warning, ess=ess)


def estimate_bures_volume(
    N, n, seed, predicate=None, *, proposal_alpha=0.5, chunks=None, threads=None, chunk_size=DEFAULT_CHUNK_SIZE
):
    """Absolute Bures volume of a unitarily invariant set.

    Draws are symmetric Dirichlet(``proposal_alpha``) points sorted into the
    Weyl chamber, so ``V_B(K) = Z_N / N! * E_q[f_B 1_K / q]``. The default
    ``alpha = 1/2`` cancels the ``1/sqrt(l_1...l_N)`` boundary singularity of
    the Bures density and leaves a bounded weight; ``alpha = 1`` is plain
    uniform sampling, whose variance is (logarithmically) infinite.
    Predicates that need matrices get ``U diag(l) U^+`` with a fresh Haar
    ``U`` per draw.
    """
    N = _check_N(N)
    pred = as_predicate(predicate)
    a = _check_alpha(proposal_alpha)
    run = _Chunked(n, seed, chunks, threads, chunk_size)
    used, rejected, _, sf, _, sff = pairwise_sum(run.run(lambda stream, m: _dirichlet_chunk(N, pred, stream, m, a)))
    if used <= 0:
        raise NumericError("every draw was rejected as singular")
    mean = sf / used
    sd = math.sqrt(max(sff / used - mean * mean, 0.0) * used / max(used - 1.0, 1.0))
    scale = math.exp(log_flag_volume(N) - log_factorial(N))
    return EstimateWithError(scale * mean, scale * sd / math.sqrt(used), int(used), int(rejected), run.seed, run.elapsed())


def estimate_bures_volume_of_D(N, n, seed, **kwargs):
    """MC cross-check of the exact Bures volume; restricted to ``N <= 4``."""
    N = _check_N(N)
    if N > 4:
        raise UnsupportedError(f"Bures volume MC is only validated for N in 2..4 (variance), got {N}")
    return estimate_bures_volume(N, n, seed, None, **kwargs)


def estimate_vr(N, predicate, metric, n, seed, **kwargs):
    """Relative volume radius ``VR(K, D) = P(K)^{1/d}`` for ``metric`` in {hs, bures}.

    The standard error is propagated by the delta method. A zero
    probability gives ``VR = 0`` with the one-sided interval
    ``[0, (3/n)^{1/d}]``.
    """
    N = _check_N(N)
    if metric == HS:
        prob = estimate_hs_probability(N, predicate, n, seed, **kwargs)
    elif metric == BURES:
        prob = estimate_bures_probability(N, predicate, n, seed, **kwargs)
    else:
        raise DomainError(f"metric must be {HS!r} or {BURES!r}, got {metric!r}")
    d = N * N - 1
    base = dict(
        n_samples=prob.n_samples,
        n_rejected_singular=prob.n_rejected_singular,
        seed=prob.seed,
        elapsed_ms=prob.elapsed_ms,
        warning=prob.warning,
        ess=prob.ess,
    )
    if prob.estimate <= 0.0:
        upper = (3.0 / prob.n_samples) ** (1.0 / d)
        return EstimateWithError(0.0, 0.0, ci95=(0.0, upper), **base)
    vr = prob.estimate ** (1.0 / d)
    return EstimateWithError(vr, vr * prob.std_error / (d * prob.estimate), **base)


def estimate_selberg_integral(N, p, n, seed, *, chunks=None, threads=None, chunk_size=DEFAULT_CHUNK_SIZE):
    """MC value of ``I(p) = Z_N int_chamber prod|l_i-l_j|^{2b} prod l_i^{b-1}``.

    Uses a symmetric Dirichlet(b) proposal, whose density absorbs the
    singular ``prod l_i^{b-1}`` factor and leaves the bounded integrand
    ``prod |l_i - l_j|^{2b}``; only the Dirichlet normaliser
    ``Gamma(b)^N / Gamma(N b)`` enters the prefactor.
    """
    N = _check_N(N)
    b = selberg_exponent(p)
    run = _Chunked(n, seed, chunks, threads, chunk_size)
    i, j = np.triu_indices(N, 1)

    def worker(stream, m):
        x = dirichlet_points(N, m, stream.generator(), b)
        with np.errstate(divide="ignore"):
            f = np.exp(2.0 * b * np.log(np.abs(x[:, i] - x[:, j])).sum(axis=-1))
        return np.array([m, f.sum(), (f * f).sum()])

    m, sf, sff = pairwise_sum(run.run(worker))
    mean = sf / m
    sd = math.sqrt(max(sff / m - mean * mean, 0.0) * m / (m - 1.0))
    scale = math.exp(log_flag_volume(N) - log_factorial(N) + N * log_gamma(b) - log_gamma(N * b))
    return EstimateWithError(scale * mean, scale * sd / math.sqrt(m), int(m), 0, run.seed, run.elapsed())
