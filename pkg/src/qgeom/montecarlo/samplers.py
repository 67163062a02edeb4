"""Random unitaries, random states and random spectra.

The batch functions (``haar_unitaries``, ``hs_states``, ``simplex_points``,
``dirichlet_points``) return stacked raw arrays and are what the estimators
use. ``sample_*`` draw a single object and wrap it in the library types.
"""

import operator

import numpy as np

from ..errors import DomainError, NumericError
from ..states import DensityMatrix, Spectrum
from .rng import as_generator

__all__ = [
    "ginibre",
    "haar_unitaries",
    "hs_states",
    "simplex_points",
    "dirichlet_points",
    "batch_spectra",
    "states_from_spectra",
    "sample_haar_unitary",
    "sample_hs_state",
    "sample_simplex_uniform",
]


def _check_N(N):
    N = operator.index(N)
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    return N


def ginibre(N, size, rng):
    """``size`` complex N x N matrices with iid standard complex normal entries."""
    z = rng.standard_normal((size, N, N, 2))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)


def haar_unitaries(N, size, rng):
    """Haar-distributed unitaries via QR of a Ginibre matrix.

    The phases of the diagonal of ``R`` are absorbed into ``Q`` so the
    result does not depend on the QR sign convention.
    """
    N = _check_N(N)
    rng = as_generator(rng)
    z = ginibre(N, size, rng)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    mod = np.abs(diag)
    bad = np.any(mod == 0.0, axis=-1)
    if np.any(bad):
        # singular Ginibre draw (probability zero): redraw those entries
        q[bad] = haar_unitaries(N, int(bad.sum()), rng)
        diag = np.where(bad[:, None], 1.0, diag)
        mod = np.where(bad[:, None], 1.0, mod)
    return q * (diag / mod)[:, None, :]


def hs_states(N, size, rng):
    """States distributed by the Hilbert-Schmidt (flat) measure: ``G G^+ / tr``."""
    N = _check_N(N)
    rng = as_generator(rng)
    g = ginibre(N, size, rng)
    rho = g @ np.conj(np.swapaxes(g, -1, -2))
    tr = np.einsum("...ii->...", rho).real
    return rho / tr[:, None, None]


def simplex_points(N, size, rng):
    """Uniform points on the probability simplex, unsorted."""
    N = _check_N(N)
    rng = as_generator(rng)
    e = rng.standard_exponential((size, N))
    return e / e.sum(axis=-1, keepdims=True)


def dirichlet_points(N, size, rng, alpha):
    """Symmetric Dirichlet(alpha) points on the simplex, unsorted."""
    N = _check_N(N)
    rng = as_generator(rng)
    g = rng.standard_gamma(alpha, (size, N))
    return g / g.sum(axis=-1, keepdims=True)


def batch_spectra(states):
    """Descending spectra of a stack of states, negatives clamped to zero."""
    try:
        w = np.linalg.eigvalsh(states)[..., ::-1]
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    w = np.clip(w, 0.0, None)
    return w / w.sum(axis=-1, keepdims=True)


def states_from_spectra(spectra, rng):
    """``U diag(spectra) U^+`` with independent Haar ``U`` per row."""
    spectra = np.asarray(spectra, dtype=float)
    m, N = spectra.shape
    u = haar_unitaries(N, m, rng)
    return (u * spectra[:, None, :]) @ np.conj(np.swapaxes(u, -1, -2))


def sample_haar_unitary(N, rng):
    """One Haar-random N x N unitary. ``rng`` is an ``RngStream``, ``Generator`` or seed."""
    return haar_unitaries(N, 1, as_generator(rng))[0]


def sample_hs_state(N, rng):
    """One Hilbert-Schmidt random ``DensityMatrix``."""
    return DensityMatrix(hs_states(N, 1, as_generator(rng))[0])


def sample_simplex_uniform(N, rng):
    """One uniform point of the simplex, returned sorted as a ``Spectrum``."""
    return Spectrum(simplex_points(N, 1, as_generator(rng))[0])
