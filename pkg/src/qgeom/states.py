"""Density matrices, spectra, partial transposition and set membership.

Array-level helpers (``partial_transpose``, ``ppt_mask``, ``k_tube_mask``,
``k_face_mask``) accept stacked inputs with arbitrary leading batch axes so
the Monte Carlo engine can evaluate predicates on whole chunks at once; the
scalar functions are thin wrappers around them.
"""

from dataclasses import dataclass
import math
import operator
import re

import numpy as np

from .errors import DomainError, NumericError, UnsupportedError, ValidationError

__all__ = [
    "STATE_TOL",
    "SPECTRUM_TOL",
    "HilbertFactorization",
    "DensityMatrix",
    "Spectrum",
    "maximally_mixed",
    "pure_state",
    "spectrum_of",
    "partial_transpose",
    "ppt_mask",
    "is_ppt",
    "bures_distance",
    "k_tube_map",
    "k_face_map",
    "k_tube_mask",
    "k_face_mask",
    "in_K_tube",
    "in_K_face",
]

#: Hermiticity / trace / PSD tolerance for density matrices.
STATE_TOL = 1e-10
#: Normalisation tolerance for spectra and boundary slack of membership tests.
SPECTRUM_TOL = 1e-12


@dataclass(frozen=True)
class HilbertFactorization:
    """Tensor decomposition ``C^{D_1} x ... x C^{D_n}`` of the state space."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(operator.index(f) for f in self.factors)
        if not factors:
            raise ValidationError("factorization needs at least one factor")
        if any(f < 2 for f in factors):
            raise ValidationError(f"every factor must be >= 2, got {factors}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def parse(cls, text):
        """Parse ``"2x3"`` style specifications."""
        if not re.fullmatch(r"\s*\d+(\s*[xX]\s*\d+)*\s*", text):
            raise ValidationError(f"cannot parse factorization {text!r}; expected e.g. '2x3'")
        return cls(tuple(int(p) for p in re.split(r"[xX]", text)))

    @property
    def n(self):
        return len(self.factors)

    @property
    def N(self):
        return math.prod(self.factors)

    @property
    def d(self):
        return self.N**2 - 1

    def __str__(self):
        return "x".join(map(str, self.factors))


class DensityMatrix:
    """A validated, immutable density matrix.

    Raises ``ValidationError`` unless the input is square, Hermitian,
    trace one and positive semidefinite, each up to ``tol``.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries, tol=STATE_TOL):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"density matrix must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValidationError("density matrix must be non-empty")
        herm = np.max(np.abs(a - a.conj().T))
        if herm > tol:
            raise ValidationError(f"matrix is not Hermitian (max |A - A^+| = {herm:.3g})")
        tr = np.trace(a).real
        if abs(tr - 1.0) > tol:
            raise ValidationError(f"trace is {tr!r}, expected 1")
        a = 0.5 * (a + a.conj().T)
        try:
            lo = np.linalg.eigvalsh(a)[0]
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigensolver failed: {exc}") from exc
        if lo < -tol:
            raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3g})")
        a.setflags(write=False)
        self._entries = a

    @property
    def entries(self):
        return self._entries

    @property
    def N(self):
        return self._entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._entries if dtype is None else self._entries.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(N={self.N})"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of a state, stored in nonincreasing order.

    Input in any order is accepted and sorted (stably) on construction.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1:
            raise ValidationError("spectrum must be non-empty")
        if not np.all(np.isfinite(v)) or np.any(v < 0.0):
            raise ValidationError(f"spectrum entries must be finite and >= 0, got {v}")
        if abs(math.fsum(v) - 1.0) > SPECTRUM_TOL:
            raise ValidationError(f"spectrum sums to {math.fsum(v)!r}, expected 1")
        v = -np.sort(-v, kind="stable")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self):
        return self.values.size

    @property
    def d(self):
        return self.N**2 - 1

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.N

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return f"Spectrum({np.array2string(self.values, precision=6)})"


def maximally_mixed(N):
    """``Id_N / N``."""
    return DensityMatrix(np.eye(N) / N)


def pure_state(vector):
    """Projector onto the normalised ``vector``."""
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


def _as_matrix(rho):
    if isinstance(rho, DensityMatrix):
        return rho.entries
    return np.asarray(rho)


def spectrum_of(rho):
    """Sorted spectrum of a state.

    Eigenvalues within ``STATE_TOL`` below zero are clamped to zero and the
    result renormalised to unit sum.
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    try:
        w = np.linalg.eigvalsh(rho.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    w = np.clip(w, 0.0, None)
    return Spectrum(w / w.sum())


def _bipartite(f):
    if f.n != 2:
        raise UnsupportedError(f"partial transpose needs a bipartite factorization, got {f}")
    return f.factors


def partial_transpose(rho, f, subsystem=1):
    """Transpose the indices of one tensor factor of a bipartite operator.

    With ``subsystem=1`` the entry ``rho[(j, a), (i, b)]`` moves to
    position ``((i, a), (j, b))``. ``rho`` may carry leading batch axes.
    """
    d1, d2 = _bipartite(f)
    if subsystem not in (1, 2):
        raise DomainError(f"subsystem must be 1 or 2, got {subsystem!r}")
    a = _as_matrix(rho)
    n = d1 * d2
    if a.shape[-2:] != (n, n):
        raise ValidationError(f"operator shape {a.shape[-2:]} does not match factorization {f}")
    batch = a.shape[:-2]
    t = a.reshape(batch + (d1, d2, d1, d2))
    k = len(batch)
    axes = list(range(k)) + [k + 2, k + 1, k, k + 3] if subsystem == 1 else list(range(k)) + [k, k + 3, k + 2, k + 1]
    return t.transpose(axes).reshape(batch + (n, n))


def ppt_mask(states, f, tol=STATE_TOL):
    """Boolean mask over a stack of states: partial transpose is PSD up to ``tol``."""
    pt = partial_transpose(states, f, 1)
    try:
        lo = np.linalg.eigvalsh(pt)[..., 0]
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    return lo >= -tol


def is_ppt(rho, f, tol=STATE_TOL):
    """Peres test: does ``rho`` have a positive partial transpose?"""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    return bool(ppt_mask(rho.entries, f, tol))


def _psd_sqrt(a):
    w, v = np.linalg.eigh(a)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def bures_distance(rho1, rho2):
    """``sqrt(2 - 2 tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))``."""
    if not isinstance(rho1, DensityMatrix):
        rho1 = DensityMatrix(rho1)
    if not isinstance(rho2, DensityMatrix):
        rho2 = DensityMatrix(rho2)
    if rho1.N != rho2.N:
        raise ValidationError(f"dimension mismatch: {rho1.N} vs {rho2.N}")
    try:
        s = _psd_sqrt(rho1.entries)
        m = s @ rho2.entries @ s
        w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    fid = min(float(np.sum(np.sqrt(np.clip(w, 0.0, None)))), 1.0)
    return math.sqrt(max(2.0 - 2.0 * fid, 0.0))


def _check_t(t):
    t = float(t)
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t!r}")
    return t


def k_tube_map(lam, t):
    """Image of spectra ``lam`` under ``rho -> t rho + (1 - t) Id/N``."""
    t = _check_t(t)
    lam = np.asarray(lam, dtype=float)
    return (1.0 - t) / lam.shape[-1] + t * lam


def k_face_map(lam, t):
    """``(1 - t + t l_1, t l_2, ..., t l_N)`` for sorted spectra ``lam``."""
    t = _check_t(t)
    out = t * np.asarray(lam, dtype=float)
    out[..., 0] += 1.0 - t
    return out


def k_tube_mask(spectra, t, tol=SPECTRUM_TOL):
    """Membership in ``K_t``: every eigenvalue is at least ``(1 - t)/N``."""
    t = _check_t(t)
    s = np.asarray(spectra, dtype=float)
    return s.min(axis=-1) >= (1.0 - t) / s.shape[-1] - tol


def k_face_mask(spectra, t, tol=SPECTRUM_TOL):
    """Membership in ``K^t`` for descending spectra.

    Inverting the defining map gives ``l_1 = (s_1 - 1 + t)/t`` and
    ``l_k = s_k / t``; the preimage is a sorted probability vector iff
    ``s_1 >= 1 - t`` and ``s_1 - (1 - t) >= s_2``.
    """
    t = _check_t(t)
    s = np.asarray(spectra, dtype=float)
    head = s[..., 0] - (1.0 - t)
    ok = head >= -tol
    if s.shape[-1] > 1:
        ok &= head >= s[..., 1] - tol
    return ok


def _spectrum(s):
    return s if isinstance(s, Spectrum) else Spectrum(s)


def in_K_tube(s, t):
    """Is a state with spectrum ``s`` in ``t D + (1 - t) rho_max``?"""
    return bool(k_tube_mask(_spectrum(s).values, t))


def in_K_face(s, t):
    """Is a state with spectrum ``s`` in the face body ``K^t``?"""
    return bool(k_face_mask(_spectrum(s).values, t))
