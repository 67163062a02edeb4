"""Vectorised set-membership predicates for the estimators.

A predicate maps a chunk of draws to a boolean mask. It receives the
``(m, N)`` array of descending spectra and, when ``needs_states`` is set,
the ``(m, N, N)`` stack of density matrices.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..states import HilbertFactorization, k_face_mask, k_tube_mask, ppt_mask

__all__ = ["SetPredicate", "as_predicate", "full_set", "k_tube", "k_face", "ppt", "complement"]


@dataclass(frozen=True)
class SetPredicate:
    name: str
    mask: Callable
    needs_states: bool = False
    params: dict = field(default_factory=dict)

    def __call__(self, spectra, states=None):
        return np.asarray(self.mask(spectra, states), dtype=bool)


def as_predicate(obj):
    """Wrap a bare ``f(spectra, states) -> mask`` callable (states always supplied)."""
    if obj is None:
        return full_set()
    if isinstance(obj, SetPredicate):
        return obj
    if callable(obj):
        return SetPredicate(getattr(obj, "__name__", "custom"), obj, needs_states=True)
    raise TypeError(f"not a predicate: {obj!r}")


def full_set():
    return SetPredicate("full", lambda s, _: np.ones(s.shape[0], dtype=bool))


def k_tube(t):
    k_tube_mask(np.ones((1, 1)), t)  # validates t eagerly
    return SetPredicate("ktube", lambda s, _: k_tube_mask(s, t), params={"t": float(t)})


def k_face(t):
    k_face_mask(np.ones((1, 1)), t)
    return SetPredicate("kface", lambda s, _: k_face_mask(s, t), params={"t": float(t)})


def ppt(factorization):
    if not isinstance(factorization, HilbertFactorization):
        factorization = HilbertFactorization.parse(str(factorization))
    ppt_mask(np.eye(factorization.N) / factorization.N, factorization)  # rejects non-bipartite
    return SetPredicate(
        "ppt", lambda _, rho: ppt_mask(rho, factorization), needs_states=True, params={"H": str(factorization)}
    )


def complement(pred):
    pred = as_predicate(pred)
    return SetPredicate(f"not {pred.name}", lambda s, rho: ~pred(s, rho), pred.needs_states, dict(pred.params))
