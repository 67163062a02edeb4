"""Seeded, chunk-parallel Monte Carlo over random states and spectra."""

from .estimators import (
    MIN_SAMPLES,
    EstimateWithError,
    dump_weighted_samples,
    estimate_bures_probability,
    estimate_bures_volume,
    estimate_bures_volume_of_D,
    estimate_hs_probability,
    estimate_selberg_integral,
    estimate_vr,
)
from .predicates import SetPredicate, as_predicate, complement, full_set, k_face, k_tube, ppt
from .rng import ALGORITHM_ID, RngStream, chunk_sizes
from .samplers import (
    batch_spectra,
    haar_unitaries,
    hs_states,
    sample_haar_unitary,
    sample_hs_state,
    sample_simplex_uniform,
    simplex_points,
)
