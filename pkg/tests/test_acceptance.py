"""Acceptance criteria, one test per criterion.

Each test records a one-line PASS/FAIL verdict; the lines are printed in the
pytest terminal summary (see ``conftest.py``) and when this file is run as a
script.
"""

import math
from dataclasses import replace
from itertools import combinations

import numpy as np
import pytest
from scipy.stats import unitary_group

from qgeom.bounds import c1, lemma1_sandwich, log_I, theorem2_constant
from qgeom.measures import BURES, HS, exact_bures_volume, exact_hs_volume, log_density_ratio, log_density_ratio_floor
from qgeom.montecarlo import (
    batch_spectra,
    estimate_bures_probability,
    estimate_bures_volume,
    estimate_bures_volume_of_D,
    estimate_hs_probability,
    estimate_selberg_integral,
    estimate_vr,
    hs_states,
    k_tube,
    ppt,
)
from qgeom.montecarlo.rng import RngStream
from qgeom.specfun import GAMMA_RECIPROCAL_BOUND, log_gamma
from qgeom.states import HilbertFactorization, is_ppt, partial_transpose

RESULTS = {}


def record(key, title, checks):
    """``checks`` is a list of (label, ok) pairs; the criterion passes iff all do."""
    failed = [label for label, ok in checks if not ok]
    verdict = "PASS" if not failed else "FAIL"
    detail = f"{len(checks)} checks" if not failed else "failed: " + "; ".join(failed)
    line = f"[{verdict}] {key} {title} ({detail})"
    RESULTS[key] = line
    print(line)
    assert not failed, line


def within(est, target, k=3.0):
    return abs(est.estimate - target) <= k * est.std_error


def same(a, b):
    return replace(a, elapsed_ms=0) == replace(b, elapsed_ms=0)


def overlap(a, b):
    return a.ci95[0] <= b.ci95[1] and b.ci95[0] <= a.ci95[1]


def test_ac1_hemisphere_identity():
    checks = []
    for N in range(2, 9):
        d = N * N - 1
        closed = 0.5 * (d + 1) * math.log(math.pi) - d * math.log(2.0) - log_gamma(0.5 * (d + 1))
        err = abs(exact_bures_volume(N).log_value - closed)
        checks.append((f"N={N} |dlog|={err:.1e}", err <= 1e-12))
    record("AC1", "hemisphere identity for V_B(D), N=2..8", checks)


def test_ac2_c1_table():
    checks = [(f"c1({N})={c1(N):.5f} vs {ref}", abs(c1(N) - ref) <= 5e-4) for N, ref in [(4, 0.7572), (6, 0.7686), (8, 0.7728), (10, 0.7748)]]
    v = c1(64)
    checks.append((f"c1(64)={v:.6f} in (0.775, 0.7788]", 0.775 < v <= 0.7788))
    record("AC2", "c1(N) constants table", checks)


def test_ac3_theorem2_envelope():
    checks = []
    for N, ref in [(4, 2.5164), (6, 2.2137), (8, 2.0478)]:
        m = theorem2_constant(N, 1e-12, 200)
        checks.append((f"N={N} max ratio {m:.4f} <= {ref}*1.001", m <= ref * 1.001))
    record("AC3", "grid constant of the explicit VR_B bound below published C1(N)", checks)


def test_ac4_selberg_identities():
    checks = []
    for N in range(2, 7):
        err = abs(log_I(N, 0.0) - (exact_hs_volume(N).log_value - 0.5 * math.log(N)))
        checks.append((f"ln I(0) N={N} err={err:.1e}", err <= 1e-10))
    target = math.exp(log_I(2, 2.0))
    mc = estimate_selberg_integral(2, 2.0, 1_000_000, 2024)
    checks.append((f"I(2) N=2 exact {target:.5f} vs MC {mc.estimate:.5f}+/-{mc.std_error:.5f}", within(mc, target)))
    record("AC4", "I(p) identities", checks)


def test_ac5_bures_volume_mc():
    checks = []
    for N in (2, 3):
        exact = exact_bures_volume(N).value
        e = estimate_bures_volume_of_D(N, 1_000_000, 5)
        z = (e.estimate - exact) / e.std_error
        rel = abs(e.estimate / exact - 1)
        checks.append((f"N={N} z={z:+.2f} rel={rel:.2%}", abs(z) <= 3 and rel < 0.01))
    record("AC5", "MC Bures volume of D recovers the exact value", checks)


def test_ac6_tube_optimality():
    checks = []
    for N in (2, 3):
        for t in (0.25, 0.5):
            h = estimate_vr(N, k_tube(t), HS, 2_000_000, 10 * N + int(4 * t))
            checks.append((f"VR_HS N={N} t={t}: {h.estimate:.4f}+/-{h.std_error:.4f}", within(h, t)))
            b = estimate_vr(N, k_tube(t), BURES, 1_000_000, 10 * N + int(4 * t))
            checks.append((f"VR_B N={N} t={t}: {b.estimate:.4f} <= 4t", b.estimate <= 4 * t + 3 * b.std_error))
    record("AC6", "K_t optimality pair", checks)


def test_ac7_lemma1_on_mc():
    checks = []
    for N in (2, 3):
        d = N * N - 1
        for t in (0.25, 0.5, None):
            log_vhs = exact_hs_volume(N).log_value + (d * math.log(t) if t else 0.0)
            env = lemma1_sandwich(N, log_vhs, 2.0)
            e = estimate_bures_volume(N, 1_000_000, 100 + N, k_tube(t) if t else None)
            lv, se = e.log_estimate, e.log_std_error
            ok = env.lower_log - 3 * se <= lv <= env.upper_log + 3 * se
            checks.append((f"N={N} K={'K_' + str(t) if t else 'D'}: {env.lower_log:.3f} <= {lv:.3f} <= {env.upper_log:.3f}", ok))
    record("AC7", "HS-to-Bures volume sandwich contains MC ln V_B(K)", checks)


def test_ac8_hs_sampler_and_ppt_stability():
    checks = []
    n = 100_000
    rho = hs_states(2, n, RngStream(808).generator())
    purity = np.einsum("kij,kji->k", rho, rho).real
    se = purity.std(ddof=1) / math.sqrt(n)
    checks.append((f"E tr rho^2 = {purity.mean():.5f}+/-{se:.5f}", abs(purity.mean() - 0.8) <= 3 * se))
    pred = ppt("2x2")
    runners = {
        "HS": lambda s: estimate_hs_probability(4, pred, 1_000_000, s),
        "Bures": lambda s: estimate_bures_probability(4, pred, 1_000_000, s, proposal="dirichlet"),
    }
    for name, run in runners.items():
        runs = [run(s) for s in range(1, 6)]
        checks.append((f"{name} PPT bit-for-bit rerun", same(runs[0], run(1))))
        summary = ", ".join(f"{r.estimate:.4f}" for r in runs)
        checks.append((f"{name} PPT pairwise CI overlap over 5 seeds [{summary}]", all(overlap(a, b) for a, b in combinations(runs, 2))))
    record("AC8", "HS sampler purity and 2x2 PPT stability", checks)


def test_ac9_property_suites():
    checks = []
    rng = np.random.default_rng(909)
    dup = max(
        abs(log_gamma(z) + log_gamma(z + 0.5) - ((1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z)))
        for z in (1.0, 2.5, 8.0, 50.0)
    )
    checks.append((f"Legendre duplication err {dup:.1e}", dup <= 1e-11))
    rec = max(abs(log_gamma(x + 1) - log_gamma(x) - math.log(x)) for x in (0.1, 1.0, 10.0, 1000.0))
    checks.append((f"recurrence err {rec:.1e}", rec <= 1e-12))
    grid = np.linspace(0.0, 1.0, 1002)[1:-1]
    gam = np.array([math.exp(log_gamma(x)) for x in grid])
    checks.append(("Gamma(x) <= 1/x on (0,1)", bool(np.all(gam <= 1.0 / grid))))
    low_bad = int(np.count_nonzero(1.0 / (GAMMA_RECIPROCAL_BOUND * grid) > gam))
    checks.append((f"1/(theta x) <= Gamma(x) with theta={GAMMA_RECIPROCAL_BOUND}: {low_bad} grid violations", low_bad == 0))

    floor = True
    for N in (2, 3, 4):
        lam = -np.sort(-rng.dirichlet(np.ones(N), size=10_000), axis=-1)
        floor &= bool(np.all(log_density_ratio(lam) >= log_density_ratio_floor(N) - 1e-12))
    checks.append(("density-ratio floor on 10^4 spectra, N=2,3,4", floor))

    invol, lu = True, True
    for factors in ((2, 2), (2, 3)):
        f = HilbertFactorization(factors)
        for _ in range(100):
            g = rng.standard_normal((f.N, f.N)) + 1j * rng.standard_normal((f.N, f.N))
            r = g @ g.conj().T
            r /= np.trace(r).real
            q = rng.uniform()
            r = q * r + (1 - q) * np.eye(f.N) / f.N
            invol &= bool(np.allclose(partial_transpose(partial_transpose(r, f), f), r, atol=1e-15))
            u = np.kron(unitary_group.rvs(factors[0], random_state=rng), unitary_group.rvs(factors[1], random_state=rng))
            lu &= is_ppt(u @ r @ u.conj().T, f) == is_ppt(r, f)
    checks.append(("partial-transpose involution", invol))
    checks.append(("PPT invariant under local unitaries", lu))

    a = estimate_bures_probability(4, ppt("2x2"), 50_000, 77, chunks=8)
    checks.append(("reproducibility (seed, n, chunks)", same(a, estimate_bures_probability(4, ppt("2x2"), 50_000, 77, chunks=8))))
    checks.append(("thread count irrelevant with pinned chunks", same(a, estimate_bures_probability(4, ppt("2x2"), 50_000, 77, chunks=8, threads=1))))
    x = estimate_hs_probability(4, ppt("2x2"), 200_000, 78, chunks=1)
    y = estimate_hs_probability(4, ppt("2x2"), 200_000, 78, chunks=8)
    checks.append(("1 vs 8 chunks within 3 combined SE", abs(x.estimate - y.estimate) <= 3 * math.hypot(x.std_error, y.std_error)))
    record("AC9", "module property suites", checks)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn()
            except AssertionError:
                pass
