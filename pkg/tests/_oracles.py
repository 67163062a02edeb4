"""Frozen reference values produced by ``tests/oracles/compute_oracles.py`` (mpmath, 40 digits)."""

LOG_GAMMA = {
    1e-6: 13.815509980749431714,
    0.001: 6.9071788853838536617,
    0.25: 1.2880225246980774574,
    0.5: 0.57236494292470008707,
    0.999: 0.00057803853289138023817,
    1.5: -0.12078223763524522235,
    1.999: -0.00042246180069210728418,
    2.001: 0.00042310673480011699119,
    3.7: 1.4280723266653881292,
    8.0: 8.5251613610654143002,
    11.5: 16.29200047656724132,
    12.5: 18.734347511936445702,
    100.25: 360.28455963776423497,
    1e4: 82099.717496442377273,
    1e6: 12815504.56914761166,
}

LN_HS_VOLUME = {
    2: 0.39269118746126313746,
    3: -3.8485183786232136226,
    4: -13.693955155036873045,
    5: -29.938279297665868237,
    6: -53.221687650014890805,
    7: -84.075846744182254672,
    8: -122.95417297298642796,
}

LN_BURES_VOLUME = {
    2: 0.21001823001896442004,
    3: -2.8476295289997039122,
    4: -9.7645299826693925483,
    5: -21.060756272257630951,
    6: -37.160086824445771579,
    7: -58.415676989736336029,
    8: -85.129139581411059552,
}

C1 = {
    2: 0.699350576389,
    3: 0.742006035803,
    4: 0.757223890949,
    6: 0.768578137433,
    8: 0.772780016964,
    10: 0.774809396944,
    64: 0.778674250815,
}

# I(2) at N = 2 by adaptive quadrature of the two-point chamber integral.
SELBERG_I2_N2 = 12.9018312472617
# E[lambda_1] under the normalised N = 2 HS eigen-density (2x - 1)^2 on [1/2, 1].
MEAN_LAMBDA1_N2 = 0.875
THEOREM2_BOUND_4_1 = 2.07456401755107
# 1 / min_{x>0} Gamma(1 + x), the sharp constant of 1/(c x) <= Gamma(x) on (0, 1).
GAMMA_MIN_RECIPROCAL = 1.129173885450141
