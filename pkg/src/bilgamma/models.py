"""Shipped model grid used by the verification suite and the test suite.

Six models spanning n in {1, 2, 5} with mixed weights and non-integer
shapes, plus dedicated models for pricing (dominant positive part with
every alpha_j/w1_j above 1) and for the bounds whose amplification factor
requires g > h.
"""

from __future__ import annotations

from .combo import LinearCombinationModel


def _m(rows) -> LinearCombinationModel:
    return LinearCombinationModel.from_components(rows)


# (alpha, p, beta, q, w1, w2) per component
MODEL_GRID: dict[str, LinearCombinationModel] = {
    # difference of two unit exponentials: Laplace with density e^(-|x|)/2
    "laplace": _m([(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)]),
    # one skewed component with unequal weights
    "single_asym": _m([(2.0, 3.0, 5.0, 0.5, 1.3, 0.7)]),
    # two components, unit shapes/weights; the positive side mixes to the
    # geometric pmf P(L=k) = (1/2)^(k+1)
    "pair_integer": _m([(1.0, 1.0, 3.0, 1.0, 1.0, 1.0),
                        (2.0, 1.0, 4.0, 1.0, 1.0, 1.0)]),
    # two components, non-integer shapes, mixed weights
    "pair_nonint": _m([(1.5, 0.7, 2.0, 1.2, 1.0, 0.8),
                       (2.5, 1.8, 3.5, 0.4, 0.5, 1.2)]),
    # two nearly-balanced components with g > h (amplification factor valid)
    "pair_kappa": _m([(3.0, 0.8, 3.0, 1.1, 1.0, 1.0),
                      (4.0, 1.2, 4.0, 0.9, 1.0, 1.0)]),
    # five components, mixed everything
    "five_mixed": _m([(1.2, 0.3, 2.2, 0.5, 1.0, 1.0),
                      (2.0, 1.1, 3.0, 0.8, 0.7, 0.9),
                      (3.1, 0.9, 1.8, 1.3, 1.1, 0.6),
                      (4.0, 0.6, 2.6, 0.4, 0.8, 1.0),
                      (2.7, 1.4, 4.2, 1.0, 0.9, 1.3)]),
}

# single component with g > h whose self-target bound vanishes termwise
KAPPA_SINGLE = _m([(2.0, 1.3, 2.0, 0.7, 1.0, 1.0)])

# gamma-driven pricing model: eta = 4 > 1, negligible negative part
PRICING_GAMMA = _m([(3.0, 1.1, 1.0e8, 1.0e-8, 1.0, 1.0),
                    (4.0, 0.9, 1.0e8, 1.0e-8, 1.0, 1.0)])

# martingale-calibration model: every lam_j > 2 so e^X has finite variance
MARTINGALE = _m([(6.0, 1.0, 4.0, 0.9, 1.5, 1.0),
                 (5.0, 0.8, 7.0, 1.1, 1.0, 1.0)])
