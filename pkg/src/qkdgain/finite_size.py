# ABOUTME: Finite-size estimates around the asymptotic gain formulas
# ABOUTME: Hoeffding window on the multi-photon count, final key length and coverage checks
"""Finite-size estimates for qkdgain

The asymptotic gain uses the expected multi-photon count <m> = Sm n_tot. For a
finite run the realized count deviates; Hoeffding's inequality bounds the deviation
by delta n_tot with probability above 1 - exp(-2 n_tot delta^2). These helpers
evaluate the gain at the upper edge of that window and size the final key.
"""

import math
from dataclasses import replace

import numpy as np

from qkdgain.channel_model import ClickModel
from qkdgain.exceptions import ParameterDomainError
from qkdgain.key_rate import EcModel, RatePoint, gain_multi, hoeffding_delta
from qkdgain.photon_sources import PhotonStats
from qkdgain.validation import require_nonnegative, require_positive, require_probability

__all__ = [
    "hoeffding_confidence",
    "multiphoton_count_bound",
    "finite_size_gain",
    "final_key_length",
    "residual_information_bound",
    "hoeffding_coverage",
]


def hoeffding_confidence(n_tot: float, delta: float) -> float:
    """Lower bound 1 - exp(-2 n_tot delta^2) on P(|<m> - m| <= delta n_tot)"""
    require_positive("n_tot", n_tot)
    require_nonnegative("delta", delta)
    return -math.expm1(-2.0 * n_tot * delta * delta)


def multiphoton_count_bound(s_m: float, n_tot: float, delta: float) -> float:
    """Upper edge <m> + delta n_tot of the multi-photon count, capped at n_tot"""
    require_probability("s_m", s_m)
    require_positive("n_tot", n_tot)
    require_nonnegative("delta", delta)
    return min(n_tot, (s_m + delta) * n_tot)


def finite_size_gain(
    stats: PhotonStats,
    click: ClickModel,
    ec: EcModel,
    n_tot: float,
    confidence: float,
) -> tuple[float, RatePoint]:
    """Gain with the multi-photon probability raised to the Hoeffding upper edge

    Args:
        stats: Post-selected photon statistics
        click: Click model at Bob
        ec: Error-correction cost model
        n_tot: Number of post-selected signals in the run
        confidence: Probability with which the multi-photon bound must hold

    Returns:
        (delta, RatePoint evaluated with Sm replaced by min(1, Sm + delta))
    """
    delta = hoeffding_delta(n_tot, confidence)
    pessimistic = replace(stats, sm=min(1.0, stats.sm + delta))
    return delta, gain_multi(pessimistic, click, ec)


def final_key_length(n_sif: float, tau: float, n_s: float, ec_bits: float = 0.0) -> float:
    """Length of the final key after error correction and privacy amplification

    Args:
        n_sif: Sifted key length
        tau: Shrinking fraction of privacy amplification
        n_s: Security parameter (extra bits sacrificed)
        ec_bits: Bits disclosed during error correction

    Returns:
        n_sif (1 - tau) - ec_bits - n_s, floored at zero
    """
    require_nonnegative("n_sif", n_sif)
    require_probability("tau", tau)
    require_nonnegative("n_s", n_s)
    require_nonnegative("ec_bits", ec_bits)
    return max(0.0, n_sif * (1.0 - tau) - ec_bits - n_s)


def residual_information_bound(n_s: float) -> float:
    """Upper bound 2^(-n_s) / ln 2 on the Shannon information left to Eve, in bits"""
    require_nonnegative("n_s", n_s)
    return float(2.0 ** (-n_s) / math.log(2.0))


def hoeffding_coverage(
    n_tot: int,
    s_m: float,
    delta: float,
    trials: int,
    seed: int = 0,
) -> float:
    """Empirical probability that a binomial multi-photon count stays in the window

    Args:
        n_tot: Signals per run
        s_m: Multi-photon probability per signal
        delta: Half-width of the window relative to n_tot
        trials: Number of simulated runs
        seed: Seed of the numpy generator

    Returns:
        Fraction of runs with |<m> - m| <= delta n_tot
    """
    if n_tot < 1:
        raise ParameterDomainError("n_tot", n_tot, ">= 1")
    if trials < 1:
        raise ParameterDomainError("trials", trials, ">= 1")
    require_probability("s_m", s_m)
    require_nonnegative("delta", delta)

    rng = np.random.default_rng(seed)
    counts = rng.binomial(n_tot, s_m, size=trials)
    inside = np.abs(counts - s_m * n_tot) <= delta * n_tot
    return float(np.mean(inside))
