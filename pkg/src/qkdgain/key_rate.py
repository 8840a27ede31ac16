# ABOUTME: Error-correction cost, privacy-amplification shrinking and secure gain formulas
# ABOUTME: Single-photon and multi-photon (photon-number-splitting) gain per time slot
"""Secure key rate formulas for qkdgain

Gains are asymptotic: the security parameter of privacy amplification and the
collision probability of the full key drop out in the limit of long keys, so only
the per-bit shrinking fraction tau1 enters. Bits from multi-photon signals are
assumed fully known to Eve and all observed errors are charged to single-photon
signals.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Literal

from scipy import optimize

from qkdgain.channel_model import ClickModel
from qkdgain.exceptions import NoClicksError, ParameterDomainError
from qkdgain.photon_sources import PhotonStats
from qkdgain.validation import require_positive, require_probability

__all__ = [
    "EcMode",
    "EcModel",
    "RatePoint",
    "BRASSARD_SALVAIL_TABLE",
    "SHANNON",
    "BRASSARD_SALVAIL",
    "ec_model",
    "binary_entropy",
    "shannon_ec_cost",
    "ec_factor",
    "collision_prob_single",
    "tau1",
    "tau1_multiphoton",
    "gain_single",
    "gain_multi",
    "gain_from_counts",
    "hoeffding_delta",
    "single_photon_threshold",
]

EcMode = Literal["shannon", "table"]

# (error rate, redundancy relative to the Shannon limit) for bi-directional reconciliation
BRASSARD_SALVAIL_TABLE: tuple[tuple[float, float], ...] = (
    (0.01, 1.16),
    (0.05, 1.16),
    (0.1, 1.22),
    (0.15, 1.35),
)

HALF = 0.5


@dataclass(frozen=True)
class EcModel:
    """Cost model of error correction

    Attributes:
        mode: "shannon" for the ideal f = 1, "table" for interpolated f[e]
        table: (e, f[e]) pairs with strictly increasing e and f >= 1
    """

    mode: EcMode = "table"
    table: tuple[tuple[float, float], ...] = field(default=BRASSARD_SALVAIL_TABLE)

    def __post_init__(self) -> None:
        if self.mode not in ("shannon", "table"):
            raise ParameterDomainError("ec mode", self.mode, "'shannon' or 'table'")
        if self.mode == "table":
            if not self.table:
                raise ParameterDomainError("ec table", "()", "at least one (e, f) row")
            rates = [e for e, _ in self.table]
            if any(b <= a for a, b in zip(rates, rates[1:])):
                raise ParameterDomainError(
                    "ec table", ", ".join(f"{e:g}" for e in rates), "strictly increasing e"
                )
            for _, factor in self.table:
                if factor < 1.0:
                    raise ParameterDomainError("f[e]", factor, ">= 1")


SHANNON = EcModel(mode="shannon")
BRASSARD_SALVAIL = EcModel(mode="table")


def ec_model(mode: str) -> EcModel:
    """EcModel for a mode name ("shannon" or "table")"""
    if mode == "shannon":
        return SHANNON
    if mode == "table":
        return BRASSARD_SALVAIL
    raise ParameterDomainError("ec mode", mode, "'shannon' or 'table'")


@dataclass(frozen=True)
class RatePoint:
    """Observables and derived quantities at one operating point

    Attributes:
        p_post: Post-selection probability per slot
        p_exp: Click probability per post-selected slot (n_sif/n_tot)
        p_signal: Signal part of p_exp
        e: Error rate of the sifted key
        sm: Multi-photon probability of the post-selected signals
        tau1: Privacy-amplification shrinking fraction
        ec_cost: Error-correction bits per sifted bit, f[e] * h(e)
        gain_raw: Secure bits per slot, possibly negative
        gain: max(gain_raw, 0)
        secure: True when gain_raw > 0
    """

    p_post: float
    p_exp: float
    p_signal: float
    e: float
    sm: float
    tau1: float
    ec_cost: float
    gain_raw: float
    gain: float
    secure: bool


def _xlog2x(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log2(x)


def binary_entropy(e: float) -> float:
    """Binary entropy h(e) in bits, with 0 log 0 = 0"""
    return -_xlog2x(e) - _xlog2x(1.0 - e)


def shannon_ec_cost(e: float) -> float:
    """Shannon limit of error-correction bits per sifted bit

    Args:
        e: Error rate in [0, 1]

    Returns:
        -e log2 e - (1-e) log2 (1-e)
    """
    require_probability("e", e)
    return binary_entropy(e)


def ec_factor(model: EcModel, e: float) -> float:
    """Redundancy factor f[e] of the error-correction protocol

    Table mode interpolates linearly between rows and clamps to the end rows
    outside the tabulated range.
    """
    require_probability("e", e)
    if model.mode == "shannon":
        return 1.0

    rates = [row[0] for row in model.table]
    if e <= rates[0]:
        return model.table[0][1]
    if e >= rates[-1]:
        return model.table[-1][1]

    index = bisect_right(rates, e)
    (e_lo, f_lo), (e_hi, f_hi) = model.table[index - 1], model.table[index]
    return f_lo + (f_hi - f_lo) * (e - e_lo) / (e_hi - e_lo)


def collision_prob_single(e: float) -> float:
    """Collision probability bound for one corrected sifted bit from a single photon"""
    require_probability("e", e)
    if e >= HALF:
        return 1.0
    return 0.5 + 2.0 * e - 2.0 * e * e


def tau1(e: float) -> float:
    """Shrinking fraction of privacy amplification for single-photon signals"""
    require_probability("e", e)
    if e >= HALF:
        return 1.0
    return math.log2(1.0 + 4.0 * e - 4.0 * e * e)


def tau1_multiphoton(e: float, multi_fraction: float) -> float:
    """Shrinking fraction when a fraction of sifted bits stems from multi-photon signals

    Args:
        e: Observed error rate of the sifted key
        multi_fraction: Share of sifted bits from multi-photon signals (Sm / p_exp)

    Returns:
        1 + beta * log2 p_c(e / beta) with beta = 1 - multi_fraction; errors are
        rescaled onto the single-photon bits and saturate at 1/2
    """
    require_probability("e", e)
    require_probability("multi_fraction", multi_fraction)
    beta = 1.0 - multi_fraction
    if beta <= 0.0:
        return 1.0
    rescaled = min(HALF, e / beta)
    return 1.0 + beta * math.log2(collision_prob_single(rescaled))


def _surviving_fraction(e: float, multi_fraction: float) -> float:
    """Fraction of sifted bits left after privacy amplification, 1 - tau1

    When multi-photon signals account for every click no bit survives, and only the
    error-correction cost is left.
    """
    if multi_fraction >= 1.0:
        return 0.0
    return 1.0 - tau1_multiphoton(e, multi_fraction)


def _rate_point(
    p_post: float,
    p_exp: float,
    p_signal: float,
    e: float,
    sm: float,
    surviving: float,
    ec_cost: float,
) -> RatePoint:
    gain_raw = 0.5 * p_post * p_exp * (surviving - ec_cost)
    return RatePoint(
        p_post=p_post,
        p_exp=p_exp,
        p_signal=p_signal,
        e=e,
        sm=sm,
        tau1=min(1.0, 1.0 - surviving),
        ec_cost=ec_cost,
        gain_raw=gain_raw,
        gain=max(gain_raw, 0.0),
        secure=gain_raw > 0.0,
    )


def gain_single(e: float, p_exp: float, ec: EcModel) -> RatePoint:
    """Secure gain per slot for single-photon signals

    Args:
        e: Error rate of the sifted key
        p_exp: Click probability at Bob
        ec: Error-correction cost model

    Returns:
        RatePoint with G = 1/2 p_exp {1 - tau1(e) - f[e] h(e)}
    """
    require_probability("e", e)
    require_positive("p_exp", p_exp)
    require_probability("p_exp", p_exp)
    ec_cost = ec_factor(ec, e) * binary_entropy(e)
    return _rate_point(1.0, p_exp, p_exp, e, 0.0, 1.0 - tau1(e), ec_cost)


def gain_multi(stats: PhotonStats, click: ClickModel, ec: EcModel) -> RatePoint:
    """Secure gain per slot for sources with a multi-photon component

    Args:
        stats: Post-selected photon statistics of the source
        click: Click model at Bob for the same source
        ec: Error-correction cost model

    Returns:
        RatePoint expressed in measurable quantities p_post, p_exp, e and Sm

    Raises:
        NoClicksError: If p_exp is zero
    """
    p_exp = click.p_exp
    if p_exp <= 0.0:
        raise NoClicksError()

    e = click.e
    ec_cost = ec_factor(ec, e) * binary_entropy(e)
    surviving = _surviving_fraction(e, stats.sm / p_exp)
    return _rate_point(stats.p_post, p_exp, click.p_signal, e, stats.sm, surviving, ec_cost)


def gain_from_counts(
    n_tot: float,
    n_sif: float,
    m: float,
    e: float,
    ec: EcModel,
    p_post: float = 1.0,
) -> RatePoint:
    """Gain predicted from raw experiment counts

    Args:
        n_tot: Post-selected signals sent by Alice
        n_sif: Bob's clicks (sifting happens in half of them)
        m: Expected number of multi-photon signals among them, Sm * n_tot
        e: Observed error rate
        ec: Error-correction cost model
        p_post: Post-selection probability

    Returns:
        RatePoint identical to gain_multi with p_exp = n_sif/n_tot and Sm = m/n_tot
    """
    require_positive("n_tot", n_tot)
    require_positive("n_sif", n_sif)
    if n_sif > n_tot:
        raise ParameterDomainError("n_sif", n_sif, f"<= n_tot = {n_tot}")
    if m < 0:
        raise ParameterDomainError("m", m, ">= 0")

    require_probability("e", e)
    p_exp = n_sif / n_tot
    ec_cost = ec_factor(ec, e) * binary_entropy(e)
    if m < n_sif:
        single_share = (n_sif - m) / n_sif
        rescaled = min(HALF, e * n_sif / (n_sif - m))
        surviving = single_share * (1.0 - math.log2(1.0 + 4.0 * rescaled * (1.0 - rescaled)))
    else:
        surviving = _surviving_fraction(e, m / n_sif)
    return _rate_point(p_post, p_exp, p_exp, e, m / n_tot, surviving, ec_cost)


def hoeffding_delta(n_tot: float, confidence: float) -> float:
    """Deviation delta such that |<m> - m| <= delta n_tot holds with the given confidence

    Args:
        n_tot: Number of signals, >= 1
        confidence: Target probability P in (0, 1)

    Returns:
        sqrt(ln(1/(1-P)) / (2 n_tot))
    """
    require_positive("n_tot", n_tot)
    if n_tot < 1:
        raise ParameterDomainError("n_tot", n_tot, ">= 1")
    if not 0.0 < confidence < 1.0:
        raise ParameterDomainError("confidence", confidence, "a probability in (0, 1)")
    return math.sqrt(-math.log1p(-confidence) / (2.0 * n_tot))


def single_photon_threshold(ec: EcModel, tol: float = 1e-10) -> float:
    """Largest error rate with positive single-photon gain on a lossless channel

    Args:
        ec: Error-correction cost model
        tol: Absolute tolerance of the bisection in e

    Returns:
        Root of gain_single(e, p_exp=1) in (0, 1/2)
    """
    return float(
        optimize.bisect(
            lambda e: gain_single(e, 1.0, ec).gain_raw,
            1e-9,
            0.25,
            xtol=tol,
        )
    )
