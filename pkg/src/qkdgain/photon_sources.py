# ABOUTME: Photon-number statistics of BB84 signal sources after Alice's post-selection
# ABOUTME: Closed forms for weak coherent pulses, triggered downconversion and single photons
"""Photon sources for qkdgain

Every source is described by the probabilities S0, S1 and Sm that a post-selected
signal carries zero, one or more than one photon, together with the post-selection
probability p_post per time slot. The statistics are always conditioned on
post-selection; unconditional per-slot quantities are formed by multiplying with
p_post explicitly.

The downconversion source follows a two-mode squeezed state with tanh^2(chi) as the
geometric ratio of the photon-number distribution. Alice's trigger detector has
efficiency eta_a and dark-count probability dark_a; the signal photon is coupled into
the fiber with efficiency eta_c. All sums over photon number use geometric-series
closed forms.
"""

import math
from dataclasses import dataclass, replace
from typing import Literal, TypeAlias

from scipy import special

from qkdgain.exceptions import DegenerateSourceError, ParameterDomainError
from qkdgain.validation import (
    require_efficiency,
    require_open_probability,
    require_positive,
    require_probability,
)

__all__ = [
    "PhotonStats",
    "WcpSource",
    "PdcSource",
    "SinglePhotonSource",
    "Source",
    "SourceKind",
    "wcp_stats",
    "pdc_stats",
    "single_photon_stats",
    "photon_stats",
    "signal_detection_prob",
    "source_kind",
    "mean_photon_number",
    "with_mean_photon_number",
]

SourceKind: TypeAlias = Literal["wcp", "pdc", "single"]


@dataclass(frozen=True)
class PhotonStats:
    """Photon-number probabilities conditioned on post-selection

    Attributes:
        s0: Probability of an empty signal
        s1: Probability of exactly one photon
        sm: Probability of two or more photons
        p_post: Probability per time slot that Alice accepts the slot
    """

    s0: float
    s1: float
    sm: float
    p_post: float


@dataclass(frozen=True)
class WcpSource:
    """Weak coherent pulse with Poisson photon number of mean mu"""

    mu: float

    def __post_init__(self) -> None:
        require_positive("mu", self.mu)


@dataclass(frozen=True)
class PdcSource:
    """Parametric downconversion heralded by Alice's trigger detector

    Attributes:
        chi: Squeezing parameter; sinh^2(chi) is the mean photon number per mode
        eta_a: Trigger detector efficiency
        dark_a: Trigger dark-count probability per slot
        eta_c: Efficiency of coupling the signal photon into the fiber
    """

    chi: float
    eta_a: float = 1.0
    dark_a: float = 0.0
    eta_c: float = 1.0

    def __post_init__(self) -> None:
        require_positive("chi", self.chi)
        if self.tanh2 >= 1.0:
            raise ParameterDomainError(
                "chi", self.chi, "tanh^2(chi) < 1 in double precision (chi below about 18.7)"
            )
        require_probability("eta_a", self.eta_a)
        require_open_probability("dark_a", self.dark_a)
        require_efficiency("eta_c", self.eta_c)

    @classmethod
    def from_mean_photon_number(
        cls,
        mu: float,
        eta_a: float = 1.0,
        dark_a: float = 0.0,
        eta_c: float = 1.0,
    ) -> "PdcSource":
        """Build a source from mu = sinh^2(chi)"""
        require_positive("mu", mu)
        return cls(chi=math.asinh(math.sqrt(mu)), eta_a=eta_a, dark_a=dark_a, eta_c=eta_c)

    @property
    def mean_photon_number(self) -> float:
        return math.sinh(self.chi) ** 2

    @property
    def tanh2(self) -> float:
        return math.tanh(self.chi) ** 2


@dataclass(frozen=True)
class SinglePhotonSource:
    """Ideal source emitting exactly one photon per slot"""


Source: TypeAlias = WcpSource | PdcSource | SinglePhotonSource


def wcp_stats(src: WcpSource) -> PhotonStats:
    """Poisson statistics of a weak coherent pulse

    Args:
        src: Weak coherent pulse source

    Returns:
        PhotonStats with p_post = 1
    """
    mu = require_positive("mu", src.mu)
    s0 = math.exp(-mu)
    s1 = mu * s0
    # P(N >= 2) as a regularized incomplete gamma avoids cancellation for small mu
    sm = float(special.gammainc(2.0, mu))
    return PhotonStats(s0=s0, s1=s1, sm=sm, p_post=1.0)


def _pdc_post_selection(t: float, eta_a: float, dark_a: float) -> float:
    """p_post for ratio t = tanh^2(chi); 1/cosh^2(chi) = 1 - t"""
    return (1.0 - t) * dark_a + eta_a * t / (1.0 - (1.0 - eta_a) * t)


def pdc_stats(src: PdcSource) -> PhotonStats:
    """Photon statistics of the heralded downconversion signal

    Args:
        src: Downconversion source

    Returns:
        PhotonStats conditioned on a trigger click

    Raises:
        DegenerateSourceError: If the trigger never clicks (p_post = 0)
    """
    t = src.tanh2
    u = 1.0 - src.eta_a
    w = 1.0 - src.eta_c

    p_post = _pdc_post_selection(t, src.eta_a, src.dark_a)
    if p_post <= 0.0:
        raise DegenerateSourceError(f"eta_a={src.eta_a}, dark_a={src.dark_a}")

    vacuum = 1.0 - t
    # Unconditional joint probabilities of (trigger click, k photons in the fiber)
    joint_s0 = vacuum * (src.dark_a + src.eta_a * w * t / ((1.0 - w * t) * (1.0 - u * w * t)))
    joint_s1 = (
        vacuum * src.eta_c * t * (1.0 / (1.0 - w * t) ** 2 - u / (1.0 - u * w * t) ** 2)
    )

    s0 = joint_s0 / p_post
    s1 = joint_s1 / p_post
    sm = max(0.0, 1.0 - s0 - s1)
    return PhotonStats(s0=s0, s1=s1, sm=sm, p_post=p_post)


def single_photon_stats(src: SinglePhotonSource) -> PhotonStats:
    """Statistics of an ideal single-photon source"""
    return PhotonStats(s0=0.0, s1=1.0, sm=0.0, p_post=1.0)


def photon_stats(source: Source) -> PhotonStats:
    """Dispatch to the statistics of the given source"""
    if isinstance(source, WcpSource):
        return wcp_stats(source)
    if isinstance(source, PdcSource):
        return pdc_stats(source)
    return single_photon_stats(source)


def signal_detection_prob(source: Source, eta: float) -> float:
    """Probability that a post-selected signal photon triggers Bob's detector

    Args:
        source: Signal source
        eta: Single-photon transmission times detection efficiency; for a
            downconversion source the coupling efficiency eta_c is applied on top

    Returns:
        Click probability from signal photons, conditioned on post-selection
    """
    require_probability("eta", eta)
    if eta == 0.0:
        return 0.0

    if isinstance(source, WcpSource):
        return -math.expm1(-eta * source.mu)

    if isinstance(source, SinglePhotonSource):
        return eta

    t = source.tanh2
    u = 1.0 - source.eta_a
    total_eta = eta * source.eta_c
    v = 1.0 - total_eta
    p_post = _pdc_post_selection(t, source.eta_a, source.dark_a)
    if p_post <= 0.0:
        raise DegenerateSourceError(f"eta_a={source.eta_a}, dark_a={source.dark_a}")

    # (1 - t) * sum_n [1-u^n][1-v^n] t^n, combined to avoid cancellation at small t
    joint = total_eta * t * (
        1.0 / (1.0 - v * t) - u * (1.0 - t) / ((1.0 - u * t) * (1.0 - u * v * t))
    )
    return min(1.0, max(0.0, joint / p_post))


def source_kind(source: Source) -> SourceKind:
    """Short name of the source type"""
    if isinstance(source, WcpSource):
        return "wcp"
    if isinstance(source, PdcSource):
        return "pdc"
    return "single"


def mean_photon_number(source: Source) -> float | None:
    """Mean photon number mu of the source, None for the single-photon source"""
    if isinstance(source, WcpSource):
        return source.mu
    if isinstance(source, PdcSource):
        return source.mean_photon_number
    return None


def with_mean_photon_number(source: Source, mu: float) -> Source:
    """Copy of the source with its mean photon number replaced

    Trigger and coupling parameters of a downconversion source are kept. The
    single-photon source has no free photon number and is returned unchanged.
    """
    if isinstance(source, WcpSource):
        return WcpSource(mu=mu)
    if isinstance(source, PdcSource):
        require_positive("mu", mu)
        return replace(source, chi=math.asinh(math.sqrt(mu)))
    return source
