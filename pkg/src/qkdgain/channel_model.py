# ABOUTME: Fiber link budget, click probability and sifted-key error model
# ABOUTME: Turns attenuation, receiver loss and detector figures into p_exp and e
"""Channel model for qkdgain

Dark counts are taken per detection unit and independent of signal clicks. A dark
count lands on either bit value with equal probability, and signal errors are a
constant fraction c of signal clicks. Coincidences between dark and signal clicks
are neglected in the error numerator.
"""

from dataclasses import dataclass, replace

from qkdgain.exceptions import NoClicksError, ParameterDomainError
from qkdgain.photon_sources import Source, signal_detection_prob
from qkdgain.validation import (
    require_efficiency,
    require_nonnegative,
    require_open_probability,
)

__all__ = [
    "LinkBudget",
    "ClickModel",
    "transmission",
    "db_to_efficiency",
    "click_model",
    "detection_efficiency",
]


MAX_ERROR_RATE = 0.5


@dataclass(frozen=True)
class LinkBudget:
    """Loss and detector figures of the quantum channel

    Attributes:
        alpha: Fiber loss coefficient in dB/km
        length: Fiber length in km
        receiver_loss: Loss inside Bob's receiver in dB
        eta_b: Detection efficiency of Bob's detection unit
        dark_b: Dark-count probability per slot of the whole detection unit
        c_align: Fraction of signal clicks giving the wrong bit (alignment/visibility)
    """

    alpha: float
    length: float = 0.0
    receiver_loss: float = 0.0
    eta_b: float = 1.0
    dark_b: float = 0.0
    c_align: float = 0.0

    def __post_init__(self) -> None:
        require_nonnegative("alpha", self.alpha)
        require_nonnegative("length", self.length)
        require_nonnegative("receiver_loss", self.receiver_loss)
        require_efficiency("eta_b", self.eta_b)
        require_open_probability("dark_b", self.dark_b)
        require_nonnegative("c_align", self.c_align)
        if self.c_align > MAX_ERROR_RATE:
            raise ParameterDomainError("c_align", self.c_align, "a fraction in [0, 1/2]")

    def at_length(self, length: float) -> "LinkBudget":
        """Same link with a different fiber length"""
        return replace(self, length=length)


@dataclass(frozen=True)
class ClickModel:
    """Click probabilities and modeled error rate for one operating point

    Attributes:
        p_signal: Click probability from signal photons per post-selected slot
        p_dark: Dark-count click probability
        p_exp: Combined click probability
        e: Modeled error rate of the sifted key
    """

    p_signal: float
    p_dark: float
    p_exp: float
    e: float


def db_to_efficiency(loss_db: float) -> float:
    """Convert a loss in dB to a transmission efficiency"""
    return float(10.0 ** (-loss_db / 10.0))


def transmission(link: LinkBudget) -> float:
    """Transmission efficiency eta_T of fiber plus receiver

    Args:
        link: Link budget

    Returns:
        10^(-(alpha * length + receiver_loss) / 10)
    """
    return db_to_efficiency(link.alpha * link.length + link.receiver_loss)


def detection_efficiency(link: LinkBudget) -> float:
    """End-to-end single-photon efficiency eta_B * eta_T"""
    return link.eta_b * transmission(link)


def click_model(source: Source, link: LinkBudget) -> ClickModel:
    """Expected click probability and error rate at Bob

    Args:
        source: Signal source
        link: Link budget including the fiber length

    Returns:
        ClickModel for the post-selected slots

    Raises:
        NoClicksError: If neither signal nor dark counts can trigger a click
    """
    eta = detection_efficiency(link)
    p_signal = signal_detection_prob(source, eta)
    p_dark = link.dark_b
    p_exp = p_signal + p_dark - p_signal * p_dark

    if p_exp <= 0.0:
        raise NoClicksError()

    e = (link.c_align * p_signal + 0.5 * p_dark) / p_exp
    e = min(MAX_ERROR_RATE, max(0.0, e))
    return ClickModel(p_signal=p_signal, p_dark=p_dark, p_exp=p_exp, e=e)
