# ABOUTME: Mean-photon-number optimization, analytic gain bounds and distance sweeps
# ABOUTME: Bracketed root finding for the optimality conditions, golden-section gain search
"""Optimization for qkdgain

Gain as a function of the mean photon number has a single maximum: too few photons
drown in dark counts and too many feed the photon-number-splitting attack. The
search pre-scans a logarithmic grid and refines the best cell by golden-section
search in log(mu).

Bounds 1-3 are the multi-photon envelope 1/2 (p_exp - Sm) of the source at its own
optimal mu, with dark counts, error correction and privacy amplification on
single-photon signals neglected:

    bound1  fiber loss only (eta_B = 1, no receiver loss)
    bound2  fiber and receiver loss (eta_B = 1)
    bound3  fiber and receiver loss and Bob's detection efficiency
"""

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from qkdgain.channel_model import (
    LinkBudget,
    click_model,
    db_to_efficiency,
    detection_efficiency,
    transmission,
)
from qkdgain.exceptions import (
    InvalidSweepConfigError,
    NoClicksError,
    QkdGainError,
    RootFindingError,
)
from qkdgain.key_rate import BRASSARD_SALVAIL, EcModel, RatePoint, gain_multi
from qkdgain.logging_config import get_logger
from qkdgain.photon_sources import (
    Source,
    SourceKind,
    mean_photon_number,
    photon_stats,
    source_kind,
    with_mean_photon_number,
)
from qkdgain.validation import require_positive, require_probability

__all__ = [
    "DEFAULT_MU_SEARCH",
    "DEFAULT_PRESCAN_POINTS",
    "SweepConfig",
    "OperatingPoint",
    "SweepRow",
    "SweepResult",
    "wcp_optimal_mu_approx",
    "wcp_gain_bound",
    "pdc_gain_bound",
    "pdc_optimal_mu",
    "envelope_bound",
    "loss_bounds",
    "golden_section_max",
    "evaluate_operating_point",
    "optimize_operating_point",
    "sweep",
]

logger = get_logger(__name__)

DEFAULT_MU_SEARCH = (1e-6, 2.0)
DEFAULT_PRESCAN_POINTS = 64
MU_REL_TOL = 1e-6
INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepConfig:
    """Inputs of a rate-versus-distance sweep

    Attributes:
        source: Source with its fixed parameters; mu is replaced when optimizing
        link: Link budget; its length is replaced by each entry of lengths
        lengths: Increasing fiber lengths in km
        mu_search: (lo, hi) bracket for the mean photon number
        ec: Error-correction cost model
        optimize_mu: Re-optimize mu at every distance, otherwise keep the source's mu
        with_bounds: Also evaluate bounds 1-3
        workers: Points evaluated concurrently
        prescan_points: Grid size of the coarse pre-scan
    """

    source: Source
    link: LinkBudget
    lengths: tuple[float, ...]
    mu_search: tuple[float, float] = DEFAULT_MU_SEARCH
    ec: EcModel = BRASSARD_SALVAIL
    optimize_mu: bool = True
    with_bounds: bool = True
    workers: int = 1
    prescan_points: int = DEFAULT_PRESCAN_POINTS

    def __post_init__(self) -> None:
        if not self.lengths:
            raise InvalidSweepConfigError("Sweep needs at least one distance")
        if any(not math.isfinite(length) or length < 0 for length in self.lengths):
            raise InvalidSweepConfigError("Distances must be finite and nonnegative")
        if any(b <= a for a, b in zip(self.lengths, self.lengths[1:])):
            raise InvalidSweepConfigError("Distances must be strictly increasing")
        _check_bracket(self.mu_search)
        if self.workers < 1:
            raise InvalidSweepConfigError(f"workers must be >= 1, got {self.workers}")
        if self.prescan_points < 3:
            raise InvalidSweepConfigError("prescan_points must be >= 3")


@dataclass(frozen=True)
class OperatingPoint:
    """Rate at one distance and mean photon number (mu is None for single photons)"""

    length: float
    mu: float | None
    rate: RatePoint


@dataclass(frozen=True)
class SweepRow:
    """One distance of a sweep; rate is None and error set when the point failed"""

    length: float
    mu_opt: float | None
    rate: RatePoint | None
    bound1: float | None = None
    bound2: float | None = None
    bound3: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    """Rows of a sweep in distance order"""

    rows: tuple[SweepRow, ...]

    @property
    def max_secure_length(self) -> float | None:
        """Largest swept distance with a positive gain"""
        secure = [row.length for row in self.rows if row.rate is not None and row.rate.secure]
        return max(secure) if secure else None


def _check_bracket(bracket: tuple[float, float]) -> None:
    lo, hi = bracket
    if not (math.isfinite(lo) and math.isfinite(hi)) or not 0.0 < lo < hi:
        raise InvalidSweepConfigError(f"mu bracket must satisfy 0 < lo < hi, got {bracket}")


def _root_in_unit_interval(func: Callable[[float], float], name: str, eta: float) -> float:
    """Root of func in (0, 1], func(0) > 0 >= func(1)"""
    lo, hi = 0.0, 1.0
    f_lo, f_hi = func(lo), func(hi)
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        logger.error(f"{name}: no sign change on [{lo}, {hi}] for eta={eta:.6g}")
        raise RootFindingError(name, lo, hi)
    root = optimize.brentq(func, lo, hi, xtol=min(1e-15, 1e-12 * eta), maxiter=200)
    logger.debug(f"{name}: eta={eta:.6g} root={root:.12g} residual={func(root):.3g}")
    return float(root)


def wcp_optimal_mu_approx(eta: float) -> float:
    """Mean photon number maximizing the weak-coherent-pulse envelope

    Args:
        eta: eta_B * eta_T in (0, 1]

    Returns:
        Root in (0, 1] of eta exp(-eta mu) - mu exp(-mu)

    Raises:
        RootFindingError: If the bracket shows no sign change
    """
    require_positive("eta", eta)
    require_probability("eta", eta)
    return _root_in_unit_interval(
        lambda mu: eta * math.exp(-eta * mu) - mu * math.exp(-mu),
        "weak coherent optimality condition",
        eta,
    )


def wcp_gain_bound(mu: float, eta: float) -> float:
    """Envelope 1/2 {(1 + mu) exp(-mu) - exp(-eta mu)} of the weak-coherent gain

    Negative values mean no secure key is possible at this mu.
    """
    require_positive("mu", mu)
    require_probability("eta", eta)
    # (1 - e^{-eta mu}) - P(N >= 2), both terms accurate for small arguments
    return 0.5 * (-math.expm1(-eta * mu) - float(special.gammainc(2.0, mu)))


def pdc_gain_bound(mu: float, eta: float) -> float:
    """Envelope 1/2 mu (eta/(1 + eta mu) - mu/(1 + mu)^2) for a perfect trigger

    Uses unconditional per-slot quantities with mu = sinh^2(chi).
    """
    require_positive("mu", mu)
    require_probability("eta", eta)
    return 0.5 * mu * (eta / (1.0 + eta * mu) - mu / (1.0 + mu) ** 2)


def pdc_optimal_mu(eta: float) -> float:
    """Mean photon number maximizing the downconversion envelope

    Args:
        eta: eta_B * eta_T in (0, 1]

    Returns:
        Positive root in (0, 1] of -2 mu - 2 eta^2 mu^3 + eta (1 + 3 mu - mu^2 + mu^3)

    Raises:
        RootFindingError: If the bracket shows no sign change
    """
    require_positive("eta", eta)
    require_probability("eta", eta)
    return _root_in_unit_interval(
        lambda mu: -2.0 * mu
        - 2.0 * eta**2 * mu**3
        + eta * (1.0 + 3.0 * mu - mu**2 + mu**3),
        "downconversion optimality cubic",
        eta,
    )


def envelope_bound(kind: SourceKind, eta: float) -> tuple[float | None, float]:
    """Best multi-photon envelope of a source type at efficiency eta

    Args:
        kind: Source type
        eta: Single-photon efficiency of the idealized link

    Returns:
        (optimal mu or None, bound value); a single-photon source has bound eta/2
    """
    if eta <= 0.0:
        return None, 0.0
    if kind == "wcp":
        mu = wcp_optimal_mu_approx(eta)
        return mu, wcp_gain_bound(mu, eta)
    if kind == "pdc":
        mu = pdc_optimal_mu(eta)
        return mu, pdc_gain_bound(mu, eta)
    return None, 0.5 * eta


def loss_bounds(
    kind: SourceKind, link: LinkBudget
) -> tuple[tuple[float | None, float], ...]:
    """Bounds 1-3 with their optimal mu for the link at its current length"""
    fiber_only = db_to_efficiency(link.alpha * link.length)
    with_receiver = transmission(link)
    with_detector = detection_efficiency(link)
    return tuple(envelope_bound(kind, eta) for eta in (fiber_only, with_receiver, with_detector))


def golden_section_max(
    func: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Maximize a unimodal function on [lo, hi] by golden-section search

    Args:
        func: Function to maximize
        lo: Left end of the interval
        hi: Right end of the interval
        tol: Absolute width at which the search stops

    Returns:
        (argmax, max) of the best point evaluated
    """
    c = hi - INV_GOLDEN * (hi - lo)
    d = lo + INV_GOLDEN * (hi - lo)
    fc, fd = func(c), func(d)

    while abs(hi - lo) > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - INV_GOLDEN * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_GOLDEN * (hi - lo)
            fd = func(d)

    return (c, fc) if fc > fd else (d, fd)


def evaluate_operating_point(
    source: Source, link: LinkBudget, ec: EcModel = BRASSARD_SALVAIL
) -> RatePoint:
    """RatePoint of a source over a link at the link's length"""
    return gain_multi(photon_stats(source), click_model(source, link), ec)


def optimize_operating_point(
    source: Source,
    link: LinkBudget,
    ec: EcModel = BRASSARD_SALVAIL,
    mu_search: tuple[float, float] = DEFAULT_MU_SEARCH,
    prescan_points: int = DEFAULT_PRESCAN_POINTS,
) -> OperatingPoint:
    """Mean photon number maximizing the gain at one distance

    Args:
        source: Source whose fixed parameters are kept
        link: Link budget at the distance of interest
        ec: Error-correction cost model
        mu_search: (lo, hi) bracket for mu
        prescan_points: Logarithmic grid size of the pre-scan

    Returns:
        OperatingPoint at mu*; rate.secure is False when no mu gives a positive gain

    Raises:
        InvalidSweepConfigError: If the bracket is degenerate
    """
    _check_bracket(mu_search)
    if prescan_points < 3:
        raise InvalidSweepConfigError("prescan_points must be >= 3")

    if source_kind(source) == "single":
        return OperatingPoint(link.length, None, evaluate_operating_point(source, link, ec))

    def gain_at_log_mu(log_mu: float) -> float:
        candidate = with_mean_photon_number(source, math.exp(log_mu))
        try:
            return evaluate_operating_point(candidate, link, ec).gain_raw
        except NoClicksError:
            return -math.inf

    log_lo, log_hi = math.log(mu_search[0]), math.log(mu_search[1])
    grid = np.linspace(log_lo, log_hi, prescan_points)
    values = [gain_at_log_mu(float(x)) for x in grid]
    best = int(np.argmax(values))

    cell_lo = float(grid[max(best - 1, 0)])
    cell_hi = float(grid[min(best + 1, prescan_points - 1)])
    log_mu, value = golden_section_max(gain_at_log_mu, cell_lo, cell_hi, MU_REL_TOL)
    if values[best] > value:
        log_mu = float(grid[best])

    mu_opt = math.exp(log_mu)
    rate = evaluate_operating_point(with_mean_photon_number(source, mu_opt), link, ec)
    logger.debug(
        f"length={link.length:.6g} km: mu*={mu_opt:.6g} gain={rate.gain_raw:.6g} "
        f"(grid cell {cell_lo:.3f}..{cell_hi:.3f})"
    )
    return OperatingPoint(link.length, mu_opt, rate)


def _sweep_point(config: SweepConfig, length: float) -> SweepRow:
    link = config.link.at_length(length)
    try:
        if config.optimize_mu:
            point = optimize_operating_point(
                config.source, link, config.ec, config.mu_search, config.prescan_points
            )
        else:
            point = OperatingPoint(
                length,
                None,
                evaluate_operating_point(config.source, link, config.ec),
            )
        mu_opt = point.mu
        if mu_opt is None and source_kind(config.source) != "single":
            mu_opt = mean_photon_number(config.source)

        bounds: tuple[float | None, ...] = (None, None, None)
        if config.with_bounds:
            bounds = tuple(value for _, value in loss_bounds(source_kind(config.source), link))
    except QkdGainError as e:
        logger.warning(f"Sweep point at {length:.6g} km failed: {e}")
        return SweepRow(length=length, mu_opt=None, rate=None, error=str(e))

    return SweepRow(
        length=length,
        mu_opt=mu_opt,
        rate=point.rate,
        bound1=bounds[0],
        bound2=bounds[1],
        bound3=bounds[2],
    )


def sweep(config: SweepConfig) -> SweepResult:
    """Optimized rate and bounds over a list of distances

    Args:
        config: Sweep configuration

    Returns:
        SweepResult with one row per distance, in distance order; a point that
        fails is marked with its error instead of aborting the sweep
    """
    kind = source_kind(config.source)
    logger.info(
        f"Sweeping {len(config.lengths)} distances "
        f"({config.lengths[0]:.6g}..{config.lengths[-1]:.6g} km) for {kind} source"
    )

    if config.workers > 1 and len(config.lengths) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(lambda length: _sweep_point(config, length), config.lengths))
    else:
        rows = [_sweep_point(config, length) for length in config.lengths]

    result = SweepResult(rows=tuple(rows))
    failed = sum(1 for row in rows if row.error is not None)
    logger.info(
        f"Sweep finished: max secure distance {result.max_secure_length} km, "
        f"{failed} failed point(s)"
    )
    return result

