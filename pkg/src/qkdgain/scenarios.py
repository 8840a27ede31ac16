# ABOUTME: Experiment scenarios: compiled fiber-link presets and key = value scenario files
# ABOUTME: Resolves a preset name or file path into link parameters and a signal source
"""Scenario presets and files for qkdgain

Presets describe published fiber experiments. All values are fractions; percent
figures were converted once here. Scenario files use the same flat format as the rc
file, one `key = value` per line with `#` comments:

    base = KTH15
    alpha = 0.25
    source = pdc
    mu = 0.05
"""

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from qkdgain.channel_model import LinkBudget
from qkdgain.exceptions import (
    InvalidScenarioError,
    ParameterDomainError,
    ScenarioNotFoundError,
)
from qkdgain.logging_config import get_logger
from qkdgain.photon_sources import (
    PdcSource,
    SinglePhotonSource,
    Source,
    WcpSource,
    mean_photon_number,
    with_mean_photon_number,
)
from qkdgain.validation import require_positive, validate_scenario_name

__all__ = [
    "Scenario",
    "TRIGGER_ETA_A",
    "TRIGGER_DARK_A",
    "DEFAULT_MU",
    "PRESETS",
    "SCENARIO_KEYS",
    "canonical_name",
    "list_scenarios",
    "get_preset",
    "load_scenario_file",
    "get_scenario",
    "build_source",
]

logger = get_logger(__name__)

# Trigger detector of a downconversion source, taken from the 830 nm detector column
TRIGGER_ETA_A = 0.50
TRIGGER_DARK_A = 5e-8

DEFAULT_MU = 0.1

SOURCE_KINDS = ("wcp", "pdc", "single")
LINK_KEYS = ("wavelength", "alpha", "receiver_loss", "c_align", "dark_b", "eta_b")
SOURCE_KEYS = ("source", "mu", "chi", "eta_a", "dark_a", "eta_c")
SCENARIO_KEYS = ("name", "base", "description", *LINK_KEYS, *SOURCE_KEYS)


@dataclass(frozen=True)
class Scenario:
    """Link and source parameters of one experiment

    Attributes:
        name: Display name
        wavelength_nm: Wavelength in nm (informational)
        alpha: Fiber loss in dB/km
        receiver_loss: Loss inside Bob's receiver in dB
        c_align: Fraction of signal clicks with the wrong bit
        dark_b: Dark-count probability per slot of Bob's detection unit
        eta_b: Detection efficiency of Bob's detection unit
        source: Signal source used by default
        description: Short free-text description
    """

    name: str
    wavelength_nm: float
    alpha: float
    receiver_loss: float
    c_align: float
    dark_b: float
    eta_b: float
    source: Source = field(default_factory=lambda: WcpSource(mu=DEFAULT_MU))
    description: str = ""

    def __post_init__(self) -> None:
        require_positive("wavelength", self.wavelength_nm)
        self.link()

    def link(self, length: float = 0.0) -> LinkBudget:
        """LinkBudget of this scenario at a fiber length in km"""
        return LinkBudget(
            alpha=self.alpha,
            length=length,
            receiver_loss=self.receiver_loss,
            eta_b=self.eta_b,
            dark_b=self.dark_b,
            c_align=self.c_align,
        )

    def with_source(self, source: Source) -> "Scenario":
        return replace(self, source=source)


PRESETS: dict[str, Scenario] = {
    "BT8": Scenario(
        name="BT8",
        wavelength_nm=830,
        alpha=2.5,
        receiver_loss=8.0,
        c_align=0.01,
        dark_b=5e-8,
        eta_b=0.50,
        description="830 nm fiber link (BT)",
    ),
    "BT13": Scenario(
        name="BT13",
        wavelength_nm=1300,
        alpha=0.38,
        receiver_loss=5.0,
        c_align=0.008,
        dark_b=1e-5,
        eta_b=0.11,
        description="1300 nm fiber link (BT)",
    ),
    "G13": Scenario(
        name="G13",
        wavelength_nm=1300,
        alpha=0.32,
        receiver_loss=3.2,
        c_align=0.0014,
        dark_b=8.2e-5,
        eta_b=0.17,
        description="1300 nm fiber link (Geneva)",
    ),
    "KTH15": Scenario(
        name="KTH15",
        wavelength_nm=1550,
        alpha=0.2,
        receiver_loss=1.0,
        c_align=0.01,
        dark_b=2e-4,
        eta_b=0.18,
        description="1550 nm fiber link (KTH)",
    ),
}


def canonical_name(name: str) -> str:
    """Upper-case name without spaces, hyphens and underscores ("bt 8" -> "BT8")"""
    return re.sub(r"[\s_\-]", "", name).upper()


def list_scenarios() -> list[Scenario]:
    """Compiled presets in declaration order"""
    return list(PRESETS.values())


def get_preset(name: str) -> Scenario:
    """Look up a compiled preset by name

    Raises:
        InvalidScenarioNameError: If the name contains unsupported characters
        ScenarioNotFoundError: If no preset has this name
    """
    validate_scenario_name(name)
    try:
        return PRESETS[canonical_name(name)]
    except KeyError:
        raise ScenarioNotFoundError(name) from None


def build_source(
    kind: str,
    mu: float | None = None,
    chi: float | None = None,
    eta_a: float | None = None,
    dark_a: float | None = None,
    eta_c: float | None = None,
) -> Source:
    """Build a source from loose options

    Args:
        kind: "wcp", "pdc" or "single"
        mu: Mean photon number (wcp, or pdc when chi is not given)
        chi: Squeezing parameter of a pdc source
        eta_a: Trigger efficiency, defaults to the trigger preset
        dark_a: Trigger dark-count probability, defaults to the trigger preset
        eta_c: Fiber coupling efficiency, defaults to 1

    Raises:
        ParameterDomainError: If the kind or a parameter is invalid, or a parameter is
            given that the kind does not have
    """
    if kind in ("wcp", "single"):
        foreign = {"chi": chi, "eta_a": eta_a, "dark_a": dark_a, "eta_c": eta_c}
        if kind == "single":
            foreign["mu"] = mu
        for name, value in foreign.items():
            if value is not None:
                raise ParameterDomainError(name, value, f"no {name} for a {kind} source")

    if kind == "single":
        return SinglePhotonSource()
    if kind == "wcp":
        return WcpSource(mu=DEFAULT_MU if mu is None else mu)
    if kind == "pdc":
        trigger = {
            "eta_a": TRIGGER_ETA_A if eta_a is None else eta_a,
            "dark_a": TRIGGER_DARK_A if dark_a is None else dark_a,
            "eta_c": 1.0 if eta_c is None else eta_c,
        }
        if chi is not None:
            return PdcSource(chi=chi, **trigger)
        return PdcSource.from_mean_photon_number(DEFAULT_MU if mu is None else mu, **trigger)
    raise ParameterDomainError("source", kind, f"one of {', '.join(SOURCE_KINDS)}")


def _parse_scenario_text(text: str, origin: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidScenarioError(f"{origin}:{number}: expected 'key = value', got '{raw}'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in SCENARIO_KEYS:
            raise InvalidScenarioError(
                f"{origin}:{number}: unknown key '{key}' "
                f"(valid keys: {', '.join(SCENARIO_KEYS)})"
            )
        values[key] = value
    return values


def _number(values: dict[str, str], key: str, origin: str) -> float | None:
    if key not in values:
        return None
    try:
        return float(values[key])
    except ValueError:
        raise InvalidScenarioError(
            f"{origin}: '{key}' must be a number, got '{values[key]}'"
        ) from None


def load_scenario_file(path: Path) -> Scenario:
    """Load a scenario from a key = value file

    Link keys missing from the file are taken from `base` (a preset name). Without a
    base every link key is required.

    Args:
        path: Scenario file

    Returns:
        Validated Scenario

    Raises:
        ScenarioNotFoundError: If the file or the base preset does not exist
        InvalidScenarioError: If a key is unknown, a value malformed or a parameter
            outside its range
    """
    origin = str(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ScenarioNotFoundError(origin) from None
    except (OSError, UnicodeDecodeError) as e:
        raise InvalidScenarioError(f"{origin}: cannot read scenario file: {e}") from e

    values = _parse_scenario_text(text, origin)
    base = get_preset(values["base"]) if "base" in values else None

    link: dict[str, float] = {}
    for key in LINK_KEYS:
        number = _number(values, key, origin)
        if number is None and base is not None:
            number = getattr(base, "wavelength_nm" if key == "wavelength" else key)
        if number is None:
            raise InvalidScenarioError(f"{origin}: missing '{key}' and no 'base' preset given")
        link[key] = number

    kind = values.get("source", "").lower()
    try:
        if kind:
            source = build_source(
                kind,
                mu=_number(values, "mu", origin),
                chi=_number(values, "chi", origin),
                eta_a=_number(values, "eta_a", origin),
                dark_a=_number(values, "dark_a", origin),
                eta_c=_number(values, "eta_c", origin),
            )
        elif base is not None:
            source = base.source
            mu = _number(values, "mu", origin)
            if mu is not None and mean_photon_number(source) is not None:
                source = with_mean_photon_number(source, mu)
        else:
            mu = _number(values, "mu", origin)
            source = WcpSource(mu=DEFAULT_MU if mu is None else mu)

        scenario = Scenario(
            name=values.get("name", path.stem),
            wavelength_nm=link["wavelength"],
            alpha=link["alpha"],
            receiver_loss=link["receiver_loss"],
            c_align=link["c_align"],
            dark_b=link["dark_b"],
            eta_b=link["eta_b"],
            source=source,
            description=values.get("description", base.description if base else ""),
        )
    except ParameterDomainError as e:
        raise InvalidScenarioError(f"{origin}: {e}") from e

    logger.debug(f"Loaded scenario '{scenario.name}' from {origin}")
    return scenario


def get_scenario(ref: str) -> Scenario:
    """Resolve a preset name or a scenario file path

    Raises:
        ScenarioNotFoundError: If ref is neither an existing file nor a preset
        InvalidScenarioError: If the file is malformed
    """
    path = Path(ref).expanduser()
    if path.is_file():
        return load_scenario_file(path)
    return get_preset(ref)
