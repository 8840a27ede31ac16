# ABOUTME: Plot-ready CSV and JSON records for rates, sweeps, bounds and splitting checks
# ABOUTME: Fixed column orders and significant-digit formatting shared by all cli commands
"""Report emission for qkdgain

Every command produces a list of flat records with a fixed column order. CSV output
always starts with a header row; JSON output is a list of objects with the same
keys and the same rounding.
"""

import csv
import json
import math
from collections.abc import Iterable, Sequence
from typing import Literal, TextIO, TypeAlias

from qkdgain.key_rate import RatePoint
from qkdgain.optimize import SweepResult
from qkdgain.pns_fock import PnsResult

__all__ = [
    "OutputFormat",
    "Record",
    "RATE_COLUMNS",
    "FINITE_SIZE_COLUMNS",
    "SWEEP_COLUMNS",
    "BOUNDS_COLUMNS",
    "PNS_COLUMNS",
    "DEFAULT_DIGITS",
    "format_value",
    "rate_record",
    "sweep_records",
    "bounds_record",
    "pns_records",
    "write_records",
]

OutputFormat = Literal["csv", "json"]
Value: TypeAlias = float | int | str | bool | None
Record: TypeAlias = dict[str, Value]

DEFAULT_DIGITS = 10

RATE_COLUMNS = (
    "scenario",
    "source",
    "distance_km",
    "mu",
    "p_post",
    "p_exp",
    "p_signal",
    "error_rate",
    "s_m",
    "tau1",
    "ec_cost",
    "gain_raw",
    "gain",
    "secure",
)
FINITE_SIZE_COLUMNS = ("n_tot", "confidence", "delta", "gain_finite")

SWEEP_COLUMNS = (
    "distance_km",
    "mu_opt",
    "p_post",
    "p_exp",
    "error_rate",
    "s_m",
    "tau1",
    "ec_cost",
    "gain_raw",
    "gain",
    "bound1",
    "bound2",
    "bound3",
)

BOUNDS_COLUMNS = ("distance_km", "bound1", "mu1", "bound2", "mu2", "bound3", "mu3")

PNS_COLUMNS = (
    "n",
    "polarization",
    "fidelity",
    "unitarity_defect",
    "ground_population",
    "photons_a",
    "photons_b",
    "passed",
)


def _round(value: float, digits: int) -> float:
    if not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def format_value(value: Value, digits: int = DEFAULT_DIGITS) -> str:
    """CSV cell text: empty for None, lower-case booleans, floats to `digits` significant digits"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def _rate_fields(rate: RatePoint) -> Record:
    return {
        "p_post": rate.p_post,
        "p_exp": rate.p_exp,
        "error_rate": rate.e,
        "s_m": rate.sm,
        "tau1": rate.tau1,
        "ec_cost": rate.ec_cost,
        "gain_raw": rate.gain_raw,
        "gain": rate.gain,
    }


def rate_record(
    scenario: str,
    source: str,
    distance_km: float,
    mu: float | None,
    rate: RatePoint,
) -> Record:
    """Record of a single operating point"""
    return {
        "scenario": scenario,
        "source": source,
        "distance_km": distance_km,
        "mu": mu,
        **_rate_fields(rate),
        "p_signal": rate.p_signal,
        "secure": rate.secure,
    }


def sweep_records(result: SweepResult) -> list[Record]:
    """One record per sweep row; a failed row keeps only its distance"""
    records: list[Record] = []
    for row in result.rows:
        record: Record = dict.fromkeys(SWEEP_COLUMNS)
        record["distance_km"] = row.length
        if row.rate is not None:
            record["mu_opt"] = row.mu_opt
            record.update(_rate_fields(row.rate))
            record["bound1"] = row.bound1
            record["bound2"] = row.bound2
            record["bound3"] = row.bound3
        records.append(record)
    return records


def bounds_record(
    distance_km: float, bounds: Sequence[tuple[float | None, float]]
) -> Record:
    """Record of bounds 1-3 and the mean photon number each is attained at"""
    record: Record = {"distance_km": distance_km}
    for k, (mu, value) in enumerate(bounds, start=1):
        record[f"bound{k}"] = value
        record[f"mu{k}"] = mu
    return record


def pns_records(results: Iterable[PnsResult]) -> list[Record]:
    """One record per (n, polarization) splitting check"""
    return [
        {
            "n": r.n,
            "polarization": r.polarization,
            "fidelity": r.fidelity,
            "unitarity_defect": r.unitarity_defect,
            "ground_population": r.ground_population,
            "photons_a": r.photons_a,
            "photons_b": r.photons_b,
            "passed": r.passed,
        }
        for r in results
    ]


def write_records(
    records: Sequence[Record],
    columns: Sequence[str],
    stream: TextIO,
    fmt: OutputFormat = "csv",
    digits: int = DEFAULT_DIGITS,
) -> None:
    """Write records in a fixed column order

    Args:
        records: Records to write; keys outside columns are ignored
        columns: Column order, also the CSV header
        stream: Text stream to write to
        fmt: "csv" or "json"
        digits: Significant digits of floating-point values
    """
    if fmt == "json":
        payload = [
            {
                key: _round(value, digits) if isinstance(value, float) else value
                for key, value in ((column, record.get(column)) for column in columns)
            }
            for record in records
        ]
        json.dump(payload, stream, indent=2)
        stream.write("\n")
        return

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([format_value(record.get(column), digits) for column in columns])
