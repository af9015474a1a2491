"""Trace analysis: sighting logs, encounters, and exposure accounting.

A sighting log is a delimiter-separated text file (comma or tab,
auto-detected) whose rows carry at least four columns: integer timestamp
in seconds, device token, scanner token, signed RSSI. A header row is
recognized and skipped when its first field is not an integer.

Two exposure measures are computed per (device, scanner) timeline:

* raw exposure — every sighting counts for one second;
* scheme exposure — time is cut into windows of ``n*t`` seconds, each
  split into ``n`` slots of ``t`` seconds; a window counts only when
  sightings land in at least ``k`` distinct slots, and then contributes
  one slot per observed slot.

Window alignment defaults to the shared ``n*t`` grid (equivalently: each
device's first sighting truncated down to a multiple of ``n*t``); the
``align="device"`` variant anchors windows at the device's actual first
sighting instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import EmptyFile, InvalidScheme, ParseError


@dataclass(frozen=True)
class Sighting:
    timestamp: int
    device_id: str
    scanner_id: str
    rssi: int


@dataclass(frozen=True)
class Encounter:
    device_id: str
    scanner_id: str
    first_ts: int
    last_ts: int
    sighting_count: int

    @property
    def duration(self) -> int:
        """Seconds of presence; a lone sighting counts for one second."""
        return self.last_ts - self.first_ts + 1


@dataclass(frozen=True)
class ExposureScheme:
    """Threshold grid for exposure accounting.

    Unlike the share-splitting parameters, ``k = n = 1`` is allowed here:
    it is the identity configuration where every observed second counts.
    """

    k: int
    n: int
    t: int

    def __post_init__(self):
        if not all(isinstance(v, int) for v in (self.k, self.n, self.t)):
            raise InvalidScheme("k, n and t must be integers")
        if not 1 <= self.k <= self.n:
            raise InvalidScheme(f"need 1 <= k <= n, got k={self.k} n={self.n}")
        if self.t < 1:
            raise InvalidScheme(f"slot length must be at least 1 s, got {self.t}")

    @property
    def window_s(self) -> int:
        return self.n * self.t


@dataclass(frozen=True)
class ExposureReport:
    scheme: ExposureScheme
    slots_exposed: int
    raw_exposure_s: int

    @property
    def total_exposure_s(self) -> int:
        return self.slots_exposed * self.scheme.t

    @property
    def reduction_factor(self) -> float:
        if self.total_exposure_s == 0:
            return math.inf if self.raw_exposure_s else math.nan
        return self.raw_exposure_s / self.total_exposure_s

    def to_line(self) -> str:
        s = self.scheme
        return (
            f"{s.t}\t{s.k}\t{s.n}\t{self.slots_exposed}"
            f"\t{self.total_exposure_s}\t{self.reduction_factor:.3f}"
        )


EXPOSURE_HEADER = "t\tk\tn\tslots_exposed\ttotal_exposure_s\treduction_factor"
ENCOUNTER_HEADER = "max_gap_s\tencounters\ttotal_duration_s"


# -- ingestion -----------------------------------------------------------


def _split_row(text: str, delimiter: str, lineno: int) -> list[str]:
    fields = [f.strip() for f in text.split(delimiter)]
    if len(fields) < 4:
        raise ParseError(lineno, f"expected at least 4 columns, got {len(fields)}")
    return fields[:4]


def read_sightings(path: str) -> list[Sighting]:
    """Load a sighting log, sorted by (timestamp, device, scanner).

    Raises ParseError with the offending line number, or EmptyFile when
    no data rows are present.
    """
    out: list[Sighting] = []
    delimiter = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.rstrip("\n").rstrip("\r")
            if not text.strip():
                continue
            if delimiter is None:
                delimiter = "\t" if "\t" in text else ","
                first = text.split(delimiter)[0].strip()
                try:
                    int(first)
                except ValueError:
                    continue  # header row
            ts_text, device, scanner, rssi_text = _split_row(text, delimiter, lineno)
            try:
                ts = int(ts_text)
            except ValueError as exc:
                raise ParseError(lineno, f"bad timestamp {ts_text!r}") from exc
            if ts < 0:
                raise ParseError(lineno, f"negative timestamp {ts}")
            try:
                rssi = int(rssi_text)
            except ValueError as exc:
                raise ParseError(lineno, f"bad rssi {rssi_text!r}") from exc
            if not device or not scanner:
                raise ParseError(lineno, "empty device or scanner token")
            out.append(Sighting(ts, device, scanner, rssi))
    if not out:
        raise EmptyFile(f"no sighting rows in {path}")
    out.sort(key=lambda s: (s.timestamp, s.device_id, s.scanner_id))
    return out


# -- encounters ----------------------------------------------------------


def _by_pair(sightings: Iterable[Sighting]) -> dict[tuple[str, str], list[int]]:
    pairs: dict[tuple[str, str], list[int]] = {}
    for s in sightings:
        pairs.setdefault((s.device_id, s.scanner_id), []).append(s.timestamp)
    for stamps in pairs.values():
        stamps.sort()
    return pairs


def extract_encounters(sightings: Iterable[Sighting], max_gap: int) -> list[Encounter]:
    """Maximal per-pair runs of sightings with gaps of at most max_gap seconds."""
    if max_gap < 0:
        raise ValueError("max_gap must be non-negative")
    out: list[Encounter] = []
    for (device, scanner), stamps in sorted(_by_pair(sightings).items()):
        first = prev = stamps[0]
        count = 0
        for ts in stamps:
            if ts - prev > max_gap:
                out.append(Encounter(device, scanner, first, prev, count))
                first = ts
                count = 0
            prev = ts
            count += 1
        out.append(Encounter(device, scanner, first, prev, count))
    return out


def encounter_statistics(
    sightings: Iterable[Sighting], gaps: Iterable[int]
) -> list[tuple[int, int, int]]:
    """One (gap, encounter_count, total_duration_s) row per gap value."""
    rows = list(sightings)
    out = []
    for gap in gaps:
        encounters = extract_encounters(rows, gap)
        out.append((gap, len(encounters), sum(e.duration for e in encounters)))
    return out


# -- exposure ------------------------------------------------------------


def compute_raw_exposure(sightings: Iterable[Sighting]) -> int:
    """Seconds of exposure with every sighting worth one second."""
    return sum(1 for _ in sightings)


def compute_scheme_exposure(
    sightings: Iterable[Sighting],
    scheme: ExposureScheme,
    align: str = "grid",
) -> ExposureReport:
    """Threshold-gated exposure over n*t-second windows of t-second slots.

    ``align="grid"`` (default) cuts windows on the shared n*t grid;
    ``align="device"`` anchors each device's windows at its own first
    sighting. A (device, scanner, window) counts only when its sightings
    cover at least k distinct slots, and then contributes one slot of t
    seconds per distinct observed slot.
    """
    if align not in ("grid", "device"):
        raise ValueError(f"unknown alignment {align!r}")
    rows = list(sightings)
    anchors: dict[str, int] = {}
    if align == "device":
        for s in rows:
            prev = anchors.get(s.device_id)
            if prev is None or s.timestamp < prev:
                anchors[s.device_id] = s.timestamp
    window_s = scheme.window_s
    slots: dict[tuple[str, str, int], set[int]] = {}
    for s in rows:
        rel = s.timestamp - anchors.get(s.device_id, 0)
        window, offset = divmod(rel, window_s)
        slots.setdefault((s.device_id, s.scanner_id, window), set()).add(offset // scheme.t)
    exposed = sum(len(v) for v in slots.values() if len(v) >= scheme.k)
    return ExposureReport(scheme, exposed, compute_raw_exposure(rows))


# -- report writers ------------------------------------------------------


def write_exposure_report(reports: Iterable[ExposureReport], out: TextIO) -> None:
    out.write(EXPOSURE_HEADER + "\n")
    for report in reports:
        out.write(report.to_line() + "\n")


def write_encounter_report(rows: Iterable[tuple[int, int, int]], out: TextIO) -> None:
    out.write(ENCOUNTER_HEADER + "\n")
    for gap, count, duration in rows:
        out.write(f"{gap}\t{count}\t{duration}\n")
