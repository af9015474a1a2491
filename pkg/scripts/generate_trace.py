#!/usr/bin/env python3
"""Regenerate the bundled synthetic sighting trace.

Three broadcasting devices and two scanners over 600 seconds. Each
scanner hears each 1 Hz beacon independently with its own loss rate;
sighting timestamps are the beacon emission times truncated to whole
seconds, matching the integer-second log schema. Deterministic: the
bundled file is reproducible byte-for-byte.

Usage: python scripts/generate_trace.py [OUT]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from shardcast.broadcaster import BroadcastConfig, Broadcaster
from shardcast.identity import identifier_new
from shardcast.rng import RandomSource
from shardcast.shamir import SchemeParams

SEED = 20260822
HORIZON_S = 600.0
DEVICES = ("d1", "d2", "d3")
SCANNERS = (("s1", 0.30), ("s2", 0.50))  # (token, loss rate)


def main() -> None:
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "data" / "synthetic_trace.csv"
    )
    rng = RandomSource(SEED)
    config = BroadcastConfig(SchemeParams(5, 6), t_share=5.0, adv_interval=1.0)
    rows = []
    for token in DEVICES:
        dev_rng = rng.derive()
        phase = rng.random() * config.t_share
        device = Broadcaster(identifier_new(dev_rng), config, dev_rng, start=phase)
        for emission in device.emissions_before(HORIZON_S):
            for scanner, loss in SCANNERS:
                if rng.random() < loss:
                    continue
                rssi = -40 - rng.randrange(45)
                rows.append((int(emission.t), token, scanner, rssi))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    with out_path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("timestamp,device_id,scanner_id,rssi\n")
        for ts, device, scanner, rssi in rows:
            fh.write(f"{ts},{device},{scanner},{rssi}\n")
    print(f"{len(rows)} sightings -> {out_path}")


if __name__ == "__main__":
    main()
