"""Self-verifying device identifiers and their share sets.

An identifier is 16 bytes: 12 random bytes followed by their CRC-32
(IEEE 802.3) serialized big-endian. The checksum is what lets a receiver
decide that k recombined shares really came from one device, without any
cleartext checksum ever appearing on air.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

from . import shamir
from .errors import BadLength
from .rng import RandomSource
from .shamir import SchemeParams

RANDOM_LEN = 12
CHECKSUM_LEN = 4
IDENTIFIER_LEN = RANDOM_LEN + CHECKSUM_LEN


def identifier_new(rng: RandomSource) -> bytes:
    """Fresh identifier: 12 random bytes plus their big-endian CRC-32."""
    body = rng.randbytes(RANDOM_LEN)
    return body + zlib.crc32(body).to_bytes(CHECKSUM_LEN, "big")


def identifier_verify(candidate: bytes) -> bool:
    """True when the trailing checksum matches the leading 12 bytes."""
    if len(candidate) != IDENTIFIER_LEN:
        raise BadLength(f"identifier must be {IDENTIFIER_LEN} bytes, got {len(candidate)}")
    expected = zlib.crc32(candidate[:RANDOM_LEN])
    return int.from_bytes(candidate[RANDOM_LEN:], "big") == expected


@dataclass(frozen=True)
class Share:
    """One key share: interpolation x-coordinate plus 16 evaluation bytes."""

    share_id: int
    body: bytes

    def __post_init__(self):
        if len(self.body) != IDENTIFIER_LEN:
            raise BadLength(f"share body must be {IDENTIFIER_LEN} bytes, got {len(self.body)}")


@dataclass(frozen=True)
class ShareSet:
    """The n shares of one identifier generation."""

    shares: tuple[Share, ...]
    params: SchemeParams
    created_at: float
    expiry: float
    generation: int = 0


def default_expiry(params: SchemeParams, t_share: float) -> float:
    """Lifetime covering one full broadcast cycle: n slots of t_share."""
    return params.n * t_share


def shareset_generate(
    identifier: bytes,
    params: SchemeParams,
    expiry: float,
    rng: RandomSource,
    created_at: float = 0.0,
    generation: int = 0,
) -> ShareSet:
    """Split ``identifier`` into a fresh set of n shares."""
    if len(identifier) != IDENTIFIER_LEN:
        raise BadLength(f"identifier must be {IDENTIFIER_LEN} bytes, got {len(identifier)}")
    pairs = shamir.split(identifier, params, rng)
    shares = tuple(Share(share_id, body) for share_id, body in pairs)
    return ShareSet(shares, params, created_at, expiry, generation)


def shareset_expired(share_set: ShareSet, now: float) -> bool:
    """Inclusive boundary: the set is already stale at created_at + expiry."""
    return now >= share_set.created_at + share_set.expiry
