"""Deterministic seed derivation, independent of PYTHONHASHSEED."""

from __future__ import annotations

import hashlib


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from a mix of ints, strings and bytes."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, bytes):
            h.update(b"b" + part)
        elif isinstance(part, str):
            h.update(b"s" + part.encode())
        elif isinstance(part, (int,)):
            h.update(b"i" + part.to_bytes(16, "little", signed=True))
        else:
            raise TypeError(f"cannot derive a seed from {type(part)!r}")
        h.update(b"\x00")
    return int.from_bytes(h.digest(), "little") >> 1
