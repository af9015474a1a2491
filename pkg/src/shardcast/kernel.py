"""Backend selection for the bulk share kernels.

Prefers the compiled extension, falls back to pure Python, and honors
``SHARDCAST_PURE_PYTHON=1`` to force the fallback. Whichever backend wins
is cross-checked at import time against the bitwise field oracle and, when
both are present, against the other backend.
"""

from __future__ import annotations

import os

from . import _kernel_py, gf256

_compiled = None
if os.environ.get("SHARDCAST_PURE_PYTHON") != "1":
    try:
        from . import _kernel_c as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

if _compiled is not None:
    _compiled.init_tables(bytes(gf256.EXP), bytes(gf256.LOG))
    _impl = _compiled
    BACKEND = "compiled"
else:
    _impl = _kernel_py
    BACKEND = "python"

gf_mul = _impl.gf_mul
gf_inv = _impl.gf_inv
split_secret = _impl.split_secret
lagrange_weights = _impl.lagrange_weights
recover_secret = _impl.recover_secret


def available_backends() -> dict:
    """Importable kernel modules keyed by name (for benchmarks and tests)."""
    found = {"python": _kernel_py}
    if _compiled is not None:
        found["compiled"] = _compiled
    return found


def _startup_check() -> None:
    probes = (0, 1, 2, 0x1B, 0x53, 0x80, 0xCA, 0xFF)
    for a in probes:
        for b in probes:
            if gf_mul(a, b) != gf256.clmul(a, b):
                raise AssertionError(f"{BACKEND} backend product wrong at {a:#x}*{b:#x}")
    secret = bytes(range(16))
    coeffs = bytes((7 * i + 3) % 256 for i in range(16 * 2))
    bodies = split_secret(secret, 3, 5, coeffs)
    xs = bytes([1, 3, 5])
    packed = bodies[0] + bodies[2] + bodies[4]
    if recover_secret(xs, packed) != secret:
        raise AssertionError(f"{BACKEND} backend does not round-trip")
    if _compiled is not None:
        if _kernel_py.split_secret(secret, 3, 5, coeffs) != bodies:
            raise AssertionError("backends disagree on split")
        if _kernel_py.recover_secret(xs, packed) != secret:
            raise AssertionError("backends disagree on recovery")


_startup_check()
