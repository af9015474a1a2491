"""GF(2^8) arithmetic under the reduction polynomial 0x11B.

The field is x^8 + x^4 + x^3 + x + 1 with generator 3. Multiplication goes
through 256-entry log/exp tables; the tables are built from, and validated
against, a bitwise carry-less multiply so a corrupted table can never ship
silently. `selftest` checks every product pair and every inverse
exhaustively and is wired into the test suite.
"""

from .errors import ZeroInverse

POLY = 0x11B
GENERATOR = 0x03


def clmul(a: int, b: int) -> int:
    """Shift-and-add field multiply, reducing after every doubling step."""
    p = 0
    while b:
        if b & 1:
            p ^= a
        a <<= 1
        if a & 0x100:
            a ^= POLY
        b >>= 1
    return p


def _build_tables() -> tuple[list[int], list[int]]:
    exp = [0] * 510
    log = [0] * 256
    x = 1
    for i in range(255):
        exp[i] = x
        exp[i + 255] = x
        log[x] = i
        x = clmul(x, GENERATOR)
    if x != 1:
        raise AssertionError("generator does not have order 255")
    return exp, log


EXP, LOG = _build_tables()


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroInverse("0 has no multiplicative inverse")
    return EXP[255 - LOG[a]]


def gf_div(a: int, b: int) -> int:
    return gf_mul(a, gf_inv(b))


def _validate_tables() -> None:
    # Structural: exp must enumerate all 255 nonzero elements exactly once,
    # with log the exact inverse mapping.
    if sorted(EXP[:255]) != list(range(1, 256)):
        raise AssertionError("exp table is not a permutation of 1..255")
    for value in range(1, 256):
        if EXP[LOG[value]] != value:
            raise AssertionError("log/exp tables disagree")
    # Sampled product comparison against the bitwise multiply. The
    # exhaustive 65,536-pair sweep lives in selftest().
    probes = (0, 1, 2, 3, 0x1B, 0x53, 0x80, 0xCA, 0xFE, 0xFF)
    for a in probes:
        for b in probes:
            if gf_mul(a, b) != clmul(a, b):
                raise AssertionError(f"table product wrong for {a:#x}*{b:#x}")


_validate_tables()


def selftest() -> None:
    """Exhaustively compare the table path with the bitwise path."""
    for a in range(256):
        for b in range(256):
            if gf_mul(a, b) != clmul(a, b):
                raise AssertionError(f"product mismatch at {a:#x}*{b:#x}")
    for a in range(1, 256):
        if gf_mul(a, gf_inv(a)) != 1:
            raise AssertionError(f"inverse wrong for {a:#x}")
