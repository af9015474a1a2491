"""Pure-Python bulk kernels: polynomial share splitting and recovery.

Mirrors `_kernel_c` exactly; the byte-for-byte agreement of the two
backends is enforced at import time and again in the test suite.
"""

from .gf256 import EXP, LOG


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ValueError("0 has no inverse")
    return EXP[255 - LOG[a]]


def split_secret(secret: bytes, k: int, n: int, coeffs: bytes) -> list[bytes]:
    """Evaluate one random degree-(k-1) polynomial per secret byte at x=1..n.

    ``coeffs`` supplies the len(secret)*(k-1) random coefficient bytes so the
    caller controls the randomness stream.
    """
    width = len(secret)
    exp, log = EXP, LOG
    bodies = []
    for x in range(1, n + 1):
        logx = log[x]
        body = bytearray(width)
        for j in range(width):
            acc = 0
            base = j * (k - 1)
            for c in range(k - 2, -1, -1):
                if acc:
                    acc = exp[log[acc] + logx]
                acc ^= coeffs[base + c]
            if acc:
                acc = exp[log[acc] + logx]
            body[j] = acc ^ secret[j]
        bodies.append(bytes(body))
    return bodies


def lagrange_weights(xs: bytes) -> bytes:
    """Basis weights at x=0 for the share x-coordinates ``xs``."""
    k = len(xs)
    exp, log = EXP, LOG
    out = bytearray(k)
    for i in range(k):
        xi = xs[i]
        num_log = 0
        den_log = 0
        for j in range(k):
            if i == j:
                continue
            xj = xs[j]
            num_log += log[xj]
            den_log += log[xj ^ xi]
        out[i] = exp[(num_log - den_log) % 255]
    return bytes(out)


def recover_secret(xs: bytes, bodies: bytes) -> bytes:
    """Interpolate the k packed share bodies at x=0.

    ``bodies`` holds k equal-length bodies concatenated; length must be a
    multiple of len(xs).
    """
    k = len(xs)
    width = len(bodies) // k
    weights = lagrange_weights(xs)
    exp, log = EXP, LOG
    out = bytearray(width)
    for i in range(k):
        w = weights[i]
        if w == 0:
            continue
        logw = log[w]
        off = i * width
        for c in range(width):
            y = bodies[off + c]
            if y:
                out[c] ^= exp[logw + log[y]]
    return bytes(out)
