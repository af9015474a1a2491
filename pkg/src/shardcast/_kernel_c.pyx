# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bulk kernels: polynomial share splitting and recovery.

Table contents are injected from `gf256` via `init_tables` so both
backends share one source of truth.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize

cdef unsigned char EXP[510]
cdef unsigned char LOG[256]
cdef bint _ready = 0


def init_tables(bytes exp, bytes log):
    cdef Py_ssize_t i
    if len(exp) != 510 or len(log) != 256:
        raise ValueError("bad table sizes")
    for i in range(510):
        EXP[i] = exp[i]
    for i in range(256):
        LOG[i] = log[i]
    global _ready
    _ready = 1


cdef inline int _mul(int a, int b) noexcept:
    if a == 0 or b == 0:
        return 0
    return EXP[<int>LOG[a] + <int>LOG[b]]


def gf_mul(int a, int b):
    return _mul(a, b)


def gf_inv(int a):
    if a == 0:
        raise ValueError("0 has no inverse")
    return EXP[255 - <int>LOG[a]]


def split_secret(bytes secret, int k, int n, bytes coeffs):
    cdef Py_ssize_t width = len(secret)
    cdef const unsigned char *s = secret
    cdef const unsigned char *cf = coeffs
    cdef int x, logx
    cdef Py_ssize_t j, base
    cdef int c, acc
    cdef list bodies = []
    cdef bytes out
    cdef unsigned char *p
    if len(coeffs) != width * (k - 1):
        raise ValueError("bad coefficient block size")
    for x in range(1, n + 1):
        logx = LOG[x]
        out = PyBytes_FromStringAndSize(NULL, width)
        p = <unsigned char *> out
        for j in range(width):
            acc = 0
            base = j * (k - 1)
            for c in range(k - 2, -1, -1):
                if acc:
                    acc = EXP[<int>LOG[acc] + logx]
                acc ^= cf[base + c]
            if acc:
                acc = EXP[<int>LOG[acc] + logx]
            p[j] = acc ^ s[j]
        bodies.append(out)
    return bodies


def lagrange_weights(bytes xs):
    cdef Py_ssize_t k = len(xs)
    cdef const unsigned char *x = xs
    cdef Py_ssize_t i, j
    cdef int num_log, den_log, xi
    cdef bytes out = PyBytes_FromStringAndSize(NULL, k)
    cdef unsigned char *p = <unsigned char *> out
    for i in range(k):
        xi = x[i]
        num_log = 0
        den_log = 0
        for j in range(k):
            if i == j:
                continue
            num_log += LOG[x[j]]
            den_log += LOG[x[j] ^ xi]
        # += 255*255 keeps the C modulo argument non-negative
        p[i] = EXP[(num_log - den_log + 65025) % 255]
    return out


def recover_secret(bytes xs, bytes bodies):
    cdef Py_ssize_t k = len(xs)
    cdef Py_ssize_t width = len(bodies) // k
    cdef const unsigned char *b = bodies
    cdef bytes weights = lagrange_weights(xs)
    cdef const unsigned char *w = weights
    cdef bytes out = PyBytes_FromStringAndSize(NULL, width)
    cdef unsigned char *p = <unsigned char *> out
    cdef Py_ssize_t i, c, off
    cdef int logw, y
    for c in range(width):
        p[c] = 0
    for i in range(k):
        if w[i] == 0:
            continue
        logw = LOG[w[i]]
        off = i * width
        for c in range(width):
            y = b[off + c]
            if y:
                p[c] ^= EXP[logw + <int>LOG[y]]
    return out
