"""Arithmetic in GF(2^l) for 1 <= l <= 32.

Elements are integers whose bits are polynomial coefficients over GF(2).
Each degree uses a fixed low-weight irreducible modulus (the lexicographically
first trinomial, else pentanomial), so evaluations are bit-exact everywhere.

The hot loops are numba kernels. Multiplication by a fixed point ``x`` uses a
16-entry window table of ``x * n`` plus a byte-wise reduction table, which is
what makes Horner evaluation of long polynomials affordable.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit

from .errors import ParameterError

MAX_FIELD_LOG = 32

# degree -> exponents of the middle terms (x^l + ... + 1)
_MIDDLE_TERMS: dict[int, tuple[int, ...]] = {
    1: (), 2: (1,), 3: (1,), 4: (1,), 5: (2,), 6: (1,), 7: (1,), 8: (4, 3, 1),
    9: (1,), 10: (3,), 11: (2,), 12: (3,), 13: (4, 3, 1), 14: (5,), 15: (1,),
    16: (5, 3, 1), 17: (3,), 18: (3,), 19: (5, 2, 1), 20: (3,), 21: (2,),
    22: (1,), 23: (5,), 24: (4, 3, 1), 25: (3,), 26: (4, 3, 1), 27: (5, 2, 1),
    28: (1,), 29: (2,), 30: (1,), 31: (3,), 32: (7, 3, 2),
}


def modulus(field_log: int) -> int:
    """Irreducible polynomial for GF(2^field_log), as an integer with bit l set."""
    if not 1 <= field_log <= MAX_FIELD_LOG:
        raise ParameterError(f"field_log must be in 1..{MAX_FIELD_LOG}, got {field_log}")
    poly = (1 << field_log) | 1
    for e in _MIDDLE_TERMS[field_log]:
        poly |= 1 << e
    return poly


def field_log_for(n: int) -> int:
    """Bits per element so that n distinct evaluation points exist."""
    return max(1, (max(n, 2) - 1).bit_length())


def _reduce_slow(a: int, poly: int) -> int:
    deg = poly.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= poly << (a.bit_length() - 1 - deg)
    return a


@lru_cache(maxsize=None)
def reduction_table(field_log: int) -> np.ndarray:
    """``table[h] = h(x) * x^l mod P`` for every byte ``h``."""
    poly = modulus(field_log)
    return np.array([_reduce_slow(h << field_log, poly) for h in range(256)], dtype=np.uint64)


@njit(cache=True, inline="always")
def _window(x, table):
    # table[n] = clmul(x, n) for n < 16, unreduced
    table[0] = 0
    table[1] = x
    for n in range(2, 16, 2):
        table[n] = table[n >> 1] << np.uint64(1)
        table[n + 1] = table[n] ^ x


@njit(cache=True, inline="always")
def _mul_windowed(y, table, ell, red):
    prod = np.uint64(0)
    p = 0
    while p < ell:
        prod ^= table[(y >> np.uint64(p)) & np.uint64(15)] << np.uint64(p)
        p += 4
    o = ((ell - 2) // 8) * 8 if ell >= 2 else 0
    while o >= 0:
        shift = np.uint64(ell + o)
        h = (prod >> shift) & np.uint64(255)
        prod ^= h << shift
        prod ^= red[h] << np.uint64(o)
        o -= 8
    return prod


@njit(cache=True)
def _mul(a, b, ell, red):
    table = np.empty(16, dtype=np.uint64)
    _window(np.uint64(a), table)
    return _mul_windowed(np.uint64(b), table, ell, red)


@njit(cache=True)
def _horner(desc, x, ell, red):
    table = np.empty(16, dtype=np.uint64)
    _window(np.uint64(x), table)
    y = np.uint64(0)
    for j in range(desc.shape[0]):
        y = _mul_windowed(y, table, ell, red) ^ desc[j]
    return y


@njit(cache=True)
def _horner_many(desc_rows, xs, ell, red, out):
    table = np.empty(16, dtype=np.uint64)
    k = desc_rows.shape[1]
    for i in range(xs.shape[0]):
        _window(xs[i], table)
        for r in range(desc_rows.shape[0]):
            y = np.uint64(0)
            for j in range(k):
                y = _mul_windowed(y, table, ell, red) ^ desc_rows[r, j]
            out[r, i] = y


def mul(a: int, b: int, field_log: int) -> int:
    """Product of two field elements."""
    return int(_mul(np.uint64(a), np.uint64(b), field_log, reduction_table(field_log)))


def poly_eval(coeffs_desc: np.ndarray, x: int, field_log: int) -> int:
    """Evaluate a polynomial (coefficients highest degree first) at ``x``."""
    return int(_horner(coeffs_desc, np.uint64(x), field_log, reduction_table(field_log)))


def poly_eval_many(coeff_rows_desc: np.ndarray, xs: np.ndarray, field_log: int) -> np.ndarray:
    """Evaluate each row polynomial at every point; returns shape (rows, len(xs))."""
    rows = np.ascontiguousarray(coeff_rows_desc, dtype=np.uint64)
    if rows.ndim == 1:
        rows = rows[None, :]
    pts = np.ascontiguousarray(xs, dtype=np.uint64)
    out = np.empty((rows.shape[0], pts.shape[0]), dtype=np.uint64)
    _horner_many(rows, pts, field_log, reduction_table(field_log), out)
    return out
