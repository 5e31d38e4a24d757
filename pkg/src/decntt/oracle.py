"""Slow reference implementations for tests. Nothing here touches the
production kernels."""
import decimal

import numpy as np

_WORD = (1 << 64) - 1


def _check_root(p, xi, n):
    if pow(xi, n, p) != 1 or any(pow(xi, n // q, p) == 1 for q in (2, 3) if n % q == 0):
        raise ValueError(f"{xi} is not a primitive {n}-th root of unity mod {p}")


def naive_dft(p, xi, x):
    n = len(x)
    _check_root(p, xi, n)
    return [sum(int(x[i]) * pow(xi, i * k, p) for i in range(n)) % p for k in range(n)]


def naive_idft(p, xi, X):
    n = len(X)
    _check_root(p, xi, n)
    xi_inv = pow(xi, -1, p)
    n_inv = pow(n, -1, p)
    return [n_inv * sum(int(X[k]) * pow(xi_inv, i * k, p) for k in range(n)) % p
            for i in range(n)]


def naive_convolve(p, x, y):
    n = len(x)
    if len(y) != n:
        raise ValueError("convolution operands must have equal length")
    out = [0] * n
    for k in range(n):
        s = 0
        for i in range(n):
            s += int(x[i]) * int(y[(k - i) % n])
        out[k] = s % p
    return out


_G = 4  # digits per group, so group products stay small in int64


def _groups(s):
    s = s.lstrip("0") or "0"
    pad = (-len(s)) % _G
    s = "0" * pad + s
    return np.array([int(s[i:i + _G]) for i in range(0, len(s), _G)][::-1], dtype=np.int64)


def schoolbook_multiply(x, y):
    """Quadratic digit-group multiplication of decimal strings."""
    x, y = str(x), str(y)
    a, b = _groups(x), _groups(y)
    if not a.any() or not b.any():
        return "0"
    if len(a) < len(b):
        a, b = b, a
    acc = np.zeros(len(a) + len(b), dtype=np.int64)
    # each row adds at most 10**8 per slot; normalise now and then
    for i, d in enumerate(b):
        if d:
            acc[i:i + len(a)] += a * int(d)
        if i % 4096 == 4095:
            acc = _normalise(acc)
    acc = _normalise(acc)
    top = len(acc) - 1
    while top > 0 and acc[top] == 0:
        top -= 1
    lower = acc[:top][::-1]
    return str(int(acc[top])) + "".join(f"{int(v):0{_G}d}" for v in lower)


def _normalise(acc):
    base = 10 ** _G
    out = acc.copy()
    carry = 0
    for i in range(len(out)):
        carry, out[i] = divmod(int(out[i]) + carry, base)
    assert carry == 0
    return out


def decimal_multiply(x, y):
    """Second reference built on the standard library decimal module."""
    ctx = decimal.Context(prec=decimal.MAX_PREC, Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)
    return str(ctx.multiply(decimal.Decimal(str(x)), decimal.Decimal(str(y))))


def wide_divmod_generic(x, d):
    """Restoring binary long division of a two-word value or int
    by a one-word d; a tuple is read as (lo, hi). Returns ((q_lo, q_hi), r)."""
    if d == 0:
        raise ZeroDivisionError("division by zero")
    if isinstance(x, tuple):
        lo, hi = x
    else:
        lo, hi = x & _WORD, x >> 64
    q_hi = q_lo = 0
    r = 0
    for bit in range(127, -1, -1):
        word = hi if bit >= 64 else lo
        r = (r << 1) | ((word >> (bit & 63)) & 1)
        if r >= d:
            r -= d
            if bit >= 64:
                q_hi |= 1 << (bit - 64)
            else:
                q_lo |= 1 << bit
    return (q_lo, q_hi), r


def sieve(limit):
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, int(limit ** 0.5) + 1):
        if flags[i]:
            flags[i * i::i] = False
    return flags
