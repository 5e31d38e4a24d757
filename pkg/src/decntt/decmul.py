"""Decimal multiplication: pack digits into base 10**lam limbs, convolve
modulo two primes, glue the residues with CRT and propagate carries."""
import threading
from dataclasses import dataclass

import numpy as np
from numba import njit

from .big_ntt import DEFAULT_THRESHOLD, forward_transform, get_plan, inverse_transform, pointwise_product
from .modword import MU, W, WORD_MASK, AdjustStrategy, WidePair, mod_sub_k, umulh
from .montfield import make_ctx, redc_k
from .primegen import default_prime_pair

SUPPORTED_LAMBDAS = (17, 16, 15, 14)

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U63 = np.uint64(63)
_U64 = np.uint64(64)


class OperandTooLarge(ValueError):
    pass


class CarryBoundError(ArithmeticError):
    """A carry or coefficient left its proven range: upstream corruption."""


def lambda_(ell, M, mu_exp=W):
    """Largest n with (10**n - 1)**2 * M < (2**(mu_exp-1))**ell; 0 if none."""
    limit = 1 << ((mu_exp - 1) * ell)
    n = 0
    while (10 ** (n + 1) - 1) ** 2 * M < limit:
        n += 1
    return n


def limb_count(n_digits, lam):
    return -(-n_digits // lam)


def transform_lengths(limit):
    """All 2**k and 3 * 2**k up to limit, ascending."""
    out = []
    k = 1
    while k <= limit:
        out.append(k)
        if 3 * k <= limit:
            out.append(3 * k)
        k *= 2
    return sorted(set(out))


def select_base_and_length(n_digits_x, n_digits_y, pair=None):
    """(lam, N) for multiplying numbers with the given digit counts."""
    if n_digits_x < 1 or n_digits_y < 1:
        raise ValueError("digit counts must be positive")
    pair = pair or default_prime_pair()
    pp = pair.product
    p1, p2 = pair.primes
    for lam in SUPPORTED_LAMBDAS:
        lx, ly = limb_count(n_digits_x, lam), limb_count(n_digits_y, lam)
        if (10 ** lam - 1) ** 2 * min(lx, ly) >= pp:
            continue
        need = lx + ly
        for N in _lengths_for(p1, p2):
            if N >= need:
                return lam, N
        break
    raise OperandTooLarge(
        f"operands of {n_digits_x} and {n_digits_y} digits exceed what the prime pair supports")


_length_cache = {}


def _lengths_for(p1, p2):
    key = (p1, p2)
    if key not in _length_cache:
        g = np.gcd(p1 - 1, p2 - 1)
        _length_cache[key] = [N for N in transform_lengths(g) if N >= 2 and g % N == 0]
    return _length_cache[key]


class DecimalNumber:
    """Non-negative decimal integer backed by its digit string."""

    __slots__ = ("text",)

    def __init__(self, text):
        if isinstance(text, DecimalNumber):
            text = text.text
        elif isinstance(text, int):
            if text < 0:
                raise ValueError("negative numbers are not supported")
            text = str(text)
        text = text.strip()
        if not text or not text.isascii() or not text.isdigit():
            raise ValueError("expected a string of decimal digits")
        self.text = text.lstrip("0") or "0"

    @classmethod
    def from_digits(cls, digits):
        """From little-endian digits."""
        return cls("".join(str(int(d)) for d in reversed(list(digits))) or "0")

    @property
    def digits(self):
        """Little-endian digit array."""
        return (np.frombuffer(self.text.encode(), dtype=np.uint8) - 48)[::-1].copy()

    def is_zero(self):
        return self.text == "0"

    def __len__(self):
        return len(self.text)

    def __str__(self):
        return self.text

    def __repr__(self):
        t = self.text if len(self.text) <= 40 else self.text[:20] + "..." + self.text[-17:]
        return f"DecimalNumber({t!r})"

    def __eq__(self, other):
        if isinstance(other, DecimalNumber):
            return self.text == other.text
        return NotImplemented

    def __hash__(self):
        return hash(self.text)


@dataclass(frozen=True)
class PackedOperand:
    base_exp: int
    limbs: np.ndarray
    radix: int = None  # only set for bases that are not a power of ten

    @property
    def value(self):
        B = self.radix or 10 ** self.base_exp
        return sum(int(v) * B ** i for i, v in enumerate(self.limbs))


_POW10 = 10 ** np.arange(18, dtype=np.uint64)


def pack(x, lam):
    """Little-endian base 10**lam limbs of x."""
    if lam not in SUPPORTED_LAMBDAS and not 1 <= lam <= 18:
        raise ValueError(f"unsupported limb width {lam}")
    s = DecimalNumber(x).text.encode()
    n = limb_count(len(s), lam)
    d = np.zeros(n * lam, dtype=np.uint8)
    d[n * lam - len(s):] = np.frombuffer(s, dtype=np.uint8) - 48
    weights = _POW10[lam - 1::-1]
    limbs = d.reshape(n, lam).astype(np.uint64) @ weights
    return PackedOperand(lam, np.ascontiguousarray(limbs[::-1]))


def limbs_to_text(limbs, lam):
    """Big-endian decimal text of little-endian limbs, leading zeros removed."""
    z = np.asarray(limbs, dtype=np.uint64)[::-1]
    if z.size == 0:
        return "0"
    weights = _POW10[lam - 1::-1]
    digits = (z[:, None] // weights[None, :]) % np.uint64(10)
    text = (digits.astype(np.uint8) + 48).tobytes().decode().lstrip("0")
    return text or "0"


# -- division of a two-word value by a fixed one-word constant ----------------

@njit(cache=True)
def _div_normalized_k(u1, u0, d, v):
    # Moller-Granlund 2-by-1 step: d has its top bit set and u1 < d
    q0 = v * u1
    q1 = umulh(v, u1)
    s = q0 + u0
    q1 = q1 + u1 + (_U1 if s < q0 else _U0)
    q0 = s
    q1 += _U1
    r = u0 - q1 * d
    if r > q0:
        q1 -= _U1
        r += d
    if r >= d:
        q1 += _U1
        r -= d
    return q1, r


@njit(cache=True)
def divmod_base_k(lo, hi, d, v, shift):
    """(q_lo, q_hi, r) with q * B + r = hi:lo, B = d >> shift."""
    # high word first: (0 : hi) / B, then (r : lo) / B, both normalized
    if shift == _U0:
        u1 = _U0
        u0 = hi
    else:
        u1 = hi >> (_U64 - shift)
        u0 = hi << shift
    q_hi, r = _div_normalized_k(u1, u0, d, v)
    # r is the normalized remainder (r_true << shift); append lo
    if shift == _U0:
        u1 = r
        u0 = lo
    else:
        u1 = r | (lo >> (_U64 - shift))
        u0 = lo << shift
    q_lo, r = _div_normalized_k(u1, u0, d, v)
    return q_lo, q_hi, r >> shift


@dataclass(frozen=True)
class DivByConstB:
    base_exp: int
    B: int
    d: int  # B shifted so its top bit is set
    v: int  # floor((mu**2 - 1) / d) - mu
    shift: int

    @classmethod
    def for_base(cls, B, base_exp=None):
        if not 2 <= B < MU:
            raise ValueError("divisor must fit in one word")
        shift = W - B.bit_length()
        d = B << shift
        v = (MU * MU - 1) // d - MU
        return cls(base_exp, B, d, v, shift)

    @classmethod
    def for_lambda(cls, lam):
        return _DIVIDERS[lam] if lam in _DIVIDERS else cls.for_base(10 ** lam, lam)

    @property
    def kargs(self):
        return np.uint64(self.d), np.uint64(self.v), np.uint64(self.shift)


_DIVIDERS = {lam: DivByConstB.for_base(10 ** lam, lam) for lam in SUPPORTED_LAMBDAS}


def divmod_base(div, x):
    """(quotient, remainder) of a two-word x by the divider's B."""
    x = WidePair(*x) if isinstance(x, tuple) else WidePair.from_int(x)
    if x.value >= MU * MU // 2:
        raise ValueError("dividend must be below mu**2 / 2")
    q_lo, q_hi, r = divmod_base_k(np.uint64(x.lo), np.uint64(x.hi), *div.kargs)
    return WidePair(int(q_lo), int(q_hi)), int(r)


# -- CRT ---------------------------------------------------------------------

@dataclass(frozen=True)
class CrtCtx:
    p1: int
    p2: int
    r_tilde: int
    ctx2: object

    @classmethod
    def make(cls, p1, p2, strategy=None):
        if not p1 < p2:
            raise ValueError("CRT needs p1 < p2")
        ctx2 = make_ctx(p2, strategy)
        r = pow(p1, -1, p2)
        return cls(p1, p2, ctx2.r_mod_p * r % p2, ctx2)

    @property
    def kargs(self):
        p2, p2_prime, strat = self.ctx2.kargs
        return np.uint64(self.p1), p2, p2_prime, np.uint64(self.r_tilde), strat


@njit(cache=True)
def crt2_k(a1, a2, p1, p2, p2_prime, r_tilde, strat):
    # a1 < p1 < p2, so a1 is already reduced modulo p2
    psi = mod_sub_k(a2, a1, p2, strat)
    phi = redc_k(r_tilde, psi, p2, p2_prime, strat)
    lo = p1 * phi
    hi = umulh(p1, phi)
    s = lo + a1
    return s, hi + (_U1 if s < lo else _U0)


@njit(cache=True)
def crt2_array_k(a1, a2, out_lo, out_hi, p1, p2, p2_prime, r_tilde, strat):
    for i in range(a1.shape[0]):
        out_lo[i], out_hi[i] = crt2_k(a1[i], a2[i], p1, p2, p2_prime, r_tilde, strat)


def crt2(ctx, a1, a2):
    if not (0 <= a1 < ctx.p1 and 0 <= a2 < ctx.p2):
        raise ValueError("residues out of range")
    lo, hi = crt2_k(np.uint64(a1), np.uint64(a2), *ctx.kargs)
    return WidePair(int(lo), int(hi))


# -- carry propagation -------------------------------------------------------

@njit(cache=True)
def recover_k(c_lo, c_hi, z, d, v, shift, bound_lo, bound_hi):
    """z[i] = (sigma + c[i]) mod B, sigma <- (sigma + c[i]) div B.

    Returns (-1, sigma_lo, sigma_hi) on success, or (i, ., .) for the first
    position where sigma >= bound or sigma + c[i] >= mu**2 / 2.
    """
    s_lo = _U0
    s_hi = _U0
    for i in range(c_lo.shape[0]):
        if s_hi > bound_hi or (s_hi == bound_hi and s_lo >= bound_lo):
            return i, s_lo, s_hi
        t_lo = s_lo + c_lo[i]
        carry = _U1 if t_lo < s_lo else _U0
        t_hi = s_hi + c_hi[i]
        wrapped = t_hi < s_hi
        t_hi += carry
        if wrapped or t_hi < carry or (t_hi >> _U63) != _U0:
            return i, s_lo, s_hi
        q_lo, q_hi, r = divmod_base_k(t_lo, t_hi, d, v, shift)
        z[i] = r
        s_lo = q_lo
        s_hi = q_hi
    return -1, s_lo, s_hi


def recover_digits(c, B=None, min_limbs=None, lam=None, div=None):
    """Carry-propagate convolution outputs c (ints, WidePairs, or a
    (lo, hi) pair of arrays) into base-B limbs."""
    if div is None:
        div = DivByConstB.for_lambda(lam) if lam is not None else DivByConstB.for_base(B)
    B = div.B
    if isinstance(c, tuple) and len(c) == 2 and isinstance(c[0], np.ndarray):
        c_lo, c_hi = c
    else:
        vals = [WidePair(*x).value if isinstance(x, tuple) else int(x) for x in c]
        c_lo = np.array([x & WORD_MASK for x in vals], dtype=np.uint64)
        c_hi = np.array([x >> W for x in vals], dtype=np.uint64)
    n = c_lo.shape[0]
    if min_limbs is None:
        min_limbs = max(n, 1)
    bound = (B - 1) * min_limbs
    # a zero bound would reject the start; sigma_0 = 0 is always fine
    bound = max(bound, 1)
    bound_pair = WidePair.from_int(min(bound, MU * MU - 1))
    z = np.zeros(n, dtype=np.uint64)
    err, s_lo, s_hi = recover_k(
        c_lo, c_hi, z, *div.kargs, np.uint64(bound_pair.lo), np.uint64(bound_pair.hi))
    if err >= 0:
        raise CarryBoundError(f"carry bound violated at position {err}")
    sigma = (int(s_hi) << W) | int(s_lo)
    if sigma:
        tail = []
        while sigma:
            sigma, r = divmod(sigma, B)
            tail.append(r)
        z = np.concatenate([z, np.array(tail, dtype=np.uint64)])
    radix = None if div.base_exp is not None else B
    return PackedOperand(div.base_exp, z, radix)


# -- the full pipeline ------------------------------------------------------

_crt_cache = {}
_crt_lock = threading.Lock()


def _crt_ctx(p1, p2, strategy):
    key = (p1, p2, strategy)
    with _crt_lock:
        if key not in _crt_cache:
            _crt_cache[key] = CrtCtx.make(p1, p2, strategy)
        return _crt_cache[key]


def multiply_limbs(xl, yl, lam, N, strategy=None, threshold=DEFAULT_THRESHOLD,
                   square=False):
    """Base 10**lam limbs of the product of two little-endian limb arrays."""
    plan = get_plan(N, threshold, strategy)
    n = len(xl) + len(yl)
    res = []
    for idx in range(2):
        a = np.zeros(N, dtype=np.uint64)
        a[:len(xl)] = xl
        forward_transform(plan, idx, a)
        if square:
            b = a
        else:
            b = np.zeros(N, dtype=np.uint64)
            b[:len(yl)] = yl
            forward_transform(plan, idx, b)
        pointwise_product(plan, idx, a, b)
        inverse_transform(plan, idx, a)
        res.append(a[:n])
    p1, p2 = plan.primes
    crt = _crt_ctx(p1, p2, plan.strategy)
    c_lo = np.empty(n, dtype=np.uint64)
    c_hi = np.empty(n, dtype=np.uint64)
    crt2_array_k(res[0], res[1], c_lo, c_hi, *crt.kargs)
    out = recover_digits((c_lo, c_hi), min_limbs=min(len(xl), len(yl)), lam=lam)
    return out.limbs


def multiply(x, y, strategy=None, threshold=DEFAULT_THRESHOLD):
    """Exact product of two non-negative decimal integers.

    Accepts strings, ints or DecimalNumber; returns a string when x is a
    string and a DecimalNumber otherwise.
    """
    as_text = isinstance(x, str)
    square = x is y
    dx = DecimalNumber(x)
    dy = dx if square else DecimalNumber(y)
    square = square or dx.text == dy.text
    strategy = AdjustStrategy.parse(strategy)
    if dx.is_zero() or dy.is_zero():
        text = "0"
    else:
        lam, N = select_base_and_length(len(dx), len(dy))
        xl = pack(dx, lam).limbs
        yl = xl if square else pack(dy, lam).limbs
        text = limbs_to_text(multiply_limbs(xl, yl, lam, N, strategy, threshold, square), lam)
    return text if as_text else DecimalNumber(text)
