"""Montgomery arithmetic over a single-word prime, plus naive and Solinas
reduction (the latter two exist for the modmul benchmark)."""
import ctypes
from dataclasses import dataclass

import llvmlite.binding as llvm
import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic
from numba.cpython.unsafe.numbers import leading_zeros

from .modword import (
    MU,
    W,
    WORD_MASK,
    AdjustStrategy,
    WidePair,
    adjust_signed_k,
    umulh,
)

SOLINAS_P = (1 << 64) - (1 << 32) + 1

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U32 = np.uint64(32)
_U64 = np.uint64(64)
_MASK32 = np.uint64(0xFFFFFFFF)
_B32 = np.uint64(1 << 32)
_SOL_P = np.uint64(SOLINAS_P)


def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def mont_params(p, width=W):
    """p' with p * p' == -1 (mod 2**width), via extended Euclid."""
    mu = 1 << width
    g, c1, _ = _ext_gcd(p, mu)
    if g != 1:
        raise ValueError(f"p={p} is not coprime with 2**{width}")
    p_prime = (-c1) % mu
    assert p * p_prime % mu == mu - 1
    return p_prime


def montgomery_reduce_generic(a, p, p_prime, width):
    """Reference MontgomeryReduce for any word width (test harness)."""
    mu = 1 << width
    assert 0 <= a < mu * p
    m = ((a % mu) * p_prime) % mu
    t = a + m * p
    assert t % mu == 0
    r = t // mu
    return r - p if r >= p else r


@dataclass(frozen=True)
class MontCtx:
    p: int
    p_prime: int
    r_mod_p: int
    r2_mod_p: int
    strategy: AdjustStrategy = AdjustStrategy.CONDITIONAL_SELECT

    @property
    def one(self):
        """Montgomery form of 1."""
        return self.r_mod_p

    # numba arguments, hoisted once per context
    @property
    def kargs(self):
        return np.uint64(self.p), np.uint64(self.p_prime), int(self.strategy)


def make_ctx(p, strategy=None):
    if p % 2 == 0 or p <= 2:
        raise ValueError("Montgomery modulus must be odd and > 2")
    if p >= MU // 2:
        raise ValueError("modulus must be below 2**63")
    strategy = AdjustStrategy.parse(strategy)
    r = MU % p
    ctx = MontCtx(p, mont_params(p), r, r * r % p, strategy)
    assert (ctx.p * ctx.p_prime) & WORD_MASK == WORD_MASK
    return ctx


@njit(cache=True)
def mont_reduce_k(lo, hi, p, p_prime, strat):
    # requires hi:lo < mu * p; low word of a + m*p is zero by construction
    m = lo * p_prime
    mhi = umulh(m, p)
    carry = _U1 if lo != _U0 else _U0
    r = hi + mhi + carry
    return adjust_signed_k(r - p, p, strat)


@njit(cache=True)
def redc_k(x, y, p, p_prime, strat):
    # x*y < mu*p: fine when at most one of x, y is in [p, 2p-1]
    return mont_reduce_k(x * y, umulh(x, y), p, p_prime, strat)


@njit(cache=True)
def mont_pow_k(base, e, one, p, p_prime, strat):
    result = one
    while e != _U0:
        if e & _U1:
            result = redc_k(result, base, p, p_prime, strat)
        base = redc_k(base, base, p, p_prime, strat)
        e >>= _U1
    return result


@njit(cache=True)
def udiv_2by1_k(u1, u0, v):
    """Software two-word by one-word division (u1 < v), half-word long
    division with normalisation. Returns (quotient, remainder)."""
    s = np.uint64(leading_zeros(v))
    v = v << s
    vn1 = v >> _U32
    vn0 = v & _MASK32
    if s == _U0:
        un32 = u1
    else:
        un32 = (u1 << s) | (u0 >> (_U64 - s))
    un10 = u0 << s
    un1 = un10 >> _U32
    un0 = un10 & _MASK32

    q1 = un32 // vn1
    rhat = un32 - q1 * vn1
    while q1 >= _B32 or q1 * vn0 > ((rhat << _U32) | un1):
        q1 -= _U1
        rhat += vn1
        if rhat >= _B32:
            break
    un21 = ((un32 << _U32) | un1) - q1 * v

    q0 = un21 // vn1
    rhat = un21 - q0 * vn1
    while q0 >= _B32 or q0 * vn0 > ((rhat << _U32) | un0):
        q0 -= _U1
        rhat += vn1
        if rhat >= _B32:
            break
    r = (((un21 << _U32) | un0) - q0 * v) >> s
    return (q1 << _U32) | q0, r


def _register_umodti3():
    # LLVM lowers a 128-bit urem to a libgcc call; numba does not link it
    try:
        lib = ctypes.CDLL("libgcc_s.so.1")
        llvm.add_symbol("__umodti3", ctypes.cast(lib.__umodti3, ctypes.c_void_p).value)
        return True
    except (OSError, AttributeError):
        return False


HAVE_UREM128 = _register_umodti3()


@intrinsic
def urem128(typingctx, hi, lo, d):
    """(hi:lo) mod d through the platform's two-word division routine."""
    sig = types.uint64(types.uint64, types.uint64, types.uint64)

    def codegen(context, builder, signature, args):
        i128 = ir.IntType(128)
        x = builder.or_(
            builder.shl(builder.zext(args[0], i128), ir.Constant(i128, 64)),
            builder.zext(args[1], i128),
        )
        r = builder.urem(x, builder.zext(args[2], i128))
        return builder.trunc(r, ir.IntType(64))

    return sig, codegen


if HAVE_UREM128:
    @njit(cache=True)
    def naive_modmul_k(a, b, p):
        return urem128(umulh(a, b), a * b, p)
else:
    @njit(cache=True)
    def naive_modmul_k(a, b, p):
        _, r = udiv_2by1_k(umulh(a, b), a * b, p)
        return r


@njit(cache=True)
def solinas_reduce_k(lo, hi):
    # first round of r: y = hi*2^32 - hi + lo, held in y1:y0 (97 bits)
    t_lo = hi << _U32
    t_hi = hi >> _U32
    s_lo = t_lo - hi
    s_hi = t_hi - (_U1 if t_lo < hi else _U0)
    y0 = s_lo + lo
    y1 = s_hi + (_U1 if y0 < lo else _U0)
    # second round, y1 < 2^32 so (y1 << 32) - y1 does not wrap
    z = y0 + ((y1 << _U32) - y1)
    carry = z < y0
    # z (with carry) < 2p now
    if carry or z >= _SOL_P:
        z -= _SOL_P
    return z


def _pair(a):
    if isinstance(a, tuple):
        a = WidePair(*a).value
    return WidePair.from_int(a)


def mont_reduce(ctx, a):
    a = _pair(a)
    assert a.value < MU * ctx.p, "mont_reduce input must be < mu*p"
    return int(mont_reduce_k(np.uint64(a.lo), np.uint64(a.hi), *ctx.kargs))


def redc(ctx, x, y):
    assert x * y < MU * ctx.p, "redc operands too large"
    return int(redc_k(np.uint64(x), np.uint64(y), *ctx.kargs))


def to_mont(ctx, x):
    assert 0 <= x < ctx.p
    return redc(ctx, x, ctx.r2_mod_p)


def from_mont(ctx, x):
    return redc(ctx, x, 1)


def mont_pow(ctx, x, e):
    """x**e for x in Montgomery form (square-and-multiply)."""
    return int(mont_pow_k(np.uint64(x), np.uint64(e), np.uint64(ctx.one), *ctx.kargs))


def naive_modmul(p, a, b):
    assert 0 <= a < p and 0 <= b < p
    return int(naive_modmul_k(np.uint64(a), np.uint64(b), np.uint64(p)))


def udiv_2by1(u1, u0, v):
    assert 0 <= u1 < v < MU
    q, r = udiv_2by1_k(np.uint64(u1), np.uint64(u0), np.uint64(v))
    return int(q), int(r)


def solinas_reduce(x):
    x = _pair(x)
    return int(solinas_reduce_k(np.uint64(x.lo), np.uint64(x.hi)))
