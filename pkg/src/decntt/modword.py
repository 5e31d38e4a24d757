"""64-bit machine word primitives shared by every field kernel.

Everything here is compiled with numba. Scalars are ``np.uint64``; a
two-word value is carried around as a ``(lo, hi)`` pair.
"""
import enum
from typing import NamedTuple

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

W = 64
MU = 1 << W
WORD_MASK = MU - 1

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_S63 = np.int64(63)


class AdjustStrategy(enum.IntEnum):
    """How ``[-p, p-1] -> [0, p-1]`` adjustment is compiled."""

    CONDITIONAL_SELECT = 0
    BIT_WIZARDRY = 1

    @classmethod
    def parse(cls, name):
        """Accepts a member, its value, a CLI name, or None (the current default)."""
        if name is None:
            return _default[0]
        if isinstance(name, cls):
            return name
        if isinstance(name, int):
            return cls(name)
        key = str(name).strip().lower().replace("-", "_")
        aliases = {
            "cselect": cls.CONDITIONAL_SELECT,
            "conditional_select": cls.CONDITIONAL_SELECT,
            "cmov": cls.CONDITIONAL_SELECT,
            "bitwise": cls.BIT_WIZARDRY,
            "bit_wizardry": cls.BIT_WIZARDRY,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown adjust strategy {name!r}") from None

    @property
    def cli_name(self):
        return "cselect" if self is AdjustStrategy.CONDITIONAL_SELECT else "bitwise"


DEFAULT_STRATEGY = AdjustStrategy.CONDITIONAL_SELECT
_default = [DEFAULT_STRATEGY]


def default_strategy():
    return _default[0]


def set_default_strategy(strategy):
    """Process-wide default used wherever a strategy is left as None."""
    _default[0] = AdjustStrategy.parse(strategy)


class WidePair(NamedTuple):
    lo: int
    hi: int

    @property
    def value(self):
        return (self.hi << W) | self.lo

    @classmethod
    def from_int(cls, x):
        if not 0 <= x < MU * MU:
            raise ValueError("value does not fit in two words")
        return cls(x & WORD_MASK, x >> W)


@intrinsic
def umulh(typingctx, a, b):
    """High word of the full 128-bit product of two words."""
    sig = types.uint64(types.uint64, types.uint64)

    def codegen(context, builder, signature, args):
        i128 = ir.IntType(128)
        prod = builder.mul(builder.zext(args[0], i128), builder.zext(args[1], i128))
        return builder.trunc(builder.lshr(prod, ir.Constant(i128, 64)), ir.IntType(64))

    return sig, codegen


@njit(cache=True)
def wide_mul_k(a, b):
    return a * b, umulh(a, b)


@njit(cache=True)
def extract_sign_k(x):
    return np.uint64(np.int64(x) >> _S63)


@njit(cache=True)
def adjust_signed_k(x, p, strat):
    # x is a two's complement value in [-p, p-1]
    if strat == 1:
        return x + (p & extract_sign_k(x))
    return x + p if np.int64(x) < 0 else x


@njit(cache=True)
def mod_add_k(a, b, p, strat):
    return adjust_signed_k(a + b - p, p, strat)


@njit(cache=True)
def mod_sub_k(a, b, p, strat):
    return adjust_signed_k(a - b, p, strat)


@njit(cache=True)
def adjust_k(a, p, strat):
    return adjust_signed_k(a - p, p, strat)


@njit(cache=True)
def add2_k(lo, hi, lo2, hi2):
    """Two-word addition modulo mu^2."""
    s = lo + lo2
    c = _U1 if s < lo else _U0
    return s, hi + hi2 + c


def _word(x):
    return np.uint64(x & WORD_MASK)


def _check_p(p):
    if not 2 < p < MU // 2:
        raise ValueError("modulus must satisfy 2 < p < 2**63")


def wide_mul(a, b):
    lo, hi = wide_mul_k(_word(a), _word(b))
    return WidePair(int(lo), int(hi))


def extract_sign(x):
    return int(extract_sign_k(_word(x)))


def adjust_signed(x, p, strategy=None):
    """``x`` may be a negative Python int or its two's complement word."""
    _check_p(p)
    s = x - MU if x >= MU // 2 else x
    assert -p <= s < p, "adjust_signed input out of range"
    return int(adjust_signed_k(_word(x), np.uint64(p), int(AdjustStrategy.parse(strategy))))


def mod_add(a, b, p, strategy=None):
    _check_p(p)
    assert 0 <= a < p and 0 <= b < p
    return int(mod_add_k(np.uint64(a), np.uint64(b), np.uint64(p), int(AdjustStrategy.parse(strategy))))


def mod_sub(a, b, p, strategy=None):
    _check_p(p)
    assert 0 <= a < p and 0 <= b < p
    return int(mod_sub_k(np.uint64(a), np.uint64(b), np.uint64(p), int(AdjustStrategy.parse(strategy))))


def adjust(a, p, strategy=None):
    _check_p(p)
    assert 0 <= a < 2 * p
    return int(adjust_k(np.uint64(a), np.uint64(p), int(AdjustStrategy.parse(strategy))))
