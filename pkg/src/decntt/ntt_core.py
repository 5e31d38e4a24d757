"""Radix-2 DIF/DIT kernels over a Montgomery field.

Inputs are plain residues and the root tables are in Montgomery form, so
every REDC(x, w~) equals x * w in plain arithmetic. The only loose end is
a factor R^-1 per pointwise product, which the inverse scale absorbs.
"""
from dataclasses import dataclass

import numpy as np
from numba import njit

from .modword import mod_add_k, mod_sub_k
from .montfield import mont_pow, redc_k
from .primegen import primitive_root_of_unity


def is_pow2(n):
    return n >= 1 and n & (n - 1) == 0


@njit(cache=True)
def bit_rev_permute_k(A):
    n = A.shape[0]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j ^= bit
        if i < j:
            t = A[i]
            A[i] = A[j]
            A[j] = t


@njit(cache=True)
def dif_k(A, T, p, p_prime, strat, peel):
    n = A.shape[0]
    m = n
    while m >= 2:
        h = m >> 1
        delta = h - 1
        j0 = 1 if peel else 0
        for k in range(0, n, m):
            if peel:
                u = A[k]
                v = A[k + h]
                A[k] = mod_add_k(u, v, p, strat)
                A[k + h] = mod_sub_k(u, v, p, strat)
            for j in range(j0, h):
                u = A[k + j]
                v = A[k + j + h]
                A[k + j] = mod_add_k(u, v, p, strat)
                # u - v + p lies in [1, 2p-1]: left unadjusted for redc
                A[k + j + h] = redc_k(u - v + p, T[delta + j], p, p_prime, strat)
        m = h


@njit(cache=True)
def dit_k(A, T, p, p_prime, strat, peel):
    n = A.shape[0]
    m = 2
    while m <= n:
        h = m >> 1
        delta = h - 1
        j0 = 1 if peel else 0
        for k in range(0, n, m):
            if peel:
                u = A[k]
                v = A[k + h]
                A[k] = mod_add_k(u, v, p, strat)
                A[k + h] = mod_sub_k(u, v, p, strat)
            for j in range(j0, h):
                u = A[k + j]
                v = redc_k(A[k + j + h], T[delta + j], p, p_prime, strat)
                A[k + j] = mod_add_k(u, v, p, strat)
                A[k + j + h] = mod_sub_k(u, v, p, strat)
        m <<= 1


@njit(cache=True)
def dif_rows_k(M, T, p, p_prime, strat, bitrev):
    for r in range(M.shape[0]):
        dif_k(M[r], T, p, p_prime, strat, True)
        if bitrev:
            bit_rev_permute_k(M[r])


@njit(cache=True)
def dit_rows_k(M, T, p, p_prime, strat, bitrev):
    for r in range(M.shape[0]):
        if bitrev:
            bit_rev_permute_k(M[r])
        dit_k(M[r], T, p, p_prime, strat, True)


@njit(cache=True)
def scale_k(A, c, p, p_prime, strat):
    for i in range(A.shape[0]):
        A[i] = redc_k(A[i], c, p, p_prime, strat)


@njit(cache=True)
def pointwise_k(A, B, out, p, p_prime, strat):
    for i in range(A.shape[0]):
        out[i] = redc_k(A[i], B[i], p, p_prime, strat)


@njit(cache=True)
def fill_table_k(T, w, one, p, p_prime, strat):
    """T[delta + i] = w**(i * n/m) for each stage m, from one power run."""
    n = T.shape[0] + 1
    half = n >> 1
    t = np.empty(half, dtype=np.uint64)
    x = one
    for i in range(half):
        t[i] = x
        x = redc_k(x, w, p, p_prime, strat)
    m = 2
    while m <= n:
        h = m >> 1
        stride = n // m
        for i in range(h):
            T[h - 1 + i] = t[i * stride]
        m <<= 1


@dataclass(frozen=True, eq=False)
class NttPlan:
    N: int
    ctx: object
    root: int  # xi, Montgomery form
    fwd_roots: np.ndarray
    inv_roots: np.ndarray
    psi_prime: int

    @property
    def kargs(self):
        return self.ctx.kargs


def _table(ctx, w, N):
    T = np.empty(max(N - 1, 0), dtype=np.uint64)
    if N >= 2:
        fill_table_k(T, np.uint64(w), np.uint64(ctx.one), *ctx.kargs)
    return T


def build_plan(ctx, N, root=None):
    """Root tables and inverse scale for a length-N (power of two) transform.

    ``root`` is an optional primitive N-th root in Montgomery form.
    """
    if not is_pow2(N):
        raise ValueError(f"transform length {N} is not a power of two")
    p = ctx.p
    if (p - 1) % N:
        raise ValueError(f"{N} does not divide p - 1 for p={p}")
    xi = primitive_root_of_unity(ctx, N) if root is None else root
    xi_inv = mont_pow(ctx, xi, N - 1)
    psi_prime = ctx.r2_mod_p * pow(N, -1, p) % p
    fwd = _table(ctx, xi, N)
    inv = _table(ctx, xi_inv, N)
    fwd.flags.writeable = False
    inv.flags.writeable = False
    return NttPlan(N, ctx, xi, fwd, inv, psi_prime)


def _as_words(A, N=None):
    if not (isinstance(A, np.ndarray) and A.dtype == np.uint64):
        raise TypeError("expected a uint64 numpy array")
    if N is not None and A.shape[0] != N:
        raise ValueError(f"length {A.shape[0]} does not match plan length {N}")
    return A


def bit_rev_permute(A):
    if not is_pow2(len(A)):
        raise ValueError("bit reversal needs a power-of-two length")
    bit_rev_permute_k(_as_words(A))
    return A


def dif_forward_no_bitrev(plan, A, peel=True):
    """In place; leaves the spectrum in bit-reversed order."""
    _as_words(A, plan.N)
    dif_k(A, plan.fwd_roots, *plan.kargs, peel)
    return A


def dit_inverse_no_bitrev(plan, A, peel=True):
    """In place; bit-reversed input, natural output, no 1/N scaling."""
    _as_words(A, plan.N)
    dit_k(A, plan.inv_roots, *plan.kargs, peel)
    return A


def scale_by_psi_prime(plan, A):
    scale_k(_as_words(A), np.uint64(plan.psi_prime), *plan.kargs)
    return A
