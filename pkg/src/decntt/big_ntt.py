"""Full-length transforms and per-prime cyclic convolution.

Lengths 2**k go through the plain DIF/DIT kernels when small and through
the six-step algorithm otherwise; lengths 3 * 2**k use three rows of 2**k
with a fused radix-3 column pass. The spectrum is left in whatever order
the forward pass produces and the inverse pass consumes that same order.
"""
import enum
import threading

import numpy as np
from numba import njit

from .mat_transpose import transpose_2n_x_n_k, transpose_n_x_2n_k, transpose_square_k
from .modword import AdjustStrategy, mod_add_k
from .montfield import make_ctx, mont_pow, redc_k
from .ntt_core import (
    bit_rev_permute_k,
    build_plan,
    dif_k,
    dit_k,
    is_pow2,
    pointwise_k,
    scale_k,
)
from .primegen import default_prime_pair, primitive_root_of_unity

DEFAULT_THRESHOLD = 1 << 15


class Shape(enum.Enum):
    DIRECT = "direct"
    SIX_STEP = "six-step"
    FOUR_STEP_3_ROWS = "four-step-3-rows"


def split_length(N):
    """(rows, cols) = (2**floor(k/2), 2**ceil(k/2)) for N = 2**k."""
    k = N.bit_length() - 1
    return 1 << (k // 2), 1 << (k - k // 2)


@njit(cache=True)
def _to_cols_k(a, R, C, zeta):
    # R x C  ->  C x R, where C is R or 2R
    if R == C:
        transpose_square_k(a, 0, R, R)
    else:
        transpose_n_x_2n_k(a, zeta, R)


@njit(cache=True)
def _to_rows_k(a, R, C, zeta):
    # C x R  ->  R x C
    if R == C:
        transpose_square_k(a, 0, R, R)
    else:
        transpose_2n_x_n_k(a, zeta, R)


@njit(cache=True)
def twiddle_k(a, R, C, w, f0, one, p, p_prime, strat):
    """a[i*C + j] *= f0 * w**(i*j), factors built up by repeated products."""
    g = one
    for i in range(R):
        f = f0
        base = i * C
        for j in range(C):
            a[base + j] = redc_k(a[base + j], f, p, p_prime, strat)
            f = redc_k(f, g, p, p_prime, strat)
        g = redc_k(g, w, p, p_prime, strat)


@njit(cache=True)
def six_step_fwd_k(a, R, C, zeta, TR, TC, xi, one, p, p_prime, strat):
    _to_cols_k(a, R, C, zeta)
    for c in range(C):
        row = a[c * R:(c + 1) * R]
        dif_k(row, TR, p, p_prime, strat, True)
        bit_rev_permute_k(row)
    _to_rows_k(a, R, C, zeta)
    twiddle_k(a, R, C, xi, one, one, p, p_prime, strat)
    for r in range(R):
        dif_k(a[r * C:(r + 1) * C], TC, p, p_prime, strat, True)


@njit(cache=True)
def six_step_inv_k(a, R, C, zeta, TR, TC, xi_inv, phi, one, p, p_prime, strat):
    for r in range(R):
        dit_k(a[r * C:(r + 1) * C], TC, p, p_prime, strat, True)
    twiddle_k(a, R, C, xi_inv, phi, one, p, p_prime, strat)
    _to_cols_k(a, R, C, zeta)
    for c in range(C):
        row = a[c * R:(c + 1) * R]
        bit_rev_permute_k(row)
        dit_k(row, TR, p, p_prime, strat, True)
    _to_rows_k(a, R, C, zeta)


@njit(cache=True)
def radix3_fwd_k(a, C, lam, lam2, gam, gam2, one, p, p_prime, strat):
    f1 = one
    f2 = one
    for c in range(C):
        x = a[c]
        y = a[C + c]
        z = a[2 * C + c]
        y1 = redc_k(y, lam, p, p_prime, strat)
        y2 = redc_k(y, lam2, p, p_prime, strat)
        z1 = redc_k(z, lam, p, p_prime, strat)
        z2 = redc_k(z, lam2, p, p_prime, strat)
        a[c] = mod_add_k(mod_add_k(x, y, p, strat), z, p, strat)
        s1 = mod_add_k(mod_add_k(x, y1, p, strat), z2, p, strat)
        s2 = mod_add_k(mod_add_k(x, y2, p, strat), z1, p, strat)
        a[C + c] = redc_k(s1, f1, p, p_prime, strat)
        a[2 * C + c] = redc_k(s2, f2, p, p_prime, strat)
        f1 = redc_k(f1, gam, p, p_prime, strat)
        f2 = redc_k(f2, gam2, p, p_prime, strat)


@njit(cache=True)
def radix3_inv_k(a, C, lam, lam2, gam, gam2, phi, p, p_prime, strat):
    f1 = phi
    f2 = phi
    for c in range(C):
        x = redc_k(a[c], phi, p, p_prime, strat)
        y = redc_k(a[C + c], f1, p, p_prime, strat)
        z = redc_k(a[2 * C + c], f2, p, p_prime, strat)
        y1 = redc_k(y, lam, p, p_prime, strat)
        y2 = redc_k(y, lam2, p, p_prime, strat)
        z1 = redc_k(z, lam, p, p_prime, strat)
        z2 = redc_k(z, lam2, p, p_prime, strat)
        a[c] = mod_add_k(mod_add_k(x, y, p, strat), z, p, strat)
        a[C + c] = mod_add_k(mod_add_k(x, y1, p, strat), z2, p, strat)
        a[2 * C + c] = mod_add_k(mod_add_k(x, y2, p, strat), z1, p, strat)
        f1 = redc_k(f1, gam, p, p_prime, strat)
        f2 = redc_k(f2, gam2, p, p_prime, strat)


class Pow2Transform:
    """Length-2**k transform for one prime with a given primitive root
    (Montgomery form); direct below the threshold, six-step above."""

    def __init__(self, ctx, n, omega, threshold):
        self.ctx = ctx
        self.n = n
        self.omega = omega
        self.one = np.uint64(ctx.one)
        if n <= threshold:
            self.shape = Shape.DIRECT
            self.plan = build_plan(ctx, n, root=omega)
            return
        self.shape = Shape.SIX_STEP
        # rows always use the direct kernels, whatever their length
        R, C = split_length(n)
        self.R, self.C = R, C
        self.row_plan = build_plan(ctx, R, root=mont_pow(ctx, omega, C))
        self.col_plan = build_plan(ctx, C, root=mont_pow(ctx, omega, R))
        self.w = np.uint64(omega)
        self.w_inv = np.uint64(mont_pow(ctx, omega, n - 1))
        # N^-1 and the REDC correction, in plain (non-Montgomery) form
        self.psi_prime = ctx.r2_mod_p * pow(n, -1, ctx.p) % ctx.p

    def forward(self, a):
        if self.shape is Shape.DIRECT:
            dif_k(a, self.plan.fwd_roots, *self.ctx.kargs, True)
            return
        zeta = np.empty(2 * self.R, dtype=np.uint64)
        six_step_fwd_k(
            a, self.R, self.C, zeta, self.row_plan.fwd_roots, self.col_plan.fwd_roots,
            self.w, self.one, *self.ctx.kargs,
        )

    def inverse(self, a, scale=True):
        """IDFT; with scale=False the 1/N and R factors are left out."""
        if self.shape is Shape.DIRECT:
            dit_k(a, self.plan.inv_roots, *self.ctx.kargs, True)
            if scale:
                scale_k(a, np.uint64(self.plan.psi_prime), *self.ctx.kargs)
            return
        zeta = np.empty(2 * self.R, dtype=np.uint64)
        phi = np.uint64(self.psi_prime if scale else self.ctx.one)
        six_step_inv_k(
            a, self.R, self.C, zeta, self.row_plan.inv_roots, self.col_plan.inv_roots,
            self.w_inv, phi, self.one, *self.ctx.kargs,
        )

    def order(self):
        """order()[q] = spectral index held at position q."""
        if self.shape is Shape.DIRECT:
            return _bitrev_indices(self.n)
        R, C = self.R, self.C
        q = np.arange(self.n)
        return (q // C) + R * _bitrev_indices(C)[q % C]


class ThreeRowTransform:
    """Length 3 * 2**k: radix-3 column pass fused with the twiddles, then
    three row transforms of length 2**k."""

    shape = Shape.FOUR_STEP_3_ROWS

    def __init__(self, ctx, n, xi, threshold):
        self.ctx = ctx
        self.n = n
        self.C = C = n // 3
        self.rows = Pow2Transform(ctx, C, mont_pow(ctx, xi, 3), threshold)
        xi_inv = mont_pow(ctx, xi, n - 1)
        self.fwd = self._seeds(xi)
        self.inv = self._seeds(xi_inv)
        self.psi_prime = ctx.r2_mod_p * pow(n, -1, ctx.p) % ctx.p

    def _seeds(self, gam):
        ctx = self.ctx
        lam = mont_pow(ctx, gam, self.C)
        return tuple(np.uint64(v) for v in (
            lam, mont_pow(ctx, lam, 2), gam, mont_pow(ctx, gam, 2)))

    def forward(self, a):
        C = self.C
        radix3_fwd_k(a, C, *self.fwd, np.uint64(self.ctx.one), *self.ctx.kargs)
        for r in range(3):
            self.rows.forward(a[r * C:(r + 1) * C])

    def inverse(self, a, scale=True):
        C = self.C
        for r in range(3):
            self.rows.inverse(a[r * C:(r + 1) * C], scale=False)
        phi = np.uint64(self.psi_prime if scale else self.ctx.one)
        radix3_inv_k(a, C, *self.inv, phi, *self.ctx.kargs)

    def order(self):
        C = self.C
        q = np.arange(self.n)
        return (q // C) + 3 * self.rows.order()[q % C]


def _bitrev_indices(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def transform_shape_for(N, threshold=DEFAULT_THRESHOLD):
    if is_pow2(N):
        return Shape.DIRECT if N <= threshold else Shape.SIX_STEP
    if N % 3 == 0 and is_pow2(N // 3):
        return Shape.FOUR_STEP_3_ROWS
    raise ValueError(f"unsupported transform length {N}")


class ConvPlan:
    """Transforms of length N for each prime in ``primes``."""

    def __init__(self, N, primes=None, threshold=DEFAULT_THRESHOLD,
                 strategy=None):
        if primes is None:
            primes = default_prime_pair().primes
        self.N = N
        self.threshold = threshold
        self.strategy = AdjustStrategy.parse(strategy)
        self.shape = transform_shape_for(N, threshold)
        self.ctxs = tuple(make_ctx(p, self.strategy) for p in primes)
        self.transforms = []
        for ctx in self.ctxs:
            if (ctx.p - 1) % N:
                raise ValueError(f"{N} does not divide p - 1 for p={ctx.p}")
            xi = primitive_root_of_unity(ctx, N)
            if self.shape is Shape.FOUR_STEP_3_ROWS:
                t = ThreeRowTransform(ctx, N, xi, threshold)
            else:
                t = Pow2Transform(ctx, N, xi, threshold)
            self.transforms.append(t)

    @property
    def primes(self):
        return tuple(c.p for c in self.ctxs)

    def _check(self, A):
        if not (isinstance(A, np.ndarray) and A.dtype == np.uint64 and A.ndim == 1):
            raise TypeError("expected a 1-d uint64 numpy array")
        if A.shape[0] != self.N:
            raise ValueError(f"length {A.shape[0]} does not match plan length {self.N}")


_plans = {}
_plans_lock = threading.Lock()


def get_plan(N, threshold=DEFAULT_THRESHOLD, strategy=None):
    """Shared plan over the production prime pair."""
    key = (N, threshold, AdjustStrategy.parse(strategy))
    with _plans_lock:
        plan = _plans.get(key)
        if plan is None:
            plan = _plans[key] = ConvPlan(N, None, threshold, key[2])
    return plan


def forward_transform(plan, prime_index, A):
    """In place; returns A holding the spectrum in the plan's internal order."""
    plan._check(A)
    plan.transforms[prime_index].forward(A)
    return A


def inverse_transform(plan, prime_index, A):
    """In place; undoes forward_transform including 1/N (and the R^-1 left
    behind by one REDC pointwise product)."""
    plan._check(A)
    plan.transforms[prime_index].inverse(A)
    return A


def pointwise_product(plan, prime_index, A, B, out=None):
    plan._check(A)
    plan._check(B)
    if out is None:
        out = A
    pointwise_k(A, B, out, *plan.ctxs[prime_index].kargs)
    return out


def convolve_mod_p(plan, prime_index, x, y):
    """Cyclic convolution of plain residue vectors x and y modulo p."""
    p = plan.ctxs[prime_index].p
    same = x is y
    a = np.array(x, dtype=np.uint64)
    plan._check(a)
    if np.any(a >= p):
        raise ValueError("inputs must be residues below p")
    forward_transform(plan, prime_index, a)
    if same:
        b = a
    else:
        b = np.array(y, dtype=np.uint64)
        plan._check(b)
        if np.any(b >= p):
            raise ValueError("inputs must be residues below p")
        forward_transform(plan, prime_index, b)
    pointwise_product(plan, prime_index, a, b)
    return inverse_transform(plan, prime_index, a)


def _spectrum_order(plan, prime_index=0):
    return plan.transforms[prime_index].order()
