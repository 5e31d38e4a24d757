"""Timing harnesses: chained modular multiplications and decimal multiply."""
import random
import time
from dataclasses import dataclass

import numpy as np
from numba import njit

from .modword import AdjustStrategy, umulh
from .montfield import SOLINAS_P, make_ctx, naive_modmul_k, redc_k, solinas_reduce_k, to_mont

VARIANTS = ("naive", "montgomery", "solinas")
# a production-sized prime below 2**63 for the naive and Montgomery loops
BENCH_P = 9223372036015915009


@njit(cache=True)
def _loop_naive(n, x, y, p):
    for _ in range(n):
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
        x = naive_modmul_k(x, y, p)
    return x


@njit(cache=True)
def _loop_montgomery(n, x, y, p, p_prime, strat):
    for _ in range(n):
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
        x = redc_k(x, y, p, p_prime, strat)
    return x


@njit(cache=True)
def _solinas_mul(x, y):
    return solinas_reduce_k(x * y, umulh(x, y))


@njit(cache=True)
def _loop_solinas(n, x, y):
    for _ in range(n):
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
        x = _solinas_mul(x, y)
    return x


@dataclass
class BenchReport:
    variant: str
    n: int
    seconds: float
    checksum: int = 0

    @property
    def modmuls(self):
        return 10 * self.n

    @property
    def ns_per_modmul(self):
        return self.seconds * 1e9 / self.modmuls

    def kv_line(self):
        return (f"variant={self.variant} n={self.n} modmuls={self.modmuls} "
                f"seconds={self.seconds:.6f} ns_per_modmul={self.ns_per_modmul:.3f}")

    def summary(self):
        return (f"{self.variant}: {self.modmuls:,} modular multiplications in "
                f"{self.seconds:.3f} s ({self.ns_per_modmul:.2f} ns each)")


def _runner(variant, strategy):
    if variant == "naive":
        p = np.uint64(BENCH_P)
        return lambda n, x, y: _loop_naive(n, x, y, p), BENCH_P
    if variant == "montgomery":
        ctx = make_ctx(BENCH_P, strategy)
        p, p_prime, strat = ctx.kargs
        return lambda n, x, y: _loop_montgomery(n, x, y, p, p_prime, strat), BENCH_P
    if variant == "solinas":
        return lambda n, x, y: _loop_solinas(n, x, y), SOLINAS_P
    raise ValueError(f"unknown variant {variant!r}; pick one of {', '.join(VARIANTS)}")


def bench_modmul(variant, n, strategy=None, seed=1):
    if n < 1:
        raise ValueError("iteration count must be positive")
    run, p = _runner(variant, AdjustStrategy.parse(strategy))
    rng = random.Random(seed)
    x = np.uint64(rng.randrange(1, p))
    y = np.uint64(rng.randrange(1, p))
    if variant == "montgomery":
        y = np.uint64(to_mont(make_ctx(BENCH_P), int(y)))
    run(1, x, y)  # compile outside the timed region
    t0 = time.perf_counter()
    out = run(n, x, y)
    return BenchReport(variant, n, time.perf_counter() - t0, int(out))


def auto_iters(digits):
    return max(1, 8 * 10 ** 7 // digits)


@dataclass
class MulTiming:
    digits: int
    iters: int
    total: float
    best: float
    median: float
    lam: int
    N: int

    def kv_line(self):
        return (f"digits={self.digits} iters={self.iters} lambda={self.lam} N={self.N} "
                f"total_seconds={self.total:.6f} median_seconds={self.median:.6f} "
                f"best_seconds={self.best:.6f}")


def random_digits(n, rng):
    if n == 1:
        return str(rng.randrange(1, 10))
    body = np.frombuffer(rng.randbytes(n - 1), dtype=np.uint8) % 10 + 48
    return str(rng.randrange(1, 10)) + body.astype(np.uint8).tobytes().decode()


def bench_mul(digits, iters=None, strategy=None, budget=None, seed=2):
    """Time multiply() on random digits-long operands.

    ``budget`` (seconds) stops early once spent, after at least 3 calls.
    """
    from .decmul import multiply, select_base_and_length

    rng = random.Random(seed)
    x = random_digits(digits, rng)
    y = random_digits(digits, rng)
    iters = auto_iters(digits) if iters is None else iters
    multiply(x, y, strategy)  # plan construction and compilation
    times = []
    t_start = time.perf_counter()
    for _ in range(iters):
        t0 = time.perf_counter()
        multiply(x, y, strategy)
        times.append(time.perf_counter() - t0)
        if budget is not None and len(times) >= 3 and time.perf_counter() - t_start > budget:
            break
    lam, N = select_base_and_length(digits, digits)
    return MulTiming(digits, len(times), sum(times), min(times), float(np.median(times)), lam, N)


def sweep_sizes(start, stop):
    sizes = []
    d = start
    while d <= stop:
        sizes.append(d)
        d *= 2
    return sizes
