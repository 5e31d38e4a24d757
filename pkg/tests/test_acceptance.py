"""Acceptance suite. Each test carries a criterion marker; the terminal
summary prints one PASS/FAIL line per criterion."""
import random
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from numba import njit

from decntt.bench import bench_modmul, bench_mul, sweep_sizes
from decntt.big_ntt import ConvPlan, convolve_mod_p, forward_transform, inverse_transform
from decntt.decmul import (
    SUPPORTED_LAMBDAS,
    DivByConstB,
    lambda_,
    limb_count,
    multiply,
    recover_digits,
    select_base_and_length,
)
from decntt.mat_transpose import make_scratch, transpose_2n_x_n, transpose_n_x_2n
from decntt.modword import MU, AdjustStrategy, umulh
from decntt.montfield import from_mont
from decntt.ntt_core import bit_rev_permute, build_plan, dif_forward_no_bitrev, dit_inverse_no_bitrev
from decntt.oracle import naive_convolve, naive_dft, naive_idft, schoolbook_multiply, sieve
from decntt.primegen import N_MIN, PrimeSpec, default_prime_pair, is_prime

PAIR = default_prime_pair()
P1, P2 = PAIR.primes


def _report(n, line):
    print(f"[criterion {n}] {line}")


def _digits(rng, n):
    if n == 1:
        return str(rng.randrange(10))
    return str(rng.randrange(1, 10)) + "".join(rng.choice("0123456789") for _ in range(n - 1))


def _all_nines_square(n):
    # (10**n - 1)**2 = 9...98 0...01
    return "9" * (n - 1) + "8" + "0" * (n - 1) + "1"


# 1 ---------------------------------------------------------------------------

@pytest.mark.criterion(1)
@pytest.mark.parametrize("n", [1, 10, 100, 1000, 10_000, 20_000])
def test_c1_exact_vs_schoolbook(n):
    rng = random.Random(1000 + n)
    for _ in range(100):
        x, y = _digits(rng, n), _digits(rng, n)
        assert multiply(x, y) == schoolbook_multiply(x, y)
    nines = "9" * n
    want = schoolbook_multiply(nines, nines)
    assert want == (_all_nines_square(n) if n > 1 else "81")
    assert multiply(nines, nines) == want
    _report(1, f"n={n}: 100 random pairs + all-nines exact")


# 2 ---------------------------------------------------------------------------

LAMBDA_TABLE = {
    (64, 15): (7, 16, 26, 35),
    (64, 20): (6, 15, 25, 34),
    (64, 25): (5, 15, 24, 34),
    (32, 15): (2, 7, 11, 16),
    (32, 20): (1, 6, 10, 15),
    (32, 25): (0, 5, 10, 14),
}


@pytest.mark.criterion(2)
def test_c2_lambda_table():
    cells = 0
    for (mu_exp, m_exp), row in LAMBDA_TABLE.items():
        for ell, want in zip((1, 2, 3, 4), row):
            assert lambda_(ell, 2 ** m_exp, mu_exp) == want, (mu_exp, m_exp, ell)
            cells += 1
    assert cells == 24
    _report(2, "24/24 cells reproduced")


# 3 ---------------------------------------------------------------------------

ROUND_TRIP_LENGTHS = [1 << k for k in range(2, 15)] + [3 << k for k in range(1, 14)]


@pytest.mark.criterion(3)
@pytest.mark.parametrize("N", ROUND_TRIP_LENGTHS)
def test_c3_round_trip(N):
    plan = ConvPlan(N, primes=(P1, P2))
    rng = np.random.default_rng(N)
    delta = np.zeros(N, dtype=np.uint64)
    delta[0] = 1
    for idx, p in enumerate(plan.primes):
        for _ in range(10):
            x = rng.integers(0, p, size=N, dtype=np.uint64)
            a = inverse_transform(plan, idx, forward_transform(plan, idx, x.copy()))
            # the bare pair carries the R that one REDC pointwise product removes
            R = MU % p
            assert a.tolist() == [int(v) * R % p for v in x]
            assert np.array_equal(convolve_mod_p(plan, idx, x, delta), x)


# 4 ---------------------------------------------------------------------------

SMALL_N = [4, 8, 12, 16, 24, 32]


@pytest.mark.criterion(4)
@pytest.mark.parametrize("p", [17, 97, 193, P1, P2])
def test_c4_convolution_vs_naive(p):
    rng = random.Random(p)
    checked = []
    for N in SMALL_N:
        if (p - 1) % N:
            continue
        for thr in (4, 1 << 15):
            plan = ConvPlan(N, primes=(p,), threshold=thr)
            for _ in range(100):
                x = [rng.randrange(p) for _ in range(N)]
                y = [rng.randrange(p) for _ in range(N)]
                assert convolve_mod_p(plan, 0, x, y).tolist() == naive_convolve(p, x, y)
        checked.append(N)
    _report(4, f"p={p}: N in {checked}, 100 pairs each, direct and split shapes")


@pytest.mark.criterion(4)
@pytest.mark.parametrize("p", [17, 97, 193, P1, P2])
def test_c4_kernels_vs_naive_dft(p):
    from decntt.montfield import make_ctx

    ctx = make_ctx(p)
    rng = random.Random(p + 1)
    for N in (n for n in SMALL_N if n & (n - 1) == 0 and (p - 1) % n == 0):
        plan = build_plan(ctx, N)
        xi = from_mont(ctx, plan.root)
        for _ in range(20):
            x = [rng.randrange(p) for _ in range(N)]
            X = naive_dft(p, xi, x)
            got = dif_forward_no_bitrev(plan, np.array(x, dtype=np.uint64))
            assert got.tolist() == bit_rev_permute(np.array(X, dtype=np.uint64)).tolist()
            back = dit_inverse_no_bitrev(plan, got)
            assert back.tolist() == [N * v % p for v in naive_idft(p, xi, X)]


# 5 ---------------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_c5_transposition():
    for n in range(1, 65):
        rng = np.random.default_rng(n)
        a = rng.integers(0, 1 << 64, size=2 * n * n, dtype=np.uint64, endpoint=False)
        s = make_scratch(n)
        b = a.copy()
        transpose_n_x_2n(b, s, n)
        assert np.array_equal(b, a.reshape(n, 2 * n).T.ravel())
        transpose_2n_x_n(b, s, n)
        assert np.array_equal(b, a)
        c = a.copy()
        transpose_2n_x_n(c, s, n)
        assert np.array_equal(c, a.reshape(2 * n, n).T.ravel())
        transpose_n_x_2n(c, s, n)
        assert np.array_equal(c, a)
    _report(5, "n = 1..64 match the out-of-place oracle and round-trip")


# 6 ---------------------------------------------------------------------------

@pytest.mark.criterion(6)
def test_c6_modmul_benchmark():
    n = 10 ** 7
    # best of three to keep scheduler noise out of the ratio
    runs = {v: min((bench_modmul(v, n) for _ in range(3)), key=lambda r: r.seconds)
            for v in ("naive", "montgomery", "solinas")}
    for r in runs.values():
        _report(6, r.kv_line())
    ratio = runs["naive"].seconds / runs["montgomery"].seconds
    _report(6, f"naive/montgomery = {ratio:.2f} (required >= 2), "
               f"solinas/montgomery = {runs['solinas'].seconds / runs['montgomery'].seconds:.2f}")
    assert ratio >= 2.0, f"Montgomery only {ratio:.2f}x faster than hardware division"


# 7 ---------------------------------------------------------------------------

@pytest.mark.criterion(7)
def test_c7_scaling_shape():
    sizes = sweep_sizes(10 ** 4, 10 ** 6)
    best = {d: bench_mul(d, iters=40, budget=2.0).best for d in sizes}
    worst = 0.0
    for a, b in zip(sizes, sizes[1:]):
        r = best[b] / best[a]
        if r >= 2.5:
            # one re-measurement of both sizes; the best time still decides
            best[a] = min(best[a], bench_mul(a, iters=40, budget=2.0).best)
            best[b] = min(best[b], bench_mul(b, iters=40, budget=2.0).best)
            r = best[b] / best[a]
        worst = max(worst, r)
        _report(7, f"{a} -> {b} digits: {best[a] * 1e3:.2f} ms -> "
                   f"{best[b] * 1e3:.2f} ms, ratio {r:.2f}")
        assert r < 2.5
    _report(7, f"worst doubling ratio {worst:.2f} (< 2.5)")


@pytest.mark.criterion(7)
def test_c7_million_digits_time():
    t = bench_mul(10 ** 6, iters=3)
    _report(7, f"1e6 digits: best {t.best:.3f} s, median {t.median:.3f} s, "
               f"lambda={t.lam} N={t.N}")
    assert t.best < 10 and t.median < 10


# 8 ---------------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_c8_is_prime_vs_sieve():
    flags = sieve(10 ** 6)
    mism = [n for n in range(10 ** 6 + 1) if is_prime(n) != bool(flags[n])]
    assert mism == []
    _report(8, "is_prime agrees with the sieve on 0..1e6")


@pytest.mark.criterion(8)
def test_c8_prime_form():
    for p in (P1, P2):
        spec = PrimeSpec.decompose(p)
        assert spec.c % 2 == 1
        assert p < 2 ** 63
        assert (p - 1) % (3 * 2 ** N_MIN) == 0
        assert spec.p == spec.c * 3 * 2 ** spec.n + 1
        assert is_prime(p)
        _report(8, f"p={p} = {spec.c}*3*2^{spec.n}+1")


# 9 ---------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_c9_products_identical_across_strategies():
    rng = random.Random(9)
    cases = [(_digits(rng, n), _digits(rng, m)) for n, m in
             ((1, 1), (17, 5), (100, 100), (1000, 777), (20_000, 20_000), (150_000, 140_000))]
    cases += [("9" * n, "9" * n) for n in (1, 17, 18, 5000, 144_619)]
    for x, y in cases:
        a = multiply(x, y, AdjustStrategy.CONDITIONAL_SELECT)
        b = multiply(x, y, AdjustStrategy.BIT_WIZARDRY)
        assert a.encode() == b.encode()
    _report(9, f"{len(cases)} products byte-identical under cselect and bitwise")


@pytest.mark.criterion(9)
def test_c9_unit_suite_under_bitwise():
    tests = Path(__file__).parent
    files = sorted(str(f) for f in tests.glob("test_*.py") if f.name != "test_acceptance.py")
    r = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
         "--adjust-strategy", "bitwise", *files],
        capture_output=True, text=True, cwd=tests.parent)
    tail = r.stdout.strip().splitlines()[-1] if r.stdout.strip() else r.stderr[-500:]
    _report(9, f"unit suite with default strategy bitwise: {tail}")
    assert r.returncode == 0, r.stdout[-3000:]


# 10 --------------------------------------------------------------------------

@njit(cache=True)
def _fill_all_nines_conv(c_lo, c_hi, M, K_lo, K_hi):
    # c[i] = K * (number of overlapping limb pairs at position i), K = (B - 1)**2
    n = c_lo.shape[0]
    for i in range(n):
        k = np.uint64(min(i + 1, 2 * M - 1 - i)) if i < 2 * M - 1 else np.uint64(0)
        c_lo[i] = k * K_lo
        c_hi[i] = umulh(k, K_lo) + k * K_hi


def _max_supported_min_limbs(lam):
    pp = PAIR.product
    by_safety = (pp - 1) // (10 ** lam - 1) ** 2
    # the longest transform, 3 * 2**N_MIN, bounds the total limb count too
    return min(by_safety, (3 << N_MIN) // 2)


@pytest.mark.criterion(10)
@pytest.mark.parametrize("lam", SUPPORTED_LAMBDAS)
def test_c10_carry_bounds_synthetic(lam):
    B = 10 ** lam
    M = _max_supported_min_limbs(lam)
    K = (B - 1) ** 2
    assert K * M < PAIR.product
    c_lo = np.empty(2 * M, dtype=np.uint64)
    c_hi = np.empty(2 * M, dtype=np.uint64)
    _fill_all_nines_conv(c_lo, c_hi, M, np.uint64(K % MU), np.uint64(K >> 64))
    # spot-check the synthetic coefficients against exact integers
    for i in (0, 1, M - 1, M, 2 * M - 2, 2 * M - 1):
        assert (int(c_hi[i]) << 64 | int(c_lo[i])) == K * (min(i + 1, 2 * M - 1 - i) if i < 2 * M - 1 else 0)
    # recover_digits raises CarryBoundError if either bound is ever crossed
    out = recover_digits((c_lo, c_hi), min_limbs=M, div=DivByConstB.for_lambda(lam))
    z = out.limbs
    del c_lo, c_hi
    # (B**M - 1)**2 = B**2M - 2 B**M + 1
    assert len(z) == 2 * M
    assert z[0] == 1 and not z[1:M].any() and z[M] == B - 2 and (z[M + 1:] == B - 1).all()
    _report(10, f"lambda={lam}: all-nines convolution of {M} limbs per operand, bounds held")


@pytest.mark.criterion(10)
@pytest.mark.parametrize("lam", [17, 16])
def test_c10_carry_bounds_end_to_end(lam):
    # the largest all-nines operands that still select this base
    M = (PAIR.product - 1) // (10 ** lam - 1) ** 2
    digits = lam * M
    assert select_base_and_length(digits, digits)[0] == lam
    assert limb_count(digits, lam) == M
    assert select_base_and_length(digits + 1, digits + 1)[0] < lam
    x = "9" * digits
    assert multiply(x, x) == _all_nines_square(digits)
    _report(10, f"lambda={lam}: {digits}-digit all-nines square exact")
