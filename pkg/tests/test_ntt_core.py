import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decntt.modword import MU
from decntt.montfield import from_mont, make_ctx, mont_pow, redc, to_mont
from decntt.ntt_core import (
    bit_rev_permute,
    build_plan,
    dif_forward_no_bitrev,
    dit_inverse_no_bitrev,
    scale_by_psi_prime,
)
from decntt.oracle import naive_dft, naive_idft

PRIMES = [17, 97, 193, 9223372036015915009, 9223372036166909953]


def _rev(k, bits):
    return int(format(k, f"0{bits}b")[::-1], 2) if bits else 0


def _words(xs):
    return np.array(xs, dtype=np.uint64)


def test_bit_rev_examples():
    a = _words(range(8))
    assert bit_rev_permute(a).tolist() == [0, 4, 2, 6, 1, 5, 3, 7]
    assert bit_rev_permute(_words([5])).tolist() == [5]
    assert bit_rev_permute(_words([5, 6])).tolist() == [5, 6]
    with pytest.raises(ValueError):
        bit_rev_permute(_words(range(6)))


@given(st.integers(0, 16), st.randoms())
@settings(max_examples=40, deadline=None)
def test_bit_rev_involution(k, r):
    n = 1 << k
    a = _words([r.getrandbits(64) for _ in range(n)])
    b = bit_rev_permute(a.copy())
    assert np.array_equal(bit_rev_permute(b.copy()), a)
    idx = np.arange(n)
    assert all(b[_rev(i, k)] == a[i] for i in idx[: min(n, 256)])


def test_plan_tables_n4_p17():
    ctx = make_ctx(17)
    plan = build_plan(ctx, 4, root=to_mont(ctx, 4))
    assert len(plan.fwd_roots) == 3
    # T1 = [1], T2 = [1, 4]
    assert [from_mont(ctx, int(v)) for v in plan.fwd_roots] == [1, 1, 4]
    assert [from_mont(ctx, int(v)) for v in plan.inv_roots] == [1, 1, 13]
    assert len(build_plan(ctx, 1).fwd_roots) == 0


@pytest.mark.parametrize("p", PRIMES)
def test_plan_table_layout(p):
    ctx = make_ctx(p)
    for k in range(0, 5):
        N = 1 << k
        plan = build_plan(ctx, N)
        assert len(plan.fwd_roots) == N - 1
        w = from_mont(ctx, plan.root)
        for s in range(1, k + 1):
            for i in range(1 << (s - 1)):
                want = pow(w, i << (k - s), p)
                assert from_mont(ctx, int(plan.fwd_roots[(1 << (s - 1)) - 1 + i])) == want


def test_plan_scale_factor():
    for p in PRIMES:
        ctx = make_ctx(p)
        for N in (1, 2, 16):
            if (p - 1) % N:
                continue
            plan = build_plan(ctx, N)
            # REDC(psi', N) = R, i.e. psi' carries R * N^-1 in Montgomery form
            assert redc(ctx, plan.psi_prime, N % p) == MU % p
            assert from_mont(ctx, plan.psi_prime) == MU * pow(N, -1, p) % p


def test_plan_errors():
    ctx = make_ctx(17)
    with pytest.raises(ValueError):
        build_plan(ctx, 32)
    with pytest.raises(ValueError):
        build_plan(ctx, 6)


def test_dif_examples():
    ctx = make_ctx(17)
    plan = build_plan(ctx, 4, root=to_mont(ctx, 4))
    assert dif_forward_no_bitrev(plan, _words([0, 1, 0, 0])).tolist() == [1, 16, 4, 13]
    assert dif_forward_no_bitrev(plan, _words([7, 0, 0, 0])).tolist() == [7] * 4
    assert dif_forward_no_bitrev(plan, _words([1, 1, 1, 1])).tolist() == [4, 0, 0, 0]
    with pytest.raises(ValueError):
        dif_forward_no_bitrev(plan, _words([1, 2]))


@pytest.mark.parametrize("p", PRIMES)
def test_kernels_vs_oracle(p, strategy):
    ctx = make_ctx(p, strategy)
    rng = random.Random(p)
    for k in range(0, 7):
        N = 1 << k
        if (p - 1) % N:
            continue
        plan = build_plan(ctx, N)
        xi = from_mont(ctx, plan.root)
        for _ in range(3):
            x = [rng.randrange(p) for _ in range(N)]
            X = naive_dft(p, xi, x)
            got = dif_forward_no_bitrev(plan, _words(x))
            assert got.tolist() == bit_rev_permute(_words(X)).tolist()
            # inverse path: DIT of the bit-reversed spectrum is N * x
            back = dit_inverse_no_bitrev(plan, got.copy())
            assert back.tolist() == [N * v % p for v in x]
            assert [N * v % p for v in naive_idft(p, xi, X)] == back.tolist()


@pytest.mark.parametrize("p", PRIMES)
def test_round_trip_with_scale(p):
    ctx = make_ctx(p)
    rng = random.Random(p + 1)
    for k in range(2, 15):
        N = 1 << k
        if (p - 1) % N:
            continue
        plan = build_plan(ctx, N)
        x = [rng.randrange(p) for _ in range(N)]
        a = _words(x)
        scale_by_psi_prime(plan, dit_inverse_no_bitrev(plan, dif_forward_no_bitrev(plan, a)))
        # the scale carries the extra R a REDC pointwise product would remove
        assert a.tolist() == [v * MU % p for v in x]


def test_scale_examples():
    ctx = make_ctx(97)
    plan = build_plan(ctx, 1)
    assert scale_by_psi_prime(plan, _words([0, 0])).tolist() == [0, 0]
    assert scale_by_psi_prime(plan, _words([5])).tolist() == [to_mont(ctx, 5)]


def test_zero_vector():
    ctx = make_ctx(193)
    plan = build_plan(ctx, 64)
    z = np.zeros(64, dtype=np.uint64)
    assert not dit_inverse_no_bitrev(plan, dif_forward_no_bitrev(plan, z)).any()


@pytest.mark.parametrize("p", PRIMES)
def test_peel_bit_identical(p):
    ctx = make_ctx(p)
    rng = random.Random(5)
    for k in range(1, 11):
        N = 1 << k
        if (p - 1) % N:
            continue
        plan = build_plan(ctx, N)
        x = _words([rng.randrange(p) for _ in range(N)])
        a = dif_forward_no_bitrev(plan, x.copy(), peel=True)
        b = dif_forward_no_bitrev(plan, x.copy(), peel=False)
        assert np.array_equal(a, b)
        assert np.array_equal(dit_inverse_no_bitrev(plan, a, peel=True),
                              dit_inverse_no_bitrev(plan, b, peel=False))


def test_outputs_canonical():
    p = 9223372036015915009
    ctx = make_ctx(p)
    plan = build_plan(ctx, 1 << 10)
    x = _words([p - 1] * (1 << 10))
    y = dif_forward_no_bitrev(plan, x)
    assert (y < p).all()
    assert (dit_inverse_no_bitrev(plan, y) < p).all()


def test_inverse_root_matches():
    ctx = make_ctx(193)
    plan = build_plan(ctx, 64)
    assert redc(ctx, plan.root, mont_pow(ctx, plan.root, 63)) == ctx.one
