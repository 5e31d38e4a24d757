"""Quick end-to-end checks against the oracles, for the CLI."""
import random

import numpy as np

from .big_ntt import ConvPlan, convolve_mod_p
from .decmul import multiply
from .mat_transpose import make_scratch, transpose_2n_x_n, transpose_n_x_2n
from .oracle import naive_convolve, schoolbook_multiply, sieve
from .primegen import default_prime_pair, is_prime, verify_pair


def _check_primes():
    pair = default_prime_pair()
    verify_pair(pair)
    flags = sieve(20000)
    bad = [n for n in range(20001) if is_prime(n) != bool(flags[n])]
    assert not bad, f"is_prime disagrees with the sieve at {bad[:5]}"


def _check_transpose(rng):
    for n in (1, 2, 3, 8, 17):
        a = np.array([rng.randrange(1 << 63) for _ in range(2 * n * n)], dtype=np.uint64)
        b = a.copy()
        transpose_n_x_2n(b, make_scratch(n), n)
        assert np.array_equal(b, a.reshape(n, 2 * n).T.ravel()), f"n x 2n transpose, n={n}"
        transpose_2n_x_n(b, make_scratch(n), n)
        assert np.array_equal(b, a), f"2n x n transpose, n={n}"


def _check_convolution(rng, strategy, corrupt):
    for N, threshold in ((16, 1 << 15), (24, 1 << 15), (64, 8), (96, 8)):
        plan = ConvPlan(N, threshold=threshold, strategy=strategy)
        if corrupt:
            _corrupt(plan)
        for idx, p in enumerate(plan.primes):
            x = [rng.randrange(p) for _ in range(N)]
            y = [rng.randrange(p) for _ in range(N)]
            got = [int(v) for v in convolve_mod_p(plan, idx, x, y)]
            assert got == naive_convolve(p, x, y), f"convolution N={N} p={p}"


def _corrupt(plan):
    t = plan.transforms[0]
    table = t.plan.fwd_roots if hasattr(t, "plan") else t.col_plan.fwd_roots
    table.flags.writeable = True
    table[-1] ^= np.uint64(1)
    table.flags.writeable = False


def _check_multiply(rng, strategy):
    for n in (1, 2, 17, 18, 35, 300, 2000):
        for _ in range(3):
            x = str(rng.randrange(10 ** n))
            y = str(rng.randrange(10 ** n))
            assert multiply(x, y, strategy) == schoolbook_multiply(x, y), f"multiply at {n} digits"
    nines = "9" * 1000
    assert multiply(nines, nines, strategy) == "9" * 999 + "8" + "0" * 999 + "1"


def run_selftest(strategy=None, inject_fault=False, seed=12345, out=print):
    """Returns the number of failed checks."""
    rng = random.Random(seed)
    checks = [
        ("primes", _check_primes),
        ("transpose", lambda: _check_transpose(rng)),
        ("convolution", lambda: _check_convolution(rng, strategy, inject_fault)),
        ("multiply", lambda: _check_multiply(rng, strategy)),
    ]
    failures = 0
    for name, fn in checks:
        try:
            fn()
        except AssertionError as e:
            failures += 1
            out(f"FAIL {name}: {e}")
        else:
            out(f"ok   {name}")
    return failures
