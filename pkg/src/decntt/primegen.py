"""Prime moduli of the form c*3*2**n + 1 and their roots of unity."""
import functools
import math
from dataclasses import dataclass

from .modword import MU, W
from .montfield import from_mont, make_ctx, mont_pow, to_mont

MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# largest tabulated maximum operand length (in limbs) the prime pair must serve
MAX_LEN = 1 << 25
N_MIN = math.ceil(math.log2(MAX_LEN / 3))

# Output of find_primes(64, N_MIN, 2); re-derived and compared on first use.
_EMBEDDED_PAIR = (
    (9223372036015915009, 25, 91625968973),
    (9223372036166909953, 24, 183251937949),
)


class PrimeSearchError(RuntimeError):
    pass


def is_prime(n):
    """Deterministic Miller-Rabin for n < 2**64."""
    if n < 2:
        return False
    if n >= MU:
        raise ValueError("is_prime is only deterministic below 2**64")
    for q in MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True, order=True)
class PrimeSpec:
    p: int
    n: int
    c: int

    @classmethod
    def decompose(cls, p):
        """Split p - 1 as c * 3 * 2**n with c odd."""
        m = p - 1
        n = (m & -m).bit_length() - 1
        odd = m >> n
        if odd % 3:
            raise ValueError(f"{p} - 1 is not divisible by 3")
        return cls(p, n, odd // 3)

    def supports(self, length):
        return length >= 1 and (self.p - 1) % length == 0


@dataclass(frozen=True)
class PrimePair:
    p1: PrimeSpec
    p2: PrimeSpec

    def __post_init__(self):
        if not self.p1.p < self.p2.p:
            raise ValueError("prime pair must be ordered p1 < p2")

    @property
    def product(self):
        return self.p1.p * self.p2.p

    @property
    def primes(self):
        return (self.p1.p, self.p2.p)

    def supports(self, length):
        return self.p1.supports(length) and self.p2.supports(length)


def find_primes_for_n(n, p_max, ell):
    """The ell largest primes <= p_max of the form psi * 2**n + 1 with psi
    an odd multiple of 3."""
    found = []
    psi = (p_max - 1) >> n
    if psi % 2 == 0:
        psi -= 1
    while psi > 0 and psi % 3 != 0:
        psi -= 2
    while psi > 0 and len(found) < ell:
        p = psi * (1 << n) + 1
        if is_prime(p):
            found.append(p)
        psi -= 6
    return found


def find_primes(w=W, n_min=N_MIN, ell=2):
    p_max = (1 << (w - 1)) - 1
    found = set()
    for n in range(n_min, w - 1):
        found.update(find_primes_for_n(n, p_max, ell))
    if len(found) < ell:
        raise PrimeSearchError(f"cannot find {ell} primes with required properties")
    return sorted(found, reverse=True)[:ell]


def _pair_from(primes):
    specs = sorted(PrimeSpec.decompose(p) for p in primes)
    return PrimePair(specs[0], specs[1])


def verify_pair(pair, n_min=N_MIN):
    for spec in (pair.p1, pair.p2):
        if not is_prime(spec.p):
            raise PrimeSearchError(f"{spec.p} is not prime")
        if spec.p >= MU // 2 or spec.c % 2 == 0 or spec.n < n_min:
            raise PrimeSearchError(f"{spec.p} does not have the required form")
        if spec.c * 3 * (1 << spec.n) + 1 != spec.p:
            raise PrimeSearchError(f"{spec.p} decomposition mismatch")


@functools.lru_cache(maxsize=None)
def default_prime_pair():
    embedded = PrimePair(*(PrimeSpec(*t) for t in _EMBEDDED_PAIR))
    try:
        pair = _pair_from(find_primes(W, N_MIN, 2))
    except PrimeSearchError:
        pair = embedded
    if pair != embedded:
        raise PrimeSearchError("prime search disagrees with the embedded pair")
    verify_pair(pair)
    return pair


def _small_primes():
    q = 2
    while True:
        if all(q % d for d in range(2, math.isqrt(q) + 1)):
            yield q
        q += 1


def primitive_root_of_unity(ctx, length):
    """A primitive length-th root of unity, in Montgomery form.

    length may only have 2 and 3 as prime factors, so checking
    xi**(length/2) and xi**(length/3) is enough.
    """
    p = ctx.p
    if length < 1 or (p - 1) % length:
        raise ValueError(f"{length} does not divide p - 1 for p={p}")
    rest = length
    for q in (2, 3):
        while rest % q == 0:
            rest //= q
    if rest != 1:
        raise ValueError("root length must be of the form 2**k or 3 * 2**k")
    if length == 1:
        return ctx.one
    checks = [length // q for q in (2, 3) if length % q == 0]
    for g in _small_primes():
        if g >= p:
            break
        xi = mont_pow(ctx, to_mont(ctx, g), (p - 1) // length)
        if all(mont_pow(ctx, xi, e) != ctx.one for e in checks):
            assert mont_pow(ctx, xi, length) == ctx.one
            return xi
    raise ValueError(f"no primitive {length}-th root found for p={p}")


def plain_root(ctx, length):
    return from_mont(ctx, primitive_root_of_unity(ctx, length))


def describe(spec):
    return f"p={spec.p} c={spec.c} n={spec.n} form=c*3*2^n+1"


def default_ctxs(strategy=None):
    pair = default_prime_pair()
    return make_ctx(pair.p1.p, strategy), make_ctx(pair.p2.p, strategy)
