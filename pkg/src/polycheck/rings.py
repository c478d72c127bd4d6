"""Coefficient domains and randomness.

Provides exact integer arithmetic, prime fields GF(q), extension fields
GF(q)[X]/(R), a deterministic seedable random stream, probable-prime
generation and probable-irreducible generation.  Field elements are plain
Python ints (residues in [0, q)); extension-field elements are tuples of
residues, or bit-packed ints when the base field is GF(2).  All values are
immutable; every operation is pure except RngStream draws.
"""

import math
import random
from fractions import Fraction

_MASK64 = (1 << 64) - 1


class PrimeGenerationError(RuntimeError):
    """The random-prime trial budget was exhausted (RNG or parameter pathology)."""


class OpCounter:
    """Counter for instrumenting how many polynomial multiplications ran."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def bump(self, k=1):
        self.count += k


# Every polynomial-multiplication routine in the package bumps this counter,
# so tests can assert that multiplication-free code paths really are.
POLY_MUL_OPS = OpCounter()


def _splitmix64(z):
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RngStream:
    """Deterministic random stream: identical seeds give identical draws."""

    __slots__ = ("seed", "_gen")

    def __init__(self, seed):
        self.seed = int(seed) & _MASK64
        self._gen = random.Random(self.seed)

    def bits(self, k):
        return self._gen.getrandbits(k) if k > 0 else 0

    def below(self, n):
        """Uniform integer in [0, n), unbiased (rejection sampling)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        k = (n - 1).bit_length()
        if n == 1:
            return 0
        while True:
            x = self.bits(k)
            if x < n:
                return x

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def residue(self, n):
        """Near-uniform value in [0, n) without rejection (64 guard bits)."""
        return self.bits(n.bit_length() + 64) % n

    def spawn(self, index):
        """Independent child stream; deterministic in (seed, index)."""
        return RngStream(_splitmix64(self.seed ^ _splitmix64(index & _MASK64)))


def ceil_log2(x):
    """Smallest k >= 0 with 2**k >= x, for a positive int or Fraction."""
    fr = Fraction(x)
    if fr <= 1:
        return 0
    return (-(-fr.numerator // fr.denominator) - 1).bit_length()


def ln_upper(x):
    """An exact-rational upper bound on ln(x) for x >= 1."""
    if x < 1:
        raise ValueError("ln_upper needs x >= 1")
    if x == 1:
        return Fraction(0)
    # math.log has ~1 ulp relative error; a 1e-9 relative pad keeps us above.
    return Fraction(math.log(x)) * (1 + Fraction(1, 10**9))


# ---------------------------------------------------------------------------
# coefficient domains


class IntegerRing:
    """Arbitrary-precision exact integers."""

    name = "Z"

    def __repr__(self):
        return "Z"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("IntegerRing")

    def size(self):
        return None

    def canon(self, x):
        return int(x)

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 1 or a == -1:
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    def pow(self, a, e):
        return a**e

    def is_zero(self, a):
        return a == 0

    def from_int(self, k):
        return int(k)

    embed = canon
    scalar_mul = mul


ZZ = IntegerRing()


class PrimeField:
    """GF(q) for a (probable) prime q; elements are ints in [0, q)."""

    __slots__ = ("q",)

    def __init__(self, q):
        if q < 2:
            raise ValueError("field modulus must be >= 2")
        self.q = int(q)

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.q == other.q

    def __hash__(self):
        return hash(("PrimeField", self.q))

    @property
    def name(self):
        return f"GF {self.q}"

    def size(self):
        return self.q

    def canon(self, x):
        return int(x) % self.q

    def zero(self):
        return 0

    def one(self):
        return 1 % self.q

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        r = pow(a, self.q - 2, self.q)
        if (r * a) % self.q != 1:
            # q was not actually prime; callers treat this as a resample signal
            raise ZeroDivisionError(f"{a} is not invertible modulo {self.q}")
        return r

    def pow(self, a, e):
        return pow(a, e, self.q)

    def is_zero(self, a):
        return a == 0

    def from_int(self, k):
        return int(k) % self.q

    def sample(self, rng):
        return rng.residue(self.q)

    embed = canon
    scalar_mul = mul


def GF(q):
    return PrimeField(q)


class ExtField:
    """GF(q)[X]/(R) with R monic of degree d >= 1.

    A quotient ring in general: it is a field exactly when R is irreducible,
    and no operation here except inv() requires that.  Elements are tuples of
    d residues (coefficient i of the representative), or bit-packed ints when
    q == 2.
    """

    __slots__ = ("base", "modulus", "d", "_m2")

    def __init__(self, base, modulus):
        if not isinstance(base, PrimeField):
            raise TypeError("ExtField base must be a PrimeField")
        mod = tuple(int(c) % base.q for c in modulus)
        if len(mod) < 2 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.base = base
        self.modulus = mod
        self.d = len(mod) - 1
        if base.q == 2:
            self._m2 = sum(c << i for i, c in enumerate(mod))
        else:
            self._m2 = None

    def __repr__(self):
        return f"GF({self.base.q}^{self.d})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and self.base == other.base
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash(("ExtField", self.base.q, self.modulus))

    def size(self):
        return self.base.q**self.d

    # -- representation helpers ------------------------------------------

    def from_coeffs(self, coeffs):
        cs = [int(c) % self.base.q for c in coeffs]
        if len(cs) > self.d:
            raise ValueError("representative degree too large")
        cs += [0] * (self.d - len(cs))
        if self._m2 is not None:
            return sum(c << i for i, c in enumerate(cs))
        return tuple(cs)

    def coeffs(self, a):
        if self._m2 is not None:
            return tuple((a >> i) & 1 for i in range(self.d))
        return a

    # -- ring operations ---------------------------------------------------

    def zero(self):
        return 0 if self._m2 is not None else (0,) * self.d

    def one(self):
        return self.from_coeffs([1])

    def canon(self, a):
        return a

    def embed(self, c):
        """Lift a base-field scalar; elements of the extension pass through.
        Over GF(2) the packed form of a canonical base bit is the bit itself,
        so ints are already in place."""
        if self._m2 is not None:
            return int(c)
        if isinstance(c, tuple):
            return c
        return self.from_coeffs([c])

    def add(self, a, b):
        if self._m2 is not None:
            return a ^ b
        q = self.base.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b):
        if self._m2 is not None:
            return a ^ b
        q = self.base.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a):
        if self._m2 is not None:
            return a
        q = self.base.q
        return tuple((-x) % q for x in a)

    def scalar_mul(self, c, a):
        """Multiply by a base-field scalar; a full extension element as the
        scalar falls through to the ring product."""
        if self._m2 is not None:
            if c <= 1:
                return a if c else 0
            return self.mul(c, a)
        if isinstance(c, tuple):
            return self.mul(c, a)
        q = self.base.q
        c %= q
        return tuple((c * x) % q for x in a)

    def mul(self, a, b):
        POLY_MUL_OPS.bump()
        if self._m2 is not None:
            return self._mul2(a, b)
        q = self.base.q
        d = self.d
        res = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] += ai * bj
        mod = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = res[i] % q
            if c:
                for j in range(d):
                    if mod[j]:
                        res[i - d + j] -= c * mod[j]
            res[i] = 0
        return tuple(x % q for x in res[:d])

    def _mul2(self, a, b):
        r = 0
        x = a
        while b:
            if b & 1:
                r ^= x
            b >>= 1
            x <<= 1
        m = self._m2
        d = self.d
        bl = r.bit_length()
        while bl > d:
            r ^= m << (bl - 1 - d)
            bl = r.bit_length()
        return r

    def pow(self, a, e):
        if e < 0:
            raise ValueError("negative exponent")
        acc = self.one()
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def is_zero(self, a):
        return a == self.zero()

    def from_int(self, k):
        return self.embed(int(k) % self.base.q)

    def inv(self, a):
        """Inverse via extended Euclid; raises if a is not a unit (which can
        happen when the modulus is secretly reducible)."""
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        q = self.base.q
        r0 = list(self.modulus)
        r1 = list(self.coeffs(a))
        s0, s1 = [0], [1]
        while any(c % q for c in r1):
            r1 = [c % q for c in r1]
            while r1 and r1[-1] == 0:
                r1.pop()
            quo, rem = _list_divmod(r0, r1, q)
            r0, r1 = r1, rem
            s0, s1 = s1, _list_sub(s0, _list_mul(quo, s1, q), q)
        r0 = [c % q for c in r0]
        while r0 and r0[-1] == 0:
            r0.pop()
        if len(r0) != 1:
            raise ZeroDivisionError("element is not a unit (reducible modulus)")
        c_inv = PrimeField(q).inv(r0[0])
        out = [(c_inv * c) % q for c in s0]
        return self.from_coeffs(out[: self.d])

    def sample(self, rng):
        return self.from_coeffs([rng.residue(self.base.q) for _ in range(self.d)])


# ---------------------------------------------------------------------------
# naive polynomial helpers on coefficient lists over GF(q) (used by the
# irreducibility test; deliberately quadratic)


def _list_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _list_sub(a, b, q):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = (x - y) % q
    return _list_trim(out)


def _list_mul(a, b, q):
    if not a or not b:
        return []
    POLY_MUL_OPS.bump()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _list_trim([c % q for c in out])


def _list_divmod(a, b, q):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = PrimeField(q).inv(b[-1])
    rem = [c % q for c in a]
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], _list_trim(rem)
    quo = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] % q
        if c:
            f = (c * lead_inv) % q
            quo[i - db] = f
            for j in range(db + 1):
                rem[i - db + j] = (rem[i - db + j] - f * b[j]) % q
    return quo, _list_trim(rem)


def _list_gcd(a, b, q):
    a = _list_trim([c % q for c in list(a)])
    b = _list_trim([c % q for c in list(b)])
    while b:
        _, r = _list_divmod(a, b, q)
        a, b = b, r
    return a


def _list_mulmod(a, b, f, q):
    prod = _list_mul(a, b, q)
    _, rem = _list_divmod(prod, f, q)
    return rem


def _list_powmod_x(e, f, q):
    """x**e mod f over GF(q), naive square-and-multiply."""
    acc = [1]
    base = [0, 1]
    _, base = _list_divmod(base, f, q)
    while e:
        if e & 1:
            acc = _list_mulmod(acc, base, f, q)
        e >>= 1
        if e:
            base = _list_mulmod(base, base, f, q)
    return acc


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_list_is_irreducible(coeffs, q):
    """Exact irreducibility test for a monic polynomial over GF(q).

    Rabin's criterion using only naive polynomial products: f of degree d is
    irreducible iff x^(q^d) = x (mod f) and gcd(x^(q^(d/p)) - x, f) = 1 for
    every prime p dividing d.
    """
    f = [c % q for c in coeffs]
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        raise ValueError("need a monic polynomial of degree >= 1")
    if d == 1:
        return True
    for p in _prime_divisors(d):
        h = _list_powmod_x(q ** (d // p), f, q)
        g = _list_gcd(_list_sub(h, [0, 1], q), f, q)
        if len(g) - 1 > 0:
            return False
    h = _list_powmod_x(q**d, f, q)
    return _list_trim(_list_sub(h, [0, 1], q)) == []


# ---------------------------------------------------------------------------
# probable primes


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n, rounds, rng=None):
    """Miller-Rabin: True for every prime; a composite passes with
    probability at most 4**-rounds."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if rng is None:
        rng = RngStream(_splitmix64((n & _MASK64) ^ rounds))
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = 2 + rng.below(n - 3)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(lam, epsilon, rng):
    """An integer in [lam, 2*lam] that is prime with probability >= 1 - epsilon.

    Draws uniform odd candidates and screens them with Miller-Rabin using
    ceil(log2(2/epsilon)) rounds.  Raises PrimeGenerationError if the trial
    cap 64*ceil(ln lam) is exhausted, which signals a pathology rather than
    an expected outcome.
    """
    lam = int(lam)
    eps = Fraction(epsilon)
    if lam < 21:
        raise ValueError("lam must be >= 21")
    if not 0 < eps < 1:
        raise ValueError("epsilon must be in (0, 1)")
    rounds = max(1, ceil_log2(Fraction(2) / eps))
    lo = lam if lam % 2 == 1 else lam + 1
    n_odd = (2 * lam - lo) // 2 + 1
    cap = 64 * math.ceil(math.log(lam))
    for _ in range(cap):
        cand = lo + 2 * rng.below(n_odd)
        if is_probable_prime(cand, rounds, rng):
            return cand
    raise PrimeGenerationError(
        f"no probable prime found in [{lam}, {2 * lam}] after {cap} trials"
    )


def random_monic(field, d, rng):
    """Uniformly random monic degree-d polynomial over GF(q), as a coefficient
    list (no irreducibility screening, no polynomial products)."""
    if not isinstance(field, PrimeField):
        raise TypeError("random_monic needs a PrimeField")
    q = field.q
    return [rng.below(q) for _ in range(d)] + [1]


def random_irreducible(field, d, epsilon, rng, monic_only=False):
    """Monic degree-d polynomial over the finite field, irreducible with
    probability >= 1 - epsilon.

    Monte Carlo: samples up to ceil(2*d*ln(1/epsilon)) monic candidates and
    returns the first one passing an exact naive-arithmetic irreducibility
    test; if none passes, the last candidate is returned (this happens with
    probability at most epsilon).  With monic_only=True the screening is
    skipped entirely and one uniform monic sample is returned, for callers
    that must avoid polynomial multiplication.
    """
    from .poly import DensePoly

    if d < 1:
        raise ValueError("degree must be >= 1")
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must be in (0, 1)")
    if monic_only:
        return DensePoly(field, random_monic(field, d, rng))
    budget = max(1, math.ceil(2 * d * math.log(1 / float(eps)) + 1e-9))
    q = field.q
    cand = None
    for _ in range(budget):
        cand = random_monic(field, d, rng)
        if poly_list_is_irreducible(cand, q):
            break
    return DensePoly(field, cand)
