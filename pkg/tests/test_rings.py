import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

import polycheck as pc
from polycheck.rings import (
    ExtField,
    PrimeGenerationError,
    RngStream,
    ceil_log2,
    is_probable_prime,
    ln_upper,
    poly_list_is_irreducible,
    random_irreducible,
    random_monic,
    random_prime,
)
from conftest import is_prime_det64, is_irreducible_gf2_exhaustive, rand_coeff


class TestRngStream:
    def test_same_seed_same_draws(self):
        a, b = RngStream(123), RngStream(123)
        assert [a.bits(17) for _ in range(50)] == [b.bits(17) for _ in range(50)]
        assert [a.below(1000) for _ in range(50)] == [b.below(1000) for _ in range(50)]

    def test_spawn_is_deterministic_and_distinct(self):
        a = RngStream(5).spawn(3)
        b = RngStream(5).spawn(3)
        c = RngStream(5).spawn(4)
        assert a.bits(64) == b.bits(64)
        assert RngStream(5).spawn(3).bits(64) != c.bits(64)

    def test_below_range(self):
        r = RngStream(1)
        for _ in range(200):
            assert 0 <= r.below(7) < 7
        assert r.below(1) == 0

    def test_residue_range(self):
        r = RngStream(2)
        for _ in range(100):
            assert 0 <= r.residue(65537) < 65537


class TestProbablePrime:
    def test_smallest_prime(self):
        assert is_probable_prime(2, 10) is True

    def test_composite_21(self):
        assert is_probable_prime(21, 10) is False

    def test_mersenne61(self):
        n = 2**61 - 1
        assert is_prime_det64(n)
        assert is_probable_prime(n, 20) is True

    def test_agrees_with_deterministic_oracle(self, rng):
        for _ in range(300):
            n = rng.bits(40) | 1
            assert is_probable_prime(n, 12) == is_prime_det64(n)

    def test_never_rejects_primes(self, rng):
        count = 0
        n = 10**6
        while count < 50:
            n += 1
            if is_prime_det64(n):
                count += 1
                assert is_probable_prime(n, 1, rng)


class TestRandomPrime:
    def test_range_membership(self):
        p = random_prime(21, Fraction(1, 4), RngStream(0))
        assert 21 <= p <= 42
        assert is_probable_prime(p, 10)

    def test_million_scale_prime(self):
        p = random_prime(10**6, Fraction(1, 2**20), RngStream(1))
        assert 10**6 <= p <= 2 * 10**6
        assert is_prime_det64(p)

    def test_precondition(self):
        with pytest.raises(ValueError):
            random_prime(20, Fraction(1, 4), RngStream(0))
        with pytest.raises(ValueError):
            random_prime(100, 2, RngStream(0))

    def test_composite_rate_quarter(self):
        lam = 3 * 10**9
        bad = 0
        trials = 2000
        rng = RngStream(424242)
        for _ in range(trials):
            p = random_prime(lam, Fraction(1, 4), rng)
            assert lam <= p <= 2 * lam
            if not is_prime_det64(p):
                bad += 1
        assert bad / trials <= 0.30


class TestRandomIrreducible:
    def test_degree_one_gf2(self):
        for seed in range(8):
            R = random_irreducible(pc.GF(2), 1, Fraction(1, 4), RngStream(seed))
            assert tuple(R.coeffs) in ((0, 1), (1, 1))

    def test_degree_four_gf2_seed7(self):
        R = random_irreducible(pc.GF(2), 4, Fraction(1, 1024), RngStream(7))
        assert is_irreducible_gf2_exhaustive(list(R.coeffs))
        # no roots, and not the square of the only irreducible quadratic
        assert pc.evaluate(R, 0) != 0 and pc.evaluate(R, 1) != 0
        assert tuple(R.coeffs) != (1, 0, 1, 0, 1)

    def test_degree_two_gf5_seed3(self):
        R = random_irreducible(pc.GF(5), 2, Fraction(1, 1024), RngStream(3))
        assert all(pc.evaluate(R, a) != 0 for a in range(5))

    def test_reducible_rate_quarter(self):
        rng = RngStream(9)
        bad = 0
        trials = 2000
        for t in range(trials):
            d = 2 + t % 7  # degrees 2..8
            R = random_irreducible(pc.GF(2), d, Fraction(1, 4), rng)
            if not is_irreducible_gf2_exhaustive(list(R.coeffs)):
                bad += 1
        assert bad / trials <= 0.30

    def test_monic_only_skips_screening(self):
        R = random_irreducible(pc.GF(2), 6, Fraction(1, 4), RngStream(1), monic_only=True)
        assert R.coeffs[-1] == 1 and R.degree() == 6

    def test_rabin_test_exhaustive_gf2(self):
        for d in range(1, 9):
            from conftest import all_monics_gf2

            for cand in all_monics_gf2(d):
                assert poly_list_is_irreducible(cand, 2) == is_irreducible_gf2_exhaustive(
                    cand
                )


@st.composite
def fq_pair(draw):
    q = draw(st.sampled_from([2, 5, 101, 65537]))
    a = draw(st.integers(min_value=0, max_value=q - 1))
    b = draw(st.integers(min_value=0, max_value=q - 1))
    c = draw(st.integers(min_value=0, max_value=q - 1))
    return q, a, b, c


class TestRingAxioms:
    @given(fq_pair())
    def test_prime_field_axioms(self, data):
        q, a, b, c = data
        K = pc.GF(q)
        assert K.add(a, K.add(b, c)) == K.add(K.add(a, b), c)
        assert K.mul(a, K.mul(b, c)) == K.mul(K.mul(a, b), c)
        assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
        assert K.add(a, K.zero()) == a
        assert K.mul(a, K.one()) == a
        assert K.add(a, K.neg(a)) == K.zero()

    @given(st.integers(), st.integers(), st.integers())
    def test_integer_axioms(self, a, b, c):
        Z = pc.ZZ
        assert Z.mul(a, Z.add(b, c)) == Z.add(Z.mul(a, b), Z.mul(a, c))
        assert Z.sub(a, a) == 0

    def test_field_inverse(self):
        K = pc.GF(65537)
        for a in (1, 2, 12345, 65536):
            assert K.mul(a, K.inv(a)) == 1
        with pytest.raises(ZeroDivisionError):
            K.inv(0)

    def test_gf5_sum(self):
        assert pc.GF(5).add(2, 3) == 0

    def test_integers_exact(self):
        assert pc.ZZ.mul(2**64, 2**64) == 2**128
        with pytest.raises(ZeroDivisionError):
            pc.ZZ.inv(2)


class TestExtField:
    def test_defining_relation_gf4(self):
        K = ExtField(pc.GF(2), (1, 1, 1))  # X^2 + X + 1
        x = K.from_coeffs([0, 1])
        assert K.coeffs(K.mul(x, x)) == (1, 1)  # X * X = X + 1

    def test_matches_schoolbook_long_division(self, rng):
        from polycheck.oracle import poly_divmod

        for _ in range(120):
            q = (2, 3, 7)[rng.below(3)]
            d = 1 + rng.below(4)
            Rp = random_irreducible(pc.GF(q), d, Fraction(1, 16), rng)
            K = ExtField(pc.GF(q), Rp.coeffs)
            a = K.from_coeffs([rng.below(q) for _ in range(d)])
            b = K.from_coeffs([rng.below(q) for _ in range(d)])
            got = K.coeffs(K.mul(a, b))
            pa = pc.DensePoly(pc.GF(q), K.coeffs(a))
            pb = pc.DensePoly(pc.GF(q), K.coeffs(b))
            prod = pc.mul_oracle(pa, pb)
            _, rem = poly_divmod(prod, Rp)
            want = tuple(list(rem.coeffs) + [0] * (d - len(rem.coeffs)))
            assert got == want

    def test_axioms_random(self, rng):
        K = ExtField(pc.GF(3), (2, 0, 1, 1))
        for _ in range(100):
            a = K.sample(rng)
            b = K.sample(rng)
            c = K.sample(rng)
            assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
            assert K.add(a, K.neg(a)) == K.zero()
            assert K.mul(a, K.one()) == a

    def test_inverse_roundtrip(self, rng):
        for q, mod in ((2, (1, 1, 0, 1)), (5, (2, 1, 1))):
            K = ExtField(pc.GF(q), mod)
            for _ in range(50):
                a = K.sample(rng)
                if K.is_zero(a):
                    continue
                assert K.mul(a, K.inv(a)) == K.one()

    def test_inverse_of_nonunit_signals(self):
        # (X+1)^2 is reducible over GF(2); X+1 is a zero divisor there
        K = ExtField(pc.GF(2), (1, 0, 1))
        with pytest.raises(ZeroDivisionError):
            K.inv(K.from_coeffs([1, 1]))

    def test_size(self):
        assert ExtField(pc.GF(2), (1, 1, 1)).size() == 4
        assert ExtField(pc.GF(5), (2, 1, 1)).size() == 25


class TestNumericHelpers:
    def test_ceil_log2(self):
        assert ceil_log2(1) == 0
        assert ceil_log2(2) == 1
        assert ceil_log2(Fraction(17, 2)) == 4
        assert ceil_log2(8) == 3

    def test_ln_upper_is_upper(self):
        import math

        for x in (2, 3, 10, 10**6, 2**200):
            assert float(ln_upper(x)) >= math.log(x)

    def test_random_monic_uniform_shape(self, rng):
        R = random_monic(pc.GF(7), 5, rng)
        assert len(R) == 6 and R[-1] == 1
        assert all(0 <= c < 7 for c in R)
