import pytest

import polycheck as pc
from polycheck import modeval
from polycheck.modeval import (
    CompanionOperator,
    SparseIndexMap,
    companion_power,
    eval_mod_binomial_dense,
    eval_mod_binomial_sparse,
    eval_mod_p_dense,
    eval_mod_p_sparse,
    eval_modprod_companion_sparse,
    leading_coefficients,
    mat_identity,
    poly_at_companion,
    project_modprod_companion,
    project_poly_companion,
    sparse_leading_coefficients,
)
from polycheck.oracle import oracle_matrix_eval, oracle_mod_product, poly_divmod
from polycheck.rings import POLY_MUL_OPS, RngStream
from conftest import rand_dense, rand_monic_sparse, rand_sparse

Z = pc.ZZ
F2 = pc.GF(2)


def oracle_eval(P, F, G, alpha, ring=None):
    return pc.evaluate(oracle_mod_product(F, G, P), alpha, ring)


class TestSparseIndexMap:
    def test_basic_ops(self):
        m = SparseIndexMap(10)
        m.insert(4, "a")
        m.insert(2, "b")
        m.insert(7, "c")
        assert m.search(2) == "b"
        assert m.search(3) is None
        assert len(m) == 3
        assert m.extract_min() == (2, "b")
        m.insert(2, "d")
        m.remove(4)
        assert m.extract_min() == (2, "d")
        assert m.extract_min() == (7, "c")
        assert not m

    def test_overwrite(self):
        m = SparseIndexMap(5)
        m.insert(1, 10)
        m.insert(1, 20)
        assert m.search(1) == 20
        assert m.extract_min() == (1, 20)
        assert len(m) == 0

    def test_universe_enforced(self):
        m = SparseIndexMap(5)
        with pytest.raises(KeyError):
            m.insert(5, 1)
        with pytest.raises(KeyError):
            m.search(-1)

    def test_empty_extract(self):
        with pytest.raises(KeyError):
            SparseIndexMap(3).extract_min()

    def test_ascending_extraction(self, rng):
        m = SparseIndexMap(1000)
        keys = set()
        for _ in range(100):
            k = rng.below(1000)
            keys.add(k)
            m.insert(k, k)
        out = []
        while m:
            out.append(m.extract_min()[0])
        assert out == sorted(keys)


class TestEvalModBinomial:
    def test_square_mod_x2_minus_1(self):
        F = pc.DensePoly(Z, [1, 1])
        assert eval_mod_binomial_dense(F, F, 2, 3) == 8

    def test_identity_factor(self, rng):
        F = rand_dense(Z, 9, rng)
        one = pc.DensePoly.one(Z)
        assert eval_mod_binomial_dense(F, one, 10, 4) == pc.evaluate(F, 4)

    def test_truncated_product_mod_small_field(self, rng):
        K = pc.GF(101)
        F = pc.SparsePoly(K, [(0, 2), (7, 2), (14, 1)]).to_dense()
        G = pc.SparsePoly(K, [(0, 3), (8, 5), (13, 3)]).to_dense()
        P = pc.x_pow_minus_one(K, 15)
        want = oracle_eval(P, F.to_sparse(), G.to_sparse(), 2)
        assert eval_mod_binomial_dense(F, G, 15, 2) == want

    def test_sparse_huge_degree_at_one(self):
        K = pc.GF(7)
        n = 10**6
        F = pc.SparsePoly(K, [(0, 1), (n - 1, 1)])
        G = pc.SparsePoly(K, [(n - 1, 1)])
        assert eval_mod_binomial_sparse(F, G, n, 1) == 2

    def test_sparse_constant_multiplier(self, rng):
        F = rand_sparse(Z, 40, 5, rng)
        G = pc.SparsePoly(Z, [(0, 3)])
        assert eval_mod_binomial_sparse(F, G, 41, 2) == 3 * pc.evaluate(F, 2)

    def test_sparse_matches_dense(self, rng):
        for _ in range(120):
            ctx = (Z, pc.GF(13), pc.GF(65537))[rng.below(3)]
            n = 2 + rng.below(40)
            F = rand_sparse(ctx, n, 1 + rng.below(6), rng)
            G = rand_sparse(ctx, n, 1 + rng.below(6), rng)
            a = (rng.below(7) - 3) if ctx == Z else rng.below(ctx.q)
            assert eval_mod_binomial_sparse(F, G, n, a) == eval_mod_binomial_dense(
                F.to_dense(), G.to_dense(), n, a
            )

    def test_degree_precondition(self):
        F = pc.DensePoly(Z, [0, 0, 1])
        with pytest.raises(ValueError):
            eval_mod_binomial_dense(F, F, 2, 1)


class TestLeadingCoefficients:
    def test_binomial_gives_reversed_tail(self, rng):
        n = 12
        P = pc.x_pow_minus_one(Z, n)
        F = rand_dense(Z, n - 1, rng)
        V = leading_coefficients(P, F)
        assert V == [F.coeff(n - 1 - i) for i in range(n - 1)]

    def test_constant_input_all_zero(self, rng):
        P = rand_monic_sparse(Z, 9, 3, rng)
        V = leading_coefficients(P, pc.DensePoly.one(Z))
        assert V == [0] * 8

    def test_sedimentary_quartic_fixture(self):
        # X^4 + X + 1 shifts of X^3 + 1 over GF(2); frozen from the
        # long-division oracle
        P = pc.SparsePoly(F2, [(0, 1), (1, 1), (4, 1)])
        F = pc.DensePoly(F2, [1, 0, 0, 1])
        assert leading_coefficients(P, F) == [1, 0, 0]

    def test_long_division_cross_check(self, rng):
        # V[i] must equal the top coefficient of (X^i * F) mod P
        for _ in range(40):
            ctx = (Z, F2, pc.GF(13))[rng.below(3)]
            n = 2 + rng.below(14)
            P = rand_monic_sparse(ctx, n, 1 + rng.below(4), rng)
            F = rand_dense(ctx, rng.below(n), rng)
            V = leading_coefficients(P, F)
            Pd = P.to_dense()
            for i in range(n - 1):
                shifted = pc.DensePoly(ctx, [ctx.zero()] * i + list(F.coeffs))
                _, rem = poly_divmod(shifted, Pd)
                assert V[i] == rem.coeff(n - 1), (i, P.terms, F.coeffs)

    def test_sparse_matches_dense(self, rng):
        for _ in range(80):
            ctx = (Z, F2, pc.GF(13))[rng.below(3)]
            n = 2 + rng.below(100)
            P = rand_monic_sparse(ctx, n, 1 + rng.below(5), rng)
            F = rand_sparse(ctx, n, 1 + rng.below(6), rng)
            dense = leading_coefficients(P, F.to_dense())
            sparse = sparse_leading_coefficients(P, F)
            assert sparse == [(i, v) for i, v in enumerate(dense) if not ctx.is_zero(v)]

    def test_generation_bound(self, rng):
        for _ in range(80):
            n = 4 + rng.below(120)
            P = rand_monic_sparse(Z, n, 2 + rng.below(3), rng)
            F = rand_sparse(Z, n, 1 + rng.below(6), rng)
            out = sparse_leading_coefficients(P, F)
            g = pc.gap_info(P)
            assert len(out) <= F.sparsity() * P.sparsity() ** g.inv_gamma_minus_one_ceil()

    def test_binomial_modulus_length_bound(self, rng):
        P = pc.x_pow_minus_one(Z, 50)
        F = rand_sparse(Z, 50, 7, rng)
        assert len(sparse_leading_coefficients(P, F)) <= F.sparsity()

    def test_zero_input(self):
        P = rand_monic_sparse(Z, 9, 3, RngStream(5))
        assert sparse_leading_coefficients(P, pc.SparsePoly.zero(Z)) == []


class TestEvalModP:
    def test_binomial_specialization(self, rng):
        n = 20
        P = pc.x_pow_minus_one(Z, n)
        F = rand_dense(Z, n - 1, rng)
        G = rand_dense(Z, n - 1, rng)
        assert eval_mod_p_dense(P, F, G, 3) == eval_mod_binomial_dense(F, G, n, 3)
        Fs, Gs = F.to_sparse(), G.to_sparse()
        assert eval_mod_p_sparse(P, Fs, Gs, 3) == eval_mod_binomial_sparse(Fs, Gs, n, 3)

    def test_unit_multiplier(self, rng):
        P = rand_monic_sparse(Z, 11, 3, rng)
        F = rand_dense(Z, 10, rng)
        one = pc.DensePoly.one(Z)
        assert eval_mod_p_dense(P, F, one, 5) == pc.evaluate(F, 5)
        ones = pc.SparsePoly(Z, [(0, 1)])
        assert eval_mod_p_sparse(P, F.to_sparse(), ones, 5) == pc.evaluate(F, 5)

    def test_oracle_agreement_dense(self, rng):
        K = pc.GF(13)
        P = pc.SparsePoly(K, [(0, 1), (1, 1), (4, 1)])
        for _ in range(60):
            F = rand_dense(K, rng.below(4), rng)
            G = rand_dense(K, rng.below(4), rng)
            a = rng.below(13)
            assert eval_mod_p_dense(P, F, G, a) == oracle_eval(
                P, F.to_sparse(), G.to_sparse(), a
            )

    def test_oracle_agreement_sparse(self, rng):
        for _ in range(120):
            ctx = (Z, F2, pc.GF(65537))[rng.below(3)]
            n = 2 + rng.below(60)
            P = rand_monic_sparse(ctx, n, 1 + rng.below(4), rng)
            F = rand_sparse(ctx, n, 1 + rng.below(6), rng)
            G = rand_sparse(ctx, n, 1 + rng.below(6), rng)
            a = (rng.below(9) - 4) if ctx == Z else rng.below(ctx.q)
            want = oracle_eval(P, F, G, a)
            assert eval_mod_p_sparse(P, F, G, a) == want
            assert eval_mod_p_dense(P, F.to_dense(), G.to_dense(), a) == want

    def test_oracle_agreement_large_scales(self, rng):
        # dense up to degree 512, sparse up to degree 10^6 with T <= 64
        K = pc.GF(65537)
        P = rand_monic_sparse(K, 512, 3, rng)
        F = rand_dense(K, 511, rng)
        G = rand_dense(K, 500, rng)
        a = rng.below(65537)
        want = oracle_eval(P, F.to_sparse(), G.to_sparse(), a)
        assert eval_mod_p_dense(P, F, G, a) == want
        n = 10**6
        # keep the gap wide so the reduction stays sparse at this degree
        Ps = pc.SparsePoly(
            K, [(0, 1 + rng.below(65536)), (rng.below(n // 2), 1 + rng.below(65536)), (n, 1)]
        )
        Fs = rand_sparse(K, n, 64, rng)
        Gs = rand_sparse(K, n, 64, rng)
        a = rng.below(65537)
        assert eval_mod_p_sparse(Ps, Fs, Gs, a) == oracle_eval(Ps, Fs, Gs, a)
        assert eval_mod_binomial_sparse(Fs, Gs, n, a) == oracle_eval(
            pc.x_pow_minus_one(K, n), Fs, Gs, a
        )

    def test_extension_point_evaluation(self, rng):
        K = F2
        ext = pc.ExtField(K, (1, 1, 0, 0, 1))
        for _ in range(40):
            n = 2 + rng.below(30)
            P = rand_monic_sparse(K, n, 1 + rng.below(3), rng)
            F = rand_sparse(K, n, 1 + rng.below(5), rng)
            G = rand_sparse(K, n, 1 + rng.below(5), rng)
            a = ext.sample(rng)
            want = pc.evaluate(oracle_mod_product(F, G, P), a, ext)
            assert eval_mod_p_sparse(P, F, G, a, ext) == want

    def test_no_multiplication_discipline(self, rng):
        P = rand_monic_sparse(F2, 30, 3, rng)
        F = rand_dense(F2, 29, rng)
        G = rand_dense(F2, 29, rng)
        before = POLY_MUL_OPS.count
        eval_mod_p_dense(P, F, G, 1)
        assert POLY_MUL_OPS.count == before


class TestCompanionProjection:
    def test_constant_poly_returns_u(self, rng):
        R = pc.DensePoly(F2, [1, 1, 0, 1])
        op = CompanionOperator(R)
        one = pc.DensePoly.one(F2)
        for _ in range(5):
            u = tuple(rng.below(2) for _ in range(3))
            assert project_poly_companion(one, op, u) == u

    def test_modulus_projects_to_zero(self, rng):
        for q in (2, 5):
            K = pc.GF(q)
            R = pc.DensePoly(K, [rng.below(q) for _ in range(4)] + [1])
            op = CompanionOperator(R)
            u = tuple(rng.below(2) for _ in range(4))
            assert project_poly_companion(R, op, u) == (0, 0, 0, 0)

    def test_matches_matrix_oracle(self, rng):
        for _ in range(60):
            q = (2, 3, 13)[rng.below(3)]
            K = pc.GF(q)
            k = 1 + rng.below(8)
            R = pc.DensePoly(K, [rng.below(q) for _ in range(k)] + [1])
            op = CompanionOperator(R)
            H = rand_dense(K, rng.below(12), rng)
            u = tuple(rng.below(2) for _ in range(k))
            M = oracle_matrix_eval(H, R)
            want = tuple(
                K.canon(sum(u[r] * M[r][c] for r in range(k))) for c in range(k)
            )
            assert project_poly_companion(H, op, u) == want

    def test_zero_vector_linearity(self, rng):
        K = pc.GF(3)
        R = pc.DensePoly(K, [1, 2, 1, 1])
        op = CompanionOperator(R)
        P = rand_monic_sparse(K, 9, 3, rng)
        F = rand_dense(K, 8, rng)
        G = rand_dense(K, 8, rng)
        assert project_modprod_companion(P, F, G, op, (0, 0, 0)) == (0, 0, 0)

    def test_linearity_in_u_gf2(self, rng):
        R = pc.DensePoly(F2, [1, 0, 1, 1, 1])
        op = CompanionOperator(R)
        P = rand_monic_sparse(F2, 12, 3, rng)
        F = rand_dense(F2, 11, rng)
        G = rand_dense(F2, 11, rng)
        for _ in range(20):
            u1 = tuple(rng.below(2) for _ in range(4))
            u2 = tuple(rng.below(2) for _ in range(4))
            ux = tuple(a ^ b for a, b in zip(u1, u2))
            r1 = project_modprod_companion(P, F, G, op, u1)
            r2 = project_modprod_companion(P, F, G, op, u2)
            rx = project_modprod_companion(P, F, G, op, ux)
            assert rx == tuple(a ^ b for a, b in zip(r1, r2))

    def test_modprod_matches_oracle_route(self, rng):
        # u * ((F*G) mod P)(C_R) computed through the oracle product
        for _ in range(50):
            q = (2, 13)[rng.below(2)]
            K = pc.GF(q)
            k = 1 + rng.below(5)
            R = pc.DensePoly(K, [rng.below(q) for _ in range(k)] + [1])
            op = CompanionOperator(R)
            n = 2 + rng.below(14)
            P = rand_monic_sparse(K, n, 1 + rng.below(4), rng)
            F = rand_dense(K, rng.below(n), rng)
            G = rand_dense(K, rng.below(n), rng)
            u = tuple(rng.below(2) for _ in range(k))
            Hm = oracle_mod_product(F.to_sparse(), G.to_sparse(), P).to_dense()
            want = project_poly_companion(Hm, op, u)
            assert project_modprod_companion(P, F, G, op, u) == want

    def test_unit_multiplier(self, rng):
        K = pc.GF(7)
        R = pc.DensePoly(K, [3, 1, 1])
        op = CompanionOperator(R)
        P = rand_monic_sparse(K, 8, 3, rng)
        F = rand_dense(K, 7, rng)
        u = (1, 0)
        want = project_poly_companion(F, op, u)
        assert project_modprod_companion(P, F, pc.DensePoly.one(K), op, u) == want


class TestCompanionMatrixEval:
    def test_identity_product(self, rng):
        K = pc.GF(3)
        R = pc.DensePoly(K, [1, 2, 1])
        op = CompanionOperator(R)
        P = rand_monic_sparse(K, 6, 3, rng)
        one = pc.SparsePoly(K, [(0, 1)])
        assert eval_modprod_companion_sparse(P, one, one, op) == mat_identity(K, 2)

    def test_zero_factor(self, rng):
        K = F2
        R = pc.DensePoly(K, [1, 1, 1])
        op = CompanionOperator(R)
        P = rand_monic_sparse(K, 6, 2, rng)
        Zp = pc.SparsePoly.zero(K)
        G = rand_sparse(K, 6, 3, rng)
        assert eval_modprod_companion_sparse(P, Zp, G, op) == ((0, 0), (0, 0))

    def test_matches_matrix_oracle(self, rng):
        for _ in range(60):
            q = (2, 3, 13)[rng.below(3)]
            K = pc.GF(q)
            k = 1 + rng.below(5)
            R = pc.DensePoly(K, [rng.below(q) for _ in range(k)] + [1])
            op = CompanionOperator(R)
            n = 2 + rng.below(50)
            P = rand_monic_sparse(K, n, 1 + rng.below(4), rng)
            F = rand_sparse(K, n, 1 + rng.below(5), rng)
            G = rand_sparse(K, n, 1 + rng.below(5), rng)
            want = oracle_matrix_eval(oracle_mod_product(F, G, P).to_dense(), R)
            assert eval_modprod_companion_sparse(P, F, G, op) == want

    def test_poly_at_companion_agrees(self, rng):
        for _ in range(60):
            q = (2, 5)[rng.below(2)]
            K = pc.GF(q)
            k = 1 + rng.below(6)
            R = pc.DensePoly(K, [rng.below(q) for _ in range(k)] + [1])
            op = CompanionOperator(R)
            H = rand_sparse(K, 60, 1 + rng.below(6), rng)
            assert poly_at_companion(H, op) == oracle_matrix_eval(H.to_dense(), R)
            assert poly_at_companion(H.to_dense(), op) == oracle_matrix_eval(
                H.to_dense(), R
            )

    def test_companion_power_matches_oracle(self, rng):
        K = pc.GF(13)
        R = pc.DensePoly(K, [7, 0, 1, 1])
        op = CompanionOperator(R)
        for t in (0, 1, 2, 3, 7, 19, 64):
            Xt = pc.DensePoly(K, [0] * t + [1])
            assert companion_power(op, t) == oracle_matrix_eval(Xt, R)
