"""Probabilistic verification of H = (F*G) mod P.

All verdicts are one-sided (True-biased): a correct H is always accepted,
and a wrong one is accepted with probability at most the configured epsilon.
Every random choice made along the way is recorded in the report's witness
list so a failing run can be replayed from its seed.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import modeval
from .modeval import CompanionOperator
from .poly import (
    DensePoly,
    SparsePoly,
    evaluate,
    gap_info,
    product_norm_bound,
    reduced_norm_bound,
)
from .rings import (
    ExtField,
    GF,
    IntegerRing,
    PrimeField,
    RngStream,
    ln_upper,
    random_irreducible,
    random_monic,
    random_prime,
)

METHODS = (
    "auto",
    "direct-eval",
    "extension",
    "companion-freivalds",
    "companion-no-polymul",
)

# per-round constant for the companion methods; must sit in (0, 1/4)
COMPANION_EPS1 = Fraction(1, 8)


class FieldTooSmallError(ValueError):
    """The coefficient field has fewer elements than the target error bound
    needs; use verify_mod_ff or a companion method instead."""


@dataclass(frozen=True)
class VerifyConfig:
    epsilon: Fraction = Fraction(1, 2**20)
    method: str = "auto"
    seed: int = 0

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if not 0 < eps < 1:
            raise ValueError("epsilon must be in (0, 1)")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        object.__setattr__(self, "epsilon", eps)


@dataclass
class VerifyReport:
    verdict: bool
    error_bound: float
    rounds: int
    witnesses: list = field(default_factory=list)
    method: str = ""
    seed: int = 0

    def to_dict(self):
        return {
            "schema": 1,
            "verdict": self.verdict,
            "error_bound": self.error_bound,
            "rounds": self.rounds,
            "witnesses": self.witnesses,
            "method": self.method,
            "seed": self.seed,
        }


def _describe(ctx, a):
    if isinstance(ctx, ExtField):
        return list(ctx.coeffs(a))
    return a


def _sample_point(ring, rng):
    # the whole field, drawn rejection-free
    return ring.sample(rng)


def _all_sparse(*polys):
    return all(isinstance(p, SparsePoly) for p in polys)


def _sparsity_precheck(F, G, H, P):
    """Step-one rejection: a true (F*G) mod P can never have more than
    #F #G (#P - 1)^ceil(1/gamma) terms (needs #P >= 2)."""
    if P.sparsity() < 2:
        return False
    g = gap_info(P)
    bound = F.sparsity() * G.sparsity() * (P.sparsity() - 1) ** g.inv_gamma_ceil()
    return H.sparsity() > bound


def _check_shapes(F, G, H, P):
    if not (F.ctx == G.ctx == H.ctx == P.ctx):
        raise ValueError("mixed coefficient contexts")
    n = P.degree()
    for X in (F, G, H):
        if not X.is_zero() and X.degree() >= n:
            raise ValueError("inputs must have degree < deg P")
    return n


def _eval_mod_point(P, F, G, alpha, ring):
    """Dispatch to the binomial fast path when P = X^n - 1."""
    ctx = P.ctx
    n = P.degree()
    binom = (
        P.sparsity() == 2
        and P.terms[0][0] == 0
        and ctx.is_zero(ctx.add(P.terms[0][1], ctx.one()))
    )
    if _all_sparse(F, G):
        if binom:
            return modeval.eval_mod_binomial_sparse(F, G, n, alpha, ring)
        return modeval.eval_mod_p_sparse(P, F, G, alpha, ring)
    Fd = F if isinstance(F, DensePoly) else F.to_dense()
    Gd = G if isinstance(G, DensePoly) else G.to_dense()
    if binom:
        return modeval.eval_mod_binomial_dense(Fd, Gd, n, alpha, ring)
    return modeval.eval_mod_p_dense(P, Fd, Gd, alpha, ring)


def verify_mod(F, G, H, P, cfg=None):
    """Decide H = (F*G) mod P by a single random evaluation over the
    coefficient field (or an extension the caller already placed us in).

    Needs the field to have at least (1/epsilon)(n-1) elements; smaller
    fields must go through verify_mod_ff or the companion methods.  Integer
    inputs are routed through verify_mod_over_Z, which controls coefficient
    growth by reducing modulo a random prime.
    """
    cfg = cfg or VerifyConfig()
    n = _check_shapes(F, G, H, P)
    ctx = P.ctx
    if isinstance(ctx, IntegerRing):
        return verify_mod_over_Z(F, G, H, P, cfg)
    eps = cfg.epsilon
    if _all_sparse(F, G, H) and _sparsity_precheck(F, G, H, P):
        return VerifyReport(False, float(eps), 0, [], "direct-eval", cfg.seed)
    size = ctx.size()
    if size * eps < n - 1:
        raise FieldTooSmallError(
            f"field of size {size} cannot reach epsilon={eps} at degree {n}"
        )
    rng = RngStream(cfg.seed)
    verdict, witnesses = _verify_mod_once(F, G, H, P, ctx, rng)
    return VerifyReport(verdict, float(eps), 1, witnesses, "direct-eval", cfg.seed)


def _verify_mod_once(F, G, H, P, ring, rng):
    alpha = _sample_point(ring, rng)
    lhs = evaluate(H, alpha, ring)
    rhs = _eval_mod_point(P, F, G, alpha, ring)
    return lhs == rhs, [{"alpha": _describe(ring, alpha)}]


def delta_norm_bound(F, G, H, P):
    """Bound on |H - (F*G) mod P| coefficients over Z:
    ||H|| + min(#F, #G) ||F|| ||G|| (#P ||P||)^ceil(1/gamma)."""
    g = gap_info(P)
    prod = product_norm_bound(F, G)
    if prod:
        prod = reduced_norm_bound(prod, P.sparsity(), P.norm(), g.n - 1, g)
    h_norm = 0 if H.is_zero() else H.norm()
    return h_norm + prod


def verify_mod_over_Z(F, G, H, P, cfg=None):
    """Integer-coefficient variant: bound the coefficients of the would-be
    difference, pick a random prime q that almost surely preserves a nonzero
    difference, reduce everything modulo q and verify over GF(q)."""
    cfg = cfg or VerifyConfig()
    n = _check_shapes(F, G, H, P)
    if not isinstance(P.ctx, IntegerRing):
        raise TypeError("verify_mod_over_Z needs integer polynomials")
    eps = cfg.epsilon
    if _all_sparse(F, G, H) and _sparsity_precheck(F, G, H, P):
        return VerifyReport(False, float(eps), 0, [], "direct-eval", cfg.seed)
    rng = RngStream(cfg.seed)
    delta_inf = delta_norm_bound(F, G, H, P)
    lam = max(
        21,
        -(-2 * n * eps.denominator // eps.numerator),
        math.ceil(Fraction(20, 3) / eps * ln_upper(max(delta_inf, 1))),
    )
    q = random_prime(lam, eps / 2, rng)
    fq = GF(q)
    Fq, Gq, Hq, Pq = (_map_to_field(X, fq) for X in (F, G, H, P))
    witnesses = [{"q": q}]
    verdict, inner = _verify_mod_once(Fq, Gq, Hq, Pq, fq, rng)
    witnesses.extend(inner)
    return VerifyReport(verdict, float(eps), 1, witnesses, "direct-eval", cfg.seed)


def _map_to_field(X, fq):
    if isinstance(X, DensePoly):
        return DensePoly(fq, [c % fq.q for c in X.coeffs])
    return SparsePoly(fq, [(e, c % fq.q) for e, c in X.terms])


def minimal_extension_degree(q, bound):
    """Smallest d with q**d >= bound."""
    bound = Fraction(bound)
    d = 1
    power = Fraction(q)
    while power < bound:
        power *= q
        d += 1
    return d


def verify_mod_ff(F, G, H, P, cfg=None):
    """Finite-field front end: evaluate directly when GF(q) is large enough
    for the target epsilon, otherwise verify over a random degree-d extension
    GF(q^d) with q^d >= (2/epsilon)(n-1), or dispatch to a companion method
    when the config requests one."""
    cfg = cfg or VerifyConfig()
    n = _check_shapes(F, G, H, P)
    ctx = P.ctx
    if not isinstance(ctx, PrimeField):
        raise TypeError("verify_mod_ff needs GF(q) polynomials")
    if cfg.method in ("companion-freivalds", "companion-no-polymul"):
        if _all_sparse(F, G, H):
            return verify_mod_companion_sparse(F, G, H, P, cfg)
        return verify_mod_companion(F, G, H, P, cfg)
    eps = cfg.epsilon
    q = ctx.q
    if cfg.method == "direct-eval" or (cfg.method == "auto" and q * eps >= n - 1):
        return verify_mod(F, G, H, P, cfg)
    if _all_sparse(F, G, H) and _sparsity_precheck(F, G, H, P):
        return VerifyReport(False, float(eps), 0, [], "extension", cfg.seed)
    rng = RngStream(cfg.seed)
    d = minimal_extension_degree(q, Fraction(2, 1) / eps * max(n - 1, 1))
    R = random_irreducible(ctx, d, eps / 2, rng)
    ext = ExtField(ctx, R.coeffs)
    alpha = _sample_point(ext, rng)
    lhs = evaluate(H, alpha, ext)
    rhs = _eval_mod_point(P, F, G, alpha, ext)
    witnesses = [
        {
            "extension_degree": d,
            "modulus": list(R.coeffs),
            "alpha": _describe(ext, alpha),
        }
    ]
    return VerifyReport(lhs == rhs, float(eps), 1, witnesses, "extension", cfg.seed)


def _companion_rounds(eps):
    """Smallest r with (1/2 + 2*eps1)^r <= eps, for eps1 = 1/8."""
    per_round = Fraction(1, 2) + 2 * COMPANION_EPS1
    r = 0
    acc = Fraction(1)
    while acc > eps:
        acc *= per_round
        r += 1
    return max(r, 1)


def verify_mod_companion(F, G, H, P, cfg=None):
    """Small-field verification through companion matrices: draw a monic R of
    degree d = ceil(log_q(2n/eps1)) and a 0/1 vector u, then compare the row
    projections u*H(C_R) and u*((F*G) mod P)(C_R).  In "companion-freivalds"
    mode R is screened for irreducibility; in "companion-no-polymul" mode a
    batch of unscreened monic draws replaces the screening so that no
    polynomial multiplication happens anywhere on the path."""
    cfg = cfg or VerifyConfig()
    n = _check_shapes(F, G, H, P)
    ctx = P.ctx
    if not isinstance(ctx, PrimeField):
        raise TypeError("companion verification needs GF(q) polynomials")
    Fd = F if isinstance(F, DensePoly) else F.to_dense()
    Gd = G if isinstance(G, DensePoly) else G.to_dense()
    Hd = H if isinstance(H, DensePoly) else H.to_dense()
    eps = cfg.epsilon
    no_polymul = cfg.method == "companion-no-polymul"
    rng = RngStream(cfg.seed)
    q = ctx.q
    d = minimal_extension_degree(q, Fraction(2 * n, 1) / COMPANION_EPS1)
    rounds = _companion_rounds(eps)
    draws_per_round = (
        max(1, math.ceil(2 * d * math.log(1 / float(COMPANION_EPS1)) + 1e-9))
        if no_polymul
        else 1
    )
    lc = modeval.leading_coefficients(P, Fd) if not Fd.is_zero() else None
    witnesses = []
    verdict = True
    for rnd in range(rounds):
        moduli = []
        if no_polymul:
            for _ in range(draws_per_round):
                moduli.append(DensePoly(ctx, random_monic(ctx, d, rng)))
        else:
            moduli.append(random_irreducible(ctx, d, COMPANION_EPS1, rng))
        u = tuple(rng.below(2) for _ in range(d))
        entry = {"round": rnd, "u": list(u), "moduli": [list(R.coeffs) for R in moduli]}
        witnesses.append(entry)
        for R in moduli:
            op = CompanionOperator(R)
            lhs = modeval.project_poly_companion(Hd, op, u)
            if Fd.is_zero() or Gd.is_zero():
                rhs = tuple(ctx.zero() for _ in range(d))
            else:
                rhs = modeval.project_modprod_companion(P, Fd, Gd, op, u, lc=lc)
            if lhs != rhs:
                entry["mismatch"] = list(R.coeffs)
                verdict = False
                break
        if not verdict:
            break
    method = "companion-no-polymul" if no_polymul else "companion-freivalds"
    return VerifyReport(verdict, float(eps), rounds, witnesses, method, cfg.seed)


def verify_mod_companion_sparse(F, G, H, P, cfg=None):
    """Sparse companion verification: ceil(log2(n/eps) * log2(1/eps)) random
    monic moduli R, comparing the full matrices H(C_R) and
    ((F*G) mod P)(C_R); any mismatch rejects."""
    cfg = cfg or VerifyConfig()
    n = _check_shapes(F, G, H, P)
    ctx = P.ctx
    if not isinstance(ctx, PrimeField):
        raise TypeError("companion verification needs GF(q) polynomials")
    if not _all_sparse(F, G, H):
        raise TypeError("sparse companion verification needs sparse polynomials")
    eps = cfg.epsilon
    rng = RngStream(cfg.seed)
    q = ctx.q
    d = minimal_extension_degree(q, Fraction(2 * n, 1) / COMPANION_EPS1)
    draws = max(
        1,
        math.ceil(
            math.log2(n / float(eps)) * math.log2(1 / float(eps)) + 1e-9
        ),
    )
    witnesses = []
    verdict = True
    for _ in range(draws):
        R = DensePoly(ctx, random_monic(ctx, d, rng))
        op = CompanionOperator(R)
        entry = {"modulus": list(R.coeffs)}
        witnesses.append(entry)
        lhs = modeval.poly_at_companion(H, op)
        rhs = modeval.eval_modprod_companion_sparse(P, F, G, op)
        if lhs != rhs:
            entry["mismatch"] = True
            verdict = False
            break
    return VerifyReport(
        verdict, float(eps), draws, witnesses, "companion-sparse", cfg.seed
    )
