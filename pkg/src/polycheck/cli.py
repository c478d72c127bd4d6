"""Command-line front end.

Subcommands: verify-mod (modular products), verify-prod (plain products),
gen (instance files, optionally adversarial), bench (CSV timing harness).
Exit codes: 0 the identity verified, 1 it was rejected, 2 usage or parse
error.  Verification reports are printed as one JSON object per line.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import modverify, prodverify
from .modverify import VerifyConfig, FieldTooSmallError
from .poly import (
    DensePoly,
    PolyFormatError,
    SparsePoly,
    mod_reduce,
    mul_oracle,
    read_poly_file,
    write_poly_file,
)
from .rings import GF, RngStream, ZZ

DEFAULT_EPSILON = Fraction(1, 2**20)


class CliError(Exception):
    pass


def _parse_epsilon(text):
    try:
        if "^" in text:
            base, exp = text.split("^", 1)
            eps = Fraction(int(base)) ** int(exp)
        elif "/" in text:
            eps = Fraction(text)
        else:
            eps = Fraction(float(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad epsilon {text!r}: {exc}") from None
    if not 0 < eps < 1:
        raise CliError("epsilon must be in (0, 1)")
    return eps


def _seed_from(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("POLYPROOF_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"bad POLYPROOF_SEED {env!r}") from None
    return 0


def _load(path):
    try:
        return read_poly_file(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}") from None
    except PolyFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _same_ctx(*polys):
    ctx = polys[0].ctx
    for p in polys[1:]:
        if p.ctx != ctx:
            raise CliError("input polynomials live in different rings")
    return ctx


def _print_report(report, command):
    payload = report.to_dict()
    payload["command"] = command
    print(json.dumps(payload, sort_keys=True))


def _cmd_verify_mod(args):
    F, G, H, P = (_load(p) for p in (args.F, args.G, args.H, args.P))
    ctx = _same_ctx(F, G, H, P)
    if not isinstance(P, SparsePoly):
        P = P.to_sparse()
    cfg = VerifyConfig(
        epsilon=_parse_epsilon(args.epsilon), method=args.method, seed=_seed_from(args)
    )
    try:
        if ctx == ZZ:
            if args.method not in ("auto", "direct-eval"):
                raise CliError(f"method {args.method!r} needs GF(q) inputs")
            report = modverify.verify_mod_over_Z(F, G, H, P, cfg)
        else:
            report = modverify.verify_mod_ff(F, G, H, P, cfg)
    except (ValueError, FieldTooSmallError) as exc:
        raise CliError(str(exc)) from None
    _print_report(report, "verify-mod")
    return 0 if report.verdict else 1


def _pick_prod_method(args, F, G, H, ctx):
    if args.method != "auto":
        return args.method
    if all(isinstance(X, SparsePoly) for X in (F, G, H)):
        return "sparse"
    if ctx == ZZ:
        degs = [X.degree() for X in (F, G, H) if not X.is_zero()]
        n = max(degs, default=1)
        cbits = max(
            max((abs(c).bit_length() for c in X.coeffs), default=1)
            for X in (F, G, H)
            if not X.is_zero()
        )
        # Kronecker wants coefficients at least as wide as the degree index
        return "kronecker" if n.bit_length() <= 2 * cbits else "kaminski"
    return "kaminski"


def _cmd_verify_prod(args):
    F, G, H = (_load(p) for p in (args.F, args.G, args.H))
    ctx = _same_ctx(F, G, H)
    cfg = VerifyConfig(epsilon=_parse_epsilon(args.epsilon), seed=_seed_from(args))
    method = _pick_prod_method(args, F, G, H, ctx)
    try:
        if method == "sparse":
            FGH = [X if isinstance(X, SparsePoly) else X.to_sparse() for X in (F, G, H)]
            report = prodverify.verify_sparse_product(*FGH, cfg)
        elif method == "kronecker":
            if ctx != ZZ:
                raise CliError("kronecker needs ring Z inputs")
            report = prodverify.verify_product_kronecker(F, G, H, cfg)
        elif method == "kaminski":
            report = prodverify.verify_product_kaminski(F, G, H, cfg)
        elif method == "kaminski-nomul":
            report = prodverify.verify_product_kaminski_nomul(F, G, H, cfg)
        else:
            raise CliError(f"unknown method {method!r}")
    except (ValueError, FieldTooSmallError, TypeError) as exc:
        raise CliError(str(exc)) from None
    _print_report(report, "verify-prod")
    return 0 if report.verdict else 1


# ---------------------------------------------------------------------------
# instance generation


def _random_sparse(ctx, n, t, coeff_bits, rng):
    exps = set()
    t = min(t, n + 1)
    exps.add(n)
    while len(exps) < t:
        exps.add(rng.below(n))
    terms = []
    for e in sorted(exps):
        c = ctx.zero()
        while ctx.is_zero(c):
            if ctx == ZZ:
                c = rng.bits(coeff_bits) - (1 << (coeff_bits - 1)) if coeff_bits > 1 else 1
            else:
                c = rng.below(ctx.q)
        terms.append((e, c))
    return SparsePoly(ctx, terms)


def _random_dense(ctx, n, coeff_bits, rng):
    cs = []
    for _ in range(n):
        if ctx == ZZ:
            cs.append(rng.bits(coeff_bits) - (1 << (coeff_bits - 1)))
        else:
            cs.append(rng.below(ctx.q))
    top = ctx.zero()
    while ctx.is_zero(top):
        top = 1 if ctx == ZZ else rng.below(ctx.q)
    return DensePoly(ctx, cs + [top])


def _perturb(H, rng):
    ctx = H.ctx
    if isinstance(H, SparsePoly):
        terms = dict(H.terms)
        e = H.degree() + 1 if not H.is_zero() else 1
        bump = ctx.one()
        if H.terms:
            e, c = H.terms[rng.below(len(H.terms))]
            bump = ctx.add(c, ctx.one())
            terms[e] = bump
            if ctx.is_zero(bump):
                del terms[e]
        else:
            terms[e] = bump
        return SparsePoly.from_dict(ctx, terms)
    cs = list(H.coeffs) or [ctx.zero()]
    i = rng.below(len(cs))
    cs[i] = ctx.add(cs[i], ctx.one())
    return DensePoly(ctx, cs)


def _lcm_adversarial(ctx, n, rng):
    """F*G plus a difference X^L - 1 whose L is a multiple of several fold
    degrees, so many binomials X^i - 1 divide the difference."""
    params = prodverify.KaminskiParams()
    lo, hi = params.fold_range(n)
    i0 = lo + rng.below(max(hi - lo, 1))
    L = i0
    for cand in range(i0 + 1, hi):
        nxt = L * cand // __import__("math").gcd(L, cand)
        if nxt <= 2 * n:
            L = nxt
    delta = {0: ctx.neg(ctx.one()), L: ctx.one()}
    return L, SparsePoly.from_dict(ctx, delta)


def _example2_triple(ctx, t):
    F = SparsePoly(ctx, [(i, ctx.one()) for i in range(t)])
    terms = []
    for i in range(t):
        terms.append((i * t, ctx.neg(ctx.one())))
        terms.append((i * t + 1, ctx.one()))
    G = SparsePoly.from_dict(ctx, dict(terms))
    H = SparsePoly.from_dict(ctx, {0: ctx.neg(ctx.one()), t * t: ctx.one()})
    return F, G, H


def _cmd_gen(args):
    if args.ring == "GF" and args.q is None:
        raise CliError("--q is required with --ring GF")
    ctx = ZZ if args.ring == "Z" else GF(args.q)
    rng = RngStream(_seed_from(args))
    kind = args.adversarial or "none"
    sparse_mode = args.T is not None
    t = args.T or 0
    if kind == "example2":
        if not sparse_mode or t < 2:
            raise CliError("example2 needs --T >= 2")
        F, G, H = _example2_triple(ctx, t)
        true_product = True
    else:
        if sparse_mode:
            if t < 1:
                raise CliError("--T must be >= 1")
            F = _random_sparse(ctx, args.n, t, args.coeff_bits, rng)
            G = _random_sparse(ctx, args.n, t, args.coeff_bits, rng)
        else:
            F = _random_dense(ctx, args.n, args.coeff_bits, rng)
            G = _random_dense(ctx, args.n, args.coeff_bits, rng)
        H = mul_oracle(F, G)
        true_product = True
        if kind == "perturb":
            H = _perturb(H, rng)
            true_product = False
        elif kind == "lcm-divisors":
            L, delta = _lcm_adversarial(ctx, max(args.n, 4), rng)
            acc = dict(H.terms) if isinstance(H, SparsePoly) else None
            if acc is None:
                H = H.to_sparse()
                acc = dict(H.terms)
            for e, c in delta.terms:
                v = ctx.add(acc.get(e, ctx.zero()), c)
                if ctx.is_zero(v):
                    acc.pop(e, None)
                else:
                    acc[e] = v
            H = SparsePoly.from_dict(ctx, acc)
            if not sparse_mode:
                H = H.to_dense()
            true_product = False
        elif kind != "none":
            raise CliError(f"unknown adversarial kind {kind!r}")
    paths = {}
    for name, P in (("F", F), ("G", G), ("H", H)):
        path = f"{args.out_prefix}_{name}.poly"
        write_poly_file(path, P)
        paths[name] = path
    manifest = {
        "ring": args.ring if args.ring == "Z" else f"GF {args.q}",
        "n": args.n,
        "T": args.T,
        "coeff_bits": args.coeff_bits,
        "seed": _seed_from(args),
        "adversarial": kind,
        "true_product": true_product,
        "files": paths,
    }
    print(json.dumps(manifest, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# bench


def _time_call(fn):
    t0 = time.perf_counter()
    result = fn()
    return time.perf_counter() - t0, result


def _bench_modverify(n, trials, rng):
    ctx = GF(65537)
    rows = []
    verify_t = 0.0
    mul_t = 0.0
    accepted = 0
    P = SparsePoly(ctx, [(0, 1), (1, rng.below(ctx.q - 1) + 1), (n, 1)])
    for trial in range(trials):
        F = _random_dense(ctx, n - 1, 16, rng)
        G = _random_dense(ctx, n - 1, 16, rng)
        tm, prod = _time_call(lambda: mod_reduce(mul_oracle(F, G), P))
        mul_t += tm
        H = prod
        cfg = VerifyConfig(epsilon=Fraction(1, 2**20), seed=rng.bits(32))
        tv, report = _time_call(lambda: modverify.verify_mod_ff(F, G, H, P, cfg))
        verify_t += tv
        accepted += 1 if report.verdict else 0
    if trials:
        rows.append(
            {
                "method": "verify_mod",
                "ring": "GF 65537",
                "n": n,
                "T": "",
                "bits": 17,
                "trials": trials,
                "verify_mean_s": f"{verify_t / trials:.6f}",
                "multiply_mean_s": f"{mul_t / trials:.6f}",
                "acceptance_rate": f"{accepted / trials:.4f}",
            }
        )
    return rows


def _bench_prodverify(n, trials, rng):
    rows = []
    verify_t = 0.0
    mul_t = 0.0
    accepted = 0
    t = 32
    for trial in range(trials):
        F = _random_sparse(ZZ, n, t, 32, rng)
        G = _random_sparse(ZZ, n, t, 32, rng)
        tm, H = _time_call(lambda: mul_oracle(F, G))
        mul_t += tm
        cfg = VerifyConfig(epsilon=Fraction(1, 2**20), seed=rng.bits(32))
        tv, report = _time_call(lambda: prodverify.verify_sparse_product(F, G, H, cfg))
        verify_t += tv
        accepted += 1 if report.verdict else 0
    if trials:
        rows.append(
            {
                "method": "verify_sparse_product",
                "ring": "Z",
                "n": n,
                "T": t,
                "bits": 32,
                "trials": trials,
                "verify_mean_s": f"{verify_t / trials:.6f}",
                "multiply_mean_s": f"{mul_t / trials:.6f}",
                "acceptance_rate": f"{accepted / trials:.4f}",
            }
        )
    return rows


BENCH_COLUMNS = [
    "method",
    "ring",
    "n",
    "T",
    "bits",
    "trials",
    "verify_mean_s",
    "multiply_mean_s",
    "acceptance_rate",
]


def run_bench(suite, sizes, trials, seed):
    rng = RngStream(seed)
    rows = []
    for n in sizes:
        if suite == "modverify":
            rows.extend(_bench_modverify(n, trials, rng))
        elif suite == "prodverify":
            rows.extend(_bench_prodverify(n, trials, rng))
        else:
            raise CliError(f"unknown suite {suite!r}")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in sorted(rows, key=lambda r: (r["method"], r["n"])):
        writer.writerow(row)
    return buf.getvalue()


def _cmd_bench(args):
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise CliError(f"bad sizes {args.sizes!r}") from None
    out = run_bench(args.suite, sizes, args.trials, _seed_from(args))
    sys.stdout.write(out)
    if args.csv:
        with open(args.csv, "w", encoding="ascii") as fh:
            fh.write(out)
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="polycheck",
        description="Probabilistic verification of polynomial products and modular products.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    vm = sub.add_parser("verify-mod", help="check H = (F*G) mod P")
    vm.add_argument("--F", required=True)
    vm.add_argument("--G", required=True)
    vm.add_argument("--H", required=True)
    vm.add_argument("--P", required=True)
    vm.add_argument("--epsilon", default="2^-20")
    vm.add_argument("--method", default="auto", choices=list(modverify.METHODS))
    vm.add_argument("--seed", type=int, default=None)
    vm.set_defaults(fn=_cmd_verify_mod)

    vp = sub.add_parser("verify-prod", help="check H = F*G")
    vp.add_argument("--F", required=True)
    vp.add_argument("--G", required=True)
    vp.add_argument("--H", required=True)
    vp.add_argument("--epsilon", default="2^-20")
    vp.add_argument(
        "--method",
        default="auto",
        choices=["auto", "kaminski", "kaminski-nomul", "kronecker", "sparse"],
    )
    vp.add_argument("--seed", type=int, default=None)
    vp.set_defaults(fn=_cmd_verify_prod)

    gen = sub.add_parser("gen", help="generate an instance triple F, G, H")
    gen.add_argument("--ring", required=True, choices=["Z", "GF"])
    gen.add_argument("--q", type=int, default=None)
    gen.add_argument("--n", type=int, default=64)
    gen.add_argument("--T", type=int, default=None)
    gen.add_argument("--coeff-bits", type=int, default=16, dest="coeff_bits")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out-prefix", required=True, dest="out_prefix")
    gen.add_argument(
        "--adversarial",
        default=None,
        choices=["perturb", "lcm-divisors", "example2"],
    )
    gen.set_defaults(fn=_cmd_gen)

    bench = sub.add_parser("bench", help="timing and acceptance-rate harness")
    bench.add_argument("--suite", required=True, choices=["modverify", "prodverify"])
    bench.add_argument("--sizes", default="1024")
    bench.add_argument("--trials", type=int, default=4)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--csv", default=None)
    bench.set_defaults(fn=_cmd_bench)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
