"""Command-line workbench: reproducible JSON-emitting experiments.

Every subcommand validates its configuration, dispatches to library
operations, and emits a canonical-JSON report whose verdicts carry
stable claim anchors (``claim:<slug>``).  Exit codes: 0 all verdicts
pass (documented findings count as passing), 1 invariant failure,
2 invalid configuration, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from . import __version__
from .errors import CapExceeded, GlnLabError, InvalidConfig
from .rings import DEFAULT_GROUP_CAP, HalfPowerLaurent

_ANCHOR_RE = re.compile(r"^claim:[a-z0-9][a-z0-9-]*$")


# ---------------------------------------------------------------------------
# report plumbing

def verdict(name, anchor, ok, detail=None, documented=False):
    status = "documented" if documented else ("pass" if ok else "fail")
    v = {"name": name, "anchor": anchor, "status": status}
    if detail is not None:
        v["detail"] = detail
    return v


def lint_report(report):
    """Every verdict must carry a well-formed claim anchor."""
    for v in report.get("verdicts", []):
        if not v.get("name"):
            raise InvalidConfig("verdict without a name")
        if not _ANCHOR_RE.match(v.get("anchor", "")):
            raise InvalidConfig(
                f"verdict {v.get('name')!r} lacks a claim anchor")
        if v.get("status") not in ("pass", "fail", "documented"):
            raise InvalidConfig(f"unknown verdict status {v.get('status')!r}")


def canonical_json(report):
    return json.dumps(report, sort_keys=True, indent=2,
                      ensure_ascii=True) + "\n"


def emit(report, json_out=None):
    lint_report(report)
    text = canonical_json(report)
    if json_out:
        with open(json_out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def exit_code(report):
    statuses = [v["status"] for v in report.get("verdicts", [])]
    return 1 if "fail" in statuses else 0


# serialization helpers ------------------------------------------------------

def ser_half(x):
    if isinstance(x, HalfPowerLaurent):
        return {"a": str(x.a), "b": str(x.b)}
    return str(x)


def ser_image(img):
    return {",".join(map(str, lam)): ser_half(c)
            for lam, c in sorted(img.coeffs.items())}


def ser_hecke(f):
    return {",".join(map(str, lam)): ser_half(c)
            for lam, c in sorted(f.support.items())}


def ser_mat(m):
    def entry(e):
        coeffs = getattr(e, "coeffs", None)
        if coeffs is not None:
            return str(coeffs[0]) if len(coeffs) == 1 \
                else ",".join(map(str, coeffs))
        return str(e)
    return [[entry(e) for e in row] for row in m.rows]


# ---------------------------------------------------------------------------
# subcommands

def cmd_roots(args):
    from .roots import (check_root_system, full_root_set_gl, simple_roots_gl,
                        weyl_group)
    n = args.n
    if n < 2:
        raise InvalidConfig("roots needs --n >= 2")
    simple = simple_roots_gl(n)
    roots = full_root_set_gl(n)
    checks = check_root_system(roots)
    w = weyl_group(simple, cap=args.cap)
    import math
    results = {
        "n": n,
        "simple_roots": [list(r) for r in simple],
        "root_count": len(roots),
        "axioms": {k: v for k, v in checks.items()
                   if isinstance(v, (bool, int))},
        "weyl_order": len(w),
    }
    verdicts = [
        verdict("root axioms hold", "claim:root-axioms",
                checks["reduced"] and checks["reflection_closed"]
                and checks["crystallographic"] and checks["primed_agree"]),
        verdict("weyl order is n factorial", "claim:weyl-order-factorial",
                len(w) == math.factorial(n)),
    ]
    return {"results": results, "verdicts": verdicts}


G2_SIMPLE = ((1, -1, 0), (-1, 2, -1))


def cmd_cartan(args):
    from fractions import Fraction

    from .roots import cartan_matrix, ds_decompose, simple_roots_gl
    if args.preset == "g2":
        simple = [list(r) for r in G2_SIMPLE]
    elif args.n:
        simple = [list(r) for r in simple_roots_gl(args.n)]
    else:
        raise InvalidConfig("cartan needs --n or --preset g2")
    a = cartan_matrix(simple)
    dec, minors = ds_decompose(simple)
    results = {
        "cartan": [[str(x) for x in row] for row in a.entries],
        "d": [str(x) for x in dec.D],
        "s": [[str(x) for x in row] for row in dec.S],
        "leading_minors_of_s": [str(m) for m in minors],
    }
    verdicts = [
        verdict("A = D*S with S symmetric positive definite",
                "claim:cartan-ds-decomposition",
                all(m > 0 for m in minors)),
    ]
    if args.preset == "g2":
        expect_a = ((2, -3), (-1, 2))
        expect_d = (3, 1)
        expect_s = ((Fraction(2, 3), -1), (-1, 2))
        verdicts.append(verdict(
            "rank-2 triple-bond matrix factors as diag(3,1) times "
            "[[2/3,-1],[-1,2]]", "claim:g2-cartan-factorization",
            tuple(tuple(r) for r in a.entries) == expect_a
            and dec.D == expect_d
            and dec.S == expect_s
            and minors[0] == Fraction(2, 3)
            and minors[1] == Fraction(1, 3)))
    return {"results": results, "verdicts": verdicts}


def cmd_lang(args):
    from .lang import gl_module, lang_image
    from .rings import FiniteField
    m = gl_module(FiniteField(args.p, args.d, cap=args.cap), args.s,
                  cap=args.cap)
    img = lang_image(m)
    expected = None
    ok = True
    if args.s == 1:
        expected = (args.p**args.d - 1) // (args.p - 1)
        ok = len(img) == expected
    results = {"p": args.p, "d": args.d, "s": args.s,
               "image_size": len(img), "group_size": len(m.elements)}
    if expected is not None:
        results["expected_image_size"] = expected
    return {"results": results, "verdicts": [
        verdict("image size matches the norm-kernel count law",
                "claim:lang-image-size", ok),
    ]}


def cmd_h1(args):
    from .lang import gl_module, h1_cyclic
    from .rings import FiniteField, TruncatedLocalRing
    if args.level and args.level > 1:
        ring = TruncatedLocalRing(args.p, args.level, args.d, cap=args.cap)
        m = gl_module(ring, args.s, cap=args.cap)
    else:
        m = gl_module(FiniteField(args.p, args.d, cap=args.cap), args.s,
                      cap=args.cap)
    res = h1_cyclic(m)
    results = {"p": args.p, "d": args.d, "s": args.s,
               "level": args.level or 1,
               "cocycle_count": res["cocycle_count"],
               "h1_size": res["h1_size"]}
    return {"results": results, "verdicts": [
        verdict("first cohomology is trivial", "claim:h1-triviality",
                res["h1_size"] == 1),
    ]}


def cmd_dm_check(args):
    from .lang import dm_bijection_check
    rep = dm_bijection_check(args.s, args.q, args.n, cap=args.cap)
    results = {"s": args.s, "q": args.q, "n": args.n,
               "plain_class_count": rep["plain_class_count"],
               "twisted_class_count": rep["twisted_class_count"]}
    return {"results": results, "verdicts": [
        verdict("class counts agree and every class is matched",
                "claim:twisted-conjugacy-bijection", rep["bijective"]),
    ]}


def cmd_building(args):
    from .building import (audit_self_normalizing, audit_ub_factorization,
                           fundamental_simplices, iwasawa_decompose,
                           stabilizer_pattern)
    from .rings import Mat, TruncatedLocalRing
    action = args.action
    if action == "simplices":
        simps = fundamental_simplices(args.n)
        results = {"n": args.n, "count": len(simps),
                   "simplices": [list(s) for s in simps],
                   "patterns": [list(map(list, stabilizer_pattern(s, args.n)
                                         .entries)) for s in simps]}
        return {"results": results, "verdicts": [
            verdict("simplex count is 2^n - 1", "claim:simplex-count",
                    len(simps) == 2**args.n - 1),
        ]}
    if action == "iwasawa":
        import random
        rng = random.Random(args.seed)
        ring = TruncatedLocalRing(args.p, args.precision, 1)
        done = failures = 0
        while done < args.count:
            offset = rng.randint(-2, 2)
            g = Mat.from_ints(
                ring,
                [[rng.randrange(args.p**args.precision) for _ in range(2)]
                 for _ in range(2)], offset=offset)
            det = g.det()
            if not (det.is_unit() or 0 < det.valuation() < 3):
                continue
            b, k = iwasawa_decompose(g)
            if not (b * k == g and b.rows[1][0].is_zero()
                    and k.det().is_unit()):
                failures += 1
            done += 1
        results = {"p": args.p, "precision": args.precision,
                   "count": done, "failures": failures, "seed": args.seed}
        return {"results": results, "verdicts": [
            verdict("every sample factors as triangular times integral",
                    "claim:iwasawa-exact-reconstruction", failures == 0),
        ]}
    if action == "ub-audit":
        rep = audit_ub_factorization(args.n, args.p, cap=args.cap)
        results = {"n": args.n, "p": args.p,
                   "group_order": rep["group_order"],
                   "product_set_size": rep["product_set_size"],
                   "covers": rep["covers"],
                   "counterexamples": [ser_mat(m)
                                       for m in rep["counterexamples"]]}
        if rep["covers"]:
            verdicts = [verdict(
                "residue-level product set covers the whole group",
                "claim:ub-residue-coverage", True)]
        else:
            verdicts = [verdict(
                "residue-level product set falls short of the group; "
                "counterexamples recorded",
                "claim:ub-residue-coverage-gap", True, documented=True,
                detail={"product_set_size": rep["product_set_size"],
                        "group_order": rep["group_order"]})]
        return {"results": results, "verdicts": verdicts}
    if action == "self-norm":
        rep = audit_self_normalizing(args.n, args.p, cap=args.cap)
        results = {"n": args.n, "p": args.p,
                   "u_order": rep["u_order"],
                   "normalizer_order": rep["normalizer_order"],
                   "self_normalizing": rep["self_normalizing"]}
        documented = not rep["self_normalizing"]
        return {"results": results, "verdicts": [
            verdict("normalizer computed exhaustively",
                    "claim:self-normalizer-audit", True,
                    documented=documented,
                    detail={"self_normalizing": rep["self_normalizing"]}),
        ]}
    raise InvalidConfig(f"unknown building action {action!r}")


def cmd_satake(args):
    from .hecke import (HeckeElement, satake_by_coset_count,
                        satake_transform)
    lam = _parse_int_vector(args.lam, args.n)
    f = HeckeElement.basis(lam, args.p)
    img = satake_transform(f, enable_rank3=args.enable_gl3)
    oracle = satake_by_coset_count(f)
    results = {"n": args.n, "p": args.p, "lam": list(lam),
               "image": ser_image(img), "oracle": ser_image(oracle)}
    return {"results": results, "verdicts": [
        verdict("integral transform agrees with the coset-count oracle",
                "claim:satake-oracle-agreement", img == oracle),
        verdict("image is symmetric under coordinate permutations",
                "claim:satake-weyl-invariance", img.weyl_invariant()),
    ]}


def cmd_hecke(args):
    from .hecke import HeckeElement, convolve
    lam = _parse_int_vector(args.left, args.n)
    mu = _parse_int_vector(args.right, args.n)
    f = HeckeElement.basis(lam, args.p)
    g = HeckeElement.basis(mu, args.p)
    fg = convolve(f, g)
    gf = convolve(g, f)
    results = {"n": args.n, "p": args.p, "left": list(lam),
               "right": list(mu), "product": ser_hecke(fg)}
    return {"results": results, "verdicts": [
        verdict("convolution is commutative on these basis elements",
                "claim:hecke-commutativity", fg == gf),
    ]}


def cmd_lfactor(args):
    import sympy

    from .lfactor import (X, DualRep, SatakeParameter, base_change_factor,
                          l_factor, rankin_selberg)
    mode = args.mode
    if mode == "rankin":
        t1 = SatakeParameter(_parse_symbols(args.left), args.q)
        t2 = SatakeParameter(_parse_symbols(args.right), args.q)
        fac = rankin_selberg(t1, t2)
        expect_deg = t1.n * t2.n
    else:
        rho = _parse_rep(args.rep)
        t = SatakeParameter(_parse_symbols(args.params), args.q)
        if mode == "bc":
            fac = base_change_factor(rho, t, args.d)
        else:
            fac = l_factor(rho, t)
        expect_deg = rho.dimension(t.n)
        if mode == "bc":
            expect_deg *= args.d
    poly = sympy.Poly(fac.denominator, X)
    results = {"q": args.q, "mode": mode,
               "denominator": str(fac.denominator),
               "num": "1",
               "den": {str(m[0]): str(c) for m, c in
                       zip(poly.monoms(), poly.coeffs())},
               "degree": fac.degree()}
    return {"results": results, "verdicts": [
        verdict("denominator degree equals the representation dimension",
                "claim:lfactor-degree", fac.degree() == expect_deg),
        verdict("denominator has constant term one",
                "claim:lfactor-constant-term",
                fac.denominator.subs(X, 0) == 1),
    ]}


# ---------------------------------------------------------------------------
# the audit suite

def suite_paper_audit(cap, seed):
    """Run the ten acceptance checks and assemble a scorecard.

    Documented findings (the residue-level product-set gap) are a third
    verdict state; they do not fail the suite.
    """
    import math
    from fractions import Fraction

    verdicts = []

    # 1: rank-2 triple-bond factorization
    from .roots import (cartan_matrix, check_root_system, ds_decompose,
                        full_root_set_gl, simple_roots_gl, weyl_group)
    simple = [list(r) for r in G2_SIMPLE]
    a = cartan_matrix(simple)
    dec, minors = ds_decompose(simple)
    verdicts.append(verdict(
        "triple-bond Cartan matrix factors with positive leading minors "
        "2/3 and 1/3", "claim:g2-cartan-factorization",
        tuple(tuple(r) for r in a.entries) == ((2, -3), (-1, 2))
        and dec.D == (3, 1)
        and dec.S == ((Fraction(2, 3), -1), (-1, 2))
        and list(minors) == [Fraction(2, 3), Fraction(1, 3)]))

    # 2: root axioms and Weyl orders for small ranks
    ok2 = True
    for n in range(2, 7):
        checks = check_root_system(full_root_set_gl(n))
        ok2 &= (checks["reduced"] and checks["reflection_closed"]
                and checks["crystallographic"] and checks["primed_agree"])
        ok2 &= len(weyl_group(simple_roots_gl(n), cap=cap)) \
            == math.factorial(n)
    verdicts.append(verdict(
        "type-A root sets satisfy the axioms and give factorial Weyl "
        "orders", "claim:root-axioms", ok2))

    # 3: triviality of first cohomology
    from .lang import (dm_bijection_check, gl_module, h1_cyclic,
                       h1_level_tower, lang_image)
    from .rings import FiniteField
    ok3 = h1_cyclic(gl_module(FiniteField(2, 2), 1))["h1_size"] == 1
    ok3 &= h1_cyclic(gl_module(FiniteField(3, 2), 1))["h1_size"] == 1
    ok3 &= h1_cyclic(gl_module(FiniteField(2, 2), 2))["h1_size"] == 1
    tower1 = h1_level_tower(1, 2, 2, 2)
    tower2 = h1_level_tower(2, 2, 2, 2)
    ok3 &= all(l["h1_size"] == 1 for l in tower1["levels"] + tower2["levels"])
    verdicts.append(verdict(
        "first cohomology is trivial in every finite quotient tested",
        "claim:h1-triviality", ok3))

    # 4: image-size law for the rank-1 twisted map
    ok4 = True
    for p, d in [(2, 2), (3, 2), (2, 3)]:
        m = gl_module(FiniteField(p, d), 1)
        ok4 &= len(lang_image(m)) == (p**d - 1) // (p - 1)
    verdicts.append(verdict(
        "rank-1 image sizes follow the quotient-by-fixed-points law",
        "claim:lang-image-size", ok4))

    # 5: class-count bijection
    ok5 = True
    for s, q, n, expect in [(1, 2, 2, 1), (1, 3, 2, 2), (2, 2, 2, 3)]:
        rep = dm_bijection_check(s, q, n, cap=cap)
        ok5 &= rep["bijective"] and rep["plain_class_count"] == expect \
            and rep["twisted_class_count"] == expect
    verdicts.append(verdict(
        "plain and twisted class counts agree with explicit matchings",
        "claim:twisted-conjugacy-bijection", ok5))

    # 6: simplex counts and conjugated patterns
    from .building import (audit_ub_factorization, conjugate_pattern,
                           fundamental_simplices, iwasawa_decompose,
                           stabilizer_pattern)
    ok6 = (len(fundamental_simplices(2)) == 3
           and len(fundamental_simplices(3)) == 7
           and len(fundamental_simplices(5)) == 31)
    base = stabilizer_pattern((0,), 3)
    ok6 &= conjugate_pattern(base, (1, 0, 0)).entries \
        == ((0, 1, 1), (-1, 0, 0), (-1, 0, 0))
    ok6 &= conjugate_pattern(base, (0, 1, 0)).entries \
        == ((0, -1, 0), (1, 0, 1), (0, -1, 0))
    ok6 &= conjugate_pattern(base, (0, 0, 1)).entries \
        == ((0, 0, -1), (0, 0, -1), (1, 1, 0))
    verdicts.append(verdict(
        "simplex counts are 3, 7, 31 and diagonal conjugation shifts "
        "patterns as displayed", "claim:simplex-count", ok6))

    # 7: triangular-times-integral factorization, randomized + residue
    import random

    from .lang import gl_elements
    from .rings import Mat, TruncatedLocalRing
    rng = random.Random(seed)
    ring = TruncatedLocalRing(2, 6, 1)
    ok7 = True
    done = 0
    while done < 1000:
        offset = rng.randint(-2, 2)
        g = Mat.from_ints(ring, [[rng.randrange(64) for _ in range(2)]
                                 for _ in range(2)], offset=offset)
        det = g.det()
        if not (det.is_unit() or 0 < det.valuation() < 3):
            continue
        b, k = iwasawa_decompose(g)
        ok7 &= b * k == g and b.rows[1][0].is_zero() and k.det().is_unit()
        done += 1
    for p in (2, 3):
        rp = TruncatedLocalRing(p, 1, 1)
        fp = FiniteField(p, 1)
        for gf in gl_elements(fp, 2):
            g = Mat(rp, [[rp.element(c.coeffs) for c in row]
                         for row in gf.rows])
            b, k = iwasawa_decompose(g)
            ok7 &= b * k == g and b.rows[1][0].is_zero()
    verdicts.append(verdict(
        "random and exhaustive samples factor exactly as triangular "
        "times integral", "claim:iwasawa-exact-reconstruction", ok7))

    # 8: documented residue-level coverage gap
    rep = audit_ub_factorization(2, 2, cap=cap)
    from .rings import Mat as _Mat
    f2 = FiniteField(2, 1)
    swap = _Mat.from_ints(f2, [[0, 1], [1, 0]])
    found = (rep["product_set_size"] == 4 and rep["group_order"] == 6
             and not rep["covers"] and swap in rep["counterexamples"])
    verdicts.append(verdict(
        "residue-level product set covers 4 of 6 with the coordinate "
        "swap as counterexample", "claim:ub-residue-coverage-gap",
        found, documented=found,
        detail={"product_set_size": rep["product_set_size"],
                "group_order": rep["group_order"]}))

    # 9: transform values, homomorphism, and convolution identity
    from .hecke import (HeckeElement, SatakeImage, convolve,
                        satake_by_coset_count, satake_transform)
    ok9 = True
    for p in (2, 3):
        v1 = HalfPowerLaurent.v_power(p, 1)
        img = satake_transform(HeckeElement.basis((1, 0), p))
        ok9 &= img == SatakeImage(2, p, {(1, 0): v1, (0, 1): v1})
        ok9 &= satake_transform(HeckeElement.basis((1, 1), p)) \
            == SatakeImage(2, p, {(1, 1): 1})
        t10 = HeckeElement.basis((1, 0), p)
        square = convolve(t10, t10)
        expect = HeckeElement(2, p, {(2, 0): 1, (1, 1): p + 1})
        ok9 &= square == expect
        ok9 &= satake_transform(square, box_bound=2) == img * img
        doms = [lam for lam in
                [(a, b) for a in range(-2, 3) for b in range(-2, 3)]
                if lam[0] >= lam[1]]
        for i, lam in enumerate(doms):
            for mu in doms[i:]:
                f = HeckeElement.basis(lam, p)
                g = HeckeElement.basis(mu, p)
                bb = f.bound() + g.bound()
                lhs = satake_transform(convolve(f, g), box_bound=bb)
                rhs = satake_transform(f, box_bound=bb) \
                    * satake_transform(g, box_bound=bb)
                ok9 &= lhs == rhs and lhs.weyl_invariant()
        ok9 &= satake_by_coset_count(t10) == img
    verdicts.append(verdict(
        "transform values, homomorphism property, and the minuscule "
        "convolution identity all hold", "claim:satake-oracle-agreement",
        ok9))

    # 10: local factors
    import sympy

    from .hecke import chi_t
    from .lfactor import (X, DualRep, SatakeParameter,
                          conjugate_orbit_product, l_factor, rankin_selberg)
    al, be, ga, de = sympy.symbols("alpha beta gamma delta")
    ok10 = True
    t3 = SatakeParameter((al, be, ga), 3)
    for rho in [DualRep("standard"), DualRep("dual"), DualRep("sym", 2),
                DualRep("wedge", 2), DualRep("wedge", 3)]:
        ok10 &= l_factor(rho, t3).degree() == rho.dimension(3)
    for d in (2, 3):
        ok10 &= sympy.simplify(conjugate_orbit_product(al, d)
                               - (1 - al**d * X**d)) == 0
    rs = rankin_selberg(SatakeParameter((al, be), 2),
                        SatakeParameter((ga, de), 2))
    ok10 &= rs.degree() == 4
    for p in (2, 3):
        vsym = sympy.Symbol("v")
        character = chi_t(
            satake_transform(HeckeElement.basis((1, 0), p)), (al, be))
        den = l_factor(DualRep("standard"),
                       SatakeParameter((al, be), p)).denominator
        coeff_x = sympy.Poly(den, X).coeff_monomial((1,))
        ok10 &= sympy.expand(coeff_x + character / vsym) == 0
    verdicts.append(verdict(
        "degree, base-change, pairing, and character-linkage identities "
        "hold symbolically", "claim:lfactor-degree", ok10))

    return {"results": {"criteria": len(verdicts)}, "verdicts": verdicts}


def suite_full(cap, seed):
    """Paper-audit plus the randomized cross-checks."""
    base = suite_paper_audit(cap, seed)
    import random

    from .hecke import HeckeElement, satake_by_coset_count, satake_transform
    rng = random.Random(seed)
    ok = True
    for _ in range(5):
        p = rng.choice([2, 3])
        lam = tuple(sorted((rng.randint(-2, 2), rng.randint(-2, 2)),
                           reverse=True))
        f = HeckeElement.basis(lam, p)
        ok &= satake_transform(f) == satake_by_coset_count(f)
    base["verdicts"].append(verdict(
        "seeded random basis elements agree with the coset-count oracle",
        "claim:satake-oracle-agreement", ok))
    return base


def cmd_suite(args):
    if args.name == "paper-audit":
        return suite_paper_audit(args.cap, args.seed)
    if args.name == "full":
        return suite_full(args.cap, args.seed)
    raise InvalidConfig(f"unknown suite {args.name!r}")


# ---------------------------------------------------------------------------
# argument parsing

def _parse_int_vector(text, n):
    try:
        vec = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidConfig(f"not an integer vector: {text!r}")
    if len(vec) != n:
        raise InvalidConfig(f"expected {n} components, got {len(vec)}")
    if any(vec[i] < vec[i + 1] for i in range(n - 1)):
        raise InvalidConfig("vector must be weakly decreasing")
    return vec


def _parse_symbols(text):
    import sympy
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise InvalidConfig("empty parameter entry")
        if re.fullmatch(r"-?[0-9]+(/[0-9]+)?", tok):
            out.append(sympy.Rational(tok))
        elif re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok):
            out.append(sympy.Symbol(tok))
        else:
            raise InvalidConfig(f"bad parameter entry {tok!r}")
    return out


def _parse_rep(text):
    from .lfactor import DualRep
    m = re.fullmatch(r"(standard|dual|trivial)", text)
    if m:
        if text == "trivial":
            return DualRep.trivial()
        return DualRep(text)
    m = re.fullmatch(r"(sym|wedge)\((\d+)\)", text)
    if m:
        return DualRep(m.group(1), int(m.group(2)))
    raise InvalidConfig(f"unknown representation {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidConfig(message)


def build_parser():
    p = _Parser(prog="glnlab", description=__doc__)
    p.add_argument("--cap", type=int, default=DEFAULT_GROUP_CAP,
                   help="enumeration cap")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized property checks")
    p.add_argument("--json-out", help="also write the report to this path")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("roots")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("cartan")
    sp.add_argument("--n", type=int)
    sp.add_argument("--preset", choices=["g2"])
    sp.set_defaults(func=cmd_cartan)

    sp = sub.add_parser("lang")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.set_defaults(func=cmd_lang)

    sp = sub.add_parser("h1")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--level", type=int, default=1)
    sp.set_defaults(func=cmd_h1)

    sp = sub.add_parser("dm-check")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_dm_check)

    sp = sub.add_parser("building")
    sp.add_argument("action", choices=["simplices", "iwasawa", "ub-audit",
                                       "self-norm"])
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--precision", type=int, default=6)
    sp.set_defaults(func=cmd_building)

    sp = sub.add_parser("satake")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--lam", required=True,
                    help="comma-separated weakly decreasing vector")
    sp.add_argument("--enable-gl3", action="store_true")
    sp.set_defaults(func=cmd_satake)

    sp = sub.add_parser("hecke")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.set_defaults(func=cmd_hecke)

    sp = sub.add_parser("lfactor")
    sp.add_argument("mode", nargs="?", default="plain",
                    choices=["plain", "rankin", "bc"])
    sp.add_argument("--rep", default="standard")
    sp.add_argument("--params")
    sp.add_argument("--left")
    sp.add_argument("--right")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--q", type=int, required=True)
    sp.set_defaults(func=cmd_lfactor)

    sp = sub.add_parser("suite")
    sp.add_argument("name", choices=["paper-audit", "full"])
    sp.set_defaults(func=cmd_suite)

    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "lfactor":
            if args.mode == "rankin":
                if not (args.left and args.right):
                    raise InvalidConfig("rankin needs --left and --right")
            elif not args.params:
                raise InvalidConfig("lfactor needs --params")
        start = time.monotonic()
        body = args.func(args)
        elapsed_ms = int((time.monotonic() - start) * 1000)
        report = {
            "command": args.command,
            "config": {k: v for k, v in sorted(vars(args).items())
                       if k != "func" and v is not None},
            "version": __version__,
            "results": body["results"],
            "verdicts": body["verdicts"],
            "timing_ms": elapsed_ms,
        }
        emit(report, args.json_out)
        return exit_code(report)
    except InvalidConfig as exc:
        sys.stderr.write(f"invalid config: {exc}\n")
        return 2
    except CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return 3
    except GlnLabError as exc:
        sys.stderr.write(f"invariant failure: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
