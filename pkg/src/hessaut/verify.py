"""Acceptance suites: every claim the package certifies, as runnable checks.

Each criterion is one :class:`Check` produced by an independent computation
(enumeration, exhaustive scan, exact expansion) against the closed formulas.
The CLI `verify` subcommand, the service endpoint and the pytest acceptance
module all run these same functions.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from . import aut as aut_mod
from . import iso as iso_mod
from .algebra import AlgebraData, Elem, enumerate_abelian_3dim_in_V
from .curve import (
    CurvePoint,
    O,
    curve,
    enumerate_points,
    flex_points,
    fourth_root,
    scalar_mul,
    three_torsion_points,
    three_torsion_via_quartic,
    torsion_count,
    torsion_set_bijections,
    two_torsion_points,
)
from .detrep import build_B, build_fS, hessian_equation_solve, verify_det_identities
from .ff import make_field, fourth_roots_of_unity, canonical_sqrt
from .forms import ExactRing, dual, det_linform, hessian_det, hessian_matrix, rank_profile
from .scan import classify_primes, pofs_partition, sieve_primes, torsion3_count_fast


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _timed(fn):
    def wrapper(*a, **kw):
        t0 = time.time()
        check = fn(*a, **kw)
        check.seconds = round(time.time() - t0, 3)
        return check

    return wrapper


def _criterion_grid(p_values=(5, 7)):
    """The (i, S, p) grid of the core oracle criterion: sqrt(S) must exist."""
    grid = []
    for p in p_values:
        for S in (1, 2, 3, 5):
            if (2 * S) % p == 0 or pow(S, (p - 1) // 2, p) != 1:
                continue
            for i in (1, 2, 3):
                grid.append((i, S, p))
    return grid


# -- criterion 1: formula vs oracle ---------------------------------------------


@_timed
def check_formula_oracle_equality(extended: bool = False) -> Check:
    lines = []
    ok = True
    for (i, S, p) in _criterion_grid():
        ctx = make_field(p)
        rep = build_B(i, S, ring=ctx)
        res = aut_mod.enumerate_autVeq(rep, ctx)
        order = aut_mod.lie_aut_order_formula(i, S, ctx)
        expect_count = (p - 1) * order.gcd_factor * order.torsion
        agree = (
            res.size == expect_count
            and aut_mod.aut_order_from_oracle(rep, ctx, res) == order.exact
        )
        ok &= agree
        lines.append(f"(i={i},S={S},p={p}): autVeq={res.size} expect={expect_count} {'ok' if agree else 'FAIL'}")
    if extended:
        ctx = make_field(11)
        rep = build_B(1, 1, ring=ctx)
        res = aut_mod.enumerate_autVeq(rep, ctx)
        agree = res.size == 60 and aut_mod.aut_order_from_oracle(rep, ctx, res) == aut_mod.lie_aut_order_formula(1, 1, ctx).exact
        ok &= agree
        lines.append(f"(i=1,S=1,p=11): autVeq={res.size} expect=60 {'ok' if agree else 'FAIL'}")
    return Check("formula equals brute-force oracle on the (i,S,p) grid", ok, "; ".join(lines))


# -- criterion 2: torsion triple agreement ---------------------------------------


@_timed
def check_torsion_triple_agreement(p_max: int = 200) -> Check:
    bad = []
    n = 0
    for p in sieve_primes(p_max - 1):
        if p < 5:
            continue
        ctx = make_field(p)
        for S in (1, 2, 3, 5):
            if (2 * S) % p == 0:
                continue
            E = curve(ctx, S)
            n += 1
            a = torsion_count(E, 3)
            b = three_torsion_via_quartic(E)
            c = len(flex_points(E))
            if not (a == b == c):
                bad.append((p, S, a, b, c))
    return Check(
        "3-torsion enumeration = quartic count = flex count (p < 200, S in {1,2,3,5})",
        not bad,
        f"{n} curves checked" + (f"; mismatches {bad}" if bad else ""),
    )


# -- criterion 3: the three-case torsion formula for S = 1 -----------------------


@_timed
def check_torsion_case_formula(p_max: int = 500) -> Check:
    from .scan import reference_system_solvable

    bad = []
    for p in sieve_primes(p_max - 1):
        if p < 5:
            continue
        e = torsion3_count_fast(p, 1)
        if p % 12 == 1 and reference_system_solvable(p):
            expect = 9
        elif p % 12 == 11:
            expect = 3
        else:
            expect = 1
        if e != expect:
            bad.append((p, e, expect))
    return Check(
        "S = 1 torsion count matches the three-case formula (p < 500)",
        not bad,
        f"bad: {bad}" if bad else "all primes match",
    )


# -- criterion 4: torsion distribution constraints --------------------------------


@_timed
def check_torsion_distribution(p_max: int = 1000) -> Check:
    bad = []
    for S in (1, 2, 3, 5):
        for p in sieve_primes(p_max - 1):
            if p < 5 or (2 * S) % p == 0:
                continue
            e = torsion3_count_fast(p, S)
            if e not in (1, 3, 9):
                bad.append((p, S, e, "e outside {1,3,9}"))
            if e == 3 and p % 12 != 11:
                bad.append((p, S, e, "e=3 but p != -1 mod 12"))
            if e != 1 and p % 12 not in (1, 11):
                bad.append((p, S, e, "e!=1 but p != +-1 mod 12"))
            if p % 12 == 1 and e == 3:
                bad.append((p, S, e, "p=1 mod 12 but e=3"))
    return Check(
        "torsion distribution constraints (p < 1000, S in {1,2,3,5})",
        not bad,
        f"violations: {bad}" if bad else "zero violations",
    )


# -- criterion 5: exact determinantal identities -----------------------------------


@_timed
def check_exact_identities() -> Check:
    lines = []
    ok = True
    for S in range(1, 11):
        ring = ExactRing(S)
        for i in (1, 2, 3):
            rep = build_B(i, S, ring=ring)
            rpt = verify_det_identities(rep)
            if not rpt.ok:
                ok = False
                lines.append(f"S={S} i={i}: {rpt.checks}")
        fS = build_fS(S, ring)
        res = hessian_equation_solve(fS)
        expect_alpha0 = ring.from_int((48 * S * S) ** 3)
        expect_alpha = ring.from_int(4 * (48 * S * S) ** 3)
        expect_beta = ring.from_int(24 * S) * ring.sqrt_S()
        good = (
            res.complete
            and len(res.solutions) == 3
            and res.solutions[0] == (expect_alpha0, ring.zero())
            and res.solutions[1] == (expect_alpha, expect_beta)
            and res.solutions[2] == (expect_alpha, -expect_beta)
        )
        if not good:
            ok = False
            lines.append(f"S={S}: hessian equation solutions {res.solutions}")
    return Check(
        "exact det identities and Hessian-equation solutions (S = 1..10)",
        ok,
        "; ".join(lines) if lines else "all exact",
    )


# -- criterion 6: rank and centralizer profiles -------------------------------------


@_timed
def check_rank_profiles(p_values=(5, 7, 11)) -> Check:
    bad = []
    for p in p_values:
        ctx = make_field(p)
        for i in (1, 2, 3):
            rep = build_B(i, 1, ring=ctx)
            prof = rank_profile(rep.B, ctx)
            if not prof.ok:
                bad.append((p, i, prof.violations[:3]))
    return Check(
        "rank profile 0/2/3 on full F_p^3 scans (p in {5,7,11}, all i)",
        not bad,
        f"violations: {bad}" if bad else "zero violations",
    )


@_timed
def check_centralizer_profiles(p_values=(5, 7, 11)) -> Check:
    bad = []
    for p in p_values:
        ctx = make_field(p)
        z = ctx.zero()
        for i in (1, 2, 3):
            rep = build_B(i, 1, ring=ctx)
            alg = AlgebraData.from_rep(rep)
            detB = det_linform(rep.B)
            for i1 in range(p):
                for i2 in range(p):
                    for i3 in range(p):
                        u = (ctx.from_index(i1), ctx.from_index(i2), ctx.from_index(i3))
                        d = alg.centralizer_dim(Elem(u, (z, z, z), (z, z, z)))
                        zero = i1 == i2 == i3 == 0
                        expect = 6 if zero else (4 if detB.evaluate(u).is_zero() else 3)
                        if d != expect:
                            bad.append((p, i, (i1, i2, i3), d, expect))
    return Check(
        "centralizer dimensions 6/4/3 on full F_p^3 scans (p in {5,7,11}, all i)",
        not bad,
        f"violations: {bad[:5]}" if bad else "zero violations",
    )


# -- criterion 7: presentation and group laws ----------------------------------------


@_timed
def check_presentation_and_group_laws(
    p_values=(5, 7, 11), n_pow: int = 10_000, n_heis: int = 1_000
) -> Check:
    problems = []
    for p in p_values:
        ctx = make_field(p)
        rep = build_B(1, 1, ring=ctx)
        alg = AlgebraData.from_rep(rep)
        e = [alg.basis_e(k) for k in range(3)]
        f = [alg.basis_f(k) for k in range(3)]
        g = [alg.basis_g(k) for k in range(3)]
        br = alg.bracket
        zero = alg.zero_elem()
        relations = [
            br(e[0], f[0]) == g[2],
            br(e[2], f[2]) == g[2],
            br(e[0], f[1]) == alg.group_inv(g[1]),
            br(e[1], f[0]) == alg.group_inv(g[1]),
            br(e[0], f[2]) == g[0],
            br(e[1], f[1]) == alg.group_inv(g[0]),
            br(e[2], f[0]) == g[0],
            br(e[1], f[2]) == zero,
            br(e[2], f[1]) == zero,
        ]
        abelian = all(
            br(a, b) == zero for a in e for b in e
        ) and all(br(a, b) == zero for a in f for b in f)
        if not (all(relations) and abelian):
            problems.append(f"p={p}: presentation relations fail")
        rng = random.Random(p)
        for _ in range(n_pow):
            a = alg.random_elem(rng)
            if alg.group_pow(a, p) != zero:
                problems.append(f"p={p}: element of order != p found")
                break
        if not alg.heisenberg_cross_check(n_pairs=n_heis, seed=p):
            problems.append(f"p={p}: Heisenberg picture disagrees with the group law")
        # commutator = bracket, inverse, pow consistency spot checks
        a, b = alg.random_elem(rng), alg.random_elem(rng)
        if alg.group_comm(a, b) != alg.bracket(a, b):
            problems.append(f"p={p}: commutator != bracket")
        if alg.group_mul(a, alg.group_inv(a)) != zero:
            problems.append(f"p={p}: inverse law fails")
    return Check(
        "presentation relations, exponent p, Heisenberg picture (p in {5,7,11})",
        not problems,
        "; ".join(problems) if problems else f"{n_pow} powers and {n_heis} pairs per prime",
    )


# -- criterion 8: abelian subalgebra classification -----------------------------------


@_timed
def check_abelian_classification() -> Check:
    ctx = make_field(5)
    lines = []
    ok = True
    for i in (1, 2, 3):
        rep = build_B(i, 1, ring=ctx)
        alg = AlgebraData.from_rep(rep)
        subs = enumerate_abelian_3dim_in_V(alg)
        params = sorted(
            (a.index(), c.index()) for a, c in (s.gl2_param for s in subs)
        )
        good = len(subs) == ctx.q + 1
        ok &= good
        lines.append(f"i={i}: {len(subs)} subspaces")
        if not good:
            lines.append(f"params {params}")
    return Check(
        "abelian 3-dim subalgebras of V are exactly the q+1 pencil (p=5, all i)",
        ok,
        "; ".join(lines),
    )


# -- criterion 9: lift suite ------------------------------------------------------------


@_timed
def check_lift_suite(extended: bool = False) -> Check:
    problems = []
    detail = []
    for (i, S, p) in _criterion_grid():
        ctx = make_field(p)
        rep = build_B(i, S, ring=ctx)
        E = curve(ctx, S)
        # isogeny lifts exist exactly for omega^(4/i ceil) = 1
        m = aut_mod.ceil_4_over_i(i)
        for w in fourth_roots_of_unity(ctx):
            lift = aut_mod.lift_isogeny(w, rep)
            if (lift is not None) != (w**m == ctx.one()):
                problems.append(f"(i={i},S={S},p={p}): isogeny lift existence wrong at w={w}")
        # translation lifts for every nontrivial rational 3-torsion point
        for Q in three_torsion_points(E):
            if Q.infinity:
                continue
            A = aut_mod.lift_translation(Q, rep, E)
            dq, dw = aut_mod.cbar_decompose(A, rep, E)
            if dq != Q or dw != ctx.one():
                problems.append(f"(i={i},S={S},p={p}): translation lift decomposes to ({dq},{dw})")
        # image of the decomposition map: size, closure, no 2-torsion translations
        res = aut_mod.enumerate_autVeq(rep, ctx)
        img = aut_mod.image_of_cbar(rep, ctx, res)
        e = torsion_count(E, 3)
        expect = math.gcd(p - 1, m) * e
        if img.size != expect or res.size != (p - 1) * expect:
            problems.append(f"(i={i},S={S},p={p}): image size {img.size} != {expect}")
        if not aut_mod.image_closed_under_composition(img):
            problems.append(f"(i={i},S={S},p={p}): image not closed under composition")
        two_tor = {pt for pt in two_torsion_points(E) if not pt.infinity}
        for a in img.elements:
            if a.Q in two_tor:
                problems.append(f"(i={i},S={S},p={p}): 2-torsion translation in image")
            if not scalar_mul(E, 3, a.Q).infinity:
                problems.append(f"(i={i},S={S},p={p}): image translation not 3-torsion")
        detail.append(f"(i={i},S={S},p={p}):|im|={img.size}")
    # nontrivial 3-torsion exercise of the translation lift (e = 3 primes)
    for p in (11, 23):
        ctx = make_field(p)
        E = curve(ctx, 1)
        for i in (1, 2, 3):
            rep = build_B(i, 1, ring=ctx)
            for Q in three_torsion_points(E):
                if Q.infinity:
                    continue
                A = aut_mod.lift_translation(Q, rep, E)
                dq, dw = aut_mod.cbar_decompose(A, rep, E)
                if dq != Q or dw != ctx.one():
                    problems.append(f"(i={i},S=1,p={p}): translation lift broken at {Q}")
    if extended:
        ctx = make_field(11)
        rep = build_B(1, 1, ring=ctx)
        res = aut_mod.enumerate_autVeq(rep, ctx)
        img = aut_mod.image_of_cbar(rep, ctx, res)
        if img.size != 6:
            problems.append(f"(1,1,11): image size {img.size} != 6")
        detail.append(f"(1,1,11):|im|={img.size}")
    return Check(
        "lift suite: isogeny/translation lifts, image of the curve action",
        not problems,
        "; ".join(problems) if problems else " ".join(detail),
    )


# -- criterion 10: isomorphism grid --------------------------------------------------------


def iso_grid_sides(p: int):
    sides = []
    for S in (1, 2, 4):
        if pow(S, (p - 1) // 2, p) != 1:
            continue
        sides.append(iso_mod.IsoSide(1, S, +1))
        for i in (2, 3):
            for sg in (+1, -1):
                sides.append(iso_mod.IsoSide(i, S, sg))
    return sides


@_timed
def check_iso_grid(p_values=(5, 7)) -> Check:
    """Criterion as specified: the closed classifier must agree with the
    exhaustive oracle on the whole grid. Disagreements are reported with the
    oracle's verdict (the oracle, backed by a bracket-checked witness, wins).
    """
    import itertools

    disagreements = []
    n = 0
    witness_failures = []
    for p in p_values:
        ctx = make_field(p)
        sides = iso_grid_sides(p)
        for a, b in itertools.product(sides, sides):
            n += 1
            q = iso_mod.IsoQuery(a, b, ctx)
            verdict = iso_mod.iso_classify(q, with_witness=False)
            orc = iso_mod.iso_oracle(q)
            oracle_iso = orc.witness is not None
            if verdict.isomorphic != oracle_iso:
                disagreements.append(
                    f"p={p} ({a.i},{a.S},{a.sign:+d})->({b.i},{b.S},{b.sign:+d}): "
                    f"classifier={verdict.isomorphic} oracle={oracle_iso}(count {orc.count})"
                )
            if verdict.isomorphic:
                w = iso_mod.iso_witness_explicit(q)
                if w is None:
                    witness_failures.append((p, a, b))
    notable = _check_notable_23_pattern()
    passed = not disagreements and not witness_failures and notable == ""
    detail = f"{n} ordered cells"
    if disagreements:
        detail += f"; classifier/oracle disagreements ({len(disagreements)}): " + " | ".join(
            disagreements[:6]
        ) + (" ..." if len(disagreements) > 6 else "")
    if witness_failures:
        detail += f"; witness failures: {witness_failures}"
    if notable:
        detail += "; " + notable
    return Check("isomorphism classifier agrees with exhaustive oracle on the grid", passed, detail)


def _check_notable_23_pattern() -> str:
    """(2 <-> 3, same root) isomorphic at p = 5, 13; non-isomorphic at p = 7, 11."""
    out = []
    for p, expect in ((5, True), (13, True), (7, False), (11, False)):
        ctx = make_field(p)
        q = iso_mod.IsoQuery(iso_mod.IsoSide(2, 1, +1), iso_mod.IsoSide(3, 1, +1), ctx)
        got = iso_mod.iso_classify(q, with_witness=False).isomorphic
        if got != expect:
            out.append(f"2<->3 same root at p={p}: {got} != {expect}")
    return "; ".join(out)


@_timed
def check_iso_grid_observed(p_values=(5, 7)) -> Check:
    """The oracle-backed variant: the fourth-power-twist classifier must match
    the oracle everywhere, every positive verdict carrying a checked witness."""
    import itertools

    bad = []
    n = 0
    for p in p_values:
        ctx = make_field(p)
        sides = iso_grid_sides(p)
        for a, b in itertools.product(sides, sides):
            n += 1
            q = iso_mod.IsoQuery(a, b, ctx)
            verdict = iso_mod.iso_classify_observed(q)  # with witness
            orc = iso_mod.iso_oracle(q)
            if verdict.isomorphic != (orc.witness is not None):
                bad.append((p, a, b, verdict.isomorphic, orc.count))
    return Check(
        "fourth-power-twist classifier agrees with exhaustive oracle on the grid",
        not bad,
        f"{n} ordered cells" + (f"; mismatches {bad[:4]}" if bad else ""),
    )


# -- criterion 11: descendants formula ----------------------------------------------------


@_timed
def check_descendants() -> Check:
    problems = []
    spots = {5: 12, 7: 34, 11: 30}
    for p, expect in spots.items():
        got = aut_mod.descendants_n11(p)
        if got != expect:
            problems.append(f"n11({p}) = {got} != {expect}")
    res = classify_primes(1, 1000)
    for rec in res.records:
        if rec.n11 is None or rec.n11 <= 0:
            problems.append(f"n11({rec.p}) not a positive integer")
    return Check(
        "descendants count: integral, positive (p < 1000), spot values 12/34/30",
        not problems,
        "; ".join(problems) if problems else f"{len(res.records)} primes",
    )


# -- criterion 12: POFS witness -------------------------------------------------------------


@_timed
def check_pofs_witness() -> Check:
    problems = []
    r1 = pofs_partition(1, 1000, i=1)
    if len(r1.sets) != 4 or not r1.all_fit or not r1.every_prime_covered:
        problems.append(f"i=1: {len(r1.sets)} sets, fit={r1.all_fit}")
    for i in (2, 3):
        r = pofs_partition(1, 1000, i=i)
        if len(r.sets) != 3 or not r.all_fit or not r.every_prime_covered:
            problems.append(f"i={i}: {len(r.sets)} sets, fit={r.all_fit}")
    return Check(
        "POFS partition for S = 1: 4 sets (i=1), 3 sets (i=2,3), all polynomials fit",
        not problems,
        "; ".join(problems) if problems else "partition verified below 1000",
    )


# -- extra structural checks used by the suites ----------------------------------------------


@_timed
def check_self_duality_and_locus() -> Check:
    problems = []
    for S in (1, 2, 3, 5):
        ring = ExactRing(S)
        for i in (1, 2, 3):
            rep = build_B(i, S, ring=ring)
            if not dual(rep.B) == rep.B:
                problems.append(f"dual(B_{{{i},{S}}}) != B")
    # degeneracy locus matches the projective curve point set over small fields
    for p in (5, 7):
        ctx = make_field(p)
        for S in (1, 2):
            if (2 * S) % p == 0 or pow(S, (p - 1) // 2, p) != 1:
                continue
            E = curve(ctx, S)
            curve_pts = {tuple(x.index() for x in _proj_norm(ctx, v)) for v in (
                _pvec(E, P) for P in enumerate_points(E)
            )}
            fS = build_fS(S, ctx)
            locus_pts = set()
            for i1 in range(p):
                for i2 in range(p):
                    for i3 in range(p):
                        if i1 == i2 == i3 == 0:
                            continue
                        u = (ctx.from_index(i1), ctx.from_index(i2), ctx.from_index(i3))
                        if fS.evaluate(u).is_zero():
                            locus_pts.add(tuple(x.index() for x in _proj_norm(ctx, u)))
            if curve_pts != locus_pts:
                problems.append(f"p={p},S={S}: locus != curve ({len(locus_pts)} vs {len(curve_pts)})")
    return Check(
        "self-duality and degeneracy locus = projective curve",
        not problems,
        "; ".join(problems) if problems else "checked S in {1,2,3,5} exact, loci at p in {5,7}",
    )


def _pvec(E, P):
    from .curve import projective_vector

    return projective_vector(E, P)


def _proj_norm(ctx, v):
    for x in v:
        if not x.is_zero():
            inv = x.inv()
            return tuple(inv * y for y in v)
    raise ValueError("zero vector")


@_timed
def check_two_torsion_and_bijections() -> Check:
    problems = []
    for p in sieve_primes(499):
        if p < 5:
            continue
        ctx = make_field(p)
        for S in (1, 2, 3, 5):
            if (2 * S) % p == 0:
                continue
            E = curve(ctx, S)
            if E.sqrtS is not None and torsion_count(E, 2) != 4:
                problems.append(f"p={p},S={S}: |E[2]| != 4 despite sqrt(S)")
            if p < 100 and E.sqrtS is None and torsion_count(E, 2) != 2:
                problems.append(f"p={p},S={S}: |E[2]| != 2 without sqrt(S)")
            if fourth_root(ctx, E.S) is not None:
                sizes = torsion_set_bijections(E)
                e = torsion3_count_fast(p, S)
                if not (sizes.s0 == sizes.s1 == sizes.s1S == e - 1):
                    problems.append(f"p={p},S={S}: bijection sizes {sizes} vs e={e}")
    return Check(
        "2-torsion counts and torsion-set bijections (p < 500)",
        not problems,
        "; ".join(problems[:5]) if problems else "all cardinalities agree",
    )


# -- suite registry ----------------------------------------------------------------------------


def run_suite(name: str, extended: bool = False) -> SuiteResult:
    makers = {
        "forms": lambda: [
            check_rank_profiles(),
            check_self_duality_and_locus(),
        ],
        "curve": lambda: [
            check_torsion_triple_agreement(),
            check_torsion_case_formula(),
            check_torsion_distribution(),
            check_two_torsion_and_bijections(),
        ],
        "detrep": lambda: [
            check_exact_identities(),
        ],
        "algebra": lambda: [
            check_presentation_and_group_laws(),
            check_centralizer_profiles(),
            check_abelian_classification(),
        ],
        "aut": lambda: [
            check_formula_oracle_equality(extended),
            check_lift_suite(extended),
            check_descendants(),
            check_pofs_witness(),
        ],
        "iso": lambda: [
            check_iso_grid(),
            check_iso_grid_observed(),
        ],
    }
    if name not in makers:
        raise ValueError(f"unknown suite {name!r}; pick from {sorted(makers)} or 'all'")
    return SuiteResult(suite=name, checks=makers[name]())


SUITE_NAMES = ("forms", "curve", "detrep", "algebra", "aut", "iso")


def run_suites(name: str = "all", extended: bool = False) -> list[SuiteResult]:
    names = SUITE_NAMES if name == "all" else (name,)
    return [run_suite(n, extended) for n in names]
