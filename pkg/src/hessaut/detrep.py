"""The three Hessian determinantal representations of f_S and the Hessian equation.

Each representation is constructed twice -- once through the Hessian-matrix
formula and once from the closed-form entry table -- and the two are asserted
equal entrywise before anything downstream sees them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ff import FieldCtx, FieldElem, canonical_sqrt, univariate_roots
from .forms import (
    CubicForm,
    ExactElem,
    ExactRing,
    LinForm,
    LinFormMatrix,
    det_linform,
    dual,
    hessian_det,
    hessian_matrix,
)


class DetRepError(ValueError):
    pass


def _is_field_ctx(ring) -> bool:
    return isinstance(ring, FieldCtx)


def _inv(ring, x):
    return x.inv()


def build_fS(S: int, ring) -> CubicForm:
    """f_S = y1^3 - S*y1*y3^2 - S*y2^2*y3 over the given ring."""
    if S == 0:
        raise DetRepError("S must be nonzero")
    s = ring.from_int(S)
    if _is_field_ctx(ring) and s.is_zero():
        raise DetRepError(f"S = {S} vanishes in {ring}")
    return CubicForm(
        ring,
        {
            (3, 0, 0): ring.one(),
            (1, 0, 2): -s,
            (0, 2, 1): -s,
        },
    )


def _closed_form_B(i: int, S: int, sqrtS, ring) -> LinFormMatrix:
    z = ring.zero()
    one = ring.one()
    s = ring.from_int(S)
    if i == 1:
        rows = [
            [(z, z, one), (z, -one, z), (one, z, z)],
            [(z, -one, z), (-one, z, z), (z, z, z)],
            [(one, z, z), (z, z, z), (z, z, s)],
        ]
    else:
        r = sqrtS if i == 2 else -sqrtS
        three_over_r = ring.from_int(3) * r * _inv(ring, s)  # 3/sqrt(S) = 3*sqrt(S)/S
        rows = [
            [(three_over_r, z, one), (z, -one, z), (one, z, -r)],
            [(z, -one, z), (-one, z, -r), (z, -r, z)],
            [(one, z, -r), (z, -r, z), (-r, z, s)],
        ]
    entries = [[LinForm(ring, c) for c in row] for row in rows]
    return LinFormMatrix.from_entries(ring, entries).require_symmetric()


def _hessian_formula_B(i: int, S: int, sqrtS, ring) -> LinFormMatrix:
    fS = build_fS(S, ring)
    hes = hessian_det(fS)
    if i == 1:
        g = hes
    else:
        r = sqrtS if i == 2 else -sqrtS
        s_3_2 = ring.from_int(S) * r  # S^(3/2) with the chosen sign
        g = hes + fS.scale(ring.from_int(24) * s_3_2)
    scale = _inv(ring, ring.from_int(48 * S * S))
    return hessian_matrix(g).scale(scale)


@dataclass
class HessianRep:
    """One of the three determinantal representations B_{i,S}."""

    i: int
    S: int
    ring: object
    sqrtS: object  # fixed root used (None for i = 1 over the exact ring)
    B: LinFormMatrix = field(repr=False)

    @property
    def f(self) -> CubicForm:
        return build_fS(self.S, self.ring)


def build_B(i: int, S: int, sqrtS=None, ring=None) -> HessianRep:
    """Construct B_{i,S} over ``ring`` (default: the exact ring for S).

    ``sqrtS`` must square to S; it is required for i in {2, 3} and ignored for
    i = 1. The closed-form matrix and the Hessian-formula matrix are compared
    entrywise.
    """
    if i not in (1, 2, 3):
        raise DetRepError(f"representation index {i} not in {{1,2,3}}")
    if S == 0:
        raise DetRepError("S must be nonzero")
    if ring is None:
        ring = ExactRing(S)
    if _is_field_ctx(ring) and ring.from_int(S).is_zero():
        raise DetRepError(f"S = {S} vanishes in {ring}")

    if i == 1:
        root_used = sqrtS
    else:
        if sqrtS is None:
            if isinstance(ring, ExactRing):
                sqrtS = ring.sqrt_S()
            else:
                sqrtS = canonical_sqrt(ring.from_int(S))
                if sqrtS is None:
                    raise DetRepError(f"S = {S} has no square root in {ring}")
        if not (sqrtS * sqrtS == ring.from_int(S)):
            raise DetRepError("sqrtS does not square to S")
        root_used = sqrtS

    closed = _closed_form_B(i, S, sqrtS, ring)
    formula = _hessian_formula_B(i, S, sqrtS, ring)
    if not closed == formula:
        raise AssertionError(
            f"closed form and Hessian formula disagree for B_{{{i},{S}}}"
        )
    return HessianRep(i=i, S=S, ring=ring, sqrtS=root_used, B=closed)


@dataclass
class IdentityReport:
    checks: list  # (name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def verify_det_identities(rep: HessianRep) -> IdentityReport:
    """Exact pass/fail for det(B_{1,S}) = f_S, det(B_{2,3}) = 4 f_S, self-duality."""
    checks = []
    fS = rep.f
    det = det_linform(rep.B)
    target = fS if rep.i == 1 else fS.scale(rep.ring.from_int(4))
    diff = det - target
    name = "det = f_S" if rep.i == 1 else "det = 4*f_S"
    checks.append(
        (name, diff.is_zero(), "" if diff.is_zero() else f"differs at {diff.render()}")
    )
    dd = dual(rep.B)
    same = dd == rep.B
    checks.append(("self-dual", same, "" if same else "dual differs"))
    return IdentityReport(checks=checks)


# -- the Hessian equation ------------------------------------------------------


@dataclass
class HessianSolveResult:
    solutions: list  # [(alpha, beta)] in normalized order
    complete: bool
    message: str = ""


def _det_in_beta(f: CubicForm):
    """Coefficients c_0..c_3 (CubicForms) of det(beta*HM(f) + HM(Hes f)) in beta."""
    from itertools import permutations

    from .forms import _perm_sign, _triple_product_form

    ring = f.ring
    H0 = hessian_matrix(hessian_det(f)).entries()
    H1 = hessian_matrix(f).entries()
    acc = [dict(), dict(), dict(), dict()]
    for perm in permutations(range(3)):
        sign = _perm_sign(perm)
        picks = [(H0[r][perm[r]], H1[r][perm[r]]) for r in range(3)]
        for mask in range(8):
            deg = bin(mask).count("1")
            trio = [picks[r][1] if (mask >> r) & 1 else picks[r][0] for r in range(3)]
            if any(t.is_zero() for t in trio):
                continue
            term = _triple_product_form(ring, *trio)
            bucket = acc[deg]
            for e, v in term.items():
                v = v if sign > 0 else -v
                bucket[e] = bucket.get(e, ring.zero()) + v
    return [CubicForm(ring, d) for d in acc]


def _poly_eval(coeffs, x, ring):
    acc = ring.zero()
    xp = ring.one()
    for c in coeffs:
        acc = acc + c * xp
        xp = xp * x
    return acc


def _poly_gcd(a, b, ring):
    """Monic gcd of coefficient lists over a field-like ring (has .inv)."""

    def trim(p):
        while p and p[-1].is_zero():
            p.pop()
        return p

    a, b = trim(list(a)), trim(list(b))
    while b:
        # a mod b
        lead_inv = b[-1].inv()
        r = list(a)
        while len(r) >= len(b) and trim(r):
            shift = len(r) - len(b)
            factor = r[-1] * lead_inv
            for k in range(len(b)):
                r[shift + k] = r[shift + k] - factor * b[k]
            r.pop()
            trim(r)
        a, b = b, trim(r)
    if a:
        norm = a[-1].inv()
        a = [c * norm for c in a]
    return a


def _exact_sqrt(x: ExactElem):
    """Square root of a + b*s in Q[s]/(s^2-S), or None if absent."""
    from fractions import Fraction

    ring = x.ring
    S = ring.S

    def rat_sqrt(r: Fraction):
        if r < 0:
            return None
        num, den = r.numerator, r.denominator
        ns, ds = _isqrt_exact(num), _isqrt_exact(den)
        if ns is None or ds is None:
            return None
        return Fraction(ns, ds)

    a, b = x.a, x.b
    if b == 0:
        r = rat_sqrt(a)
        if r is not None:
            return ExactElem(ring, r)
        if S != 0 and a != 0:
            c2 = a / S
            c = rat_sqrt(c2)
            if c is not None:
                return ExactElem(ring, 0, c)
        return None
    disc = a * a - S * b * b
    rd = rat_sqrt(disc)
    if rd is None:
        return None
    for t in ((a + rd) / 2, (a - rd) / 2):
        c = rat_sqrt(t)
        if c is not None and c != 0:
            d = b / (2 * c)
            cand = ExactElem(ring, c, d)
            if cand * cand == x:
                return cand
    return None


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = int(n**0.5)
    for c in (r - 1, r, r + 1, r + 2):
        if c >= 0 and c * c == n:
            return c
    return None


def _beta_roots(gcd_poly, ring):
    """Roots in the ring of a polynomial of degree <= 3 (field-like ring)."""
    roots = []
    coeffs = list(gcd_poly)
    complete = True
    if isinstance(ring, FieldCtx):
        return univariate_roots(ring, coeffs), True
    # exact ring: peel off beta = 0, then quadratic formula
    if coeffs and coeffs[0].is_zero():
        roots.append(ring.zero())
        coeffs = coeffs[1:]
        while coeffs and coeffs[0].is_zero() and len(coeffs) > 1:
            coeffs = coeffs[1:]
    deg = len(coeffs) - 1
    if deg <= 0:
        return roots, complete
    if deg == 1:
        roots.append(-(coeffs[0] / coeffs[1]))
        return roots, complete
    if deg == 2:
        a2, a1, a0 = coeffs[2], coeffs[1], coeffs[0]
        disc = a1 * a1 - ring.from_int(4) * a2 * a0
        rd = _exact_sqrt(disc)
        if rd is None:
            return roots, False
        half = ring.from_int(2) * a2
        roots.append((-a1 + rd) / half)
        if not rd.is_zero():
            roots.append((-a1 - rd) / half)
        return roots, complete
    # irreducible cubic over the exact ring: out of desk scope
    return roots, False


def hessian_equation_solve(f: CubicForm, ring=None, sort_hint=None) -> HessianSolveResult:
    """All (alpha, beta) in the ring with alpha*f = Hes(beta*f + Hes(f)).

    The determinant is expanded as a cubic-form-valued polynomial in beta;
    proportionality to f pins beta to a cubic equation, and alpha follows from
    the pivot coefficient (y1^3 where available). Every returned pair is
    re-verified against the identity before being reported. Solutions come
    out as (0, fixed-root branch, negated branch); over a finite field the
    fixed branch is only known to the caller, so ``sort_hint`` may pass the
    beta value that should sort directly after 0.
    """
    if ring is None:
        ring = f.ring
    if f.is_zero():
        raise DetRepError("zero form")
    c = _det_in_beta(f)
    # pivot: y1^3 coefficient, else first nonzero in graded-lex order
    pivot = (3, 0, 0)
    if f.coeff(pivot).is_zero():
        from .forms import CUBIC_MONOMIALS

        pivot = next(e for e in CUBIC_MONOMIALS if not f.coeff(e).is_zero())
    fp = f.coeff(pivot)
    alpha_poly = [c[d].coeff(pivot) for d in range(4)]
    constraints = []
    from .forms import CUBIC_MONOMIALS

    for e in CUBIC_MONOMIALS:
        if e == pivot:
            continue
        poly = [c[d].coeff(e) * fp - c[d].coeff(pivot) * f.coeff(e) for d in range(4)]
        if any(not v.is_zero() for v in poly):
            constraints.append(poly)
    if not constraints:
        # det is globally proportional to f: degenerate input
        raise DetRepError("degenerate form: proportionality holds identically")
    g = constraints[0]
    for poly in constraints[1:]:
        g = _poly_gcd(g, poly, ring)
        if len(g) == 1:
            break
    if len(g) <= 1:
        return HessianSolveResult(
            solutions=[], complete=False, message="no common beta root (non-smooth input?)"
        )
    roots, complete = _beta_roots(g, ring)
    fp_inv = fp.inv()
    sols = []
    for beta in roots:
        alpha = _poly_eval(alpha_poly, beta, ring) * fp_inv
        # exact re-verification of alpha*f = Hes(beta*f + Hes(f))
        lhs = f.scale(alpha)
        rhs_parts = [c[d].scale(_power(beta, d, ring)) for d in range(4)]
        rhs = rhs_parts[0]
        for part in rhs_parts[1:]:
            rhs = rhs + part
        if not (lhs - rhs).is_zero():
            raise AssertionError("candidate solution failed exact verification")
        sols.append((alpha, beta))
    sols.sort(key=lambda ab: _beta_sort_key(ab[1], ring, sort_hint))
    complete = complete and len(sols) == 3
    msg = "" if complete else f"found {len(sols)} of 3 solutions in the ring"
    return HessianSolveResult(solutions=sols, complete=complete, message=msg)


def _power(x, d, ring):
    acc = ring.one()
    for _ in range(d):
        acc = acc * x
    return acc


def _beta_sort_key(beta, ring, hint=None):
    # 0 first, then the fixed-root branch, then its negative
    if beta.is_zero():
        return (0, 0, 0)
    if isinstance(ring, FieldCtx):
        if hint is not None:
            if beta == hint:
                return (1, 0, 0)
            if beta == -hint:
                return (1, 1, 0)
        return (1, 2, beta.index())
    return (1, 2, (-beta.b, -beta.a))
