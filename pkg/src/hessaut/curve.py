"""Arithmetic of the curves E_S: y^2 = x^3 - (1/S) x over finite fields.

The projective model is x^3 - S x z^2 - S y^2 z = 0 with the affine embedding
(x, y) -> (x : y : 1/S) and point at infinity O = (0 : 1 : 0). All torsion
counting here is by honest enumeration at desk scale; the quartic and flex
routes exist as independent cross-checks of each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ff import FieldCtx, FieldElem, canonical_sqrt, fourth_roots_of_unity, sqrt


class CurveError(ValueError):
    pass


class CurvePoint:
    """Affine point (x, y) or the point at infinity O."""

    __slots__ = ("x", "y", "infinity")

    def __init__(self, x: Optional[FieldElem] = None, y: Optional[FieldElem] = None):
        self.infinity = x is None
        self.x = x
        self.y = y

    @classmethod
    def at_infinity(cls) -> "CurvePoint":
        return cls()

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity and other.infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.infinity:
            return hash("O")
        return hash((self.x, self.y))

    def __repr__(self):
        return "O" if self.infinity else f"({self.x},{self.y})"


O = CurvePoint.at_infinity()


@dataclass(frozen=True)
class Curve:
    """E_S over a fixed field context; S must be a unit (p does not divide 2S)."""

    ctx: FieldCtx
    S: FieldElem
    S_int: int
    S_inv: FieldElem
    sqrtS: Optional[FieldElem]  # fixed root, present iff S is a square in ctx

    def __repr__(self):
        return f"E_{self.S_int}({self.ctx!r})"


def curve(ctx: FieldCtx, S: int) -> Curve:
    s = ctx.from_int(S)
    if s.is_zero():
        raise CurveError(f"S = {S} vanishes in {ctx} (p divides S)")
    return Curve(ctx=ctx, S=s, S_int=S, S_inv=s.inv(), sqrtS=canonical_sqrt(s))


def on_curve(E: Curve, P: CurvePoint) -> bool:
    if P.infinity:
        return True
    return P.y * P.y == P.x * P.x * P.x - E.S_inv * P.x


def neg(E: Curve, P: CurvePoint) -> CurvePoint:
    if P.infinity:
        return P
    return CurvePoint(P.x, -P.y)


def add(E: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-tangent group law with identity O."""
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:  # includes the 2-torsion case y = 0
            return O
        # doubling
        num = E.ctx.from_int(3) * P.x * P.x - E.S_inv
        lam = num * (E.ctx.from_int(2) * P.y).inv()
    else:
        lam = (Q.y - P.y) * (Q.x - P.x).inv()
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return CurvePoint(x3, y3)


def scalar_mul(E: Curve, n: int, P: CurvePoint) -> CurvePoint:
    if n < 0:
        return scalar_mul(E, -n, neg(E, P))
    R = O
    Q = P
    while n:
        if n & 1:
            R = add(E, R, Q)
        Q = add(E, Q, Q)
        n >>= 1
    return R


def enumerate_points(E: Curve) -> list[CurvePoint]:
    """All rational points including O, by an x-scan with per-x square roots."""
    ctx = E.ctx
    if ctx.q > 10**4:
        raise CurveError(f"q = {ctx.q} too large for enumeration")
    pts = [O]
    for i in range(ctx.q):
        x = ctx.from_index(i)
        rhs = x * x * x - E.S_inv * x
        rr = sqrt(rhs)
        if rr is None:
            continue
        r, rneg = rr
        pts.append(CurvePoint(x, r))
        if r != rneg:
            pts.append(CurvePoint(x, rneg))
    return pts


def torsion_count(E: Curve, n: int) -> int:
    """|{P in E(F_q) : nP = O}| by enumeration; n in {2, 3} at desk scale."""
    if n not in (2, 3):
        raise CurveError("only 2- and 3-torsion counting is supported")
    return sum(1 for P in enumerate_points(E) if scalar_mul(E, n, P).infinity)


def three_torsion_points(E: Curve) -> list[CurvePoint]:
    return [P for P in enumerate_points(E) if scalar_mul(E, 3, P).infinity]


def two_torsion_points(E: Curve) -> list[CurvePoint]:
    """O, P1 = (0,0), and -- when sqrt(S) exists -- P2, P3 = (+-S^(-1/2), 0).

    The x-coordinates are the roots of x (x^2 - 1/S); the nontrivial points
    are labelled in the order P1, P2, P3.
    """
    pts = [O, CurvePoint(E.ctx.zero(), E.ctx.zero())]
    if E.sqrtS is not None:
        inv_root = E.sqrtS.inv()  # square root of 1/S up to sign
        for x in (inv_root, -inv_root):
            pts.append(CurvePoint(x, E.ctx.zero()))
    return pts


def three_torsion_quartic_coeffs(E: Curve):
    """Coefficients of 3 S^2 a^4 - 6 S a^2 - 1 in ascending degree order."""
    ctx = E.ctx
    S = E.S
    return [
        -ctx.one(),
        ctx.zero(),
        -ctx.from_int(6) * S,
        ctx.zero(),
        ctx.from_int(3) * S * S,
    ]


def three_torsion_via_quartic(E: Curve) -> int:
    """1 + #{(a,b) on E with 3 S^2 a^4 - 6 S a^2 - 1 = 0}.

    Counts solutions via the quartic roots and the solvability of
    b^2 = a^3 - a/S; agrees with torsion_count(E, 3) on smooth inputs. A
    quartic root never lands on 2-torsion (that would force 8 = 0).
    """
    from .ff import univariate_roots

    ctx = E.ctx
    count = 1
    for a in univariate_roots(ctx, three_torsion_quartic_coeffs(E)):
        rhs = a * a * a - E.S_inv * a
        if rhs.is_zero():
            raise AssertionError("quartic root collided with 2-torsion")
        rr = sqrt(rhs)
        if rr is not None:
            count += 2
    return count


def flex_points(E: Curve) -> list[CurvePoint]:
    """Points annihilating the Hessian cubic of f_S, plus O.

    The affine flex condition, obtained by evaluating Hes(f_S) along the
    embedding (x, y) -> (x : y : 1/S), is 8 (1 + 3 S x^2 - 3 S^2 x y^2) = 0.
    """
    ctx = E.ctx
    S = E.S
    out = [O]
    three_S = ctx.from_int(3) * S
    three_S2 = three_S * S
    for P in enumerate_points(E):
        if P.infinity:
            continue
        val = ctx.one() + three_S * P.x * P.x - three_S2 * P.x * P.y * P.y
        if val.is_zero():
            out.append(P)
    return out


# -- curve automorphisms -------------------------------------------------------


class CurveAut:
    """tau_Q composed with the isogeny (x, y) -> (w^2 x, w^3 y), w^4 = 1."""

    __slots__ = ("E", "Q", "omega")

    def __init__(self, E: Curve, Q: CurvePoint, omega: FieldElem):
        if not (omega * omega * omega * omega == E.ctx.one()):
            raise CurveError("omega must be a fourth root of unity")
        self.E = E
        self.Q = Q
        self.omega = omega

    @classmethod
    def isogeny(cls, E: Curve, omega: FieldElem) -> "CurveAut":
        return cls(E, O, omega)

    @classmethod
    def translation(cls, E: Curve, Q: CurvePoint) -> "CurveAut":
        return cls(E, Q, E.ctx.one())

    def apply(self, P: CurvePoint) -> CurvePoint:
        if not P.infinity:
            w2 = self.omega * self.omega
            P = CurvePoint(w2 * P.x, w2 * self.omega * P.y)
        return add(self.E, P, self.Q)

    def compose(self, other: "CurveAut") -> "CurveAut":
        """self after other, in E[?] x Aut_O semidirect coordinates."""
        iso_self = CurveAut.isogeny(self.E, self.omega)
        return CurveAut(
            self.E, add(self.E, self.Q, iso_self.apply(other.Q)), self.omega * other.omega
        )

    def key(self):
        return (
            ("O",) if self.Q.infinity else (self.Q.x.index(), self.Q.y.index()),
            self.omega.index(),
        )

    def __eq__(self, other):
        return isinstance(other, CurveAut) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CurveAut(Q={self.Q}, omega={self.omega})"


def aut_O(E: Curve) -> list[CurveAut]:
    """The gcd(q-1, 4) invertible isogenies, one per fourth root of unity."""
    return [CurveAut.isogeny(E, w) for w in fourth_roots_of_unity(E.ctx)]


# -- torsion-set bijections (S a fourth power) ---------------------------------


@dataclass
class TorsionSetSizes:
    s0: int
    s1: int
    s1S: int


def fourth_root(ctx: FieldCtx, S: FieldElem) -> Optional[FieldElem]:
    rr = sqrt(S)
    if rr is None:
        return None
    for r in rr:
        rr2 = sqrt(r)
        if rr2 is not None:
            return rr2[0]
    return None


def torsion_set_bijections(E: Curve) -> TorsionSetSizes:
    """Sizes of the three point sets tied to E_S[3] when S is a fourth power.

    S_0:   b^2 = a^3 - a         and a^4 + 6 a^2 - 3 = 0
    S_1:   b^2 = a^3 - a         and 3 a^4 - 6 a^2 - 1 = 0
    S_1S:  b^2 = a^3 - a/S       and 3 S^2 a^4 - 6 S a^2 - 1 = 0
    All three match torsion_count(E, 3) - 1.
    """
    ctx = E.ctx
    if fourth_root(ctx, E.S) is None:
        raise CurveError(f"S = {E.S_int} is not a fourth power in {ctx}")

    def count_pairs(quartic, rhs_of):
        from .ff import univariate_roots

        n = 0
        for a in univariate_roots(ctx, quartic):
            rhs = rhs_of(a)
            rr = sqrt(rhs)
            if rr is None:
                continue
            n += 1 if rhs.is_zero() else 2
        return n

    one = ctx.one()
    s0 = count_pairs(
        [-ctx.from_int(3), ctx.zero(), ctx.from_int(6), ctx.zero(), one],
        lambda a: a * a * a - a,
    )
    s1 = count_pairs(
        [-one, ctx.zero(), -ctx.from_int(6), ctx.zero(), ctx.from_int(3)],
        lambda a: a * a * a - a,
    )
    s1S = count_pairs(
        three_torsion_quartic_coeffs(E),
        lambda a: a * a * a - E.S_inv * a,
    )
    return TorsionSetSizes(s0=s0, s1=s1, s1S=s1S)


# -- projective embedding helpers (shared with the automorphism machinery) -----


def projective_vector(E: Curve, P: CurvePoint) -> tuple:
    """Canonical affine-cone representative of P: (x, y, 1/S), or (0, 1, 0) for O."""
    ctx = E.ctx
    if P.infinity:
        return (ctx.zero(), ctx.one(), ctx.zero())
    return (P.x, P.y, E.S_inv)


def point_from_projective(E: Curve, v) -> CurvePoint:
    """Inverse of projective_vector up to scaling; raises if v is not on E."""
    v1, v2, v3 = v
    if v3.is_zero():
        if not v1.is_zero():
            raise CurveError("projective vector not on the curve")
        return O
    scale = E.S_inv * v3.inv()
    P = CurvePoint(v1 * scale, v2 * scale)
    if not on_curve(E, P):
        raise CurveError("projective vector not on the curve")
    return P


# -- generic Weierstrass oracle helpers ----------------------------------------


def enumerate_weierstrass(ctx: FieldCtx, a4: FieldElem, a6: FieldElem):
    """Points of y^2 = x^3 + a4 x + a6 (plus None for infinity); oracle use only."""
    pts = [None]
    for i in range(ctx.q):
        x = ctx.from_index(i)
        rhs = x * x * x + a4 * x + a6
        rr = sqrt(rhs)
        if rr is None:
            continue
        r, rneg = rr
        pts.append((x, r))
        if r != rneg:
            pts.append((x, rneg))
    return pts


def torsion_count_weierstrass(ctx: FieldCtx, a4: FieldElem, a6: FieldElem, n: int) -> int:
    """n-torsion count on a generic short Weierstrass curve, by enumeration."""

    def w_add(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2:
            if y1 == -y2:
                return None
            lam = (ctx.from_int(3) * x1 * x1 + a4) * (ctx.from_int(2) * y1).inv()
        else:
            lam = (y2 - y1) * (x2 - x1).inv()
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    count = 0
    for P in enumerate_weierstrass(ctx, a4, a6):
        R = None
        for _ in range(n):
            R = w_add(R, P)
        if R is None:
            count += 1
    return count
