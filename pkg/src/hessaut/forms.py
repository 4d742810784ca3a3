"""Homogeneous cubic forms in three variables and symmetric matrices of linear forms.

Two coefficient rings are supported: the exact ring Q(s) with s^2 = S and
denominators restricted to powers of S (for identity checking over the
rationals), and any finite-field context from :mod:`hessaut.ff`. Identity
checks over the exact ring are plain coefficient comparisons; nothing here is
probabilistic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .ff import FieldCtx, FieldElem

# the ten exponent triples (e1,e2,e3) with e1+e2+e3 = 3, graded-lex order
CUBIC_MONOMIALS = tuple(
    sorted(
        ((a, b, 3 - a - b) for a in range(4) for b in range(4 - a)),
        reverse=True,
    )
)


class RingMismatch(ValueError):
    pass


class ExactElem:
    """Element a + b*s of Q[s]/(s^2 - S), a and b rational.

    When S is a perfect square the formal root is folded into the rational
    part (s = isqrt(S)), keeping the ring an honest subring of Q. Otherwise
    the pair (a, b) is canonical, since s is irrational.
    """

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: "ExactRing", a, b=0):
        a = Fraction(a)
        b = Fraction(b)
        if ring.root is not None and b:
            a, b = a + b * ring.root, Fraction(0)
        self.ring = ring
        self.a = a
        self.b = b

    def _coerce(self, other) -> "ExactElem":
        if isinstance(other, (int, Fraction)):
            return ExactElem(self.ring, other)
        if not isinstance(other, ExactElem) or other.ring.S != self.ring.S:
            raise RingMismatch("mixing elements of different exact rings")
        return other

    def __add__(self, other):
        o = self._coerce(other)
        return ExactElem(self.ring, self.a + o.a, self.b + o.b)

    def __sub__(self, other):
        o = self._coerce(other)
        return ExactElem(self.ring, self.a - o.a, self.b - o.b)

    def __neg__(self):
        return ExactElem(self.ring, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        S = self.ring.S
        return ExactElem(
            self.ring,
            self.a * o.a + S * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def inv(self) -> "ExactElem":
        norm = self.a * self.a - self.ring.S * self.b * self.b
        if norm == 0:
            if self.is_zero():
                raise ZeroDivisionError("inverse of zero")
            raise ZeroDivisionError("non-invertible element (S is a square)")
        return ExactElem(self.ring, self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (RingMismatch, ValueError, TypeError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.ring.S, self.a, self.b))

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        stem = f"{self.b}*s" if abs(self.b) != 1 else ("s" if self.b > 0 else "-s")
        if self.a == 0:
            return stem
        sign = "+" if self.b > 0 else ""
        return f"{self.a}{sign}{stem}"


@dataclass(frozen=True)
class ExactRing:
    """Q[s]/(s^2 - S); the ambient exact ring for a fixed integer S != 0."""

    S: int

    def __post_init__(self):
        if self.S == 0:
            raise ValueError("S must be nonzero")

    @property
    def root(self):
        """Integer square root of S when S is a perfect square, else None."""
        if self.S < 0:
            return None
        r = int(self.S**0.5)
        for c in (r - 1, r, r + 1):
            if c >= 0 and c * c == self.S:
                return Fraction(c)
        return None

    def zero(self) -> ExactElem:
        return ExactElem(self, 0)

    def one(self) -> ExactElem:
        return ExactElem(self, 1)

    def from_int(self, n) -> ExactElem:
        return ExactElem(self, n)

    def sqrt_S(self) -> ExactElem:
        """The fixed square root of S: either the integer root or the formal s."""
        if self.root is not None:
            return ExactElem(self, self.root)
        return ExactElem(self, 0, 1)


def ring_of(ctx_or_ring):
    """Uniform access to zero/one/from_int for FieldCtx and ExactRing."""
    return ctx_or_ring


def _zero(ring):
    return ring.zero()


class CubicForm:
    """Homogeneous cubic in y1, y2, y3 over an ExactRing or FieldCtx."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs: dict):
        self.ring = ring
        self.coeffs = {}
        for e, c in coeffs.items():
            if sum(e) != 3 or len(e) != 3 or min(e) < 0:
                raise ValueError(f"bad cubic exponent {e}")
            if not c.is_zero():
                self.coeffs[tuple(e)] = c

    def coeff(self, e):
        return self.coeffs.get(tuple(e), _zero(self.ring))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, CubicForm)
            and (self - other).is_zero()
        )

    def __hash__(self):
        raise TypeError("CubicForm is unhashable")

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, _zero(self.ring)) + c
        return CubicForm(self.ring, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, _zero(self.ring)) - c
        return CubicForm(self.ring, out)

    def scale(self, c) -> "CubicForm":
        return CubicForm(self.ring, {e: v * c for e, v in self.coeffs.items()})

    def evaluate(self, u):
        """Value at a point u = (u1, u2, u3) of ring elements."""
        acc = _zero(self.ring)
        for (e1, e2, e3), c in self.coeffs.items():
            term = c
            for v, e in zip(u, (e1, e2, e3)):
                for _ in range(e):
                    term = term * v
            acc = acc + term
        return acc

    def render(self) -> str:
        """Canonical text form, monomials in graded-lex order."""
        if self.is_zero():
            return "0"
        parts = []
        for e in CUBIC_MONOMIALS:
            if e not in self.coeffs:
                continue
            mono = "*".join(
                f"y{k+1}" + (f"^{e[k]}" if e[k] > 1 else "")
                for k in range(3)
                if e[k] > 0
            )
            parts.append(f"({self.coeffs[e]})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CubicForm({self.render()})"


class LinForm:
    """Linear form c1*y1 + c2*y2 + c3*y3, used for matrix entries."""

    __slots__ = ("ring", "c")

    def __init__(self, ring, c):
        self.ring = ring
        self.c = tuple(c)
        assert len(self.c) == 3

    def __add__(self, other):
        return LinForm(self.ring, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        return LinForm(self.ring, tuple(a - b for a, b in zip(self.c, other.c)))

    def scale(self, k):
        return LinForm(self.ring, tuple(a * k for a in self.c))

    def is_zero(self):
        return all(a.is_zero() for a in self.c)

    def __eq__(self, other):
        return isinstance(other, LinForm) and all(
            (a - b).is_zero() for a, b in zip(self.c, other.c)
        )

    def evaluate(self, u):
        acc = _zero(self.ring)
        for a, v in zip(self.c, u):
            acc = acc + a * v
        return acc

    def __repr__(self):
        names = ("y1", "y2", "y3")
        parts = [f"({a})*{n}" for a, n in zip(self.c, names) if not a.is_zero()]
        return " + ".join(parts) if parts else "0"


def _triple_product_form(ring, l1: LinForm, l2: LinForm, l3: LinForm) -> dict:
    out: dict = {}
    for i in range(3):
        if l1.c[i].is_zero():
            continue
        for j in range(3):
            if l2.c[j].is_zero():
                continue
            for k in range(3):
                if l3.c[k].is_zero():
                    continue
                e = [0, 0, 0]
                e[i] += 1
                e[j] += 1
                e[k] += 1
                e = tuple(e)
                v = l1.c[i] * l2.c[j] * l3.c[k]
                out[e] = out.get(e, _zero(ring)) + v
    return out


class LinFormMatrix:
    """3x3 matrix of linear forms B(y) = B1*y1 + B2*y2 + B3*y3.

    Stored as the three coefficient matrices B1, B2, B3 (tuples of tuples of
    ring elements). Symmetry is not structural -- duals of asymmetric inputs
    are representable -- but :meth:`require_symmetric` enforces it where the
    construction demands it.
    """

    __slots__ = ("ring", "mats")

    def __init__(self, ring, mats):
        self.ring = ring
        self.mats = tuple(tuple(tuple(row) for row in m) for m in mats)
        assert len(self.mats) == 3
        for m in self.mats:
            assert len(m) == 3 and all(len(r) == 3 for r in m)

    @classmethod
    def from_entries(cls, ring, entries) -> "LinFormMatrix":
        """Build from a 3x3 array of LinForm."""
        mats = []
        for k in range(3):
            mats.append(
                tuple(tuple(entries[i][j].c[k] for j in range(3)) for i in range(3))
            )
        return cls(ring, mats)

    def entry(self, i, j) -> LinForm:
        return LinForm(self.ring, tuple(self.mats[k][i][j] for k in range(3)))

    def entries(self):
        return [[self.entry(i, j) for j in range(3)] for i in range(3)]

    def is_symmetric(self) -> bool:
        return all(
            (self.mats[k][i][j] - self.mats[k][j][i]).is_zero()
            for k in range(3)
            for i in range(3)
            for j in range(i + 1, 3)
        )

    def require_symmetric(self) -> "LinFormMatrix":
        if not self.is_symmetric():
            raise ValueError("matrix of linear forms is not symmetric")
        return self

    def __eq__(self, other):
        return isinstance(other, LinFormMatrix) and all(
            (self.mats[k][i][j] - other.mats[k][i][j]).is_zero()
            for k in range(3)
            for i in range(3)
            for j in range(3)
        )

    def scale(self, c) -> "LinFormMatrix":
        return LinFormMatrix(
            self.ring,
            [
                tuple(tuple(v * c for v in row) for row in m)
                for m in self.mats
            ],
        )

    def __sub__(self, other):
        return LinFormMatrix(
            self.ring,
            [
                tuple(
                    tuple(a - b for a, b in zip(ra, rb))
                    for ra, rb in zip(ma, mb)
                )
                for ma, mb in zip(self.mats, other.mats)
            ],
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for m in self.mats for row in m for v in row)

    def __repr__(self):
        rows = [
            "[" + ", ".join(repr(self.entry(i, j)) for j in range(3)) + "]"
            for i in range(3)
        ]
        return "LinFormMatrix(\n  " + ",\n  ".join(rows) + ")"


# -- Hessians -----------------------------------------------------------------


def hessian_matrix(f: CubicForm) -> LinFormMatrix:
    """Matrix of second partials of f; entries are linear forms, output symmetric."""
    ring = f.ring
    entries = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            c = [_zero(ring), _zero(ring), _zero(ring)]
            for e, v in f.coeffs.items():
                # d^2/dyi dyj of y^e
                e2 = list(e)
                if e2[i] == 0:
                    continue
                mult = e2[i]
                e2[i] -= 1
                if e2[j] == 0:
                    continue
                mult *= e2[j]
                e2[j] -= 1
                k = e2.index(1)
                c[k] = c[k] + v * mult
            entries[i][j] = LinForm(ring, c)
    out = LinFormMatrix.from_entries(ring, entries)
    assert out.is_symmetric()
    return out


def det_linform(B: LinFormMatrix) -> CubicForm:
    """Exact determinant of a 3x3 matrix of linear forms, a homogeneous cubic."""
    ring = B.ring
    ent = B.entries()
    acc: dict = {}
    for perm in permutations(range(3)):
        sign = _perm_sign(perm)
        term = _triple_product_form(
            ring, ent[0][perm[0]], ent[1][perm[1]], ent[2][perm[2]]
        )
        for e, v in term.items():
            v = v if sign > 0 else -v
            acc[e] = acc.get(e, _zero(ring)) + v
    return CubicForm(ring, acc)


def _perm_sign(perm) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv % 2 else 1


def hessian_det(f: CubicForm) -> CubicForm:
    """det of the Hessian matrix of f -- again a homogeneous cubic."""
    return det_linform(hessian_matrix(f))


def dual(B: LinFormMatrix) -> LinFormMatrix:
    """The dual matrix in variables x: entry (i, kappa) = sum_j B^(kappa)_{ij} x_j.

    Satisfies dual(B)(x) y^T = B(y) x^T identically; self-dual exactly for
    Hessian-constructed symmetric matrices.
    """
    ring = B.ring
    mats = []
    for m in range(3):  # coefficient matrix of x_m
        mats.append(
            tuple(
                tuple(B.mats[kappa][i][m] for kappa in range(3))
                for i in range(3)
            )
        )
    return LinFormMatrix(ring, mats)


def evaluate(B: LinFormMatrix, u):
    """Specialize y -> u; returns a 3x3 matrix (tuple of tuples) of ring elements."""
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = _zero(B.ring)
            for k in range(3):
                acc = acc + B.mats[k][i][j] * u[k]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def matrix_rank3(mat) -> int:
    """Rank of a 3x3 matrix of field/ring elements (needs exact zero tests only
    for rank 0/1 detection; rank 2 vs 3 via determinant and 2x2 minors)."""
    det = _zero_of(mat)
    # 3x3 determinant
    a = mat
    det = (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )
    if not det.is_zero():
        return 3
    for i in range(3):
        for j in range(3):
            # 2x2 minor deleting row i, col j
            r = [r_ for r_ in range(3) if r_ != i]
            c = [c_ for c_ in range(3) if c_ != j]
            minor = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
            if not minor.is_zero():
                return 2
    if any(not v.is_zero() for row in a for v in row):
        return 1
    return 0


def _zero_of(mat):
    probe = mat[0][0]
    if isinstance(probe, FieldElem):
        return probe.ctx.zero()
    return probe.ring.zero()


@dataclass
class RankProfile:
    histogram: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def rank_profile(B: LinFormMatrix, ctx: FieldCtx, limit_q: int = 49) -> RankProfile:
    """Full scan of F_q^3 checking the smooth-locus rank pattern.

    Expected: rank 0 iff u = 0; rank 2 iff u != 0 and det B(u) = 0; rank 3
    otherwise. Any u breaking the pattern is reported (this is how degenerate
    loci, e.g. characteristics dividing 2S, surface).
    """
    if ctx.q > limit_q:
        raise ValueError(f"field too large for rank scan (q = {ctx.q})")
    detB = det_linform(B)
    hist = {0: 0, 1: 0, 2: 0, 3: 0}
    violations = []
    for i1 in range(ctx.q):
        for i2 in range(ctx.q):
            for i3 in range(ctx.q):
                u = (ctx.from_index(i1), ctx.from_index(i2), ctx.from_index(i3))
                r = matrix_rank3(evaluate(B, u))
                hist[r] += 1
                zero = i1 == i2 == i3 == 0
                on_locus = detB.evaluate(u).is_zero()
                expected = 0 if zero else (2 if on_locus else 3)
                if r != expected:
                    violations.append((tuple(x.index() for x in u), r, expected))
    return RankProfile(histogram=hist, violations=violations)
