"""Finite fields F_{p^f} for p >= 5 and small f.

Field contexts are deterministic: the same (p, f) always produces the same
extension modulus (the lexicographically smallest monic irreducible), so
element indices, square-root sign choices and scan orders are reproducible
across runs.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, exact for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldError(ValueError):
    """Invalid field construction or element operation."""


@dataclass(frozen=True)
class FieldCtx:
    """Arithmetic context for F_{p^f}.

    ``modulus`` is the coefficient tuple (c_0, ..., c_{f-1}) of the monic
    irreducible x^f + c_{f-1} x^{f-1} + ... + c_0 used for the extension;
    for f = 1 it is empty and elements are plain residues.
    """

    p: int
    f: int
    modulus: tuple[int, ...] = field(compare=False)
    q: int = field(compare=False)

    def zero(self) -> "FieldElem":
        return FieldElem(self, (0,) * self.f)

    def one(self) -> "FieldElem":
        return self.from_int(1)

    def from_int(self, n: int) -> "FieldElem":
        c = [0] * self.f
        c[0] = n % self.p
        return FieldElem(self, tuple(c))

    def elem(self, coeffs) -> "FieldElem":
        c = list(coeffs)
        if len(c) > self.f:
            raise FieldError(f"coefficient vector longer than degree {self.f}")
        c += [0] * (self.f - len(c))
        return FieldElem(self, tuple(x % self.p for x in c))

    def from_index(self, idx: int) -> "FieldElem":
        """Element number idx in the canonical order (base-p digits)."""
        if not 0 <= idx < self.q:
            raise FieldError(f"index {idx} out of range for q={self.q}")
        c = []
        for _ in range(self.f):
            idx, r = divmod(idx, self.p)
            c.append(r)
        return FieldElem(self, tuple(c))

    def elements(self):
        """All q elements in canonical index order."""
        return [self.from_index(i) for i in range(self.q)]

    def __repr__(self):
        return f"F_{self.q}" if self.f > 1 else f"F_{self.p}"


class FieldElem:
    """Element of F_{p^f}, stored as the coefficient tuple of its representative."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, c: tuple[int, ...]):
        self.ctx = ctx
        self.c = c

    # -- ring structure ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        other = self._coerce(other)
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((a - b) % p for a, b in zip(self.c, other.c)))

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((-a) % p for a in self.c))

    def __mul__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        if ctx.f == 1:
            return FieldElem(ctx, ((self.c[0] * other.c[0]) % ctx.p,))
        return FieldElem(ctx, _polymul_mod(self.c, other.c, ctx))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def inv(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __pow__(self, n: int) -> "FieldElem":
        ctx = self.ctx
        if ctx.f == 1:
            return FieldElem(ctx, (pow(self.c[0], n % (ctx.q - 1) if self.c[0] else n, ctx.p),))
        if n < 0:
            return self.inv() ** (-n)
        result = ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- predicates & hashing ------------------------------------------------

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        return isinstance(other, FieldElem) and self.ctx == other.ctx and self.c == other.c

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.f, self.c))

    def index(self) -> int:
        """Position in the canonical element order."""
        idx = 0
        for a in reversed(self.c):
            idx = idx * self.ctx.p + a
        return idx

    def lift(self) -> int:
        """Integer representative; only valid for prime fields."""
        if self.ctx.f != 1:
            raise FieldError("lift() requires a prime field")
        return self.c[0]

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, int):
            return self.ctx.from_int(other)
        if not isinstance(other, FieldElem) or other.ctx != self.ctx:
            raise FieldError("mixing elements of different fields")
        return other

    def __repr__(self):
        if self.ctx.f == 1:
            return str(self.c[0])
        return "(" + ",".join(map(str, self.c)) + ")"


def _polymul_mod(a: tuple, b: tuple, ctx: FieldCtx) -> tuple:
    p, f, mod = ctx.p, ctx.f, ctx.modulus
    prod = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce x^k = -(c_0 + ... + c_{f-1} x^{f-1}) x^{k-f}
    for k in range(2 * f - 2, f - 1, -1):
        coef = prod[k]
        if coef:
            prod[k] = 0
            for j in range(f):
                prod[k - f + j] = (prod[k - f + j] - coef * mod[j]) % p
    return tuple(prod[:f])


def _poly_is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Irreducibility of the monic poly x^f + sum c_j x^j over F_p, f <= 4.

    Checked by absence of roots (f <= 3) plus, for f = 4, absence of
    quadratic factors via a scan over monic quadratics.
    """
    f = len(coeffs)

    def value(x):
        acc = pow(x, f, p)
        for j, c in enumerate(coeffs):
            acc = (acc + c * pow(x, j, p)) % p
        return acc

    if any(value(x) == 0 for x in range(p)):
        return False
    if f < 4:
        return True
    # remaining risk for f=4: product of two irreducible quadratics
    for b in range(p):
        for c in range(p):
            # divide x^4 + c3 x^3 + c2 x^2 + c1 x + c0 by x^2 + b x + c
            c3, c2, c1, c0 = coeffs[3], coeffs[2], coeffs[1], coeffs[0]
            q1 = (c3 - b) % p
            q0 = (c2 - c - b * q1) % p
            r1 = (c1 - b * q0 - c * q1) % p
            r0 = (c0 - c * q0) % p
            if r1 == 0 and r0 == 0:
                return False
    return True


@functools.lru_cache(maxsize=None)
def make_field(p: int, f: int = 1) -> FieldCtx:
    """Construct F_{p^f} with the deterministic smallest-modulus convention.

    Rejects p in {2, 3} (the whole construction assumes characteristic >= 5)
    and non-prime p.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if p < 5:
        raise FieldError(f"characteristic {p} not supported (need p >= 5)")
    if not 1 <= f <= 4:
        raise FieldError(f"extension degree {f} out of range 1..4")
    modulus: tuple[int, ...] = ()
    if f > 1:
        # smallest monic irreducible in lexicographic coefficient order,
        # comparing (c_{f-1}, ..., c_0)
        found = None
        for idx in range(p**f):
            digits = []
            k = idx
            for _ in range(f):
                k, r = divmod(k, p)
                digits.append(r)  # digits[0] = c_{f-1}, ..., digits[f-1] = c_0
            cand = tuple(reversed(digits))  # (c_0, ..., c_{f-1})
            if _poly_is_irreducible(cand, p):
                found = cand
                break
        assert found is not None
        modulus = found
    return FieldCtx(p=p, f=f, modulus=modulus, q=p**f)


# -- square roots and roots of unity ----------------------------------------


def is_square(a: FieldElem) -> bool:
    if a.is_zero():
        return True
    return (a ** ((a.ctx.q - 1) // 2)) == a.ctx.one()


def sqrt(a: FieldElem):
    """Both square roots {r, -r} of a, or None if a is a non-square.

    The first entry is the canonical "fixed" root: the one whose coefficient
    tuple is lexicographically smaller. sqrt(0) = (0, 0).
    """
    ctx = a.ctx
    if a.is_zero():
        z = ctx.zero()
        return (z, z)
    if not is_square(a):
        return None
    q = ctx.q
    if q % 4 == 3:
        r = a ** ((q + 1) // 4)
    else:
        r = _tonelli_shanks(a)
    assert r * r == a
    s = -r
    return (r, s) if r.c <= s.c else (s, r)


def canonical_sqrt(a: FieldElem):
    """The fixed square root only, or None."""
    rr = sqrt(a)
    return rr[0] if rr is not None else None


def _tonelli_shanks(a: FieldElem) -> FieldElem:
    ctx = a.ctx
    q = ctx.q
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    # deterministic non-residue: first in canonical element order
    n = None
    for i in range(2, q):
        cand = ctx.from_index(i)
        if not cand.is_zero() and not is_square(cand):
            n = cand
            break
    assert n is not None
    x = a ** ((s + 1) // 2)
    b = a**s
    g = n**s
    r = e
    one = ctx.one()
    while True:
        t = b
        m = 0
        while t != one:
            t = t * t
            m += 1
        if m == 0:
            return x
        gs = g ** (2 ** (r - m - 1))
        g = gs * gs
        x = x * gs
        b = b * g
        r = m


def fourth_roots_of_unity(ctx: FieldCtx) -> list[FieldElem]:
    """All solutions of w^4 = 1, in canonical index order; gcd(q-1, 4) of them."""
    one = ctx.one()
    roots = {one, -one}
    ii = sqrt(-one)
    if ii is not None:
        roots.update(ii)
    out = sorted(roots, key=lambda x: x.index())
    assert len(out) == _gcd(ctx.q - 1, 4)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def univariate_roots(ctx: FieldCtx, coeffs) -> list[FieldElem]:
    """Roots in F_q of the polynomial sum coeffs[k] x^k, by exhaustive scan.

    Coefficients may be ints or field elements; degree <= 6 and q <= 10^4 are
    assumed (desk scale). The zero polynomial is rejected.
    """
    cs = [c if isinstance(c, FieldElem) else ctx.from_int(c) for c in coeffs]
    if all(c.is_zero() for c in cs):
        raise FieldError("zero polynomial has no well-defined root set")
    if len(cs) > 7:
        raise FieldError("degree > 6 not supported")
    if ctx.q > 10**4:
        raise FieldError("field too large for exhaustive root scan")
    roots = []
    for i in range(ctx.q):
        x = ctx.from_index(i)
        acc = ctx.zero()
        xp = ctx.one()
        for c in cs:
            acc = acc + c * xp
            xp = xp * x
        if acc.is_zero():
            roots.append(x)
    return roots
