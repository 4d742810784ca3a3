"""The 9-dimensional class-2 Lie algebra / group attached to a symmetric B.

Elements live in U + W + T with the fixed bases (e_i), (f_i), (g_i); the
bilinear map phi(u, w) = u B(g_1,g_2,g_3) w^T drives both the bracket and the
group law. Tensors in U x W are handled as 3x3 coefficient matrices M with
M[i][j] the coefficient of e_i (x) f_j, so that the diagonal GL_3 action is
M -> A M A^T.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import linalg
from .ff import FieldCtx, FieldElem
from .forms import LinFormMatrix


class AlgebraError(ValueError):
    pass


class Elem:
    """Element (u, w, t) of the algebra/group, coordinates in the fixed bases."""

    __slots__ = ("u", "w", "t")

    def __init__(self, u, w, t):
        self.u = tuple(u)
        self.w = tuple(w)
        self.t = tuple(t)

    def coords(self):
        return self.u + self.w + self.t

    def __eq__(self, other):
        return (
            isinstance(other, Elem)
            and self.u == other.u
            and self.w == other.w
            and self.t == other.t
        )

    def __hash__(self):
        return hash((self.u, self.w, self.t))

    def __repr__(self):
        return f"Elem(u={self.u}, w={self.w}, t={self.t})"


def tensor_entry_order():
    """Column order of the e_i (x) f_j coordinates used by the 3x9 matrix."""
    return [(i, j) for i in range(3) for j in range(3)]


def kstar_tensors(i: int, S: int, sqrtS: FieldElem, ctx: FieldCtx):
    """The three distinguished kernel tensors of B_{i,S}, as 3x3 matrices."""
    z = ctx.zero()
    one = ctx.one()
    s = ctx.from_int(S)

    def mat(assignments):
        m = [[z] * 3 for _ in range(3)]
        for (a, b), v in assignments.items():
            m[a][b] = v
        return tuple(tuple(r) for r in m)

    if i == 1:
        return [
            mat({(1, 2): one}),
            mat({(0, 0): s, (2, 2): -one}),
            mat({(0, 2): one, (1, 1): one}),
        ]
    r = sqrtS if i == 2 else -sqrtS
    return [
        mat({(0, 2): r, (2, 2): one}),
        mat({(1, 2): one, (0, 1): -r}),
        mat({(0, 0): s, (1, 1): ctx.from_int(2) * r, (2, 2): one}),
    ]


def full_kernel_tensors(i: int, S: int, sqrtS: FieldElem, ctx: FieldCtx):
    """The published 6-element kernel spanning set (K* plus its dual partners)."""
    z = ctx.zero()
    one = ctx.one()

    def mat(assignments):
        m = [[z] * 3 for _ in range(3)]
        for (a, b), v in assignments.items():
            m[a][b] = v
        return tuple(tuple(r) for r in m)

    extra: list
    if i == 1:
        extra = [
            mat({(2, 1): one}),
            mat({(0, 2): one, (2, 0): -one}),
            mat({(0, 1): one, (1, 0): -one}),
        ]
    else:
        r = sqrtS if i == 2 else -sqrtS
        extra = [
            mat({(2, 0): r, (2, 2): one}),
            mat({(1, 0): r, (2, 1): -one}),
            mat({(1, 2): one, (2, 1): -one}),
        ]
    return kstar_tensors(i, S, sqrtS, ctx) + extra


@dataclass
class AlgebraData:
    """B evaluated over a field, with phi-tilde, its kernel, and optional K*."""

    ctx: FieldCtx
    B: LinFormMatrix = field(repr=False)
    phi_tilde: tuple = field(repr=False)  # 3 rows x 9 cols
    kernel: list = field(repr=False)  # 6 tensors (3x3 matrices)
    kstar: Optional[list] = field(default=None, repr=False)

    @property
    def Bk(self):
        return self.B.mats

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_linform(cls, B: LinFormMatrix, ctx: FieldCtx, kstar=None) -> "AlgebraData":
        B.require_symmetric()
        rows = []
        order = tensor_entry_order()
        for kappa in range(3):
            rows.append(tuple(B.mats[kappa][i][j] for (i, j) in order))
        if linalg.rank(ctx, rows) != 3:
            raise AlgebraError("image of phi does not span T (rank < 3)")
        kern = [
            _vec_to_tensor(v) for v in linalg.kernel_basis(ctx, rows)
        ]
        assert len(kern) == 6
        alg = cls(ctx=ctx, B=B, phi_tilde=tuple(rows), kernel=kern, kstar=kstar)
        if kstar is not None:
            for m in kstar:
                if not all(x.is_zero() for x in alg.phi_tilde_apply(m)):
                    raise AlgebraError("declared K* tensor is not in ker(phi-tilde)")
        return alg

    @classmethod
    def from_rep(cls, rep, ctx: Optional[FieldCtx] = None) -> "AlgebraData":
        """Build from a HessianRep over a field context, wiring in K*_{i,S}."""
        if ctx is None:
            ctx = rep.ring
        if not isinstance(ctx, FieldCtx) or rep.ring is not ctx:
            raise AlgebraError("rep must be built over the target field context")
        sqrtS = rep.sqrtS if rep.sqrtS is not None else ctx.one()
        kstar = kstar_tensors(rep.i, rep.S, sqrtS, ctx)
        return cls.from_linform(rep.B, ctx, kstar=kstar)

    # -- phi and friends -------------------------------------------------------

    def phi(self, u, w):
        """phi(u, w) = (u B^(kappa) w^T)_kappa in T-coordinates."""
        ctx = self.ctx
        out = []
        for kappa in range(3):
            acc = ctx.zero()
            Bk = self.Bk[kappa]
            for i in range(3):
                if u[i].is_zero():
                    continue
                for j in range(3):
                    acc = acc + u[i] * Bk[i][j] * w[j]
            out.append(acc)
        return tuple(out)

    def phi_tilde_apply(self, tensor):
        """phi-tilde on a tensor given as a 3x3 coefficient matrix."""
        ctx = self.ctx
        out = []
        for kappa in range(3):
            acc = ctx.zero()
            Bk = self.Bk[kappa]
            for i in range(3):
                for j in range(3):
                    acc = acc + Bk[i][j] * tensor[i][j]
            out.append(acc)
        return tuple(out)

    def in_kernel(self, tensor) -> bool:
        return all(x.is_zero() for x in self.phi_tilde_apply(tensor))

    # -- Lie and group structure ----------------------------------------------

    def zero_elem(self) -> Elem:
        z = self.ctx.zero()
        return Elem((z, z, z), (z, z, z), (z, z, z))

    def basis_e(self, k) -> Elem:
        z, one = self.ctx.zero(), self.ctx.one()
        u = tuple(one if i == k else z for i in range(3))
        return Elem(u, (z, z, z), (z, z, z))

    def basis_f(self, k) -> Elem:
        z, one = self.ctx.zero(), self.ctx.one()
        w = tuple(one if i == k else z for i in range(3))
        return Elem((z, z, z), w, (z, z, z))

    def basis_g(self, k) -> Elem:
        z, one = self.ctx.zero(), self.ctx.one()
        t = tuple(one if i == k else z for i in range(3))
        return Elem((z, z, z), (z, z, z), t)

    def bracket(self, a: Elem, b: Elem) -> Elem:
        z = self.ctx.zero()
        t1 = self.phi(a.u, b.w)
        t2 = self.phi(b.u, a.w)
        return Elem((z,) * 3, (z,) * 3, tuple(x - y for x, y in zip(t1, t2)))

    def group_mul(self, a: Elem, b: Elem) -> Elem:
        extra = self.phi(a.u, b.w)
        return Elem(
            tuple(x + y for x, y in zip(a.u, b.u)),
            tuple(x + y for x, y in zip(a.w, b.w)),
            tuple(x + y + z for x, y, z in zip(a.t, b.t, extra)),
        )

    def group_inv(self, a: Elem) -> Elem:
        corr = self.phi(a.u, a.w)
        return Elem(
            tuple(-x for x in a.u),
            tuple(-x for x in a.w),
            tuple(-x + c for x, c in zip(a.t, corr)),
        )

    def group_pow(self, a: Elem, n: int) -> Elem:
        """(u,w,t)^n = (nu, nw, nt + C(n,2) phi(u,w)), any integer n."""
        ctx = self.ctx
        nn = ctx.from_int(n)
        binom = ctx.from_int(n * (n - 1) // 2)
        corr = self.phi(a.u, a.w)
        return Elem(
            tuple(nn * x for x in a.u),
            tuple(nn * x for x in a.w),
            tuple(nn * x + binom * c for x, c in zip(a.t, corr)),
        )

    def group_comm(self, a: Elem, b: Elem) -> Elem:
        inv_a = self.group_inv(a)
        inv_b = self.group_inv(b)
        return self.group_mul(
            self.group_mul(inv_a, inv_b), self.group_mul(a, b)
        )

    def random_elem(self, rng: random.Random) -> Elem:
        ctx = self.ctx
        pick = lambda: tuple(ctx.from_index(rng.randrange(ctx.q)) for _ in range(3))
        return Elem(pick(), pick(), pick())

    # -- psi: GL_2 inside Aut(g) ------------------------------------------------

    def psi_matrix(self, M):
        """The 9x9 matrix of (u,w,t) -> (a u + b w-bar, c u-bar + d w, det(M) t)."""
        ctx = self.ctx
        (a, b), (c, d) = M
        delta = a * d - b * c
        if delta.is_zero():
            raise AlgebraError("psi requires an invertible 2x2 matrix")
        z = ctx.zero()
        rows = []
        for i in range(3):
            rows.append(tuple([a if j == i else z for j in range(3)] + [b if j == i else z for j in range(3)] + [z] * 3))
        for i in range(3):
            rows.append(tuple([c if j == i else z for j in range(3)] + [d if j == i else z for j in range(3)] + [z] * 3))
        for i in range(3):
            rows.append(tuple([z] * 6 + [delta if j == i else z for j in range(3)]))
        return tuple(rows)

    def psi_apply(self, M, x: Elem) -> Elem:
        v = linalg.mat_vec(self.ctx, self.psi_matrix(M), x.coords())
        return Elem(v[0:3], v[3:6], v[6:9])

    def is_bracket_automorphism(self, mat9) -> bool:
        """Does the 9x9 matrix preserve the bracket on all basis pairs?"""
        basis = [self.basis_e(k) for k in range(3)] + [
            self.basis_f(k) for k in range(3)
        ] + [self.basis_g(k) for k in range(3)]

        def apply(x: Elem) -> Elem:
            v = linalg.mat_vec(self.ctx, mat9, x.coords())
            return Elem(v[0:3], v[3:6], v[6:9])

        for x in basis:
            for y in basis:
                lhs = apply(self.bracket(x, y))
                rhs = self.bracket(apply(x), apply(y))
                if lhs != rhs:
                    return False
        return True

    # -- centralizers ------------------------------------------------------------

    def centralizer_dim(self, v: Elem) -> int:
        """dim {v' in V : [v, v'] = 0} for v in V (the t-part must vanish)."""
        if any(not x.is_zero() for x in v.t):
            raise AlgebraError("centralizer_dim expects an element of V")
        ctx = self.ctx
        # columns: basis e_1..e_3, f_1..f_3; rows: T-coordinates of the bracket
        cols = []
        for k in range(3):
            ek = tuple(
                ctx.one() if i == k else ctx.zero() for i in range(3)
            )
            cols.append(tuple(-x for x in self.phi(ek, v.w)))
        for k in range(3):
            fk = tuple(
                ctx.one() if i == k else ctx.zero() for i in range(3)
            )
            cols.append(self.phi(v.u, fk))
        rows = [tuple(cols[c][r] for c in range(6)) for r in range(3)]
        return 6 - linalg.rank(ctx, rows)

    # -- Heisenberg picture --------------------------------------------------------

    def heisenberg_mul(self, a: Elem, b: Elem) -> Elem:
        """Multiply via unitriangular 3x3 matrices over the algebra A = <g_1,g_2,g_3>.

        A carries the commutative (not necessarily associative) product
        g_r g_s = B(g_1,g_2,g_3)_{rs}; the (1,3) slot picks up x * y'.
        """
        ctx = self.ctx

        def amul(x, y):
            out = [ctx.zero()] * 3
            for r in range(3):
                if x[r].is_zero():
                    continue
                for s in range(3):
                    if y[s].is_zero():
                        continue
                    coef = x[r] * y[s]
                    for kappa in range(3):
                        out[kappa] = out[kappa] + coef * self.Bk[kappa][r][s]
            return tuple(out)

        x, y, z = a.u, a.w, a.t
        x2, y2, z2 = b.u, b.w, b.t
        cross = amul(x, y2)
        return Elem(
            tuple(p + q for p, q in zip(x, x2)),
            tuple(p + q for p, q in zip(y, y2)),
            tuple(p + q + r for p, q, r in zip(z, z2, cross)),
        )

    def heisenberg_cross_check(self, n_pairs: int = 100, seed: int = 0) -> bool:
        rng = random.Random(seed)
        eye = self.zero_elem()
        if self.heisenberg_mul(eye, eye) != eye:
            return False
        for _ in range(n_pairs):
            a = self.random_elem(rng)
            b = self.random_elem(rng)
            if self.heisenberg_mul(a, b) != self.group_mul(a, b):
                return False
        return True

    # -- xreduction helpers ----------------------------------------------------------

    def d_compatible(self, D) -> bool:
        """D^T B = B D as matrices of linear forms (27 scalar equations)."""
        for kappa in range(3):
            Bk = self.Bk[kappa]
            lhs = linalg.mat_mul(self.ctx, linalg.transpose(D), Bk)
            rhs = linalg.mat_mul(self.ctx, Bk, D)
            if lhs != rhs:
                return False
        return True

    def x_complement_abelian(self, D) -> bool:
        """Is X = {w + w-bar D^T} an abelian subalgebra? Computed from brackets."""
        ctx = self.ctx
        z = ctx.zero()
        xs = []
        for k in range(3):
            wk = tuple(ctx.one() if i == k else z for i in range(3))
            ubar = linalg.mat_vec(ctx, D, wk)  # w-bar D^T as a column action
            xs.append(Elem(ubar, wk, (z, z, z)))
        for a in range(3):
            for b in range(a + 1, 3):
                if any(not x.is_zero() for x in self.bracket(xs[a], xs[b]).t):
                    return False
        return True


def _vec_to_tensor(v):
    order = tensor_entry_order()
    m = [[None] * 3 for _ in range(3)]
    for idx, (i, j) in enumerate(order):
        m[i][j] = v[idx]
    return tuple(tuple(r) for r in m)


def tensor_to_vec(m):
    return tuple(m[i][j] for (i, j) in tensor_entry_order())


def apply_A_tensor(ctx: FieldCtx, A, tensor):
    """(A (x) A) acting on a tensor: M -> A M A^T."""
    return linalg.mat_mul(ctx, linalg.mat_mul(ctx, A, tensor), linalg.transpose(A))


# -- abelian 3-dimensional subalgebras of V -------------------------------------


@dataclass
class AbelianSubspace:
    rref_rows: tuple  # 3x6 reduced row echelon basis
    gl2_param: tuple  # (a, c) with X = psi([[a,.],[c,.]])(U)


def enumerate_abelian_3dim_in_V(alg: AlgebraData) -> list[AbelianSubspace]:
    """All 3-dim abelian subalgebras of g contained in V, by Grassmannian scan.

    Requires q <= 5 (the scan visits every 3-subspace of F_q^6 once via RREF
    pivot patterns). The result is asserted to be exactly the pencil
    {psi(M)(U)} of size q + 1.
    """
    ctx = alg.ctx
    if ctx.q > 5 or ctx.f != 1:
        raise AlgebraError("Grassmannian scan supported for prime q <= 5 only")
    import itertools

    import numpy as np

    p = ctx.p
    BK = np.array(
        [[[alg.Bk[k][i][j].lift() for j in range(3)] for i in range(3)] for k in range(3)],
        dtype=np.int64,
    )
    found = []
    total = 0
    for pivots in itertools.combinations(range(6), 3):
        free_pos = []
        for r in range(3):
            for c in range(pivots[r] + 1, 6):
                if c not in pivots:
                    free_pos.append((r, c))
        nfree = len(free_pos)
        N = p**nfree
        total += N
        fills = np.zeros((N, len(free_pos)), dtype=np.int64)
        if nfree:
            idx = np.arange(N)
            for k in range(nfree):
                idx, rem = np.divmod(idx, p)
                fills[:, k] = rem
        R = np.zeros((N, 3, 6), dtype=np.int64)
        for r in range(3):
            R[:, r, pivots[r]] = 1
        for k, (r, c) in enumerate(free_pos):
            R[:, r, c] = fills[:, k]
        Ru, Rw = R[:, :, :3], R[:, :, 3:]
        ok = np.ones(N, dtype=bool)
        for a, b in ((0, 1), (0, 2), (1, 2)):
            br = (
                np.einsum("na,kab,nb->nk", Ru[:, a], BK, Rw[:, b])
                - np.einsum("na,kab,nb->nk", Ru[:, b], BK, Rw[:, a])
            ) % p
            ok &= ~br.any(axis=1)
        for m in R[ok]:
            rows = tuple(
                tuple(ctx.from_int(int(v)) for v in row) for row in m
            )
            found.append(AbelianSubspace(rref_rows=rows, gl2_param=_gl2_param(ctx, rows)))
    # sanity: the scan really visited the whole Grassmannian
    assert total == _gaussian_binomial(6, 3, p)
    assert len(found) == ctx.q + 1, f"expected q+1 abelian subspaces, got {len(found)}"
    return found


def _gl2_param(ctx: FieldCtx, rows):
    """Express an RREF 3x6 abelian subspace as psi(M)(U): returns (a, c)."""
    left = [r[:3] for r in rows]
    right = [r[3:] for r in rows]
    if all(v.is_zero() for row in left for v in row):
        return (ctx.zero(), ctx.one())  # X = W
    # must be [I | lambda I]
    eye = linalg.identity(ctx, 3)
    if tuple(left) != eye:
        raise AlgebraError("abelian subspace outside the psi(M)(U) pencil")
    lam = right[0][0]
    for i in range(3):
        for j in range(3):
            expect = lam if i == j else ctx.zero()
            if right[i][j] != expect:
                raise AlgebraError("abelian subspace outside the psi(M)(U) pencil")
    return (ctx.one(), lam)


def _gaussian_binomial(n, k, q):
    num = den = 1
    for t in range(k):
        num *= q ** (n - t) - 1
        den *= q ** (t + 1) - 1
    return num // den
