"""Tiny exact linear algebra over field contexts (dimensions stay single-digit)."""

from __future__ import annotations

from .ff import FieldCtx, FieldElem


def mat_from_rows(rows):
    return tuple(tuple(r) for r in rows)


def rref(ctx: FieldCtx, rows):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inv()
        m[r] = [v * inv for v in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat_from_rows(m), tuple(pivots)


def rank(ctx: FieldCtx, rows) -> int:
    _, pivots = rref(ctx, rows)
    return len(pivots)


def kernel_basis(ctx: FieldCtx, rows):
    """Basis of the right kernel {x : M x = 0}, from the RREF free columns."""
    red, pivots = rref(ctx, rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ctx.zero()] * ncols
        v[fc] = ctx.one()
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def solve(ctx: FieldCtx, a_rows, b_cols):
    """Solve A X = B for X (A square invertible); B given as list of columns."""
    n = len(a_rows)
    aug = [list(a_rows[i]) + [col[i] for col in b_cols] for i in range(n)]
    red, pivots = rref(ctx, aug)
    if list(pivots[:n]) != list(range(n)):
        raise ValueError("singular system")
    ncols_b = len(b_cols)
    return [tuple(red[i][n + j] for i in range(n)) for j in range(ncols_b)]


def mat_mul(ctx: FieldCtx, a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ctx.zero()
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(ctx: FieldCtx, a, v):
    out = []
    for row in a:
        acc = ctx.zero()
        for x, y in zip(row, v):
            acc = acc + x * y
        out.append(acc)
    return tuple(out)


def transpose(a):
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def identity(ctx: FieldCtx, n):
    return tuple(
        tuple(ctx.one() if i == j else ctx.zero() for j in range(n)) for i in range(n)
    )


def det3(ctx: FieldCtx, a):
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def inverse(ctx: FieldCtx, a):
    n = len(a)
    cols = solve(ctx, a, [tuple(identity(ctx, n)[j][i] for j in range(n)) for i in range(n)])
    return transpose(mat_from_rows(cols))


def mat_int(ctx: FieldCtx, a):
    """Integer matrix -> field matrix."""
    return tuple(tuple(ctx.from_int(v) for v in row) for row in a)
