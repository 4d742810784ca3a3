from fractions import Fraction

import pytest

from hessaut.detrep import build_B, build_fS
from hessaut.ff import make_field
from hessaut.forms import (
    CubicForm,
    ExactElem,
    ExactRing,
    LinForm,
    LinFormMatrix,
    det_linform,
    dual,
    evaluate,
    hessian_det,
    hessian_matrix,
    matrix_rank3,
    rank_profile,
)

R1 = ExactRing(1)


def cubic(ring, entries):
    return CubicForm(ring, {e: ring.from_int(c) for e, c in entries.items()})


def test_exact_ring_arithmetic():
    R3 = ExactRing(3)
    s = R3.sqrt_S()
    assert s * s == R3.from_int(3)
    x = ExactElem(R3, Fraction(1, 3), Fraction(2, 3))
    y = x.inv()
    assert x * y == R3.one()
    # square S folds the root into the rationals
    R4 = ExactRing(4)
    assert R4.sqrt_S() == R4.from_int(2)
    assert ExactElem(R4, 0, 1) == R4.from_int(2)


def test_exact_ring_rejects_zero_S():
    with pytest.raises(ValueError):
        ExactRing(0)


def test_hessian_matrix_of_f1():
    f1 = build_fS(1, R1)
    H = hessian_matrix(f1)
    expect = [
        [(6, 0, 0), (0, 0, 0), (0, 0, -2)],
        [(0, 0, 0), (0, 0, -2), (0, -2, 0)],
        [(0, 0, -2), (0, -2, 0), (-2, 0, 0)],
    ]
    for i in range(3):
        for j in range(3):
            assert H.entry(i, j) == LinForm(R1, [R1.from_int(c) for c in expect[i][j]])


def test_hessian_matrix_zero_form():
    z = CubicForm(R1, {})
    assert hessian_matrix(z).is_zero()


def test_hessian_det_f1():
    f1 = build_fS(1, R1)
    h = hessian_det(f1)
    # 8(y3^3 + 3 y1^2 y3 - 3 y1 y2^2)
    assert h == cubic(R1, {(0, 0, 3): 8, (2, 0, 1): 24, (1, 2, 0): -24})
    hh = hessian_det(h)
    assert (hh - f1.scale(R1.from_int(48**3))).is_zero()


def test_hessian_det_xyz():
    f = cubic(R1, {(1, 1, 1): 1})
    assert hessian_det(f) == cubic(R1, {(1, 1, 1): 2})


def test_hessian_of_hessian_is_48B11():
    f1 = build_fS(1, R1)
    HH = hessian_matrix(hessian_det(f1))
    B11 = build_B(1, 1, ring=R1).B
    assert HH == B11.scale(R1.from_int(48))


def test_dual_self_dual_and_involution():
    for S in (1, 2, 5):
        ring = ExactRing(S)
        for i in (1, 2, 3):
            B = build_B(i, S, ring=ring).B
            assert dual(B) == B
    # a non-Hessian matrix: dual is an involution but not the identity
    ring = R1
    z, one = ring.zero(), ring.one()
    B = LinFormMatrix(
        ring,
        [  # B^(1) = I, B^(2) = B^(3) = 0
            ((one, z, z), (z, one, z), (z, z, one)),
            ((z, z, z), (z, z, z), (z, z, z)),
            ((z, z, z), (z, z, z), (z, z, z)),
        ],
    )
    D = dual(B)
    # first column of D(x) is (x1, x2, x3), other columns zero
    assert D.entry(0, 0) == LinForm(ring, (one, z, z))
    assert D.entry(1, 0) == LinForm(ring, (z, one, z))
    assert D.entry(2, 0) == LinForm(ring, (z, z, one))
    assert D.entry(0, 1).is_zero() and D.entry(2, 2).is_zero()
    assert dual(D) == B


def test_dual_pairing_identity():
    """dual(B)(x) y^T = B(y) x^T, checked by exhaustive evaluation over F_5."""
    ctx = make_field(5)
    B = build_B(2, 1, ring=ctx).B
    Bd = dual(B)
    pts = [(a, b, c) for a in range(2) for b in range(3) for c in range(2)]
    for xv in pts:
        for yv in pts:
            x = tuple(ctx.from_int(v) for v in xv)
            y = tuple(ctx.from_int(v) for v in yv)
            Mx = evaluate(Bd, x)
            My = evaluate(B, y)
            lhs = tuple(
                sum((Mx[i][j] * y[j] for j in range(3)), ctx.zero()) for i in range(3)
            )
            rhs = tuple(
                sum((My[i][j] * x[j] for j in range(3)), ctx.zero()) for i in range(3)
            )
            assert lhs == rhs


def test_evaluate_and_rank():
    ctx = make_field(5)
    B = build_B(1, 1, ring=ctx).B
    u = (ctx.zero(), ctx.zero(), ctx.one())
    M = evaluate(B, u)
    lifted = [[x.lift() for x in row] for row in M]
    assert lifted == [[1, 0, 0], [0, 0, 0], [0, 0, 1]]
    assert matrix_rank3(M) == 2
    u2 = (ctx.one(), ctx.zero(), ctx.zero())
    M2 = evaluate(B, u2)
    assert [[x.lift() for x in row] for row in M2] == [[0, 0, 1], [0, 4, 0], [1, 0, 0]]
    assert matrix_rank3(M2) == 3


def test_det_evaluate_commutes():
    ctx = make_field(7)
    B = build_B(3, 2, ring=ctx).B
    detB = det_linform(B)
    for i1 in range(7):
        for i2 in range(7):
            u = (ctx.from_index(i1), ctx.from_index(i2), ctx.from_int(3))
            M = evaluate(B, u)
            d = (
                M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
                - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
                + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
            )
            assert d == detB.evaluate(u)


def test_rank_profile_clean_and_degenerate():
    ctx = make_field(5)
    assert rank_profile(build_B(1, 1, ring=ctx).B, ctx).ok
    F7 = make_field(7)
    assert rank_profile(build_B(2, 1, ring=F7).B, F7).ok
    # diag(y1, y1, y1) breaks the pattern: rank 0 on the whole plane y1 = 0
    z, one = ctx.zero(), ctx.one()
    D = LinFormMatrix(
        ctx,
        [
            ((one, z, z), (z, one, z), (z, z, one)),
            ((z, z, z), (z, z, z), (z, z, z)),
            ((z, z, z), (z, z, z), (z, z, z)),
        ],
    )
    prof = rank_profile(D, ctx)
    assert not prof.ok and prof.violations


def test_cubic_render_is_graded_lex():
    f = build_fS(2, ExactRing(2))
    assert f.render() == "(1)*y1^3 + (-2)*y1*y3^2 + (-2)*y2^2*y3"
