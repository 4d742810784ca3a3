import pytest

from hessaut.detrep import (
    DetRepError,
    build_B,
    build_fS,
    hessian_equation_solve,
    verify_det_identities,
)
from hessaut.ff import make_field
from hessaut.forms import CubicForm, ExactRing, LinFormMatrix, det_linform

R1 = ExactRing(1)


def test_build_fS():
    f = build_fS(1, R1)
    assert f.coeff((3, 0, 0)) == R1.one()
    assert f.coeff((1, 0, 2)) == R1.from_int(-1)
    assert f.coeff((0, 2, 1)) == R1.from_int(-1)
    assert len(f.coeffs) == 3
    F7 = make_field(7)
    f2 = build_fS(2, F7)
    assert f2.coeff((1, 0, 2)).lift() == 5  # -2 mod 7
    with pytest.raises(DetRepError):
        build_fS(0, R1)
    with pytest.raises(DetRepError):
        build_fS(7, F7)


def entries_int(B: LinFormMatrix):
    return [
        [tuple(B.mats[k][i][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]


def test_build_B_closed_forms_S1():
    one, z = R1.one(), R1.zero()
    m1 = build_B(1, 1).B
    # [[y3, -y2, y1], [-y2, -y1, 0], [y1, 0, y3]]
    assert entries_int(m1) == [
        [(z, z, one), (z, -one, z), (one, z, z)],
        [(z, -one, z), (-one, z, z), (z, z, z)],
        [(one, z, z), (z, z, z), (z, z, one)],
    ]
    m2 = build_B(2, 1).B
    three = R1.from_int(3)
    # [[3y1+y3, -y2, y1-y3], [-y2, -y1-y3, -y2], [y1-y3, -y2, -y1+y3]]
    assert entries_int(m2) == [
        [(three, z, one), (z, -one, z), (one, z, -one)],
        [(z, -one, z), (-one, z, -one), (z, -one, z)],
        [(one, z, -one), (z, -one, z), (-one, z, one)],
    ]


def test_B2_B3_root_swap():
    for S in (2, 3, 5):
        ring = ExactRing(S)
        r = ring.sqrt_S()
        assert build_B(3, S, sqrtS=-r, ring=ring).B == build_B(2, S, sqrtS=r, ring=ring).B
        assert build_B(2, S, sqrtS=-r, ring=ring).B == build_B(3, S, sqrtS=r, ring=ring).B


def test_build_B_validation():
    with pytest.raises(DetRepError):
        build_B(4, 1)
    with pytest.raises(DetRepError):
        build_B(1, 0)
    ring = ExactRing(2)
    with pytest.raises(DetRepError):
        build_B(2, 2, sqrtS=ring.from_int(1), ring=ring)  # 1^2 != 2
    F7 = make_field(7)
    with pytest.raises(DetRepError):
        build_B(2, 3, ring=F7)  # 3 is not a square mod 7
    with pytest.raises(DetRepError):
        build_B(1, 14, ring=F7)  # p | S


def test_det_identities_exact():
    for S in range(1, 11):
        ring = ExactRing(S)
        fS = build_fS(S, ring)
        four = ring.from_int(4)
        assert det_linform(build_B(1, S, ring=ring).B) == fS
        assert det_linform(build_B(2, S, ring=ring).B) == fS.scale(four)
        assert det_linform(build_B(3, S, ring=ring).B) == fS.scale(four)
        for i in (1, 2, 3):
            assert verify_det_identities(build_B(i, S, ring=ring)).ok


def test_det_identities_tampered():
    rep = build_B(1, 1)
    tampered = LinFormMatrix(
        R1,
        [
            rep.B.mats[0],
            rep.B.mats[1],
            tuple(
                tuple(
                    v + R1.one() if (i == j == 0) else v
                    for j, v in enumerate(row)
                )
                for i, row in enumerate(rep.B.mats[2])
            ),
        ],
    )
    rep.B = tampered
    report = verify_det_identities(rep)
    assert not report.ok
    assert "differs" in report.checks[0][2]


def test_hessian_solve_f1_exact():
    res = hessian_equation_solve(build_fS(1, R1))
    assert res.complete
    assert [(repr(a), repr(b)) for a, b in res.solutions] == [
        ("110592", "0"),
        ("442368", "24"),
        ("442368", "-24"),
    ]


@pytest.mark.parametrize("S", [2, 3, 5, 7])
def test_hessian_solve_fS_exact_nonsquare(S):
    ring = ExactRing(S)
    res = hessian_equation_solve(build_fS(S, ring))
    assert res.complete and len(res.solutions) == 3
    a0 = (48 * S * S) ** 3
    assert res.solutions[0] == (ring.from_int(a0), ring.zero())
    beta = ring.from_int(24 * S) * ring.sqrt_S()
    assert res.solutions[1] == (ring.from_int(4 * a0), beta)
    assert res.solutions[2] == (ring.from_int(4 * a0), -beta)


def test_hessian_solve_square_S():
    ring = ExactRing(4)
    res = hessian_equation_solve(build_fS(4, ring))
    assert res.complete
    assert res.solutions[1][1] == ring.from_int(192)  # 24 * 4^(3/2)


def test_hessian_solve_mod_p_matches_reduction():
    F5 = make_field(5)
    hint = F5.from_int(24)  # 24 * 1 * sqrt(1)
    res = hessian_equation_solve(build_fS(1, F5), sort_hint=hint)
    assert res.complete
    vals = [(a.lift(), b.lift()) for a, b in res.solutions]
    assert vals == [(110592 % 5, 0), (442368 % 5, 24 % 5), (442368 % 5, -24 % 5)]


def test_hessian_solve_partial_when_roots_missing():
    # S = 2 is a non-square mod 5: only the beta = 0 solution is rational
    F5 = make_field(5)
    res = hessian_equation_solve(build_fS(2, F5))
    assert not res.complete
    assert len(res.solutions) == 1 and res.solutions[0][1].is_zero()
    assert "1 of 3" in res.message


def test_hessian_solve_rejects_zero():
    with pytest.raises(DetRepError):
        hessian_equation_solve(CubicForm(R1, {}))


def test_hessian_solve_generic_smooth_cubic():
    """Fermat cubic: beta satisfies beta^3 = -2*216^2, so the root count is
    field-dependent; the solver reports exactly what the field contains."""
    F7 = make_field(7)
    fermat = {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1}
    f7 = CubicForm(F7, {e: F7.from_int(c) for e, c in fermat.items()})
    res7 = hessian_equation_solve(f7)
    # beta^3 = 5 mod 7 has no root (cubes mod 7 are {0,1,6})
    assert res7.solutions == [] and not res7.complete
    F5 = make_field(5)
    f5 = CubicForm(F5, {e: F5.from_int(c) for e, c in fermat.items()})
    res5 = hessian_equation_solve(f5)
    # cubing is a bijection mod 5: exactly one beta, flagged incomplete
    assert len(res5.solutions) == 1 and not res5.complete
    (alpha, beta) = res5.solutions[0]
    assert beta == F5.from_int(2)  # 2^3 = 8 = 3 = -2*216^2 mod 5
