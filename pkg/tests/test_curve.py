import pytest

from hessaut.curve import (
    CurveAut,
    CurveError,
    CurvePoint,
    O,
    add,
    aut_O,
    curve,
    enumerate_points,
    flex_points,
    neg,
    on_curve,
    point_from_projective,
    projective_vector,
    scalar_mul,
    three_torsion_points,
    three_torsion_via_quartic,
    torsion_count,
    torsion_count_weierstrass,
    torsion_set_bijections,
    two_torsion_points,
)
from hessaut.ff import make_field
from hessaut.scan import sieve_primes

F5 = make_field(5)
F7 = make_field(7)
F11 = make_field(11)


def pt(ctx, x, y):
    return CurvePoint(ctx.from_int(x), ctx.from_int(y))


def test_curve_construction_rejects_bad_S():
    with pytest.raises(CurveError):
        curve(F5, 5)
    with pytest.raises(CurveError):
        curve(F5, 10)


def test_enumerate_E1_F5():
    E = curve(F5, 1)
    pts = enumerate_points(E)
    expect = {"O", "(0,0)", "(1,0)", "(4,0)", "(2,1)", "(2,4)", "(3,2)", "(3,3)"}
    assert {str(P) for P in pts} == expect
    for P in pts:
        assert on_curve(E, P)


def test_E1_F7_order_and_hasse():
    E = curve(F7, 1)
    n = len(enumerate_points(E))
    assert n == 8
    for p in (5, 7, 11, 13):
        ctx = make_field(p)
        for S in (1, 2, 3):
            if (2 * S) % p == 0:
                continue
            N = len(enumerate_points(curve(ctx, S)))
            assert abs(N - (p + 1)) <= 2 * int(p**0.5) + 1


def test_group_law_examples():
    E = curve(F5, 1)
    assert add(E, pt(F5, 2, 1), pt(F5, 2, 4)) == O
    assert add(E, pt(F5, 0, 0), pt(F5, 1, 0)) == pt(F5, 4, 0)
    assert scalar_mul(E, 2, pt(F5, 0, 0)) == O
    # the three nontrivial 2-torsion points sum pairwise into each other
    t2 = [P for P in two_torsion_points(E) if not P.infinity]
    assert add(E, t2[0], t2[1]) == t2[2]


def test_group_axioms_exhaustive_small():
    for p in (5, 13):
        ctx = make_field(p)
        E = curve(ctx, 1)
        pts = enumerate_points(E)
        for P in pts:
            assert add(E, P, O) == P
            assert add(E, P, neg(E, P)) == O
        # associativity on a full triple product for q <= 13
        for P in pts[:6]:
            for Q in pts[:6]:
                for R in pts[:6]:
                    assert add(E, add(E, P, Q), R) == add(E, P, add(E, Q, R))


def test_torsion_counts():
    assert torsion_count(curve(F11, 1), 3) == 3
    assert torsion_count(curve(F5, 1), 3) == 1
    assert torsion_count(make_curve_13(), 3) == 1


def make_curve_13():
    return curve(make_field(13), 1)


def test_quartic_route_matches():
    for p in (5, 7, 11, 13):
        ctx = make_field(p)
        for S in (1, 2, 3, 5):
            if (2 * S) % p == 0:
                continue
            E = curve(ctx, S)
            assert three_torsion_via_quartic(E) == torsion_count(E, 3)


def test_flex_points_match_torsion():
    for p in (5, 7, 11):
        ctx = make_field(p)
        E = curve(ctx, 1)
        assert set(flex_points(E)) == set(three_torsion_points(E))
    E11 = curve(F11, 1)
    fl = flex_points(E11)
    assert len(fl) == 3
    affine = [P for P in fl if not P.infinity]
    assert affine[0] == neg(E11, affine[1])


def test_two_torsion_labels():
    E = curve(F5, 1)
    t2 = two_torsion_points(E)
    assert t2[0] == O and t2[1] == pt(F5, 0, 0)
    assert {str(P) for P in t2[2:]} == {"(1,0)", "(4,0)"}
    assert torsion_count(E, 2) == 4


def test_aut_O_and_action():
    E = curve(F5, 1)
    isos = aut_O(E)
    assert len(isos) == 4
    pts = set(enumerate_points(E))
    for a in isos:
        image = {a.apply(P) for P in pts}
        assert image == pts and a.apply(O) == O
    E7 = curve(F7, 1)
    assert len(aut_O(E7)) == 2


def test_curve_aut_composition():
    E = curve(F11, 1)
    Q = three_torsion_points(E)[1]
    tau = CurveAut.translation(E, Q)
    w = F11.from_int(10)  # -1
    iso = CurveAut.isogeny(E, w)
    comp = tau.compose(iso)
    for P in enumerate_points(E):
        assert comp.apply(P) == tau.apply(iso.apply(P))


def test_torsion_set_bijections():
    sizes = torsion_set_bijections(curve(F11, 1))
    assert (sizes.s0, sizes.s1, sizes.s1S) == (2, 2, 2)
    sizes5 = torsion_set_bijections(curve(F5, 1))
    assert (sizes5.s0, sizes5.s1, sizes5.s1S) == (0, 0, 0)
    E16 = curve(F7, 16)
    s16 = torsion_set_bijections(E16)
    e = torsion_count(E16, 3)
    assert s16.s0 == s16.s1 == s16.s1S == e - 1


def test_bijections_reject_non_fourth_power():
    with pytest.raises(CurveError):
        torsion_set_bijections(curve(F5, 2))


def test_projective_roundtrip():
    E = curve(F7, 2)
    for P in enumerate_points(E):
        v = projective_vector(E, P)
        assert point_from_projective(E, v) == P
        lam = F7.from_int(3)
        assert point_from_projective(E, tuple(lam * x for x in v)) == P
    with pytest.raises(CurveError):
        point_from_projective(E, (F7.one(), F7.one(), F7.zero()))


def test_model_independence_of_torsion():
    """y^2 = x^3 - Sx and y^2 = x^3 - x/S have the same torsion counts."""
    for p in (5, 7, 11, 13, 17):
        ctx = make_field(p)
        for S in (1, 2, 3):
            if (2 * S) % p == 0 or pow(S, (p - 1) // 2, p) != 1:
                continue
            E = curve(ctx, S)
            a4 = -ctx.from_int(S)
            for n in (2, 3):
                assert torsion_count(E, n) == torsion_count_weierstrass(
                    ctx, a4, ctx.zero(), n
                )


def test_extension_field_curve():
    F49 = make_field(7, 2)
    E = curve(F49, 1)
    pts = enumerate_points(E)
    assert abs(len(pts) - 50) <= 2 * 7
    e = torsion_count(E, 3)
    assert e in (1, 3, 9)
    assert e == three_torsion_via_quartic(E)
