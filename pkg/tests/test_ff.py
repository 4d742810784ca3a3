import pytest
from hypothesis import given, settings, strategies as st

from hessaut.ff import (
    FieldError,
    fourth_roots_of_unity,
    is_square,
    make_field,
    sqrt,
    univariate_roots,
)

PRIMES = [5, 7, 11, 13]


def test_make_field_basics():
    F5 = make_field(5, 1)
    assert F5.q == 5
    F49 = make_field(7, 2)
    assert F49.q == 49
    # deterministic modulus: x^2 + 1 is the lex-smallest irreducible over F_7
    assert F49.modulus == (1, 0)
    assert make_field(7, 2) is F49  # cached, hence trivially identical


@pytest.mark.parametrize("p", [4, 6, 9, 15, 1])
def test_make_field_rejects_composites(p):
    with pytest.raises(FieldError):
        make_field(p)


@pytest.mark.parametrize("p", [2, 3])
def test_make_field_rejects_small_characteristic(p):
    with pytest.raises(FieldError):
        make_field(p)


def test_make_field_rejects_bad_degree():
    with pytest.raises(FieldError):
        make_field(5, 0)
    with pytest.raises(FieldError):
        make_field(5, 5)


@given(
    st.sampled_from(PRIMES),
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=0, max_value=10**6),
)
def test_field_ring_axioms_prime(p, a, b):
    ctx = make_field(p)
    x, y = ctx.from_int(a), ctx.from_int(b)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + ctx.one()) == x * y + x
    assert (x - y) + y == x


@given(st.sampled_from([(5, 2), (7, 2), (5, 3), (5, 4)]), st.data())
@settings(max_examples=60)
def test_field_axioms_extension(pf, data):
    p, f = pf
    ctx = make_field(p, f)
    i = data.draw(st.integers(min_value=0, max_value=ctx.q - 1))
    j = data.draw(st.integers(min_value=0, max_value=ctx.q - 1))
    x, y = ctx.from_index(i), ctx.from_index(j)
    assert x + y == y + x
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inv() == ctx.one()
    # Frobenius is additive and multiplicative
    assert (x + y) ** p == x**p + y**p
    assert (x * y) ** p == (x**p) * (y**p)


def test_index_roundtrip():
    ctx = make_field(5, 3)
    for i in (0, 1, 7, 63, 124):
        assert ctx.from_index(i).index() == i


def test_sqrt_examples():
    F7 = make_field(7)
    r = sqrt(F7.from_int(2))
    assert r is not None and {x.lift() for x in r} == {3, 4}
    assert sqrt(F7.from_int(3)) is None
    F11 = make_field(11)
    z = sqrt(F11.zero())
    assert z == (F11.zero(), F11.zero())


@pytest.mark.parametrize("p,f", [(5, 1), (7, 1), (11, 1), (13, 1), (5, 2), (7, 2)])
def test_sqrt_consistency(p, f):
    ctx = make_field(p, f)
    for i in range(ctx.q):
        a = ctx.from_index(i)
        rr = sqrt(a)
        if rr is None:
            assert not is_square(a)
            assert a ** ((ctx.q - 1) // 2) != ctx.one()
        else:
            r, s = rr
            assert r * r == a and s * s == a
            assert r.c <= s.c  # the fixed root is the lexicographically smaller


@pytest.mark.parametrize(
    "p,f,expected",
    [(5, 1, 4), (7, 1, 2), (11, 1, 2), (13, 1, 4), (7, 2, 4), (5, 2, 4)],
)
def test_fourth_roots_count(p, f, expected):
    ctx = make_field(p, f)
    roots = fourth_roots_of_unity(ctx)
    assert len(roots) == expected
    one = ctx.one()
    for w in roots:
        assert w**4 == one


def test_fourth_roots_f5_values():
    F5 = make_field(5)
    assert {w.lift() for w in fourth_roots_of_unity(F5)} == {1, 2, 3, 4}
    F7 = make_field(7)
    assert {w.lift() for w in fourth_roots_of_unity(F7)} == {1, 6}


def test_univariate_roots():
    F7 = make_field(7)
    assert {r.lift() for r in univariate_roots(F7, [-1, 0, 1])} == {1, 6}
    F13 = make_field(13)
    assert univariate_roots(F13, [-3, 0, 6, 0, 1]) == []
    F5 = make_field(5)
    roots = univariate_roots(F5, [-1, 0, -6, 0, 3])  # 3x^4 - 6x^2 - 1
    for r in roots:
        v = F5.from_int(3) * r**4 - F5.from_int(6) * r**2 - F5.one()
        assert v.is_zero()
    with pytest.raises(FieldError):
        univariate_roots(F7, [0, 0])


def test_division_and_pow():
    ctx = make_field(11)
    a = ctx.from_int(7)
    assert (a / a) == ctx.one()
    assert a ** (ctx.q - 1) == ctx.one()
    with pytest.raises(ZeroDivisionError):
        ctx.zero().inv()
