import cmath
import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codespectra.gf import (
    FieldCtx,
    FieldElement,
    PRIMITIVE_POLYS_GF2,
    additive_character,
    field_arith,
    is_irreducible,
    trace,
)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3),
                (5, 1), (5, 2), (7, 1), (7, 2)]


def gf4():
    ctx = FieldCtx(2, 2, modulus=(1, 1, 1))
    return ctx, ctx.element(2)  # alpha = x


def test_one_plus_one_in_gf2():
    ctx = FieldCtx(2)
    assert field_arith(ctx.one(), ctx.one(), "add") == ctx.zero()


def test_alpha_squared_in_gf4():
    ctx, a = gf4()
    assert a * a == ctx.element([1, 1])
    assert field_arith(a, a, "mul").value == 3


def test_default_gf4_modulus_is_x2_x_1():
    assert FieldCtx(2, 2).modulus_poly == (1, 1, 1)


@pytest.mark.parametrize("l,m", SMALL_FIELDS)
def test_inverse_of_every_nonzero_element(l, m):
    ctx = FieldCtx(l, m)
    for v in range(1, ctx.q):
        x = ctx.element(v)
        assert x * x.inverse() == ctx.one()
        assert field_arith(x, x, "inv") == x.inverse()


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        FieldCtx(3, 2).zero().inverse()


def test_trace_examples():
    ctx, a = gf4()
    assert trace(ctx.zero()) == 0
    assert trace(a) == 1
    gf2 = FieldCtx(2)
    assert [trace(gf2.element(v)) for v in (0, 1)] == [0, 1]


def test_character_examples():
    assert additive_character(FieldCtx(5, 2).zero()) == 1
    assert additive_character(FieldCtx(2).one()) == -1
    z = additive_character(FieldCtx(3).one())
    assert abs(z - cmath.exp(2j * cmath.pi / 3)) < 1e-15
    assert abs(z - complex(-0.5, 0.8660254037844386)) < 1e-12


def test_bad_parameters_rejected():
    with pytest.raises(ValueError):
        FieldCtx(4)
    with pytest.raises(ValueError):
        FieldCtx(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(ValueError):
        FieldCtx(2, 21)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        FieldCtx(2, 3).one() + FieldCtx(2, 4).one()


@pytest.mark.parametrize("m", sorted(PRIMITIVE_POLYS_GF2))
def test_pinned_polynomials_are_irreducible(m):
    ctx = FieldCtx(2, m)
    assert is_irreducible(ctx.modulus_poly, 2)
    if m <= 16:
        # primitivity: x generates the multiplicative group
        assert ctx._order(ctx._x_value()) == ctx.q - 1


@pytest.mark.parametrize("l,m", [(2, 4), (3, 2), (5, 2), (2, 8)])
def test_array_ops_match_scalar_ops(l, m):
    ctx = FieldCtx(l, m)
    a, b = np.meshgrid(np.arange(ctx.q), np.arange(ctx.q))
    a, b = a.ravel(), b.ravel()
    add, mul, sub = ctx.add_arr(a, b), ctx.mul_arr(a, b), ctx.sub_arr(a, b)
    for i in range(0, a.size, 7):
        assert add[i] == ctx.add(int(a[i]), int(b[i]))
        assert mul[i] == ctx.mul(int(a[i]), int(b[i]))
        assert sub[i] == ctx.sub(int(a[i]), int(b[i]))
    nz = np.arange(1, ctx.q)
    assert np.all(ctx.mul_arr(nz, ctx.inv_arr(nz)) == 1)
    assert np.all(ctx.add_arr(nz, ctx.neg_arr(nz)) == 0)


@pytest.mark.parametrize("l,m", [(2, 5), (3, 3), (5, 2), (2, 10)])
def test_character_multiplicative_over_addition(l, m):
    ctx = FieldCtx(l, m)
    rng = np.random.default_rng(1)
    a = rng.integers(0, ctx.q, 1000)
    b = rng.integers(0, ctx.q, 1000)
    lhs = ctx.character_arr(ctx.add_arr(a, b))
    rhs = ctx.character_arr(a) * ctx.character_arr(b)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@pytest.mark.parametrize("l,m", [f for f in SMALL_FIELDS if f[0] ** f[1] <= 64])
def test_character_orthogonality(l, m):
    ctx = FieldCtx(l, m)
    z = np.arange(ctx.q)
    for x in range(ctx.q):
        s = ctx.character_arr(ctx.mul_arr(z, np.full_like(z, x))).sum()
        if x == 0:
            assert s == ctx.q
        else:
            assert abs(s) < 1e-9 * ctx.q


@pytest.mark.parametrize("l,m", [(2, 1), (2, 4), (2, 8), (3, 1), (3, 3), (3, 5), (5, 3), (7, 2), (13, 2)])
def test_trace_fibres_have_equal_size(l, m):
    ctx = FieldCtx(l, m)
    counts = np.bincount(ctx.trace_table, minlength=l)
    assert counts.tolist() == [ctx.q // l] * l
    # table agrees with the Frobenius sum
    for v in range(0, ctx.q, max(1, ctx.q // 17)):
        assert ctx.trace_table[v] == ctx.trace(v)


fields = st.sampled_from([FieldCtx(2, 4), FieldCtx(3, 2), FieldCtx(5, 1), FieldCtx(2, 7)])


@settings(max_examples=200, deadline=None)
@given(fields, st.data())
def test_field_axioms(ctx, data):
    draw = st.integers(0, ctx.q - 1)
    a, b, c = (ctx.element(data.draw(draw)) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert a + (-a) == ctx.zero()
    assert (a * b) * c == a * (b * c)
    if b:
        assert (a / b) * b == a
    assert a ** ctx.q == a  # Frobenius fixes the whole field
    assert trace(a + b) == (trace(a) + trace(b)) % ctx.l


def test_int_operands_are_prime_field_constants():
    ctx = FieldCtx(3, 2)
    x = ctx.element(5)
    assert x + 0 == x
    assert x * 1 == x
    assert x * 2 == x + x


def test_context_pickles_without_tables():
    ctx = FieldCtx(2, 6)
    _ = ctx.exp_table
    clone = pickle.loads(pickle.dumps(ctx))
    assert clone == ctx and hash(clone) == hash(ctx)
    assert clone.mul(17, 33) == ctx.mul(17, 33)
    assert isinstance(ctx.element(3), FieldElement)
