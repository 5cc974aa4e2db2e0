import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mat, sc
from koszul.cube import CubeMorphism, direct_sum, validate
from koszul.errors import H0NotExact, InvalidType, NotLiftableShape
from koszul.generate import context, split_sequence, typical_morphism, typical_type
from koszul.linalg import LMatrix
from koszul.typical import (Signature, TypicalType, blocks_of, compose_blocks, comonotone,
                            direct_sum_obstruction, fundamental, fundamental_morphism,
                            iso_characterization, lift_h0, make_typical, morphism_from_base,
                            morphism_of_blocks, naive_sum_type, split_exact_from_h0,
                            split_nondeg_deg, typ_direct_sum, ud_morphism, ud_signature, ud_type,
                            variant_iso)

T = TypicalType.of


def scalar_endo(ctx, t, text):
    ring = ctx.ring
    return morphism_from_base(ctx, t, t, LMatrix.scalar(ring, sc(ring, text), t.r))


def test_make_typical_boundaries(ctx2):
    c = make_typical(ctx2, T(2, (1, 2)))
    ring = ctx2.ring
    for m in c.masks():
        if m & 1:
            assert c.d(1, m) == mat(ring, [["x", 0], [0, 1]])
        if m & 2:
            assert c.d(2, m) == mat(ring, [["y", 0], [0, "y"]])
    assert validate(c) == []
    zero = make_typical(ctx2, T(0, (0, 0)))
    assert all(zero.rank(m) == 0 for m in zero.masks())
    fund = make_typical(ctx2, fundamental(ctx2))
    assert fund.d(2, 3) == mat(ring, [["y"]])


def test_type_bounds():
    with pytest.raises(InvalidType):
        T(1, (2,))


def test_direct_sum_examples(ctx1, ctx2):
    out, iso = typ_direct_sum(ctx2, T(2, (1, 2)), T(1, (0, 0)))
    assert out == T(3, (1, 2))
    assert iso.is_natural() and iso.is_iso()
    out, iso = typ_direct_sum(ctx2, T(2, (1, 2)), T(0, (0, 0)))
    assert out == T(2, (1, 2))
    assert all(m.is_identity() for m in iso.components)
    out, iso = typ_direct_sum(ctx1, T(1, (1,)), T(1, (1,)))
    assert out == T(2, (2,))
    assert iso.target.d(1, 1) == LMatrix.scalar(ctx1.ring, sc(ctx1.ring, "x"), 2)


def test_discordant_sum_is_not_typical(ctx2):
    t1, t2 = T(1, (1, 0)), T(1, (0, 1))
    assert not comonotone(t1, t2)
    out, iso = typ_direct_sum(ctx2, t1, t2)
    assert isinstance(out, Signature) and not out.is_chain()
    assert iso.is_natural() and iso.is_iso()
    # H_0^{1,2} of the sum is zero, but Typ(2,(1,1)) has one generator there
    assert direct_sum_obstruction(t1, t2) == ([1, 2], 0, 1)
    assert naive_sum_type(t1, t2) == T(2, (1, 1))


def test_split_nondeg_deg(ctx2):
    nd, dg, iso = split_nondeg_deg(ctx2, T(3, (2, 1)), 1)
    assert (nd, dg) == (T(2, (2, 1)), T(1, (0, 0)))
    assert iso.is_natural() and iso.is_iso()
    nd, dg, _ = split_nondeg_deg(ctx2, T(2, (0, 1)), 1)
    assert nd.r == 0
    nd, dg, _ = split_nondeg_deg(ctx2, T(2, (2, 1)), 1)
    assert dg.r == 0


def test_blocks_identity_and_composite(ctx1):
    t = T(2, (1,))
    b = blocks_of(CubeMorphism.identity(make_typical(ctx1, t)), 1, t, t)
    ring = ctx1.ring
    assert b.nn[0].is_identity() and b.dd[0].is_identity()
    assert b.dn[0].is_zero() and b.nd[0].is_zero()
    ones = morphism_from_base(ctx1, t, t, mat(ring, [[1, "x"], [1, 1]]))
    comp = blocks_of(ones @ ones, 1, t, t)
    assert [comp.nn[0], comp.dn[0], comp.nd[0], comp.dd[0]] == \
        [mat(ring, [["1+x"]]), mat(ring, [[2]]), mat(ring, [[2]]), mat(ring, [["1+x"]])]
    b1 = blocks_of(ones, 1, t, t)
    assert compose_blocks(b1, b1) == comp


def test_ud_examples(ctx1):
    assert ud_type(T(3, (1,)), 1) == T(3, (2,))
    sig = T(3, (1,)).signature()
    assert ud_signature(ud_signature(sig, 1), 1) == sig


def test_iso_characterization_examples(ctx1):
    t = fundamental(ctx1, 2)
    assert iso_characterization(scalar_endo(ctx1, t, "1+x")).as_tuple() == (True,) * 4
    assert iso_characterization(scalar_endo(ctx1, t, "x")).as_tuple() == (False,) * 4
    assert iso_characterization(scalar_endo(ctx1, t, "1")).as_tuple() == (True,) * 4


def test_lift_examples(ctx2):
    t = T(1, (1, 1))
    ring = ctx2.ring
    g = lift_h0(ctx2, mat(ring, [["1+y"]]), t, t, 1)
    assert g[0] == mat(ring, [["1+y"]]) and g.is_natural()
    assert lift_h0(ctx2, mat(ring, [[1]]), t, t, 1) == CubeMorphism.identity(make_typical(ctx2, t))
    assert all(m.is_zero() for m in lift_h0(ctx2, mat(ring, [[0]]), t, t, 1).components)
    with pytest.raises(NotLiftableShape):
        lift_h0(ctx2, mat(ring, [[1, 0]]), t, t, 1)


def test_variant_iso_examples(ctx2):
    t = T(2, (2, 1))
    assert variant_iso(scalar_endo(ctx2, t, "1"), 1) == (True, True)
    assert variant_iso(scalar_endo(ctx2, t, "1+x+y"), 1) == (True, True)
    t = T(2, (2, 2))
    assert variant_iso(scalar_endo(ctx2, t, "y"), 1) == (False, False)


def test_split_examples(ctx1, rng):
    ring = ctx1.ring
    alpha, beta = mat(ring, [[1], [0]]), mat(ring, [[0, 1]])
    out = split_exact_from_h0(ctx1, alpha, beta)
    assert out.gamma == mat(ring, [[0], [1]])
    alpha, beta = split_sequence(ring, 1, 1, rng)
    out = split_exact_from_h0(ctx1, alpha, beta)
    assert (beta @ out.gamma).is_identity()
    with pytest.raises(H0NotExact):
        split_exact_from_h0(ctx1, mat(ring, [[0]]), mat(ring, [[0]]))


# properties


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_comonotone_sums_are_typical(seed):
    rng = random.Random(seed)
    ctx = context(rng.randint(1, 3))
    t1 = typical_type(rng, ctx.indices, 3)
    t2 = typical_type(rng, ctx.indices, 3)
    out, iso = typ_direct_sum(ctx, t1, t2)
    assert iso.is_iso() and iso.is_natural()
    assert iso.source == direct_sum(make_typical(ctx, t1), make_typical(ctx, t2))
    assert comonotone(t1, t2) == (out == naive_sum_type(t1, t2))
    assert comonotone(t1, t2) == (direct_sum_obstruction(t1, t2) is None)


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_blocks_and_ud_laws(seed):
    rng = random.Random(seed)
    ctx = context(rng.randint(1, 3))
    a = typical_type(rng, ctx.indices, 3)
    b = typical_type(rng, ctx.indices, 3)
    phi = typical_morphism(ctx, a, b, rng)
    psi = typical_morphism(ctx, b, a, rng)
    sa, sb = a.signature(), b.signature()
    for s in ctx.indices:
        assert morphism_of_blocks(blocks_of(phi, s, a, b)) == phi
        ua, ub = ud_signature(sa, s), ud_signature(sb, s)
        assert ud_morphism(ud_morphism(phi, s, sa, sb), s, ua, ub) == phi
        assert ud_morphism(psi @ phi, s, sa, sa) == \
            ud_morphism(psi, s, sb, sa) @ ud_morphism(phi, s, sa, sb)
        assert compose_blocks(blocks_of(psi, s, b, a), blocks_of(phi, s, a, b)) == \
            blocks_of(psi @ phi, s, a, a)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_iso_conditions_agree(seed):
    from koszul.generate import fundamental_endomorphism
    rng = random.Random(seed)
    ctx = context(rng.randint(1, 3))
    inv = rng.random() < 0.5
    M = fundamental_endomorphism(ctx, rng.randint(1, 3), rng, inv)
    rep = iso_characterization(fundamental_morphism(ctx, M))
    assert rep.iso == inv
    assert rep.consistent()


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_split_sequences(seed):
    rng = random.Random(seed)
    ctx = context(rng.randint(1, 3))
    l, n = rng.randint(0, 2), rng.randint(0, 2)
    alpha, beta = split_sequence(ctx.ring, l, n, rng)
    out = split_exact_from_h0(ctx, alpha, beta)
    assert (beta @ out.gamma).is_identity()
    assert out.kernel @ out.delta == alpha
