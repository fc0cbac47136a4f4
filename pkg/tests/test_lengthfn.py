import pytest

from znlength.groupmodel import FreeAbelianGroup, FreeGroup, IDENTITY, cyclic_table
from znlength.lengthfn import (
    DomainError,
    LexAbsAbelian,
    ProductLength,
    TableLength,
    WeightedFree,
    WordLength,
    gromov_product,
    hyp_translation,
    is_circ,
    projected_product,
    pseudometric,
)
from znlength.lexgroup import HalfVec, InputError, LexVec, project

V = LexVec.of


def prefix_weight(lf, g, h):
    """Oracle: total weight of the longest common prefix of two reduced words."""
    total = LexVec.zero(lf.arity)
    for x, y in zip(g, h):
        if x != y:
            break
        total = total + lf.weights[x[0]]
    return total


def test_evaluate_examples(w2, f2_wordlen, z2):
    m = w2.model
    assert w2(m.parse_word("t a t")) == V(1, 2)
    assert f2_wordlen(f2_wordlen.model.parse_word("a b^-1 a")) == V(3)
    assert z2(z2.model.parse_word("a^-5 t^3")) == V(-5, 3)


def test_gromov_product_examples(w2, f2_wordlen):
    f = f2_wordlen.model
    assert gromov_product(f2_wordlen, f.parse_word("a b"), f.parse_word("a")) == V(1)
    # oracle: common prefix of ab and a is a
    assert gromov_product(f2_wordlen, f.parse_word("a b"), f.parse_word("a")) == V(
        len(f.parse_word("a"))
    )
    m = w2.model
    assert gromov_product(w2, m.parse_word("t a"), m.parse_word("t^-1")) == V(0, 0)
    for g in m.enumerate_ball(2):
        assert gromov_product(w2, g, g) == w2(g)


def test_projected_product_examples(w2):
    m = w2.model
    t, at, t2 = m.parse_word("t"), m.parse_word("a t"), m.parse_word("t^2")
    assert gromov_product(w2, t, at) == V(0, 0)
    assert projected_product(w2, t, at, 1) == V(0)
    assert gromov_product(w2, t, t2) == V(0, 1)
    assert projected_product(w2, t, t2, 1) == V(1)
    assert projected_product(w2, t, t2, 0) == gromov_product(w2, t, t2)


def test_pseudometric_examples(w2, f2_wordlen):
    f = f2_wordlen.model
    a, b = f.parse_word("a"), f.parse_word("b")
    assert pseudometric(f2_wordlen, a, a) == V(0)
    assert pseudometric(f2_wordlen, a, b) == V(2)
    m = w2.model
    # oracle: t^-1 * (a t) is the reduced word t^-1 a t, weights (0,1)+(1,0)+(0,1)
    t, at = m.parse_word("t"), m.parse_word("a t")
    assert m.multiply(m.invert(t), at) == m.parse_word("t^-1 a t")
    assert pseudometric(w2, t, at) == V(1, 2)


def test_is_circ_examples(f2_wordlen, w2):
    f = f2_wordlen.model
    a, b = f.parse_word("a"), f.parse_word("b")
    assert is_circ(f2_wordlen, a, b)
    assert not is_circ(f2_wordlen, a, f.invert(a))
    for g in w2.model.enumerate_ball(2):
        assert is_circ(w2, g, IDENTITY)


def test_hyp_translation_examples(w2, z2):
    m = w2.model
    assert hyp_translation(w2, m.parse_word("t")) == V(1)
    assert hyp_translation(w2, m.parse_word("a")) == V(0)
    assert hyp_translation(z2, z2.model.parse_word("a")) == V(0)


def test_axioms_1_2_on_ball(w2, z2, f2_wordlen):
    for lf in (w2, z2, f2_wordlen):
        m = lf.model
        assert lf(IDENTITY) == lf.zero()
        for g in m.enumerate_ball(3):
            assert lf(g) == lf(m.invert(g))
            assert lf(g) >= lf.zero()


def test_gromov_product_symmetry_and_bounds(w2, z2):
    for lf in (w2, z2):
        m = lf.model
        ball = m.enumerate_ball(2)
        for g in ball:
            assert gromov_product(lf, g, IDENTITY) == lf.zero()
            for h in ball:
                c = gromov_product(lf, g, h)
                assert c == gromov_product(lf, h, g)
                assert lf.zero() <= c <= min(lf(g), lf(h))


def test_weighted_free_matches_prefix_oracle(w2):
    m = w2.model
    ball = m.enumerate_ball(3)
    for g in ball:
        for h in ball:
            assert gromov_product(w2, g, h) == prefix_weight(w2, g, h)


def test_weighted_free_validation():
    m = FreeGroup(["a", "t"])
    with pytest.raises(InputError):
        WeightedFree(m, {"a": V(-1, 0), "t": V(0, 1)})
    with pytest.raises(InputError):
        WeightedFree(m, {"a": V(1, 0)})
    with pytest.raises(InputError):
        WeightedFree(FreeAbelianGroup(["a"]), [V(1)])


def test_product_is_coordinatewise():
    m = FreeAbelianGroup(["a", "t"])
    x = WordLength(m)
    y = LexAbsAbelian(m)
    p = ProductLength(x, y)
    assert p.arity == 3
    ball = m.enumerate_ball(2)
    for g in ball:
        assert p(g) == LexVec(x(g).coords + y(g).coords)
        for h in ball:
            c = gromov_product(p, g, h)
            cx, cy = gromov_product(x, g, h), gromov_product(y, g, h)
            assert c.doubled == cx.doubled + cy.doubled
    with pytest.raises(InputError):
        ProductLength(x, LexAbsAbelian(FreeAbelianGroup(["a", "t"])))


def test_table_length_domain():
    g = cyclic_table(3)
    lf = TableLength(g, [(g.parse_word(n), V(v)) for n, v in [("1", 0), ("g", 2), ("g2", 2)]])
    assert lf(g.parse_word("g2")) == V(2)
    c = gromov_product(lf, g.parse_word("g"), g.parse_word("g2"))
    assert c == V(1)
    f = FreeGroup(["a"])
    tl = TableLength(f, [((), V(0)), (f.parse_word("a"), V(1))])
    with pytest.raises(DomainError):
        tl(f.parse_word("a^2"))
    assert not tl.covers(f.parse_word("a^2"))


def test_memo_is_transparent(w2):
    m = w2.model
    fresh = WeightedFree(m, w2.weights)
    for g in m.enumerate_ball(3):
        assert w2(g) == fresh._evaluate(g)
        assert w2(g) == w2(g)


def test_projection_commutes_with_halving(w2):
    m = w2.model
    ball = m.enumerate_ball(2)
    for g in ball:
        for h in ball:
            c = gromov_product(w2, g, h)
            assert projected_product(w2, g, h, 1) == project(c, 1)
            assert isinstance(projected_product(w2, g, h, 1), HalfVec)
