import itertools

import pytest
from hypothesis import given, settings, strategies as st

from znlength.axioms import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    _max_defect_python,
    check_isolated_level,
    check_length_axioms,
    check_positivity,
    check_power_height,
    check_properness,
    check_regularity,
    hyperbolicity_defect,
    max_defect,
    product_matrix,
    properness_trend,
    replay,
    triple_defect,
)
from znlength.groupmodel import FreeAbelianGroup, FreeGroup, cyclic_table
from znlength.lengthfn import (
    LexAbsAbelian,
    ProductLength,
    TableLength,
    WeightedFree,
    WordLength,
    gromov_product,
)
from znlength.lexgroup import HalfVec, LexVec, height, project

V = LexVec.of


def table_lf(order, values):
    g = cyclic_table(order)
    names = ["1"] + ["g"] + [f"g{i}" for i in range(2, order)]
    return TableLength(g, [(g.parse_word(n), V(*v)) for n, v in zip(names, values)])


def oracle_delta(lf, r, level=0):
    """Independent brute force over HalfVec Gromov products."""
    ball = lf.model.enumerate_ball(r)
    c = {(f, g): gromov_product(lf, f, g) for f in ball for g in ball}
    if level:
        c = {k: project(v, level) for k, v in c.items()}
    best = HalfVec.from_doubled((0,) * (lf.arity - level))
    for f, g, h in itertools.product(ball, repeat=3):
        d = min(c[f, h], c[g, h]) - c[f, g]
        if d > best:
            best = d
    return best


@pytest.fixture
def l1_z2():
    return WordLength(FreeAbelianGroup(["a", "t"]))


def test_length_axioms_pass(f2_wordlen, w2, z2):
    for lf in (f2_wordlen, w2, z2):
        rep = check_length_axioms(lf, 3)
        assert rep.verdict == PASS
        assert rep.constants["violations"] == 0


def test_length_axioms_planted_negative():
    lf = table_lf(2, [(0,), (-1,)])
    rep = check_length_axioms(lf, 1)
    assert rep.verdict == FAIL
    w = rep.witnesses[0]
    assert w.values["axiom"] == "L1"
    assert lf.model.element_name(w.elements["g"]) == "g"
    assert all(replay(lf, rep, w) for w in rep.witnesses)


def test_length_axioms_witness_cap():
    lf = table_lf(2, [(0,), (-1,)])
    rep = check_length_axioms(lf, 1, max_witnesses=1)
    assert len(rep.witnesses) == 1
    assert rep.constants["violations"] >= 1


def test_ball_cap_gives_inconclusive(w2):
    rep = check_length_axioms(w2, 5, cap=20)
    assert rep.verdict == INCONCLUSIVE
    assert "cap" in rep.notes[0]
    assert hyperbolicity_defect(w2, 5, cap=20).verdict == INCONCLUSIVE


@pytest.mark.parametrize("name, expected", [("f2", (0,)), ("w2", (0, 0)), ("z2", (0, 0))])
def test_delta_examples(name, expected, f2_wordlen, w2, z2):
    lf = {"f2": f2_wordlen, "w2": w2, "z2": z2}[name]
    rep = hyperbolicity_defect(lf, 3)
    assert rep.constants["delta"] == V(*expected)
    assert rep.verdict == PASS
    assert rep.witnesses == []


def test_delta_matches_oracle_nonzero(l1_z2):
    # l1 word length on Z^2 is not 0-hyperbolic: defects appear at radius 2
    for r in range(4):
        rep = hyperbolicity_defect(l1_z2, r)
        assert rep.constants["delta"] == oracle_delta(l1_z2, r)
    assert hyperbolicity_defect(l1_z2, 2).constants["delta"] == V(1)


def test_delta_witness_realizes_maximum(l1_z2):
    rep = hyperbolicity_defect(l1_z2, 3)
    w = rep.witnesses[0]
    e = w.elements
    assert triple_defect(l1_z2, e["f"], e["g"], e["h"]) == rep.constants["delta"]
    # shortlex-least triple: no earlier triple reaches the maximum
    ball = l1_z2.model.enumerate_ball(3)
    idx = tuple(ball.index(e[k]) for k in "fgh")
    for t in itertools.product(range(len(ball)), repeat=3):
        if t >= idx:
            break
        assert triple_defect(l1_z2, *(ball[i] for i in t)) < rep.constants["delta"]


def test_no_triple_exceeds_delta(l1_z2, w2):
    for lf in (l1_z2, w2):
        ball = lf.model.enumerate_ball(2)
        delta = hyperbolicity_defect(lf, 2).constants["delta"]
        for f, g, h in itertools.product(ball, repeat=3):
            assert triple_defect(lf, f, g, h) <= delta


def test_delta_monotone_in_radius(l1_z2, w2):
    for lf in (l1_z2, w2):
        prev = None
        for r in range(4):
            d = hyperbolicity_defect(lf, r).constants["delta"]
            assert prev is None or prev <= d
            prev = d


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=4, max_size=4),
                min_size=4, max_size=4))
def test_numpy_scan_matches_python_scan(rows):
    # arbitrary matrices, not necessarily from a length function
    mat = [[tuple(x) for x in row] for row in rows]
    assert max_defect(mat) == _max_defect_python(mat)


def test_height_condition_fails_on_height_two_defect():
    # two commuting translations, one per coordinate, measured by l1 in each slot
    m = FreeAbelianGroup(["a", "t"])
    lf = ProductLength(WordLength(m), WordLength(m))
    rep = hyperbolicity_defect(lf, 2)
    assert rep.constants["delta_height"] == 2
    assert rep.verdict == FAIL
    assert replay(lf, rep, rep.witnesses[0])


def test_product_bound_height_form(l1_z2):
    # delta*(l_X, l_Y) stays in the height of (delta*_X, 0) when l_Y is 0-hyperbolic
    m = l1_z2.model
    prod = ProductLength(l1_z2, LexAbsAbelian(m))
    for r in range(4):
        dx = hyperbolicity_defect(l1_z2, r).constants["delta"]
        dp = hyperbolicity_defect(prod, r).constants["delta"]
        assert height(dp) <= height(dx)
        assert project(dp, 1).is_zero()


def test_product_bound_coordinatewise_counterexample(l1_z2):
    # the coordinatewise form fails inside the radius-3 window
    m = l1_z2.model
    prod = ProductLength(l1_z2, LexAbsAbelian(m))
    dx = hyperbolicity_defect(l1_z2, 3).constants["delta"]
    dp = hyperbolicity_defect(prod, 3).constants["delta"]
    assert dx == V(1)
    assert dp == V(2, 0, 0)


def test_product_of_trees_is_zero_hyperbolic(w2):
    prod = ProductLength(WordLength(w2.model), w2)
    assert hyperbolicity_defect(prod, 3).constants["delta"] == V(0, 0, 0)


def test_projected_defect_zero(w2, z2):
    for lf in (w2, z2):
        rep = hyperbolicity_defect(lf, 3, level=1)
        assert rep.verdict == PASS
        assert rep.constants["delta"] == V(0)
    assert oracle_delta(w2, 2, level=1) == V(0)


def test_regularity_pass(f2_wordlen, w2, z2):
    for lf in (f2_wordlen, w2, z2):
        rep = check_regularity(lf, 3, lf.zero())
        assert rep.verdict == PASS
        assert rep.constants["max_witness_gap"] == lf.zero()
        assert rep.constants["non_integral_pairs"] == 0
        n = len(lf.model.enumerate_ball(3))
        assert rep.constants["pairs_with_witness"] == n * (n + 1) // 2


def test_regularity_witnesses_are_common_prefixes(f2_wordlen):
    from znlength.axioms import regularity_witness

    m = f2_wordlen.model
    ball = m.enumerate_ball(3)
    for g in ball:
        for h in ball:
            x, y, gap = regularity_witness(f2_wordlen, g, h, 3, V(0))
            prefix = []
            for p, q in zip(g, h):
                if p != q:
                    break
                prefix.append(p)
            assert x == y == tuple(prefix)


def test_regularity_planted_gap():
    lf = table_lf(3, [(0,), (2,), (2,)])
    rep = check_regularity(lf, 2, V(0))
    assert rep.verdict == FAIL
    w = rep.witnesses[0]
    assert w.values["c(g,h)"] == V(1)
    assert replay(lf, rep, w)


def test_regularity_nonintegral_listed_separately():
    # c(g, g^2) = 1/2 on Z/3 with all nontrivial lengths 1
    lf = table_lf(3, [(0,), (1,), (1,)])
    rep = check_regularity(lf, 2, V(0))
    assert rep.constants["non_integral_pairs"] > 0
    assert rep.verdict in (INCONCLUSIVE, FAIL)


def test_properness_examples(w2, f2_wordlen):
    rep = check_properness(w2, 3, 2)
    assert rep.verdict == PASS and rep.constants["size_r"] == 5
    rep = check_properness(f2_wordlen, 2, 1)
    assert rep.verdict == PASS and rep.constants["size_r"] == 5
    assert check_properness(w2, 0, 2).verdict == INCONCLUSIVE
    assert check_properness(f2_wordlen, 2, 2).verdict == INCONCLUSIVE


def test_properness_trend():
    def uniform(m):
        return WeightedFree(FreeGroup([f"x{i}" for i in range(1, m + 1)]), [V(1)] * m)

    def weighted(m):
        return WeightedFree(FreeGroup([f"x{i}" for i in range(1, m + 1)]),
                            [V(i) for i in range(1, m + 1)])

    rep = properness_trend([(m, uniform(m)) for m in range(1, 5)], 2, 1)
    assert rep.verdict == INCONCLUSIVE
    assert rep.constants["sizes"] == {1: 3, 2: 5, 3: 7, 4: 9}
    rep = properness_trend([(m, weighted(m)) for m in range(1, 5)], 2, 1)
    assert rep.verdict == PASS
    assert set(rep.constants["sizes"].values()) == {3}


def test_power_height_pass(w2, z2):
    for lf in (w2, z2):
        rep = check_power_height(lf, 3, 4)
        assert rep.verdict == PASS
        assert rep.constants["power_decreases"] == 0
    m = z2.model
    for g in m.enumerate_ball(2):
        for k in range(-3, 4):
            assert z2(m.power(g, k)) == z2(g) * abs(k)


def test_power_height_planted():
    lf = table_lf(4, [(0, 0), (0, 2), (0, 1), (0, 2)])
    rep = check_power_height(lf, 2, 4)
    assert rep.verdict == FAIL
    assert all(replay(lf, rep, w) for w in rep.witnesses)
    assert any(w.values.get("ht(l(g)-l(g^k))") == 2 for w in rep.witnesses)
    with pytest.raises(ValueError):
        check_power_height(lf, 2, 1)


def test_isolated_level(w2, z2):
    for lf in (w2, z2):
        rep = check_isolated_level(lf, 3, 1)
        assert rep.verdict == PASS
    m = w2.model
    members = [g for g in m.enumerate_ball(3) if height(w2(g)) <= 1]
    assert members == [m.power(m.generator("a"), e) for e in (0, 1, -1, 2, -2, 3, -3)]


def test_isolated_level_planted():
    lf = table_lf(2, [(0, 0), (0, 1)])
    rep = check_isolated_level(lf, 1, 1)
    assert rep.verdict == FAIL
    assert rep.witnesses[0].values["kind"] == "isolation"
    assert replay(lf, rep, rep.witnesses[0])


def test_positivity(w2, z2):
    for lf in (w2, z2):
        assert check_positivity(lf, 3).verdict == PASS
    lf = table_lf(2, [(0,), (0,)])
    rep = check_positivity(lf, 1)
    assert rep.verdict == FAIL and replay(lf, rep, rep.witnesses[0])


def test_report_serialization(w2):
    rep = hyperbolicity_defect(w2, 2)
    d = rep.to_dict(w2.model)
    assert d["constants"]["delta"] == "(0,0)"
    assert d["verdict"] == "pass"
    assert "hyperbolicity" in rep.to_text(w2.model)


def test_product_matrix_entries(w2):
    ball = w2.model.enumerate_ball(1)
    mat = product_matrix(w2, ball, 1)
    for i, g in enumerate(ball):
        for j, h in enumerate(ball):
            assert HalfVec.from_doubled(mat[i][j]) == project(gromov_product(w2, g, h), 1)
