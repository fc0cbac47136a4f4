import itertools

import pytest

from znlength.axioms import check_power_height
from znlength.groupmodel import FreeAbelianGroup, FreeGroup, IDENTITY, cyclic_table
from znlength.lengthfn import ProductLength, TableLength, WeightedFree, WordLength
from znlength.lexgroup import InputError, LexVec, height
from znlength.treekit import (
    OutOfWindow,
    TreeRefused,
    act,
    branch_point,
    build_coset_tree,
    classify_isometry,
    coset_partition,
    level_distance_coordinate,
    median,
    shortcut_class,
)

V = LexVec.of


@pytest.fixture
def w2_tree(w2):
    return build_coset_tree(w2, w2.model.enumerate_ball(2), 1)


@pytest.fixture
def w2_tree3(w2):
    return build_coset_tree(w2, w2.model.enumerate_ball(3), 1)


@pytest.fixture
def long_t():
    # t has length 2 at the top level, so every path to tG_1 has an unlabeled midpoint
    return WeightedFree(FreeGroup(["a", "t"]), {"a": V(1, 0), "t": V(0, 2)})


def fmt(tree, verts):
    return sorted(tree.label(v) for v in verts)


def test_partition_examples(w2, z2):
    m = w2.model
    classes = coset_partition(w2, m.enumerate_ball(2), 1)
    reps = {m.format_word(r) for r in classes}
    assert reps == {"1", "t", "t^-1", "t^2", "t^-2", "a t", "a t^-1", "a^-1 t", "a^-1 t^-1"}
    assert sum(len(c) for c in classes.values()) == 17
    z = z2.model
    zc = coset_partition(z2, z.enumerate_ball(2), 1)
    assert {z.format_word(r) for r in zc} == {"1", "t", "t^-1", "t^2", "t^-2"}
    assert len(coset_partition(w2, m.enumerate_ball(2), 2)) == 1


def test_partition_reps_are_shortlex_least(w2):
    from znlength.groupmodel import shortlex_key

    classes = coset_partition(w2, w2.model.enumerate_ball(3), 1)
    for r, members in classes.items():
        assert r == min(members, key=shortlex_key)


def test_left_multiplication_permutes_classes(w2):
    m = w2.model
    ball2 = m.enumerate_ball(2)
    classes = coset_partition(w2, ball2, 1)
    for g in m.enumerate_ball(1):
        for members in classes.values():
            for u, v in itertools.combinations(members, 2):
                gu, gv = m.multiply(g, u), m.multiply(g, v)
                assert height(w2(m.multiply(m.invert(gu), gv))) <= 1


def test_w2_tree_shape(w2_tree):
    t = w2_tree
    assert len(t.labeled_vertices) == 9
    assert len(t.edges) == 8
    assert t.path_points == []
    assert t.is_tree()
    assert len(t.adjacency[t.base]) == 6
    m = t.lf.model
    t1 = t.vertex_of(m.parse_word("t"))
    t2 = t.vertex_of(m.parse_word("t^2"))
    assert t.adjacency[t2] == [t1]
    assert set(map(tuple, t.gamma_edges())) == set(t.edges)


def test_metric_fidelity(w2_tree, w2):
    t = w2_tree
    pairs = 0
    for u, v in itertools.combinations(t.labeled_vertices, 2):
        expected = level_distance_coordinate(w2, u.anchor, v.anchor, 1)
        assert t.graph_distance(u, v) == expected == t.distance(u, v)
        pairs += 1
    assert pairs == 36
    for v in t.labeled_vertices:
        assert t.graph_distance(t.base, v) == w2(v.anchor).coords[1]


def test_distance_is_graph_distance_with_path_points(long_t):
    t = build_coset_tree(long_t, long_t.model.enumerate_ball(2), 1)
    assert t.path_points, "midpoints of t-edges are not cosets"
    assert t.is_tree()
    for u, v in itertools.product(t.vertices, repeat=2):
        assert t.distance(u, v) == t.graph_distance(u, v)
    # labeled adjacency skips the unlabeled midpoints
    lab_edges = t.gamma_edges()
    assert all(t.distance(u, v) == 2 for u, v in lab_edges)


def test_z2_line(z2):
    t = build_coset_tree(z2, z2.model.enumerate_ball(3), 1)
    assert len(t.vertices) == 7 and len(t.edges) == 6
    degrees = sorted(len(t.adjacency[v]) for v in t.vertices)
    assert degrees == [1, 1, 2, 2, 2, 2, 2]
    m = z2.model
    ends = [v for v in t.vertices if len(t.adjacency[v]) == 1]
    assert fmt(t, ends) == ["t^-3G_1", "t^3G_1"]
    assert t.distance(*ends) == 6
    assert t.path_points == []
    for n in range(-3, 4):
        v = t.vertex_of(m.power(m.generator("t"), n))
        assert t.distance(t.base, v) == abs(n)


def test_degenerate_ball(w2):
    t = build_coset_tree(w2, w2.model.enumerate_ball(0), 1)
    assert t.vertices == [t.base] and t.edges == []
    assert t.to_dot().count("--") == 0


def test_level_range(w2):
    with pytest.raises(InputError):
        build_coset_tree(w2, w2.model.enumerate_ball(1), 2)
    with pytest.raises(InputError):
        build_coset_tree(w2, w2.model.enumerate_ball(1), 0)


def test_act_examples(w2_tree):
    t = w2_tree
    m = t.lf.model
    a, tt = m.parse_word("a"), m.parse_word("t")
    assert act(t, a, t.vertex_of(tt)) == t.vertex_of(m.parse_word("a t"))
    assert act(t, tt, t.base) == t.vertex_of(tt)
    assert act(t, a, t.base) == t.base
    with pytest.raises(OutOfWindow):
        act(t, tt, t.vertex_of(m.parse_word("t^2")))


def test_action_is_isometric(w2_tree3, long_t):
    trees = [w2_tree3, build_coset_tree(long_t, long_t.model.enumerate_ball(3), 1)]
    for t in trees:
        m = t.lf.model
        for g in m.enumerate_ball(1):
            img = {}
            for v in t.vertices:
                try:
                    img[v] = t.act(g, v)
                except OutOfWindow:
                    pass
            for u, v in itertools.combinations(img, 2):
                assert t.distance(u, v) == t.distance(img[u], img[v])


def test_path_point_interpolation(long_t):
    t = build_coset_tree(long_t, long_t.model.enumerate_ball(2), 1)
    m = long_t.model
    mid = t.point_between(t.base, t.vertex_of(m.parse_word("t")), 1)
    assert not mid.labeled
    image = t.act(m.parse_word("a"), mid)
    assert t.distance(image, t.vertex_of(m.parse_word("a t"))) == 1
    assert t.distance(image, t.base) == 1


def test_classify_examples(w2_tree3, z2):
    t = w2_tree3
    m = t.lf.model
    c = classify_isometry(t, m.parse_word("t"))
    assert c.kind == "hyperbolic" and c.translation_length == 1
    labels = fmt(t, c.axis)
    assert {"G_1", "tG_1", "t^2G_1"} <= set(labels)
    c = classify_isometry(t, m.parse_word("a"))
    assert c.kind == "elliptic" and t.base in c.fixed
    zt = build_coset_tree(z2, z2.model.enumerate_ball(3), 1)
    c = classify_isometry(zt, z2.model.parse_word("a"))
    assert c.kind == "elliptic" and c.fixed == zt.vertices


def test_trichotomy_agrees_with_shortcut(w2, z2):
    for lf in (w2, z2):
        t = build_coset_tree(lf, lf.model.enumerate_ball(3), 1)
        assert check_power_height(lf, 3).passed
        for g in lf.model.enumerate_ball(2):
            c = classify_isometry(t, g, radius=3)
            assert c.kind != "inversion"
            assert c.agrees_with_shortcut, lf.model.format_word(g)


def test_shortcut_translation_formula(w2):
    m = w2.model
    assert shortcut_class(w2, m.parse_word("t"), 1) == ("hyperbolic", 1)
    assert shortcut_class(w2, m.parse_word("a t a^-1"), 1) == ("hyperbolic", 1)
    assert shortcut_class(w2, m.parse_word("t a t^-1"), 1) == ("elliptic", None)


def test_elliptic_displacement_rule(w2_tree3):
    t = w2_tree3
    m = t.lf.model
    for g in m.enumerate_ball(2):
        c = classify_isometry(t, g)
        if c.kind != "elliptic":
            continue
        for v in t.vertices:
            try:
                w = t.act(g, v)
            except OutOfWindow:
                continue
            d_fix = min(t.distance(v, f) for f in c.fixed)
            assert t.distance(v, w) == 2 * d_fix


def test_window_too_small_is_inconclusive(w2_tree):
    m = w2_tree.lf.model
    c = classify_isometry(w2_tree, m.parse_word("a t a^-1 t^-1"))
    assert c.kind == "inconclusive"
    assert c.min_displacement == 2
    assert c.notes


def test_median_examples(w2):
    m = w2.model
    t, at, t2 = m.parse_word("t"), m.parse_word("a t"), m.parse_word("t^2")
    assert median(w2, t, at, IDENTITY, 1).from_f == V(0)
    assert median(w2, t2, t, IDENTITY, 1).from_f == V(1)
    g = m.parse_word("t a")
    assert median(w2, g, g, IDENTITY, 0).from_f == w2(g)


def test_median_tripod_identities(w2):
    m = w2.model
    ball = m.enumerate_ball(2)
    for g, h, f in itertools.islice(itertools.product(ball, repeat=3), 0, None, 7):
        med = median(w2, g, h, f, 1)

        def d(x, y):
            return LexVec(w2(m.multiply(m.invert(x), y)).coords[1:])

        assert med.reconstructs(d(g, h), d(g, f), d(h, f))


def test_branch_point(w2_tree):
    t = w2_tree
    m = t.lf.model
    tt, at, t2 = m.parse_word("t"), m.parse_word("a t"), m.parse_word("t^2")
    assert branch_point(t, tt, at, IDENTITY) == t.base
    assert branch_point(t, t2, tt, IDENTITY) == t.vertex_of(tt)


def test_refuses_non_hyperbolic_level():
    m = FreeAbelianGroup(["a", "t"])
    lf = ProductLength(WordLength(m), WordLength(m))
    with pytest.raises(TreeRefused) as exc:
        build_coset_tree(lf, m.enumerate_ball(2), 1)
    w = exc.value.witness
    assert {"f", "g", "h", "defect"} <= set(w)


def test_refuses_non_integral_products():
    g = cyclic_table(3)
    lf = TableLength(g, [(g.parse_word("1"), V(0, 0)), (g.parse_word("g"), V(0, 1)),
                         (g.parse_word("g2"), V(0, 1))])
    with pytest.raises(TreeRefused, match="not an integer"):
        build_coset_tree(lf, g.enumerate_ball(2), 1)


def test_dot_export(w2_tree, long_t):
    dot = w2_tree.to_dot()
    assert dot == w2_tree.to_dot()
    assert dot.startswith("graph coset_tree_level_1 {")
    assert 'node [shape=box]' in dot and 'fillcolor=lightgrey' in dot
    assert dot.count(" -- ") == 8
    assert '"v7" [label="t^2G_1"];' in dot
    pt = build_coset_tree(long_t, long_t.model.enumerate_ball(2), 1).to_dot()
    assert "shape=point" in pt


def test_json_and_text_exports(w2_tree):
    import json

    d = json.loads(w2_tree.to_json())
    assert d["base"] == "v0"
    assert len(d["vertices"]) == 9 and len(d["edges"]) == 8
    assert d["vertices"][0]["members"] == ["1", "a", "a^-1", "a^2", "a^-2"]
    assert "9 labeled vertices" in w2_tree.to_text()
