"""Coset trees of one height level and the left-multiplication action on them.

At level k the window is the part of a word ball lying in G_{k+1}.  Cosets
gG_k of the window are the labeled vertices; the distance between gG_k and
hG_k is coordinate k+1 of l(g^-1 h).  Every point of the tree is stored as a
pair (anchor coset, depth): the point at distance ``depth`` from the base on
the geodesic towards the anchor.  Two such pairs name the same point exactly
when the depth is at most the level product of the anchors.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .axioms import check_power_height, max_defect, product_matrix
from .groupmodel import IDENTITY, Word, shortlex_key
from .lengthfn import LengthFunction, level_length, projected_product
from .lexgroup import HalfVec, InputError, height


class OutOfWindow(LookupError):
    """The answer would need group elements beyond the materialized window."""


class TreeRefused(ValueError):
    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, order=True)
class Vertex:
    """A tree point: distance ``depth`` from the base towards coset ``anchor``.

    ``labeled`` vertices sit exactly at the end of their anchor's path.
    """

    depth: int
    anchor_key: tuple
    anchor: Word = field(compare=False)
    labeled: bool = field(compare=False)


def coset_partition(lf: LengthFunction, ball: Sequence[Word], k: int) -> dict[Word, list[Word]]:
    """Classes of g ~ h iff ht(l(g^-1 h)) <= k; keys are shortlex-least members."""
    m = lf.model
    reps: list[Word] = []
    classes: dict[Word, list[Word]] = {}
    for g in sorted(ball, key=shortlex_key):
        for r in reps:
            if height(lf(m.multiply(m.invert(r), g))) <= k:
                classes[r].append(g)
                break
        else:
            reps.append(g)
            classes[g] = [g]
    return classes


class CosetTree:
    def __init__(self, lf: LengthFunction, ball: Sequence[Word], k: int):
        if not 1 <= k < lf.arity:
            raise InputError(f"level must satisfy 1 <= k < {lf.arity}, got {k}")
        self.lf = lf
        self.level = k
        self.window = [g for g in sorted(ball, key=shortlex_key) if height(lf(g)) <= k + 1]
        if IDENTITY not in self.window:
            raise InputError("the ball must contain the identity")
        self.cosets = coset_partition(lf, self.window, k)
        self._coset_of = {g: r for r, members in self.cosets.items() for g in members}
        self.depth = {r: lf(r).coords[k] for r in self.cosets}
        # base first, then by depth and shortlex
        self.reps = sorted(self.cosets, key=lambda r: (self.depth[r], shortlex_key(r)))
        self._check_products()
        self._build()

    # -- construction -------------------------------------------------------------

    def _check_products(self):
        k = self.level
        self._c: dict[tuple[Word, Word], int] = {}
        mat = product_matrix(self.lf, self.reps, k)
        for i, g in enumerate(self.reps):
            for j, h in enumerate(self.reps):
                d = mat[i][j]
                if any(d[1:]) or d[0] % 2:
                    raise TreeRefused(
                        f"level-{k} product of coset representatives is not an integer "
                        "at the next coordinate",
                        {"g": g, "h": h, "c_k(g,h)": HalfVec.from_doubled(d)},
                    )
                self._c[g, h] = d[0] // 2
        delta, at = max_defect(mat)
        if at is not None:
            f, g, h = (self.reps[i] for i in at)
            raise TreeRefused(
                f"level-{k} products are not 0-hyperbolic on the window",
                {"f": f, "g": g, "h": h, "defect": HalfVec.from_doubled(delta)},
            )

    def _canonical(self, anchor: Word, depth: int) -> Vertex:
        for h in self.reps:
            if self._c[anchor, h] >= depth:
                return Vertex(depth, shortlex_key(h), h, self.depth[h] == depth)
        raise AssertionError("anchor not among the representatives")

    def _build(self):
        verts: dict[Vertex, None] = {}
        adj: dict[Vertex, set[Vertex]] = {}
        for r in self.reps:
            prev = None
            for s in range(self.depth[r] + 1):
                v = self._canonical(r, s)
                verts.setdefault(v)
                adj.setdefault(v, set())
                if prev is not None and prev != v:
                    adj[prev].add(v)
                    adj[v].add(prev)
                prev = v
        self.base = self._canonical(IDENTITY, 0)
        self.vertices = sorted(verts)
        self.adjacency = {v: sorted(adj[v]) for v in self.vertices}
        self.edges = sorted({tuple(sorted((u, v))) for u in adj for v in adj[u]})
        self._labeled = {r: self._canonical(r, self.depth[r]) for r in self.reps}
        self.ids = {}
        ni = np = 0
        for v in self.vertices:
            if v.labeled:
                self.ids[v] = f"v{ni}"
                ni += 1
            else:
                self.ids[v] = f"p{np}"
                np += 1

    # -- queries -------------------------------------------------------------------

    @property
    def labeled_vertices(self) -> list[Vertex]:
        return [v for v in self.vertices if v.labeled]

    @property
    def path_points(self) -> list[Vertex]:
        return [v for v in self.vertices if not v.labeled]

    def vertex_of_rep(self, rep: Word) -> Vertex:
        return self._labeled[rep]

    def representative(self, v: Vertex) -> Word:
        if not v.labeled:
            raise ValueError("path points carry no coset")
        return v.anchor

    def locate(self, g: Word) -> Word:
        """Representative of the coset gG_k, or OutOfWindow."""
        r = self._coset_of.get(g)
        if r is not None:
            return r
        m = self.lf.model
        for r in self.reps:
            if height(self.lf(m.multiply(m.invert(r), g))) <= self.level:
                return r
        raise OutOfWindow(f"coset of {m.format_word(g)} is not materialized")

    def vertex_of(self, g: Word) -> Vertex:
        return self._labeled[self.locate(g)]

    def product(self, g: Word, h: Word) -> int:
        return self._c[g, h]

    def distance(self, u: Vertex, v: Vertex) -> int:
        c = self._c[u.anchor, v.anchor]
        return u.depth + v.depth - 2 * min(u.depth, v.depth, c)

    def graph_distance(self, u: Vertex, v: Vertex) -> int:
        """Breadth-first distance; an independent check of ``distance``."""
        seen = {u: 0}
        q = deque([u])
        while q:
            x = q.popleft()
            if x == v:
                return seen[x]
            for y in self.adjacency[x]:
                if y not in seen:
                    seen[y] = seen[x] + 1
                    q.append(y)
        raise ValueError("vertices are not connected")

    def point_between(self, u: Vertex, w: Vertex, s: int) -> Vertex:
        """The point at distance s from u on the geodesic [u, w]."""
        m = min(u.depth, w.depth, self._c[u.anchor, w.anchor])
        down = u.depth - m
        if not 0 <= s <= down + (w.depth - m):
            raise ValueError("distance exceeds the geodesic")
        if s <= down:
            return self._canonical(u.anchor, u.depth - s)
        return self._canonical(w.anchor, m + (s - down))

    def geodesic(self, u: Vertex, w: Vertex) -> list[Vertex]:
        return [self.point_between(u, w, s) for s in range(self.distance(u, w) + 1)]

    def gamma_edges(self) -> list[tuple[Vertex, Vertex]]:
        """Pairs of labeled vertices whose geodesic meets no other labeled vertex."""
        lab = self.labeled_vertices
        out = []
        for i, u in enumerate(lab):
            for v in lab[i + 1:]:
                inner = self.geodesic(u, v)[1:-1]
                if not any(x.labeled for x in inner):
                    out.append((u, v))
        return out

    def is_tree(self) -> bool:
        if len(self.edges) != len(self.vertices) - 1:
            return False
        try:
            return all(self.graph_distance(self.base, v) >= 0 for v in self.vertices)
        except ValueError:
            return False

    # -- action ---------------------------------------------------------------------

    def act(self, g: Word, v: Vertex) -> Vertex:
        m = self.lf.model
        if v.labeled:
            return self.vertex_of(m.multiply(g, v.anchor))
        start = self.vertex_of(g)
        end = self.vertex_of(m.multiply(g, v.anchor))
        return self.point_between(start, end, v.depth)

    def displacement(self, g: Word, v: Vertex) -> int:
        return self.distance(v, self.act(g, v))

    def label(self, v: Vertex) -> str:
        m = self.lf.model
        sub = f"G_{self.level}"
        w = m.format_word(v.anchor)
        if " " in w:
            w = f"({w})"
        if not v.labeled:
            return f"{w}{sub}@{v.depth}"
        if v.anchor == IDENTITY:
            return sub
        return f"{w}{sub}"

    # -- exports --------------------------------------------------------------------

    def to_dot(self) -> str:
        lines = [f"graph coset_tree_level_{self.level} {{", "  node [shape=box];"]
        for v in self.vertices:
            vid = self.ids[v]
            if not v.labeled:
                lines.append(f'  "{vid}" [shape=point, label=""];')
            elif v == self.base:
                lines.append(f'  "{vid}" [label="{self.label(v)}", style="bold,filled", fillcolor=lightgrey];')
            else:
                lines.append(f'  "{vid}" [label="{self.label(v)}"];')
        for u, v in self.edges:
            lines.append(f'  "{self.ids[u]}" -- "{self.ids[v]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        m = self.lf.model
        verts = []
        for v in self.vertices:
            d = {"id": self.ids[v], "kind": "labeled" if v.labeled else "path-point",
                 "anchor": m.format_word(v.anchor), "depth": v.depth, "label": self.label(v)}
            if v.labeled:
                d["members"] = [m.format_word(g) for g in self.cosets[v.anchor]]
            verts.append(d)
        return {
            "level": self.level,
            "window_size": len(self.window),
            "base": self.ids[self.base],
            "vertices": verts,
            "edges": [[self.ids[u], self.ids[v]] for u, v in self.edges],
            "gamma_edges": [[self.ids[u], self.ids[v]] for u, v in self.gamma_edges()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [
            f"coset tree at level {self.level}: {len(self.labeled_vertices)} labeled vertices, "
            f"{len(self.path_points)} path points, {len(self.edges)} edges "
            f"(window of {len(self.window)} elements)"
        ]
        for v in self.vertices:
            nbrs = ", ".join(self.ids[u] for u in self.adjacency[v])
            lines.append(f"  {self.ids[v]} {self.label(v)} depth {v.depth} -- {nbrs}")
        return "\n".join(lines) + "\n"


def build_coset_tree(lf: LengthFunction, ball: Sequence[Word], k: int) -> CosetTree:
    return CosetTree(lf, ball, k)


def act(tree: CosetTree, g: Word, v: Vertex) -> Vertex:
    return tree.act(g, v)


# -- isometry classification -----------------------------------------------------------


@dataclass
class IsometryClass:
    element: Word
    kind: str  # elliptic | inversion | hyperbolic | inconclusive
    min_displacement: int | None
    fixed: list[Vertex] = field(default_factory=list)
    translation_length: int | None = None
    axis: list[Vertex] = field(default_factory=list)
    swapped_edge: tuple[Vertex, Vertex] | None = None
    shortcut_kind: str = ""
    shortcut_length: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def agrees_with_shortcut(self) -> bool:
        if self.kind == "inconclusive":
            return False
        if self.kind == "inversion":
            return False
        if self.kind != self.shortcut_kind:
            return False
        return self.kind != "hyperbolic" or self.translation_length == self.shortcut_length


def shortcut_class(lf: LengthFunction, g: Word, k: int) -> tuple[str, int | None]:
    """Hyperbolic iff l_k(g^2) > l_k(g); then l_k(g) - 2c_k(g, g^-1) is the translation length."""
    m = lf.model
    lk, lk2 = level_length(lf, g, k), level_length(lf, m.multiply(g, g), k)
    if lk2 > lk:
        c = projected_product(lf, g, m.invert(g), k)
        ell = (HalfVec(lk) - c * 2).to_lexvec().coords[0]
        return "hyperbolic", ell
    return "elliptic", None


def classify_isometry(tree: CosetTree, g: Word, radius: int | None = None) -> IsometryClass:
    images = {}
    for v in tree.vertices:
        try:
            images[v] = tree.act(g, v)
        except OutOfWindow:
            continue
    sk, sl = shortcut_class(tree.lf, g, tree.level)
    if not images:
        return IsometryClass(g, "inconclusive", None, shortcut_kind=sk, shortcut_length=sl,
                             notes=["no vertex has its image inside the window"])
    disp = {v: tree.distance(v, w) for v, w in images.items()}
    low = min(disp.values())
    res = IsometryClass(g, "inconclusive", low, shortcut_kind=sk, shortcut_length=sl)
    if low == 0:
        res.kind = "elliptic"
        res.fixed = [v for v in tree.vertices if disp.get(v) == 0]
        return res
    for u, v in tree.edges:
        if images.get(u) == v and images.get(v) == u:
            res.kind = "inversion"
            res.swapped_edge = (u, v)
            res.notes.append("inversion found: the action is expected to have none")
            if radius is not None:
                rep = check_power_height(tree.lf, radius)
                res.notes.append(f"power-height check on the window: {rep.verdict}")
                res.notes.extend(rep.to_text(tree.lf.model).splitlines()[1:])
            return res
    g2 = tree.lf.model.multiply(g, g)
    for v in sorted(tree.vertices, key=lambda v: (disp.get(v, low - 1) != low, v)):
        if disp.get(v) != low:
            break
        try:
            w2 = tree.act(g2, v)
        except OutOfWindow:
            continue
        if tree.distance(v, w2) == 2 * low:
            res.kind = "hyperbolic"
            res.translation_length = low
            res.axis = [x for x in tree.vertices if disp.get(x) == low]
            return res
    res.notes.append("no minimizing vertex certified to lie on an axis inside the window")
    return res


# -- tripods ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class Median:
    """Distances from each of three points to the center of their tripod."""

    from_g: HalfVec
    from_h: HalfVec
    from_f: HalfVec

    def reconstructs(self, d_gh, d_gf, d_hf) -> bool:
        return (self.from_g + self.from_h == d_gh and self.from_g + self.from_f == d_gf
                and self.from_h + self.from_f == d_hf)


def based_product(lf: LengthFunction, x: Word, y: Word, z: Word, k: int = 0) -> HalfVec:
    """(x . y)_z at level k, i.e. c_k(z^-1 x, z^-1 y)."""
    m = lf.model
    zi = m.invert(z)
    return projected_product(lf, m.multiply(zi, x), m.multiply(zi, y), k)


def median(lf: LengthFunction, g: Word, h: Word, f: Word, k: int) -> Median:
    """Tripod center of {gG_k, hG_k, fG_k}, as distances from each corner."""
    return Median(
        from_g=based_product(lf, h, f, g, k),
        from_h=based_product(lf, g, f, h, k),
        from_f=based_product(lf, g, h, f, k),
    )


def branch_point(tree: CosetTree, g: Word, h: Word, f: Word) -> Vertex:
    """The tripod center of three window cosets as a tree vertex."""
    med = median(tree.lf, g, h, f, tree.level)
    s = med.from_f
    if not s.is_integral():
        raise ValueError("tripod center is not at an integer position")
    return tree.point_between(tree.vertex_of(f), tree.vertex_of(g), s.to_lexvec().coords[0])


def level_distance_coordinate(lf: LengthFunction, g: Word, h: Word, k: int) -> int:
    m = lf.model
    return lf(m.multiply(m.invert(g), h)).coords[k]
