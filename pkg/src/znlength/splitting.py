"""HNN data read off the coset trees, one height level at a time.

For each level k the stable letters are edge-orbit representatives of the
tree at level k, the associated subgroup of a letter h is the part of G_k
that fixes hG_k, and the hierarchy report strings the levels together into
a series G_1 < G_2 < ... < G_n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import axioms
from .axioms import FAIL, INCONCLUSIVE, PASS, CheckReport, Witness
from .groupmodel import DEFAULT_BALL_CAP, IDENTITY, BallTooLarge, Word, shortlex_key
from .lengthfn import LengthFunction, hyp_translation, level_length, projected_product
from .lexgroup import LexVec, height
from .treekit import CosetTree, TreeRefused, build_coset_tree


class NotAssociated(ValueError):
    """The element is not in the associated subgroup of the letter."""


# -- stable letters -------------------------------------------------------------------


def edge_orbits(tree: CosetTree) -> list[list[Word]]:
    """Base-incident edges of the labeled graph, grouped by window-witnessed translates.

    Each edge (G_k, hG_k) is named by the representative h.  Two edges are merged
    when an element of G_k in the window carries one to the other, or when h^-1
    flips the edge onto (G_k, h^-1 G_k).
    """
    m = tree.lf.model
    base = tree.base
    nbrs = []
    for u, v in tree.gamma_edges():
        if u == base:
            nbrs.append(v.anchor)
        elif v == base:
            nbrs.append(u.anchor)
    nbrs.sort(key=shortlex_key)
    parent = {h: h for h in nbrs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            if shortlex_key(ry) < shortlex_key(rx):
                rx, ry = ry, rx
            parent[ry] = rx

    stab = tree.cosets[IDENTITY]
    for h in nbrs:
        for c in stab:
            try:
                image = tree.locate(m.multiply(c, h))
            except LookupError:
                continue
            if image in parent:
                union(h, image)
        try:
            flip = tree.locate(m.invert(h))
        except LookupError:
            continue
        if flip in parent:
            union(h, flip)
    classes: dict[Word, list[Word]] = {}
    for h in nbrs:
        classes.setdefault(find(h), []).append(h)
    return sorted(classes.values(), key=lambda c: shortlex_key(c[0]))


def stable_letters(tree: CosetTree, ball: Sequence[Word] | None = None) -> list[Word]:
    """One shortlex-least representative per edge orbit."""
    return [orbit[0] for orbit in edge_orbits(tree)]


# -- associated subgroups -------------------------------------------------------------------


def _closure(lf: LengthFunction, gens: Sequence[Word], universe: set[Word]) -> set[Word]:
    m = lf.model
    seen = {IDENTITY}
    frontier = [IDENTITY]
    steps = list(gens) + [m.invert(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for s in steps:
                y = m.multiply(x, s)
                if y in universe and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def greedy_generators(lf: LengthFunction, elements: Sequence[Word]) -> list[Word]:
    """Shortlex-greedy generators of the window portion spanned by ``elements``."""
    universe = set(elements)
    gens: list[Word] = []
    span = {IDENTITY}
    for c in sorted(elements, key=shortlex_key):
        if c not in span:
            gens.append(c)
            span = _closure(lf, gens, universe)
    return gens


def stabilizer_set(lf: LengthFunction, ball: Sequence[Word], h: Word, k: int) -> list[Word]:
    """{c in ball : ht(l(c)) <= k and ht(l(h^-1 c h)) <= k}, i.e. G_k n hG_kh^-1 in the window."""
    m = lf.model
    return [c for c in sorted(ball, key=shortlex_key)
            if height(lf(c)) <= k and height(lf(m.conjugate(c, h))) <= k]


def stabilizer_generators(lf: LengthFunction, ball: Sequence[Word], h: Word, k: int) -> list[Word]:
    """Symmetric generator list for the window stabilizer; [1] when trivial."""
    if height(lf(h)) <= k:
        raise NotAssociated("h lies in G_k, so hG_k is the base vertex")
    m = lf.model
    out: list[Word] = []
    for c in greedy_generators(lf, stabilizer_set(lf, ball, h, k)):
        out.append(c)
        ci = m.invert(c)
        if ci != c:
            out.append(ci)
    return out or [IDENTITY]


def conjugation_iso(lf: LengthFunction, h: Word, c: Word, k: int) -> Word:
    """phi_h(c) = h^-1 c h, checked to stay in G_k."""
    if height(lf(c)) > k:
        raise NotAssociated(f"ht(l(c)) = {height(lf(c))} exceeds {k}")
    image = lf.model.conjugate(c, h)
    if height(lf(image)) > k:
        raise NotAssociated(f"ht(l(h^-1 c h)) = {height(lf(image))} exceeds {k}")
    return image


# -- elliptic kernel and ranks ---------------------------------------------------------------


@dataclass
class EllipticKernel:
    elements: list[Word]
    portion: list[Word]
    normal: str
    same_l1: str
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def equals_portion(self) -> bool:
        return self.elements == self.portion


def window_portion(lf: LengthFunction, gens: Sequence[Word], window: Sequence[Word]) -> list[Word]:
    gens = [g for g in gens if g != IDENTITY]
    return sorted(_closure(lf, gens, set(window)), key=shortlex_key)


def elliptic_kernel(lf: LengthFunction, gens: Sequence[Word], window: Sequence[Word]) -> EllipticKernel:
    """E = {c in the window portion of <gens> : l_1^h(c) = 0}."""
    m = lf.model
    portion = window_portion(lf, gens, window)
    zero = LexVec.zero(lf.arity - 1)
    elements = [c for c in portion if hyp_translation(lf, c) == zero]
    witnesses = []
    normal = PASS
    for e in elements:
        for c in gens:
            x = m.conjugate(e, c)
            if hyp_translation(lf, x) != zero:
                normal = FAIL
                witnesses.append(Witness({"e": e, "c": c}, {"kind": "normality",
                                                            "l1h(c^-1 e c)": hyp_translation(lf, x)}))
    same = PASS
    nontrivial = [e for e in elements if e != IDENTITY]
    if nontrivial:
        first = level_length(lf, nontrivial[0], 1)
        for e in nontrivial[1:]:
            if level_length(lf, e, 1) != first:
                same = FAIL
                witnesses.append(Witness({"e": nontrivial[0], "f": e},
                                         {"kind": "same-l1", "l1(e)": first,
                                          "l1(f)": level_length(lf, e, 1)}))
                break
    return EllipticKernel(elements, portion, normal, same, witnesses)


def lattice_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank of the integer lattice spanned by the vectors, by exact elimination."""
    rows = [[Fraction(x) for x in v] for v in vectors if any(v)]
    rank = 0
    if not rows:
        return 0
    width = len(rows[0])
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / p[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], p)]
        rank += 1
    return rank


@dataclass
class RankReport:
    rank: int
    k: int
    values: list[LexVec]

    @property
    def bound(self) -> int:
        return self.k - 1

    @property
    def within_bound(self) -> bool:
        return self.rank <= self.bound

    @property
    def within_alternative_bound(self) -> bool:
        return self.rank <= self.k

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "bound k-1": self.bound,
            "within k-1": self.within_bound,
            "alternative bound k": self.k,
            "within k": self.within_alternative_bound,
            "l1h values": [str(v) for v in self.values],
        }


def abelian_rank(lf: LengthFunction, gens: Sequence[Word], k: int) -> RankReport:
    """Rank of the lattice spanned by l_1^h over the generators."""
    values = [hyp_translation(lf, c) for c in gens]
    return RankReport(lattice_rank([v.coords for v in values]), k, values)


# -- structure checks ----------------------------------------------------------------------


def _report(name, collector: list[Witness], scanned, inconclusive=False, notes=None) -> CheckReport:
    verdict = FAIL if collector else (INCONCLUSIVE if inconclusive else PASS)
    return CheckReport(name, 0, verdict, collector[:axioms.DEFAULT_MAX_WITNESSES],
                       {"violations": len(collector)}, scanned, list(notes or []))


def check_colinearity(lf: LengthFunction, h: Word, portion: Sequence[Word]) -> CheckReport:
    """l_1(c) = c_1(c,h) + c_1(c,c^-1) or l_1(c) = c_1(c^-1,h) + c_1(c,c^-1)."""
    m = lf.model
    bad = []
    for c in portion:
        ci = m.invert(c)
        l1 = level_length(lf, c, 1)
        mid = projected_product(lf, c, ci, 1)
        left = projected_product(lf, c, h, 1) + mid
        right = projected_product(lf, ci, h, 1) + mid
        if l1 != left and l1 != right:
            bad.append(Witness({"c": c, "h": h}, {"l1(c)": l1, "c1(c,h)+c1(c,c^-1)": left,
                                                  "c1(c^-1,h)+c1(c,c^-1)": right}))
    return _report("colinearity", bad, f"{len(portion)} window elements")


def check_l1h_subadditive(lf: LengthFunction, portion: Sequence[Word], window: set[Word]) -> tuple[CheckReport, CheckReport]:
    m = lf.model
    sub, add = [], []
    pairs = 0
    for c1 in portion:
        for c2 in portion:
            p = m.multiply(c1, c2)
            if p not in window:
                continue
            pairs += 1
            a, b, s = hyp_translation(lf, c1), hyp_translation(lf, c2), hyp_translation(lf, p)
            if s > a + b:
                sub.append(Witness({"c1": c1, "c2": c2}, {"l1h(c1c2)": s, "l1h(c1)+l1h(c2)": a + b}))
            if s != a + b:
                add.append(Witness({"c1": c1, "c2": c2}, {"l1h(c1c2)": s, "l1h(c1)+l1h(c2)": a + b}))
    scanned = f"{pairs} window pairs"
    return (_report("l1h-subadditivity", sub, scanned), _report("l1h-additivity", add, scanned))


def _common_power(m, x, y, max_exp):
    for p in range(1, max_exp + 1):
        xp = m.power(x, p)
        for q in range(-max_exp, max_exp + 1):
            if q and xp == m.power(y, q):
                return p, q
    return None


def check_kernel_cyclic(lf: LengthFunction, kernel: Sequence[Word], max_exp: int) -> CheckReport:
    """Pairwise commutation and common powers among kernel elements."""
    m = lf.model
    bad = []
    missing = []
    nontrivial = [e for e in kernel if e != IDENTITY]
    for i, x in enumerate(nontrivial):
        for y in nontrivial[i + 1:]:
            if m.multiply(x, y) != m.multiply(y, x):
                bad.append(Witness({"e": x, "f": y}, {"kind": "non-commuting"}))
            elif _common_power(m, x, y, max_exp) is None:
                missing.append((x, y))
    notes = []
    if missing:
        notes.append(f"{len(missing)} commuting pairs without a common power up to exponent {max_exp}")
    return _report("kernel-cyclic", bad, f"{len(nontrivial)} nontrivial kernel elements",
                   inconclusive=bool(missing), notes=notes)


def check_commutators_centralize(lf: LengthFunction, gens: Sequence[Word],
                                 kernel: Sequence[Word]) -> CheckReport:
    m = lf.model
    bad = []
    gens = [g for g in gens if g != IDENTITY]
    comms = []
    for x in gens:
        for y in gens:
            comms.append(m.product(m.invert(x), m.invert(y), x, y))
    for z in comms:
        for e in kernel:
            if m.multiply(z, e) != m.multiply(e, z):
                bad.append(Witness({"[x,y]": z, "e": e}, {"kind": "not central"}))
    return _report("commutators-centralize-kernel", bad,
                   f"{len(comms)} generator commutators against {len(kernel)} kernel elements")


def check_stabilizer_cyclic(lf: LengthFunction, portion: Sequence[Word], window: set[Word]) -> CheckReport:
    """Some element's window-safe powers exhaust the window stabilizer."""
    m = lf.model
    target = set(portion)
    if target <= {IDENTITY}:
        return _report("stabilizer-cyclic", [], "trivial stabilizer")
    for s in portion:
        if s == IDENTITY:
            continue
        powers = {IDENTITY}
        for sign in (1, -1):
            x = IDENTITY
            while True:
                x = m.multiply(x, s if sign > 0 else m.invert(s))
                if x not in window or x in powers:
                    break
                powers.add(x)
        if target <= powers:
            rep = _report("stabilizer-cyclic", [], f"{len(portion)} stabilizer elements")
            rep.constants["generator"] = m.format_word(s)
            return rep
    return _report("stabilizer-cyclic", [], f"{len(portion)} stabilizer elements", inconclusive=True,
                   notes=["no single window element generates the window stabilizer"])


# -- HNN data -------------------------------------------------------------------------------


@dataclass
class LetterDatum:
    letter: Word
    generators: list[Word]
    primary: list[Word]
    portion: list[Word]
    images: list[tuple[Word, Word]]
    d_window: list[Word]
    relations_verified: bool
    d_matches_images: bool
    injective: bool
    kernel: EllipticKernel
    rank: RankReport
    checks: list[CheckReport]


@dataclass
class HNNDatum:
    level: int
    letters: list[LetterDatum]
    orbit_count: int
    window_complete: bool
    tree: CosetTree
    previous_letters: list[Word] | None = None

    @property
    def stable_letters(self) -> list[Word]:
        return [d.letter for d in self.letters]


def _letter_datum(lf, ball, window_set, h, k, max_exp) -> LetterDatum:
    m = lf.model
    gens = stabilizer_generators(lf, ball, h, k)
    primary = greedy_generators(lf, stabilizer_set(lf, ball, h, k))
    portion = window_portion(lf, primary, ball)
    images = [(c, conjugation_iso(lf, h, c, k)) for c in portion]
    verified = all(m.multiply(h, phi) == m.multiply(c, h) for c, phi in images)
    hi = m.invert(h)
    d_window = stabilizer_set(lf, ball, hi, k)
    in_ball = {phi for _, phi in images if phi in window_set}
    back = {d for d in d_window if m.conjugate(d, hi) in window_set}
    matches = in_ball <= set(d_window) and all(m.conjugate(d, hi) in set(portion) for d in back)
    injective = len({phi for _, phi in images}) == len(images)
    kernel = elliptic_kernel(lf, primary, ball)
    rank = abelian_rank(lf, primary, k)
    sub, add = check_l1h_subadditive(lf, portion, window_set)
    checks = [
        check_colinearity(lf, h, portion),
        sub,
        add,
        check_kernel_cyclic(lf, kernel.elements, max_exp),
        check_commutators_centralize(lf, primary, kernel.elements),
        check_stabilizer_cyclic(lf, portion, window_set),
    ]
    return LetterDatum(h, gens, primary, portion, images, d_window, verified, matches, injective,
                       kernel, rank, checks)


def extract_level(lf: LengthFunction, ball: Sequence[Word], k: int, max_exp: int = axioms.DEFAULT_MAX_EXP,
                  previous_ball: Sequence[Word] | None = None) -> HNNDatum:
    tree = build_coset_tree(lf, ball, k)
    orbits = edge_orbits(tree)
    letters = [o[0] for o in orbits]
    window = [g for g in ball if height(lf(g)) <= k + 1]
    window_set = set(window)
    data = [_letter_datum(lf, window, window_set, h, k, max_exp) for h in letters]
    previous = None
    complete = False
    if previous_ball is not None:
        try:
            previous = stable_letters(build_coset_tree(lf, previous_ball, k))
            complete = previous == letters
        except TreeRefused:
            previous = None
    return HNNDatum(k, data, len(orbits), complete, tree, previous)


# -- presentations ------------------------------------------------------------------------


def _fmt(m, w: Word) -> str:
    return m.format_word(w, unicode=True)


def render_presentation(m, generators: Sequence[Word], relations: Sequence[tuple[Word, Word, Word]]) -> str:
    gens = ", ".join(_fmt(m, g) for g in generators)
    # the left side is written out letter by letter, not normalized
    rels = ", ".join(f"{_fmt(m, m.invert(h))}{_fmt(m, c)}{_fmt(m, h)} = {_fmt(m, phi)}"
                     for h, c, phi in relations)
    return f"⟨{gens} | {rels}⟩"


# -- hierarchy ----------------------------------------------------------------------------

SHAPE_NOTES = {
    2: "two levels: the group is expected to be hyperbolic relative to abelian parabolic "
       "subgroups (informational, not certified)",
    3: "three levels: each associated subgroup is expected to be either cyclic or "
       "virtually free abelian of rank 2 (informational, not certified)",
}

NILPOTENCY_PHRASINGS = [
    "virtually nilpotent of rank at most 3",
    "nilpotent of rank at most 3",
    "virtually free abelian of rank at most k",
]


@dataclass
class HierarchyReport:
    name: str
    arity: int
    radius: int
    conditions: list[CheckReport]
    aborted: bool
    filtration: list[dict] = field(default_factory=list)
    levels: list[HNNDatum] = field(default_factory=list)
    presentations: list[str] = field(default_factory=list)
    refusals: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    model: object = None

    @property
    def failed(self) -> bool:
        if self.aborted or self.refusals:
            return True
        for lvl in self.levels:
            for d in lvl.letters:
                if not d.relations_verified or any(c.failed for c in d.checks):
                    return True
        return False

    @property
    def inconclusive(self) -> bool:
        if any(c.verdict == INCONCLUSIVE for c in self.conditions):
            return True
        return any(not lvl.window_complete for lvl in self.levels)

    def verdict_line(self) -> str:
        if self.aborted:
            bad = ", ".join(c.check for c in self.conditions if c.failed)
            return f"verdict: hypotheses violated on the radius-{self.radius} window ({bad}); no splitting extracted"
        if self.refusals:
            return f"verdict: tree construction refused at level(s) {', '.join(str(r['level']) for r in self.refusals)}"
        series = " < ".join(f"G_{k}" for k in range(1, self.arity + 1))
        letters = ", ".join(str(len(l.letters)) for l in self.levels) or "none"
        status = "window-verified" if not self.inconclusive else "window-verified with inconclusive items"
        return (f"verdict: hypotheses {status} at radius {self.radius}; series {series}; "
                f"stable letters per level: {letters}")

    def to_dict(self) -> dict:
        m = self.model
        out = {
            "model": self.name,
            "arity": self.arity,
            "radius": self.radius,
            "verdict": self.verdict_line(),
            "conditions": [c.to_dict(m) for c in self.conditions],
            "filtration": self.filtration,
            "levels": [],
            "presentations": self.presentations,
            "refusals": self.refusals,
            "notes": self.notes,
        }
        for lvl in self.levels:
            out["levels"].append({
                "level": lvl.level,
                "stable_letters": [m.format_word(h) for h in lvl.stable_letters],
                "edge_orbits": lvl.orbit_count,
                "window": "complete" if lvl.window_complete else "partial",
                "letters_at_previous_radius": None if lvl.previous_letters is None
                else [m.format_word(h) for h in lvl.previous_letters],
                "tree": {"labeled_vertices": len(lvl.tree.labeled_vertices),
                         "path_points": len(lvl.tree.path_points),
                         "edges": len(lvl.tree.edges)},
                "letters": [_letter_dict(m, d) for d in lvl.letters],
            })
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False, sort_keys=False) + "\n"

    def to_text(self) -> str:
        m = self.model
        lines = [f"hierarchy report for {self.name} (n = {self.arity}, radius {self.radius})",
                 self.verdict_line(), "", "conditions:"]
        for c in self.conditions:
            lines.extend("  " + s for s in c.to_text(m).splitlines())
        if self.filtration:
            lines += ["", "filtration:"]
            for row in self.filtration:
                lines.append(f"  G_{row['level']}: {row['ball_elements']} ball elements, "
                             f"generators {', '.join(row['generators']) or '1'}")
        for lvl in self.levels:
            lines += ["", f"level {lvl.level}: {len(lvl.letters)} stable letter(s) "
                          f"[{'window-complete' if lvl.window_complete else 'window-partial'}]"]
            for d in lvl.letters:
                ld = _letter_dict(m, d)
                lines.append(f"  letter {ld['letter']}: C generators {', '.join(ld['C_generators'])}; "
                             f"relations verified: {ld['relations_verified']}")
                for c, phi in ld["phi"]:
                    lines.append(f"    phi({c}) = {phi}")
                lines.append(f"    D window: {', '.join(ld['D_window'])}")
                lines.append(f"    elliptic kernel: {', '.join(ld['elliptic_kernel']['elements'])} "
                             f"(normal: {ld['elliptic_kernel']['normal']}, same l1: {ld['elliptic_kernel']['same_l1']})")
                r = ld["rank"]
                lines.append(f"    rank of C/E: {r['rank']} (bound k-1 = {r['bound k-1']}: {r['within k-1']}; "
                             f"alternative bound k = {r['alternative bound k']}: {r['within k']})")
                for c in d.checks:
                    lines.append(f"    [{c.verdict.upper()}] {c.check}: {c.scanned}")
        if self.presentations:
            lines += ["", "presentations:"]
            lines.extend(f"  {p}" for p in self.presentations)
        for r in self.refusals:
            lines.append(f"refused at level {r['level']}: {r['reason']}")
        if self.notes:
            lines += ["", "notes:"]
            lines.extend(f"  {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def _letter_dict(m, d: LetterDatum) -> dict:
    f = m.format_word
    return {
        "letter": f(d.letter),
        "C_generators": [f(c) for c in d.generators],
        "C_window": [f(c) for c in d.portion],
        "phi": [[f(c), f(p)] for c, p in d.images],
        "D_window": [f(x) for x in d.d_window],
        "relations_verified": d.relations_verified,
        "D_matches_phi_image": d.d_matches_images,
        "phi_injective": d.injective,
        "elliptic_kernel": {"elements": [f(e) for e in d.kernel.elements],
                            "normal": d.kernel.normal, "same_l1": d.kernel.same_l1,
                            "equals_C": d.kernel.equals_portion},
        "rank": d.rank.to_dict(),
        "checks": [c.to_dict(m) for c in d.checks],
    }


def condition_checks(lf: LengthFunction, r: int, max_exp: int, cap: int | None) -> list[CheckReport]:
    reports = [axioms.check_length_axioms(lf, r, cap=cap)]
    hyp = axioms.hyperbolicity_defect(lf, r, cap=cap)
    reports.append(hyp)
    delta = hyp.constants.get("delta")
    reports.append(axioms.check_regularity(lf, r, delta, cap=cap))
    reports.append(axioms.check_power_height(lf, r, max_exp, cap=cap))
    reports.append(axioms.check_positivity(lf, r, cap=cap))
    for k in range(1, lf.arity):
        reports.append(axioms.check_isolated_level(lf, r, k, max_exp, cap=cap))
    reports.append(axioms.check_properness(lf, r, 1, cap=cap))
    return reports


def build_hierarchy(lf: LengthFunction, r: int, max_exp: int = axioms.DEFAULT_MAX_EXP,
                    cap: int | None = DEFAULT_BALL_CAP, name: str = "model") -> HierarchyReport:
    m = lf.model
    n = lf.arity
    conditions = condition_checks(lf, r, max_exp, cap)
    report = HierarchyReport(name, n, r, conditions, any(c.failed for c in conditions), model=m)
    report.notes.append("'primitive' subgroup read as 'isolated' subgroup")
    report.notes.append("tripod centers use the standard median of three points")
    if report.aborted:
        return report
    try:
        ball = m.enumerate_ball(r, cap)
        previous = m.enumerate_ball(r - 1, cap) if r >= 1 else None
    except BallTooLarge as exc:
        report.notes.append(str(exc))
        return report
    level_gens: list[Word] = greedy_generators(lf, [g for g in ball if height(lf(g)) <= 1])
    report.filtration.append({"level": 1, "ball_elements": sum(1 for g in ball if height(lf(g)) <= 1),
                              "generators": [_fmt(m, g) for g in level_gens]})
    if n == 1:
        report.notes.append("single level: nothing to split; the report is the delta estimate of G_1")
        return report
    relations: list[tuple[Word, Word, Word]] = []
    for k in range(1, n):
        try:
            datum = extract_level(lf, ball, k, max_exp, previous)
        except TreeRefused as exc:
            witness = {key: m.format_word(v) if isinstance(v, tuple) else str(v)
                       for key, v in exc.witness.items()}
            report.refusals.append({"level": k, "reason": str(exc), "witness": witness})
            break
        report.levels.append(datum)
        for d in datum.letters:
            for c in d.primary:
                relations.append((d.letter, c, conjugation_iso(lf, d.letter, c, k)))
        level_gens = level_gens + datum.stable_letters
        report.filtration.append({
            "level": k + 1,
            "ball_elements": sum(1 for g in ball if height(lf(g)) <= k + 1),
            "generators": [_fmt(m, g) for g in level_gens],
        })
        report.presentations.append(f"G_{k + 1} = " + render_presentation(m, level_gens, relations))
        if len(datum.letters) > m.rank:
            report.notes.append(f"level {k}: {len(datum.letters)} stable letters exceed the "
                                f"{m.rank} declared generators")
    if n in SHAPE_NOTES:
        report.notes.append(SHAPE_NOTES[n])
    report.notes.append("associated-subgroup shape phrasings checked only by rank bounds and "
                        "commutation evidence: " + "; ".join(NILPOTENCY_PHRASINGS))
    return report
