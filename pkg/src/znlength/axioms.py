"""Desk-scale verification of the hypotheses placed on a length function.

Every check scans an enumerated word ball and returns a ``CheckReport``.  A
pass is always relative to the scanned ball; a fail always carries at least
one fully evaluated witness that ``replay`` can re-check in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .groupmodel import DEFAULT_BALL_CAP, IDENTITY, BallTooLarge, GroupModel, Word
from .lengthfn import (
    DomainError,
    LengthFunction,
    doubled_product,
    gromov_product,
    level_length,
)
from .lexgroup import HalfVec, LexEncoder, LexVec, as_half, height, project

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

DEFAULT_MAX_WITNESSES = 10
DEFAULT_MAX_EXP = 4


@dataclass
class Witness:
    elements: dict[str, Word]
    values: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, model: GroupModel) -> dict:
        return {
            "elements": {k: model.format_word(w) for k, w in self.elements.items()},
            "values": {k: _render(v) for k, v in self.values.items()},
        }


@dataclass
class CheckReport:
    check: str
    radius: int
    verdict: str
    witnesses: list[Witness] = field(default_factory=list)
    constants: dict[str, Any] = field(default_factory=dict)
    scanned: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_dict(self, model: GroupModel) -> dict:
        return {
            "check": self.check,
            "radius": self.radius,
            "verdict": self.verdict,
            "scanned": self.scanned,
            "constants": {k: _render(v) for k, v in self.constants.items()},
            "witnesses": [w.to_dict(model) for w in self.witnesses],
            "notes": list(self.notes),
        }

    def to_text(self, model: GroupModel) -> str:
        lines = [f"[{self.verdict.upper()}] {self.check} (radius {self.radius}): {self.scanned}"]
        for k, v in self.constants.items():
            lines.append(f"    {k} = {_render(v)}")
        for w in self.witnesses:
            d = w.to_dict(model)
            elems = ", ".join(f"{k}={v}" for k, v in d["elements"].items())
            vals = ", ".join(f"{k}={v}" for k, v in d["values"].items())
            lines.append(f"    witness: {elems}; {vals}")
        for n in self.notes:
            lines.append(f"    note: {n}")
        return "\n".join(lines)


def _render(v):
    if isinstance(v, (LexVec, HalfVec)):
        return str(v)
    if isinstance(v, tuple) and v and isinstance(v[0], tuple):
        return [list(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _render(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_render(x) for x in v]
    return v


def _ball(lf: LengthFunction, r: int, cap: int | None) -> list[Word]:
    return lf.model.enumerate_ball(r, cap)


def _too_large(check: str, r: int, exc: BallTooLarge) -> CheckReport:
    return CheckReport(check, r, INCONCLUSIVE, scanned="not scanned", notes=[str(exc)])


class _Collector:
    def __init__(self, limit: int):
        self.limit = limit
        self.witnesses: list[Witness] = []
        self.count = 0
        self.skipped = 0

    def add(self, w: Witness):
        self.count += 1
        if len(self.witnesses) < self.limit:
            self.witnesses.append(w)

    def verdict(self) -> str:
        if self.count:
            return FAIL
        return INCONCLUSIVE if self.skipped else PASS


def _finish(check, r, col: _Collector, scanned, constants=None, notes=None) -> CheckReport:
    constants = dict(constants or {})
    constants["violations"] = col.count
    notes = list(notes or [])
    if col.skipped:
        notes.append(f"{col.skipped} evaluations fell outside the length table and were skipped")
    return CheckReport(check, r, col.verdict(), col.witnesses, constants, scanned, notes)


# -- violation predicates (shared by scans and replay) ------------------------


def _lambda1(lf, g):
    v = lf(g)
    if v < lf.zero() or (g == IDENTITY and not v.is_zero()):
        return {"axiom": "L1", "l(g)": v}
    return None


def _lambda2(lf, g):
    gi = lf.model.invert(g)
    if lf(g) != lf(gi):
        return {"axiom": "L2", "l(g)": lf(g), "l(g^-1)": lf(gi)}
    return None


def _lambda3(lf, g, h):
    gh = lf.model.multiply(g, h)
    if lf(gh) > lf(g) + lf(h):
        return {"axiom": "L3", "l(gh)": lf(gh), "l(g)+l(h)": lf(g) + lf(h)}
    return None


def check_length_axioms(
    lf: LengthFunction,
    r: int,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    try:
        ball = _ball(lf, r, cap)
    except BallTooLarge as exc:
        return _too_large("length-axioms", r, exc)
    col = _Collector(max_witnesses)
    if not lf.covers(IDENTITY) or not lf(IDENTITY).is_zero():
        col.add(Witness({"g": IDENTITY}, {"axiom": "L1", "l(g)": _safe(lf, IDENTITY)}))
    for g in ball:
        for pred in (_lambda1, _lambda2):
            try:
                v = pred(lf, g)
            except DomainError:
                col.skipped += 1
                continue
            if v and not (pred is _lambda1 and g == IDENTITY and col.count):
                col.add(Witness({"g": g}, v))
    for g in ball:
        for h in ball:
            try:
                v = _lambda3(lf, g, h)
            except DomainError:
                col.skipped += 1
                continue
            if v:
                col.add(Witness({"g": g, "h": h}, v))
    n = len(ball)
    return _finish(
        "length-axioms", r, col,
        f"L1, L2 on {n} ball elements; L3 on {n * n} pairs",
        {"ball_size": n},
    )


def _safe(lf, g):
    try:
        return lf(g)
    except DomainError:
        return "undefined"


def check_positivity(
    lf: LengthFunction,
    r: int,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    """l(g) > 0 for every nontrivial g in the ball (so d_l is a metric there)."""
    try:
        ball = _ball(lf, r, cap)
    except BallTooLarge as exc:
        return _too_large("positivity", r, exc)
    col = _Collector(max_witnesses)
    for g in ball:
        try:
            v = _positivity(lf, g)
        except DomainError:
            col.skipped += 1
            continue
        if v:
            col.add(Witness({"g": g}, v))
    return _finish("positivity", r, col, f"{len(ball) - 1} nontrivial ball elements")


def _positivity(lf, g):
    if g != IDENTITY and not lf(g) > lf.zero():
        return {"l(g)": lf(g)}
    return None


# -- hyperbolicity -------------------------------------------------------------


def product_matrix(lf: LengthFunction, ball: Sequence[Word], level: int = 0) -> list[list[tuple]]:
    """Doubled Gromov products 2c_level(g, h) for all ball pairs."""
    out = []
    for g in ball:
        row = []
        for h in ball:
            d = doubled_product(lf, g, h)
            row.append(d[level:])
        out.append(row)
    return out


def _max_defect_python(mat: list[list[tuple]]) -> tuple[tuple, tuple | None]:
    n = len(mat)
    if n == 0:
        return (), None
    width = len(mat[0][0])
    best_key = (0,) * width  # floor at 0, compared on reversed tuples
    best_val = (0,) * width
    best_at = None
    rk = [[tuple(reversed(x)) for x in row] for row in mat]
    for f in range(n):
        for g in range(n):
            cfg = mat[f][g]
            for h in range(n):
                a, b = rk[f][h], rk[g][h]
                m = mat[f][h] if a <= b else mat[g][h]
                d = tuple(x - y for x, y in zip(m, cfg))
                key = tuple(reversed(d))
                if key > best_key:
                    best_key, best_val, best_at = key, d, (f, g, h)
    return best_val, best_at


def _max_defect_numpy(mat: list[list[tuple]]) -> tuple[tuple, tuple | None]:
    n = len(mat)
    width = len(mat[0][0])
    bound = max((abs(c) for row in mat for x in row for c in x), default=0)
    enc = LexEncoder.for_bound(width, bound)
    D = enc.encode([x for row in mat for x in row]).reshape(n, n)
    best = 0
    chunk = max(1, min(n, 4_000_000 // max(1, n * n)))
    for h0 in range(0, n, chunk):
        cols = D[:, h0:h0 + chunk]                      # c(f,h) for h in chunk
        m = np.minimum(cols[:, None, :], cols[None, :, :])  # (f, g, h)
        m -= D[:, :, None]
        best = max(best, int(m.max()))
    if best <= 0:
        return (0,) * width, None
    cand = None
    for h0 in range(0, n, chunk):
        cols = D[:, h0:h0 + chunk]
        m = np.minimum(cols[:, None, :], cols[None, :, :]) - D[:, :, None]
        for a, b, c in np.argwhere(m == best):
            t = (int(a), int(b), int(c) + h0)
            if cand is None or t < cand:
                cand = t
    return enc.decode(best), cand


def max_defect(mat: list[list[tuple]]) -> tuple[tuple, tuple | None]:
    """Doubled delta* = max over triples of min(2c(f,h), 2c(g,h)) - 2c(f,g), floored at 0.

    Returns the doubled value and the lexicographically least index triple
    realizing it (None when delta* = 0).
    """
    if not mat:
        return (), None
    try:
        return _max_defect_numpy(mat)
    except OverflowError:
        return _max_defect_python(mat)


def triple_defect(lf: LengthFunction, f: Word, g: Word, h: Word, level: int = 0) -> HalfVec:
    """min{c(f,h), c(g,h)} - c(f,g) at the given projection level."""
    cfh = gromov_product(lf, f, h)
    cgh = gromov_product(lf, g, h)
    cfg = gromov_product(lf, f, g)
    if level:
        cfh, cgh, cfg = project(cfh, level), project(cgh, level), project(cfg, level)
    return min(cfh, cgh) - cfg


def hyperbolicity_defect(
    lf: LengthFunction,
    r: int,
    level: int = 0,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    """Minimal delta with (Lambda4, delta) on all ball triples.

    The verdict is the height condition on delta: pass iff ht(delta*) <= 1,
    since any lf that is delta*-hyperbolic is also delta-hyperbolic for every
    larger delta, in particular for one of height exactly 1.
    """
    name = "hyperbolicity" if level == 0 else f"hyperbolicity-level-{level}"
    try:
        ball = _ball(lf, r, cap)
    except BallTooLarge as exc:
        return _too_large(name, r, exc)
    try:
        mat = product_matrix(lf, ball, level)
    except DomainError as exc:
        return CheckReport(name, r, INCONCLUSIVE, scanned="not scanned", notes=[str(exc)])
    doubled, at = max_defect(mat)
    delta = HalfVec.from_doubled(doubled)
    ht = height(delta)
    witnesses = []
    if at is not None:
        f, g, h = (ball[i] for i in at)
        witnesses.append(Witness({"f": f, "g": g, "h": h}, _defect_values(lf, f, g, h, level)))
    constants = {"delta": delta, "delta_height": ht, "level": level}
    notes = []
    if level == 0:
        verdict = PASS if ht <= 1 else FAIL
        notes.append("condition ht(delta) = 1 " + ("holds (delta may be taken of height 1)"
                                                 if ht <= 1 else "fails"))
    else:
        verdict = PASS if delta.is_zero() else FAIL
        notes.append(f"projected products at level {level} must be 0-hyperbolic")
    n = len(ball)
    return CheckReport(name, r, verdict, witnesses if verdict == FAIL or at else [],
                       constants, f"{n ** 3} triples from {n} ball elements", notes)


def _defect_values(lf, f, g, h, level):
    cfh = gromov_product(lf, f, h)
    cgh = gromov_product(lf, g, h)
    cfg = gromov_product(lf, f, g)
    if level:
        cfh, cgh, cfg = project(cfh, level), project(cgh, level), project(cfg, level)
    return {"c(f,h)": cfh, "c(g,h)": cgh, "c(f,g)": cfg, "defect": min(cfh, cgh) - cfg}


def violates_hyperbolicity(lf, f, g, h, delta: HalfVec, level: int = 0) -> bool:
    return triple_defect(lf, f, g, h, level) > delta


# -- regularity ----------------------------------------------------------------


class _RegularitySearch:
    def __init__(self, lf: LengthFunction, ball: Sequence[Word]):
        self.lf = lf
        self.ball = ball
        self.by_length: dict[LexVec, list[Word]] = {}
        for x in ball:
            self.by_length.setdefault(lf(x), []).append(x)
        self._prefix: dict[tuple[Word, LexVec], list[Word]] = {}

    def heads(self, g: Word, c: LexVec) -> list[Word]:
        """x in the ball with l(x) = c and g = x o (x^-1 g)."""
        key = (g, c)
        out = self._prefix.get(key)
        if out is None:
            m = self.lf.model
            lg = self.lf(g)
            out = []
            for x in self.by_length.get(c, []):
                try:
                    if self.lf(m.multiply(m.invert(x), g)) + c == lg:
                        out.append(x)
                except DomainError:
                    continue
            self._prefix[key] = out
        return out

    def find(self, g: Word, h: Word, bound: LexVec):
        """Shortlex-least (g_c, h_c) for the pair, or None."""
        c = gromov_product(self.lf, g, h)
        if not c.is_integral():
            return c, "non-integral"
        c = c.to_lexvec()
        m = self.lf.model
        for x in self.heads(g, c):
            for y in self.heads(h, c):
                try:
                    gap = self.lf(m.multiply(m.invert(x), y))
                except DomainError:
                    continue
                if gap <= bound:
                    return c, (x, y, gap)
        return c, None


def check_regularity(
    lf: LengthFunction,
    r: int,
    delta: HalfVec | LexVec | None = None,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    """Search the ball for regularity witnesses g_c, h_c for every ball pair.

    Pairs whose Gromov product is a proper half-integer are listed apart: no
    element can have such a length, and the definition gives no reading for it.
    """
    delta = as_half(delta) if delta is not None else HalfVec.from_doubled((0,) * lf.arity)
    bound = (delta * 4).to_lexvec()
    try:
        ball = _ball(lf, r, cap)
    except BallTooLarge as exc:
        return _too_large("regularity", r, exc)
    search = _RegularitySearch(lf, ball)
    col = _Collector(max_witnesses)
    nonintegral: list[Witness] = []
    n_nonintegral = 0
    max_gap = lf.zero()
    strict = 0
    found = 0
    for i, g in enumerate(ball):
        for h in ball[i:]:
            try:
                c, res = search.find(g, h, bound)
            except DomainError:
                col.skipped += 1
                continue
            if res == "non-integral":
                n_nonintegral += 1
                if len(nonintegral) < max_witnesses:
                    nonintegral.append(Witness({"g": g, "h": h}, {"c(g,h)": c}))
            elif res is None:
                col.add(Witness({"g": g, "h": h}, {"c(g,h)": c, "bound 4delta": bound}))
            else:
                found += 1
                gap = res[2]
                if gap > max_gap:
                    max_gap = gap
                if gap < bound:
                    strict += 1
    constants = {
        "delta": delta,
        "pairs_with_witness": found,
        "max_witness_gap": max_gap,
        "witnesses_strict": strict,
        "witnesses_nonstrict_only": found - strict,
        "non_integral_pairs": n_nonintegral,
    }
    notes = ["pass is relative to the ball: witnesses were searched only inside it",
             "gap bound checked as <= 4delta; strict (< 4delta) count reported separately"]
    report = _finish(
        "regularity", r, col,
        f"{len(ball) * (len(ball) + 1) // 2} unordered pairs, witnesses searched in {len(ball)} elements",
        constants, notes,
    )
    if n_nonintegral:
        report.constants["non_integral_examples"] = [w.to_dict(lf.model) for w in nonintegral]
        if report.verdict == PASS:
            report.verdict = INCONCLUSIVE
    return report


def regularity_witness(lf: LengthFunction, g: Word, h: Word, r: int, delta) -> tuple | None:
    """The shortlex-least (g_c, h_c, gap) found in B_r, or None."""
    delta = as_half(delta)
    search = _RegularitySearch(lf, lf.model.enumerate_ball(r))
    _, res = search.find(g, h, (delta * 4).to_lexvec())
    return res if isinstance(res, tuple) else None


# -- properness ----------------------------------------------------------------


def _bounded_set(lf: LengthFunction, ball: Iterable[Word], k: int) -> list[Word]:
    bound = LexVec((k,) + (0,) * (lf.arity - 1))
    return [g for g in ball if lf(g) <= bound]


def check_properness(
    lf: LengthFunction,
    r: int,
    k: int,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    """S_k(r) = {g in B_r : l(g) <= (k,0,...,0)}; pass once S_k stops growing in r."""
    try:
        ball = _ball(lf, r, cap)
    except BallTooLarge as exc:
        return _too_large("properness", r, exc)
    s_r = _bounded_set(lf, ball, k)
    s_prev = [g for g in s_r if len(g) <= r - 1]
    stable = r >= 1 and len(s_prev) == len(s_r)
    verdict = PASS if stable else INCONCLUSIVE
    constants = {"k": k, "size_r": len(s_r), "size_r_minus_1": len(s_prev) if r >= 1 else None}
    return CheckReport(
        "properness", r, verdict, [], constants,
        f"S_{k} on B_{r} vs B_{r - 1}",
        ["stabilization on a ball is evidence, not a proof of finiteness"],
    )


def bounded_set(lf: LengthFunction, r: int, k: int) -> list[Word]:
    return _bounded_set(lf, lf.model.enumerate_ball(r), k)


def properness_trend(
    family: Sequence[tuple[int, LengthFunction]],
    r: int,
    k: int,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    """|S_k(r)| across a family of truncations (e.g. free groups of growing rank).

    Constant sizes are consistent with a proper limit; growth signals that the
    limiting length function is not proper, reported as inconclusive.
    """
    sizes = {}
    for m, lf in family:
        sizes[m] = len(bounded_set(lf, r, k))
    values = list(sizes.values())
    growing = any(b > a for a, b in zip(values, values[1:]))
    verdict = INCONCLUSIVE if growing else PASS
    note = ("S_k grows with the truncation rank: no finite bound is visible"
            if growing else "S_k is constant across truncations")
    return CheckReport(
        "properness-trend", r, verdict, [], {"k": k, "sizes": sizes},
        f"{len(family)} truncations", [note],
    )


# -- power-height condition ------------------------------------------------------


def _power_height(lf, g, k):
    gk = lf.model.power(g, k)
    lg, lgk = lf(g), lf(gk)
    if lgk < lg and height(lg - lgk) != 1:
        return {"k": k, "l(g)": lg, "l(g^k)": lgk, "ht(l(g)-l(g^k))": height(lg - lgk)}
    return None


def _level_square(lf, g, level):
    g2 = lf.model.multiply(g, g)
    a, b = level_length(lf, g2, level), level_length(lf, g, level)
    if a < b:
        return {"level": level, "l_k(g^2)": a, "l_k(g)": b}
    return None


def _exponents(max_exp: int) -> list[int]:
    return list(range(2, max_exp + 1)) + list(range(-1, -max_exp - 1, -1))


def check_power_height(
    lf: LengthFunction,
    r: int,
    max_exp: int = DEFAULT_MAX_EXP,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    """If l(g^k) < l(g) then ht(l(g) - l(g^k)) = 1, for k in [2, E] and [-E, -1];
    plus the consequence l_m(g^2) >= l_m(g) for every level m >= 1."""
    if max_exp < 2:
        raise ValueError("max_exp must be >= 2")
    try:
        ball = _ball(lf, r, cap)
    except BallTooLarge as exc:
        return _too_large("power-height", r, exc)
    col = _Collector(max_witnesses)
    decreases = 0
    for g in ball:
        for k in _exponents(max_exp):
            try:
                if lf(lf.model.power(g, k)) < lf(g):
                    decreases += 1
                v = _power_height(lf, g, k)
            except DomainError:
                col.skipped += 1
                continue
            if v:
                col.add(Witness({"g": g}, v))
        for level in range(1, lf.arity):
            try:
                v = _level_square(lf, g, level)
            except DomainError:
                col.skipped += 1
                continue
            if v:
                col.add(Witness({"g": g}, v))
    return _finish(
        "power-height", r, col,
        f"{len(ball)} elements, exponents ±1..±{max_exp}",
        {"max_exp": max_exp, "power_decreases": decreases},
    )


# -- isolation of a height level -----------------------------------------------------


def level_members(lf: LengthFunction, ball: Iterable[Word], k: int) -> list[Word]:
    return [g for g in ball if height(lf(g)) <= k]


def _closure(lf, u, v, k):
    uv = lf.model.multiply(u, v)
    if height(lf(uv)) > k:
        return {"kind": "product", "l(uv)": lf(uv)}
    return None


def _isolation(lf, g, m, k):
    gm = lf.model.power(g, m)
    if height(lf(gm)) <= k < height(lf(g)):
        return {"kind": "isolation", "m": m, "l(g)": lf(g), "l(g^m)": lf(gm)}
    return None


def check_isolated_level(
    lf: LengthFunction,
    r: int,
    k: int = 1,
    max_exp: int = DEFAULT_MAX_EXP,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
    cap: int | None = DEFAULT_BALL_CAP,
) -> CheckReport:
    """G_k = {g : ht(l(g)) <= k} is a subgroup on the ball and is isolated."""
    try:
        ball = _ball(lf, r, cap)
    except BallTooLarge as exc:
        return _too_large("isolated-level", r, exc)
    ball_set = set(ball)
    col = _Collector(max_witnesses)
    members = level_members(lf, ball, k)
    for u in members:
        ui = lf.model.invert(u)
        try:
            if height(lf(ui)) > k:
                col.add(Witness({"u": u}, {"kind": "inverse", "l(u^-1)": lf(ui)}))
        except DomainError:
            col.skipped += 1
        for v in members:
            if lf.model.multiply(u, v) not in ball_set:
                continue
            v_ = _closure(lf, u, v, k)
            if v_:
                col.add(Witness({"u": u, "v": v}, v_))
    member_set = set(members)
    for g in ball:
        if g in member_set:
            continue
        for m in range(2, max_exp + 1):
            try:
                v = _isolation(lf, g, m, k)
            except DomainError:
                col.skipped += 1
                continue
            if v:
                col.add(Witness({"g": g}, v))
    return _finish(
        "isolated-level", r, col,
        f"{len(members)} of {len(ball)} ball elements have height <= {k}",
        {"k": k, "level_size": len(members), "max_exp": max_exp},
    )


# -- replay --------------------------------------------------------------------------


def replay(lf: LengthFunction, report: CheckReport, witness: Witness) -> bool:
    """Re-evaluate one witness from scratch; True iff it is still a violation."""
    e = witness.elements
    check = report.check
    if check == "length-axioms":
        axiom = witness.values.get("axiom")
        if axiom == "L1":
            return _lambda1(lf, e["g"]) is not None
        if axiom == "L2":
            return _lambda2(lf, e["g"]) is not None
        return _lambda3(lf, e["g"], e["h"]) is not None
    if check == "positivity":
        return _positivity(lf, e["g"]) is not None
    if check.startswith("hyperbolicity"):
        level = report.constants.get("level", 0)
        d = triple_defect(lf, e["f"], e["g"], e["h"], level)
        if level:
            return not d <= HalfVec.from_doubled((0,) * d.arity)
        return height(d) > 1
    if check == "regularity":
        delta = report.constants["delta"]
        return regularity_witness(lf, e["g"], e["h"], report.radius, delta) is None
    if check == "power-height":
        if "level" in witness.values:
            return _level_square(lf, e["g"], witness.values["level"]) is not None
        return _power_height(lf, e["g"], witness.values["k"]) is not None
    if check == "isolated-level":
        k = report.constants["k"]
        kind = witness.values["kind"]
        if kind == "inverse":
            return height(lf(lf.model.invert(e["u"]))) > k
        if kind == "product":
            return _closure(lf, e["u"], e["v"], k) is not None
        return _isolation(lf, e["g"], witness.values["m"], k) is not None
    raise ValueError(f"no replay rule for check {check!r}")


CHECKS: dict[str, Callable[..., CheckReport]] = {
    "length-axioms": check_length_axioms,
    "hyperbolicity": hyperbolicity_defect,
    "regularity": check_regularity,
    "properness": check_properness,
    "power-height": check_power_height,
    "isolated-level": check_isolated_level,
    "positivity": check_positivity,
}
