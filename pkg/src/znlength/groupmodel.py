"""Finitely generated group models with decidable word problem.

A word is a tuple of letters ``(generator_index, sign)``.  Every model maps a
word to a canonical normal form, and all public operations take and return
canonical words.

Kinds:

* ``free`` -- free group, normal form is the freely reduced word;
* ``free-abelian`` -- Z^k, normal form collects letters by generator index;
* ``table`` -- a finite group given by its full multiplication table, normal
  form is the shortlex-least word representing the element.
"""

from __future__ import annotations

import re
from typing import Sequence

from .lexgroup import InputError

Letter = tuple[int, int]
Word = tuple[Letter, ...]

IDENTITY: Word = ()
DEFAULT_BALL_CAP = 200_000


class BallTooLarge(RuntimeError):
    def __init__(self, radius: int, cap: int):
        super().__init__(f"ball of radius {radius} exceeds the cap of {cap} elements")
        self.radius = radius
        self.cap = cap


def letter_key(letter: Letter) -> tuple[int, int]:
    return (letter[0], 0 if letter[1] > 0 else 1)


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*?)(?:\^(-?\d+))?$")


class GroupModel:
    kind: str = ""
    torsion_free: bool = True

    def __init__(self, generators: Sequence[str]):
        names = list(generators)
        if not names:
            raise InputError("a group model needs at least one generator")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate generator names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name == "1":
                raise InputError(f"bad generator name {name!r}")
        self.generators = tuple(names)
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def rank(self) -> int:
        return len(self.generators)

    def letters(self) -> list[Letter]:
        out = []
        for i in range(self.rank):
            out.append((i, 1))
            out.append((i, -1))
        return out

    def _validate(self, w: Sequence[Letter]) -> Word:
        out = []
        for letter in w:
            try:
                i, s = letter
            except (TypeError, ValueError):
                raise InputError(f"bad letter {letter!r}") from None
            if not (isinstance(i, int) and 0 <= i < self.rank) or s not in (1, -1):
                raise InputError(f"unknown generator in letter {letter!r}")
            out.append((i, s))
        return tuple(out)

    def normalize(self, w: Sequence[Letter]) -> Word:
        return self._normalize(self._validate(w))

    def _normalize(self, w: Word) -> Word:
        raise NotImplementedError

    def multiply(self, u: Word, v: Word) -> Word:
        return self._normalize(tuple(u) + tuple(v))

    def invert(self, u: Word) -> Word:
        return self._normalize(tuple((i, -s) for i, s in reversed(u)))

    def power(self, u: Word, k: int) -> Word:
        if k < 0:
            u, k = self.invert(u), -k
        result = IDENTITY
        base = u
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def product(self, *words: Word) -> Word:
        out = IDENTITY
        for w in words:
            out = self.multiply(out, w)
        return out

    def conjugate(self, c: Word, h: Word) -> Word:
        """h^-1 c h."""
        return self.product(self.invert(h), c, h)

    def generator(self, name: str) -> Word:
        if name not in self._index:
            raise InputError(f"unknown generator {name!r}")
        return self._normalize(((self._index[name], 1),))

    def enumerate_ball(self, r: int, cap: int | None = DEFAULT_BALL_CAP) -> list[Word]:
        """All elements of word length <= r, canonical, in shortlex order."""
        if r < 0:
            raise InputError("radius must be >= 0")
        seen = {IDENTITY}
        frontier = [IDENTITY]
        letters = self.letters()
        for radius in range(1, r + 1):
            nxt = []
            for w in frontier:
                for x in letters:
                    v = self._normalize(w + (x,))
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
                        if cap is not None and len(seen) > cap:
                            raise BallTooLarge(radius, cap)
            frontier = nxt
            if not frontier:
                break
        return sorted(seen, key=shortlex_key)

    # -- text rendering ------------------------------------------------------

    def parse_word(self, text: str) -> Word:
        """Parse e.g. "a t^-1 a^2" or "a*t^-1"; "1" or "" is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return IDENTITY
        out: list[Letter] = []
        for tok in re.split(r"[\s*]+", text):
            if not tok:
                continue
            m = _TOKEN_RE.match(tok)
            if not m or m.group(1) not in self._index:
                raise InputError(f"cannot parse word token {tok!r} in {text!r}")
            i = self._index[m.group(1)]
            e = int(m.group(2)) if m.group(2) is not None else 1
            out.extend([(i, 1 if e > 0 else -1)] * abs(e))
        return self.normalize(out)

    def _syllables(self, w: Word) -> list[tuple[str, int]]:
        out: list[tuple[str, int]] = []
        for i, s in w:
            name = self.generators[i]
            if out and out[-1][0] == name and (out[-1][1] > 0) == (s > 0):
                out[-1] = (name, out[-1][1] + s)
            else:
                out.append((name, s))
        return out

    def format_word(self, w: Word, unicode: bool = False) -> str:
        if not w:
            return "1"
        parts = []
        for name, e in self._syllables(w):
            if e == 1:
                parts.append(name)
            elif unicode:
                parts.append(name + _superscript(e))
            else:
                parts.append(f"{name}^{e}")
        if unicode and all(len(g) == 1 for g in self.generators):
            return "".join(parts)
        return " ".join(parts)


_SUP = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def _superscript(e: int) -> str:
    return str(e).translate(_SUP)


class FreeGroup(GroupModel):
    kind = "free"

    def _normalize(self, w: Word) -> Word:
        stack: list[Letter] = []
        for x in w:
            if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
                stack.pop()
            else:
                stack.append(x)
        return tuple(stack)

    def multiply(self, u: Word, v: Word) -> Word:
        # both canonical: cancellation only happens across the seam
        i = 0
        m = min(len(u), len(v))
        while i < m and u[len(u) - 1 - i][0] == v[i][0] and u[len(u) - 1 - i][1] == -v[i][1]:
            i += 1
        return u[: len(u) - i] + v[i:]

    def invert(self, u: Word) -> Word:
        return tuple((i, -s) for i, s in reversed(u))


class FreeAbelianGroup(GroupModel):
    kind = "free-abelian"

    def exponents(self, w: Word) -> tuple[int, ...]:
        e = [0] * self.rank
        for i, s in w:
            e[i] += s
        return tuple(e)

    def from_exponents(self, e: Sequence[int]) -> Word:
        if len(e) != self.rank:
            raise InputError(f"expected {self.rank} exponents, got {len(e)}")
        out: list[Letter] = []
        for i, k in enumerate(e):
            out.extend([(i, 1 if k > 0 else -1)] * abs(k))
        return tuple(out)

    def _normalize(self, w: Word) -> Word:
        return self.from_exponents(self.exponents(w))

    def multiply(self, u: Word, v: Word) -> Word:
        eu, ev = self.exponents(u), self.exponents(v)
        return self.from_exponents([a + b for a, b in zip(eu, ev)])

    def enumerate_ball(self, r: int, cap: int | None = DEFAULT_BALL_CAP) -> list[Word]:
        if r < 0:
            raise InputError("radius must be >= 0")
        vecs = [()]
        for _ in range(self.rank):
            vecs = [v + (k,) for v in vecs for k in range(-r, r + 1)]
            vecs = [v for v in vecs if sum(abs(x) for x in v) <= r]
            if cap is not None and len(vecs) > cap:
                raise BallTooLarge(r, cap)
        return sorted((self.from_exponents(v) for v in vecs), key=shortlex_key)


class TableGroup(GroupModel):
    """A finite group on a declared universe with a total multiplication table.

    ``elements[0]`` must be the identity.  ``products[i][j]`` is the index of
    elements[i] * elements[j].  ``generator_elements`` names, per generator,
    the element it stands for.
    """

    kind = "table"

    def __init__(
        self,
        generators: Sequence[str],
        elements: Sequence[str],
        products: Sequence[Sequence[int]],
        generator_elements: Sequence[str] | None = None,
        torsion_free: bool = False,
    ):
        super().__init__(generators)
        self.elements = tuple(elements)
        self.torsion_free = bool(torsion_free)
        size = len(self.elements)
        if size == 0:
            raise InputError("empty universe")
        if len(set(self.elements)) != size:
            raise InputError("duplicate element names in table universe")
        if len(products) != size or any(len(row) != size for row in products):
            raise InputError("multiplication table must be total (size x size)")
        table = []
        for row in products:
            r = []
            for x in row:
                if not isinstance(x, int) or not 0 <= x < size:
                    raise InputError(f"table entry {x!r} outside the universe")
                r.append(x)
            table.append(tuple(r))
        self.table = tuple(table)
        for i in range(size):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise InputError("elements[0] is not a two-sided identity")
        for a in range(size):
            for b in range(size):
                ab = self.table[a][b]
                for c in range(size):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise InputError(
                            f"table not associative at "
                            f"({self.elements[a]}, {self.elements[b]}, {self.elements[c]})"
                        )
        self._inverse = []
        for a in range(size):
            inv = [b for b in range(size) if self.table[a][b] == 0]
            if len(inv) != 1:
                raise InputError(f"element {self.elements[a]} has no unique inverse")
            self._inverse.append(inv[0])
        gen_elems = list(generator_elements) if generator_elements is not None else list(generators)
        if len(gen_elems) != self.rank:
            raise InputError("one element per generator required")
        name_index = {name: i for i, name in enumerate(self.elements)}
        try:
            self._gen = [name_index[g] for g in gen_elems]
        except KeyError as exc:
            raise InputError(f"generator element {exc.args[0]!r} not in universe") from None
        self.generator_elements = tuple(gen_elems)
        self._canon = self._shortlex_canon()
        if len(self._canon) != size:
            missing = [self.elements[i] for i in range(size) if i not in self._canon]
            raise InputError(f"generators do not generate the universe (missing {missing})")

    def _letter_elem(self, letter: Letter) -> int:
        g = self._gen[letter[0]]
        return g if letter[1] > 0 else self._inverse[g]

    def _shortlex_canon(self) -> dict[int, Word]:
        best: dict[int, Word] = {0: IDENTITY}
        layer = {0: IDENTITY}
        while len(best) < len(self.elements):
            nxt: dict[int, Word] = {}
            for e, w in layer.items():
                for letter in self.letters():
                    f = self.table[e][self._letter_elem(letter)]
                    if f in best:
                        continue
                    cand = w + (letter,)
                    if f not in nxt or shortlex_key(cand) < shortlex_key(nxt[f]):
                        nxt[f] = cand
            if not nxt:
                break
            best.update(nxt)
            layer = nxt
        return best

    def element_of(self, w: Word) -> int:
        e = 0
        for letter in w:
            e = self.table[e][self._letter_elem(letter)]
        return e

    def word_of(self, e: int) -> Word:
        return self._canon[e]

    def element_name(self, w: Word) -> str:
        return self.elements[self.element_of(w)]

    def _normalize(self, w: Word) -> Word:
        return self._canon[self.element_of(w)]

    def multiply(self, u: Word, v: Word) -> Word:
        return self._canon[self.table[self.element_of(u)][self.element_of(v)]]

    def invert(self, u: Word) -> Word:
        return self._canon[self._inverse[self.element_of(u)]]

    def parse_word(self, text: str) -> Word:
        # element names from the universe are accepted as well as generator words
        name = text.strip()
        if name in self.elements and name not in self._index:
            return self._canon[self.elements.index(name)]
        return super().parse_word(text)


def cyclic_table(order: int, name: str = "g") -> TableGroup:
    """Z/order on elements 1, g, g2, ... (used for planted examples)."""
    elements = ["1"] + [name if i == 1 else f"{name}{i}" for i in range(1, order)]
    products = [[(i + j) % order for j in range(order)] for i in range(order)]
    return TableGroup([name], elements, products, [name])
