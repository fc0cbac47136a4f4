"""Z^n-valued length functions on group models and the quantities built from them."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .groupmodel import FreeAbelianGroup, FreeGroup, GroupModel, Word
from .lexgroup import HalfVec, InputError, LexVec, lex_abs, project


class DomainError(LookupError):
    """A table length function was asked about an element it does not store."""


class LengthFunction:
    kind: str = ""

    def __init__(self, model: GroupModel, arity: int):
        if arity < 1:
            raise InputError("arity must be >= 1")
        self.model = model
        self.arity = arity
        self._memo: dict[Word, LexVec] = {}

    def evaluate(self, g: Word) -> LexVec:
        v = self._memo.get(g)
        if v is None:
            v = self._evaluate(g)
            self._memo[g] = v
        return v

    __call__ = evaluate

    def _evaluate(self, g: Word) -> LexVec:
        raise NotImplementedError

    def covers(self, g: Word) -> bool:
        return True

    def zero(self) -> LexVec:
        return LexVec.zero(self.arity)


class WordLength(LengthFunction):
    """|g|_S for the model's generators (canonical words are geodesic)."""

    kind = "word-length"

    def __init__(self, model: GroupModel):
        super().__init__(model, 1)

    def _evaluate(self, g: Word) -> LexVec:
        return LexVec((len(g),))


class WeightedFree(LengthFunction):
    """Sum of letter weights over the reduced word; the based length of the
    weighted Cayley tree at the identity."""

    kind = "weighted-free"

    def __init__(self, model: GroupModel, weights: Mapping[str, LexVec] | Sequence[LexVec]):
        if not isinstance(model, FreeGroup):
            raise InputError("weighted-free length needs a free group model")
        if isinstance(weights, Mapping):
            missing = set(model.generators) - set(weights)
            extra = set(weights) - set(model.generators)
            if missing or extra:
                raise InputError(f"weights must cover exactly the generators ({missing or extra})")
            weights = [weights[name] for name in model.generators]
        weights = list(weights)
        if len(weights) != model.rank:
            raise InputError("one weight per generator required")
        arity = weights[0].arity
        for name, w in zip(model.generators, weights):
            if w.arity != arity:
                raise InputError("weights have mixed arities")
            if not w > LexVec.zero(arity):
                raise InputError(f"weight of {name} must be positive, got {w}")
        super().__init__(model, arity)
        self.weights = tuple(weights)

    def _evaluate(self, g: Word) -> LexVec:
        total = [0] * self.arity
        for i, _ in g:
            for j, c in enumerate(self.weights[i].coords):
                total[j] += c
        return LexVec(tuple(total))


class LexAbsAbelian(LengthFunction):
    """l(v) = |v| in the right-lex order, on Z^n = free abelian of rank n."""

    kind = "lexabs-abelian"

    def __init__(self, model: GroupModel):
        if not isinstance(model, FreeAbelianGroup):
            raise InputError("lexabs-abelian length needs a free-abelian model")
        super().__init__(model, model.rank)

    def _evaluate(self, g: Word) -> LexVec:
        return lex_abs(LexVec(self.model.exponents(g)))


class ProductLength(LengthFunction):
    """l = (l_X, l_Y): coordinates of l_X first, l_Y on the dominant side."""

    kind = "product"

    def __init__(self, first: LengthFunction, second: LengthFunction):
        if first.model is not second.model:
            raise InputError("product components must share one model instance")
        super().__init__(first.model, first.arity + second.arity)
        self.first = first
        self.second = second

    def _evaluate(self, g: Word) -> LexVec:
        return LexVec(self.first(g).coords + self.second(g).coords)

    def covers(self, g: Word) -> bool:
        return self.first.covers(g) and self.second.covers(g)


class TableLength(LengthFunction):
    kind = "table"

    def __init__(self, model: GroupModel, values: Iterable[tuple[Word, LexVec]]):
        table: dict[Word, LexVec] = {}
        arity = None
        for w, v in values:
            w = model.normalize(w)
            if arity is None:
                arity = v.arity
            elif v.arity != arity:
                raise InputError("table values have mixed arities")
            if w in table and table[w] != v:
                raise InputError(f"conflicting table values for {model.format_word(w)}")
            table[w] = v
        if arity is None:
            raise InputError("empty length table")
        super().__init__(model, arity)
        self.table = table

    def _evaluate(self, g: Word) -> LexVec:
        try:
            return self.table[g]
        except KeyError:
            raise DomainError(
                f"{self.model.format_word(g)} outside the stored length table"
            ) from None

    def covers(self, g: Word) -> bool:
        return g in self.table


def evaluate(lf: LengthFunction, g: Word) -> LexVec:
    return lf.evaluate(g)


def doubled_product(lf: LengthFunction, g: Word, h: Word) -> tuple[int, ...]:
    """2 c(g,h) as an integer tuple."""
    m = lf.model
    a = lf(g).coords
    b = lf(h).coords
    d = lf(m.multiply(m.invert(g), h)).coords
    return tuple(x + y - z for x, y, z in zip(a, b, d))


def gromov_product(lf: LengthFunction, g: Word, h: Word) -> HalfVec:
    """c(g,h) = (l(g) + l(h) - l(g^-1 h)) / 2."""
    return HalfVec.from_doubled(doubled_product(lf, g, h))


def projected_product(lf: LengthFunction, g: Word, h: Word, k: int) -> HalfVec:
    return project(gromov_product(lf, g, h), k)


def pseudometric(lf: LengthFunction, g: Word, h: Word) -> LexVec:
    m = lf.model
    return lf(m.multiply(m.invert(g), h))


def is_circ(lf: LengthFunction, a: Word, b: Word) -> bool:
    """True iff l(ab) = l(a) + l(b)."""
    return lf(lf.model.multiply(a, b)) == lf(a) + lf(b)


def level_length(lf: LengthFunction, g: Word, k: int) -> LexVec:
    """l_k(g): l(g) with the k leftmost coordinates dropped."""
    return lf(g) if k == 0 else project(lf(g), k)


def hyp_translation(lf: LengthFunction, g: Word, k: int = 1) -> LexVec:
    """l_k(g^2) - l_k(g).  May be negative; callers report it, never clamp it."""
    g2 = lf.model.multiply(g, g)
    return level_length(lf, g2, k) - level_length(lf, g, k)


def level_distance(lf: LengthFunction, g: Word, h: Word, k: int) -> LexVec:
    return level_length(lf, lf.model.multiply(lf.model.invert(g), h), k)

