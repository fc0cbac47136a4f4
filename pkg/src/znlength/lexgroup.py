"""Exact arithmetic in Z^n under the right lexicographic order.

Vectors compare by their rightmost differing coordinate, so the last
coordinate dominates.  ``HalfVec`` holds values of the form x/2, which is all
the divisible hull is ever asked for here (Gromov products of integer
lengths).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np


class InputError(ValueError):
    """Malformed or incompatible input (arity mismatch, bad literal, ...)."""


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _key(coords: Sequence[int]) -> tuple:
    # Python tuple order on the reversed coordinates is exactly right-lex.
    return tuple(reversed(coords))


@dataclass(frozen=True)
class LexVec:
    coords: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) == 0:
            raise InputError("LexVec needs arity >= 1")
        for c in self.coords:
            if not isinstance(c, (int, np.integer)) or isinstance(c, bool):
                raise InputError(f"non-integer coordinate {c!r}")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def zero(cls, n: int) -> "LexVec":
        return cls((0,) * n)

    @classmethod
    def of(cls, *coords: int) -> "LexVec":
        return cls(tuple(coords))

    @property
    def arity(self) -> int:
        return len(self.coords)

    def _check(self, other: "LexVec"):
        if not isinstance(other, LexVec):
            raise InputError(f"expected LexVec, got {type(other).__name__}")
        if other.arity != self.arity:
            raise InputError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "LexVec") -> "LexVec":
        self._check(other)
        return LexVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LexVec") -> "LexVec":
        self._check(other)
        return LexVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LexVec":
        return LexVec(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "LexVec":
        return LexVec(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __lt__(self, other):
        return lex_compare(self, other) is Ordering.LT

    def __le__(self, other):
        return lex_compare(self, other) is not Ordering.GT

    def __gt__(self, other):
        return lex_compare(self, other) is Ordering.GT

    def __ge__(self, other):
        return lex_compare(self, other) is not Ordering.LT

    def is_zero(self) -> bool:
        return not any(self.coords)

    def sign(self) -> int:
        for c in reversed(self.coords):
            if c:
                return 1 if c > 0 else -1
        return 0

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def lex_compare(x, y) -> Ordering:
    """Compare two LexVec/HalfVec values of equal arity."""
    if isinstance(x, HalfVec) or isinstance(y, HalfVec):
        x, y = as_half(x), as_half(y)
        if x.arity != y.arity:
            raise InputError(f"arity mismatch: {x.arity} vs {y.arity}")
        kx, ky = _key(x.doubled), _key(y.doubled)
    else:
        x._check(y)
        kx, ky = _key(x.coords), _key(y.coords)
    if kx < ky:
        return Ordering.LT
    if kx > ky:
        return Ordering.GT
    return Ordering.EQ


def height(x) -> int:
    """Index (1-based) of the rightmost nonzero coordinate; 0 for the zero vector."""
    coords = x.doubled if isinstance(x, HalfVec) else x.coords
    for i in range(len(coords) - 1, -1, -1):
        if coords[i]:
            return i + 1
    return 0


def project(x, k: int):
    """Drop the k leftmost coordinates (order-preserving homomorphism onto Z^(n-k))."""
    n = x.arity
    if not 0 <= k < n:
        raise InputError(f"projection index {k} out of range for arity {n}")
    if isinstance(x, HalfVec):
        return HalfVec.from_doubled(x.doubled[k:])
    return LexVec(x.coords[k:])


def lex_abs(x: LexVec) -> LexVec:
    return -x if x.sign() < 0 else x


def in_convex_subgroup(x, k: int) -> bool:
    """Membership in {a : ht(a) <= k}."""
    return height(x) <= k


@dataclass(frozen=True)
class HalfVec:
    """An element numerators/denominator of (1/2)Z^n, kept in canonical form."""

    numerators: LexVec
    denominator: int = 1

    def __post_init__(self):
        if self.denominator not in (1, 2):
            raise InputError("HalfVec denominator must be 1 or 2")
        if self.denominator == 2 and all(c % 2 == 0 for c in self.numerators.coords):
            object.__setattr__(
                self, "numerators", LexVec(tuple(c // 2 for c in self.numerators.coords))
            )
            object.__setattr__(self, "denominator", 1)

    @classmethod
    def from_doubled(cls, doubled: Sequence[int]) -> "HalfVec":
        return cls(LexVec(tuple(doubled)), 2)

    @property
    def arity(self) -> int:
        return self.numerators.arity

    @property
    def doubled(self) -> tuple[int, ...]:
        if self.denominator == 2:
            return self.numerators.coords
        return tuple(2 * c for c in self.numerators.coords)

    def is_integral(self) -> bool:
        return self.denominator == 1

    def to_lexvec(self) -> LexVec:
        if self.denominator != 1:
            raise InputError(f"{self} is not integral")
        return self.numerators

    def _other(self, other) -> "HalfVec":
        other = as_half(other)
        if other.arity != self.arity:
            raise InputError(f"arity mismatch: {self.arity} vs {other.arity}")
        return other

    def __add__(self, other) -> "HalfVec":
        o = self._other(other)
        return HalfVec.from_doubled([a + b for a, b in zip(self.doubled, o.doubled)])

    __radd__ = __add__

    def __sub__(self, other) -> "HalfVec":
        o = self._other(other)
        return HalfVec.from_doubled([a - b for a, b in zip(self.doubled, o.doubled)])

    def __rsub__(self, other) -> "HalfVec":
        return as_half(other) - self

    def __neg__(self) -> "HalfVec":
        return HalfVec.from_doubled([-a for a in self.doubled])

    def __mul__(self, k: int) -> "HalfVec":
        return HalfVec.from_doubled([k * a for a in self.doubled])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LexVec):
            other = as_half(other)
        if not isinstance(other, HalfVec):
            return NotImplemented
        return self.doubled == other.doubled

    def __hash__(self):
        return hash(self.doubled)

    def __lt__(self, other):
        return lex_compare(self, other) is Ordering.LT

    def __le__(self, other):
        return lex_compare(self, other) is not Ordering.GT

    def __gt__(self, other):
        return lex_compare(self, other) is Ordering.GT

    def __ge__(self, other):
        return lex_compare(self, other) is not Ordering.LT

    def is_zero(self) -> bool:
        return self.numerators.is_zero()

    def __str__(self) -> str:
        s = str(self.numerators)
        return s + "/2" if self.denominator == 2 else s


def as_half(x) -> HalfVec:
    if isinstance(x, HalfVec):
        return x
    if isinstance(x, LexVec):
        return HalfVec(x, 1)
    raise InputError(f"expected LexVec or HalfVec, got {type(x).__name__}")


def halve(x: LexVec) -> HalfVec:
    return HalfVec(x, 2)


def lex_min(a, b):
    return b if b < a else a


def lex_max(a, b):
    return b if b > a else a


_VEC_RE = re.compile(r"^\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*(?:/\s*(\d+))?\s*$")


def parse_vec(text: str):
    """Parse "(a1,...,an)" into a LexVec or "(a1,...,an)/2" into a HalfVec."""
    m = _VEC_RE.match(text)
    if not m:
        raise InputError(f"bad vector literal {text!r}")
    coords = tuple(int(c) for c in m.group(1).split(","))
    if m.group(2) is None:
        return LexVec(coords)
    den = int(m.group(2))
    if den not in (1, 2):
        raise InputError(f"denominator {den} not supported (only 1 or 2)")
    if den == 2 and all(c % 2 == 0 for c in coords):
        raise InputError(f"{text!r} is not in canonical form")
    return HalfVec(LexVec(coords), den)


def format_vec(x) -> str:
    return str(x)


class LexEncoder:
    """Order-preserving additive embedding of a bounded box of Z^n into int64.

    Coordinates are packed as balanced base-M digits with the rightmost
    coordinate most significant.  Sums and differences of encoded values stay
    exact as long as every coordinate involved stays below M/2 in absolute
    value, which ``for_bound`` guarantees for values up to 4x the bound.
    """

    def __init__(self, n: int, base: int):
        self.n = n
        self.base = base
        if (base ** n) >= 2 ** 62:
            raise OverflowError("box too large for int64 encoding")
        self._weights = np.array([base ** i for i in range(n)], dtype=np.int64)

    @classmethod
    def for_bound(cls, n: int, bound: int) -> "LexEncoder":
        return cls(n, 8 * (bound + 1) + 1)

    def encode(self, rows: Iterable[Sequence[int]]) -> np.ndarray:
        arr = np.asarray(list(rows), dtype=np.int64).reshape(-1, self.n)
        return arr @ self._weights

    def decode(self, value: int) -> tuple[int, ...]:
        value = int(value)
        half = self.base // 2
        out = []
        for _ in range(self.n):
            d = value % self.base
            if d > half:
                d -= self.base
            out.append(d)
            value = (value - d) // self.base
        if value != 0:
            raise OverflowError("value outside the encoded box")
        return tuple(out)
