"""Model documents: JSON declarations of a group model and a length function.

A document looks like::

    {
      "name": "W2",
      "arity": 2,
      "model": {"kind": "free", "generators": ["a", "t"]},
      "length": {"kind": "weighted-free", "weights": {"a": "(1,0)", "t": "(0,1)"}},
      "caps": {"radius": 3, "elements": 200000}
    }

Model kinds are ``free``, ``free-abelian`` and ``table``.  A table model adds
``elements`` (identity first), ``products`` (rows of element names),
``generator_elements`` and an optional ``torsion_free`` flag.  Length kinds
are ``word-length``, ``weighted-free`` (``weights``), ``lexabs-abelian``,
``product`` (``first`` and ``second``, themselves length declarations) and
``table`` (``values``: element name or word -> vector literal).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

from .groupmodel import DEFAULT_BALL_CAP, FreeAbelianGroup, FreeGroup, GroupModel, TableGroup
from .lengthfn import (
    LengthFunction,
    LexAbsAbelian,
    ProductLength,
    TableLength,
    WeightedFree,
    WordLength,
)
from .lexgroup import InputError, LexVec, parse_vec


class DocumentError(InputError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def _need(d: dict, key: str, where: str, kind=None):
    if not isinstance(d, dict):
        raise DocumentError(where, "expected an object")
    if key not in d:
        raise DocumentError(f"{where}.{key}", "missing")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise DocumentError(f"{where}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def _vec(text, where) -> LexVec:
    if not isinstance(text, str):
        raise DocumentError(where, "vector literals are strings like \"(1,0)\"")
    try:
        v = parse_vec(text)
    except InputError as exc:
        raise DocumentError(where, str(exc)) from None
    if not isinstance(v, LexVec):
        raise DocumentError(where, "lengths must be integer vectors")
    return v


def _build_model(d: dict) -> GroupModel:
    where = "model"
    kind = _need(d, "kind", where, str)
    gens = _need(d, "generators", where, list)
    try:
        if kind == "free":
            return FreeGroup(gens)
        if kind == "free-abelian":
            return FreeAbelianGroup(gens)
        if kind == "table":
            elements = _need(d, "elements", where, list)
            rows = _need(d, "products", where, list)
            index = {e: i for i, e in enumerate(elements)}
            products = []
            for i, row in enumerate(rows):
                if not isinstance(row, list):
                    raise DocumentError(f"{where}.products[{i}]", "expected a list")
                try:
                    products.append([index[x] for x in row])
                except KeyError as exc:
                    raise DocumentError(f"{where}.products[{i}]",
                                        f"unknown element {exc.args[0]!r}") from None
            return TableGroup(gens, elements, products, d.get("generator_elements"),
                              bool(d.get("torsion_free", False)))
    except DocumentError:
        raise
    except InputError as exc:
        raise DocumentError(where, str(exc)) from None
    raise DocumentError(f"{where}.kind", f"unknown model kind {kind!r}")


def _build_length(model: GroupModel, d: dict, where: str) -> LengthFunction:
    kind = _need(d, "kind", where, str)
    try:
        if kind == "word-length":
            return WordLength(model)
        if kind == "lexabs-abelian":
            return LexAbsAbelian(model)
        if kind == "weighted-free":
            weights = _need(d, "weights", where, dict)
            return WeightedFree(model, {k: _vec(v, f"{where}.weights.{k}") for k, v in weights.items()})
        if kind == "product":
            first = _build_length(model, _need(d, "first", where, dict), f"{where}.first")
            second = _build_length(model, _need(d, "second", where, dict), f"{where}.second")
            return ProductLength(first, second)
        if kind == "table":
            values = _need(d, "values", where, dict)
            pairs = []
            for k, v in values.items():
                try:
                    w = model.parse_word(k)
                except InputError as exc:
                    raise DocumentError(f"{where}.values.{k}", str(exc)) from None
                pairs.append((w, _vec(v, f"{where}.values.{k}")))
            return TableLength(model, pairs)
    except DocumentError:
        raise
    except InputError as exc:
        raise DocumentError(where, str(exc)) from None
    raise DocumentError(f"{where}.kind", f"unknown length kind {kind!r}")


def _model_decl(m: GroupModel) -> dict:
    d: dict[str, Any] = {"kind": m.kind, "generators": list(m.generators)}
    if isinstance(m, TableGroup):
        d["elements"] = list(m.elements)
        d["products"] = [[m.elements[j] for j in row] for row in m.table]
        d["generator_elements"] = list(m.generator_elements)
        d["torsion_free"] = m.torsion_free
    return d


def _length_key(m: GroupModel, w) -> str:
    if isinstance(m, TableGroup):
        return m.element_name(w)
    return m.format_word(w)


def _length_decl(lf: LengthFunction) -> dict:
    kind = lf.kind
    if kind == "weighted-free":
        return {"kind": kind, "weights": {n: str(w) for n, w in zip(lf.model.generators, lf.weights)}}
    if kind == "product":
        return {"kind": kind, "first": _length_decl(lf.first), "second": _length_decl(lf.second)}
    if kind == "table":
        m = lf.model
        return {"kind": kind, "values": {_length_key(m, w): str(v) for w, v in lf.table.items()}}
    return {"kind": kind}


@dataclass
class ModelDocument:
    name: str
    model: GroupModel
    length: LengthFunction
    caps: dict = field(default_factory=dict)

    @property
    def arity(self) -> int:
        return self.length.arity

    @property
    def radius(self) -> int | None:
        return self.caps.get("radius")

    @property
    def element_cap(self) -> int:
        return self.caps.get("elements", DEFAULT_BALL_CAP)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelDocument":
        if not isinstance(d, dict):
            raise DocumentError("document", "expected a JSON object")
        name = _need(d, "name", "document", str)
        arity = _need(d, "arity", "document", int)
        model = _build_model(_need(d, "model", "document", dict))
        lf = _build_length(model, _need(d, "length", "document", dict), "length")
        if lf.arity != arity:
            raise DocumentError("arity", f"declared {arity} but the length function has arity {lf.arity}")
        caps = d.get("caps", {})
        if not isinstance(caps, dict):
            raise DocumentError("caps", "expected an object")
        for k, v in caps.items():
            if k not in ("radius", "elements"):
                raise DocumentError(f"caps.{k}", "unknown cap")
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise DocumentError(f"caps.{k}", "expected a nonnegative integer")
        return cls(name, model, lf, dict(caps))

    @classmethod
    def from_json(cls, text: str) -> "ModelDocument":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "arity": self.arity,
            "model": _model_decl(self.model),
            "length": _length_decl(self.length),
        }
        if self.caps:
            d["caps"] = dict(self.caps)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


# -- built-in corpus -------------------------------------------------------------------


def _cyclic(order: int, torsion_free: bool = False) -> dict:
    names = ["1", "g"] + [f"g{i}" for i in range(2, order)]
    return {
        "kind": "table",
        "generators": ["g"],
        "elements": names,
        "products": [[names[(i + j) % order] for j in range(order)] for i in range(order)],
        "generator_elements": ["g"],
        "torsion_free": torsion_free,
    }


def _table_doc(name: str, order: int, values: list[str]) -> dict:
    model = _cyclic(order)
    arity = parse_vec(values[0]).arity
    return {
        "name": name,
        "arity": arity,
        "model": model,
        "length": {"kind": "table", "values": dict(zip(model["elements"], values))},
    }


def free_uniform(m: int) -> dict:
    gens = [f"x{i}" for i in range(1, m + 1)]
    return {"name": f"F{m}-uniform", "arity": 1, "model": {"kind": "free", "generators": gens},
            "length": {"kind": "weighted-free", "weights": {g: "(1)" for g in gens}}}


def free_weighted(m: int) -> dict:
    gens = [f"x{i}" for i in range(1, m + 1)]
    return {"name": f"F{m}-weighted", "arity": 1, "model": {"kind": "free", "generators": gens},
            "length": {"kind": "weighted-free", "weights": {g: f"({i})" for i, g in enumerate(gens, 1)}}}


BUILTINS: dict[str, Callable[[], dict]] = {
    "F2-wordlen": lambda: {
        "name": "F2-wordlen", "arity": 1,
        "model": {"kind": "free", "generators": ["a", "b"]},
        "length": {"kind": "word-length"},
    },
    "W2": lambda: {
        "name": "W2", "arity": 2,
        "model": {"kind": "free", "generators": ["a", "t"]},
        "length": {"kind": "weighted-free", "weights": {"a": "(1,0)", "t": "(0,1)"}},
    },
    "Z2-lexabs": lambda: {
        "name": "Z2-lexabs", "arity": 2,
        "model": {"kind": "free-abelian", "generators": ["a", "t"]},
        "length": {"kind": "lexabs-abelian"},
    },
    "Fm-uniform": lambda: dict(free_uniform(4), name="Fm-uniform"),
    # l(g) = -1 breaks nonnegativity
    "planted-negative": lambda: _table_doc("planted-negative", 2, ["(0)", "(-1)"]),
    # c(g, g^2) = 1 but every nontrivial element has length 2
    "planted-gap": lambda: _table_doc("planted-gap", 3, ["(0)", "(2)", "(2)"]),
    # l(g^2) < l(g) with a difference of height 2
    "planted-power": lambda: _table_doc("planted-power", 4, ["(0,0)", "(0,2)", "(0,1)", "(0,2)"]),
    # g^2 = 1 lies in G_1 while g does not
    "planted-isolation": lambda: _table_doc("planted-isolation", 2, ["(0,0)", "(0,1)"]),
    # a nontrivial element of length 0
    "planted-positivity": lambda: _table_doc("planted-positivity", 2, ["(0)", "(0)"]),
    # l1 length in both coordinates of Z^2: the defect has height 2
    "planted-delta-height": lambda: {
        "name": "planted-delta-height", "arity": 2,
        "model": {"kind": "free-abelian", "generators": ["a", "t"]},
        "length": {"kind": "product", "first": {"kind": "word-length"},
                   "second": {"kind": "word-length"}},
    },
}


def builtin_names() -> list[str]:
    return list(BUILTINS) + ["F<m>-uniform", "F<m>-weighted"]


def builtin(name: str) -> ModelDocument:
    if name in BUILTINS:
        return ModelDocument.from_dict(BUILTINS[name]())
    for suffix, factory in (("-uniform", free_uniform), ("-weighted", free_weighted)):
        if name.startswith("F") and name.endswith(suffix):
            digits = name[1:-len(suffix)]
            if digits.isdigit() and int(digits) >= 1:
                return ModelDocument.from_dict(factory(int(digits)))
    raise DocumentError("model", f"unknown builtin {name!r} (known: {', '.join(builtin_names())})")


def load(source: str) -> ModelDocument:
    """``builtin:NAME`` or a path to a JSON document."""
    if source.startswith("builtin:"):
        return builtin(source[len("builtin:"):])
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(source, exc.strerror or str(exc)) from None
    return ModelDocument.from_json(text)
