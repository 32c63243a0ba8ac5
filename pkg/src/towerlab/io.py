"""Instance files: JSON schema and conversion into library objects."""

from __future__ import annotations

import hashlib
import json
from typing import Any

import jsonschema

from . import catalog
from .abgroup import Atom, FgAbGroup, SymbolicAbGroup
from .groups import FiniteGroup, FreeGroup, GroupHom, ProductGroup
from .tower import Tower


class SchemaError(ValueError):
    pass


class UnsupportedInstance(ValueError):
    pass


_INT_LIST = {"type": "array", "items": {"type": "integer"}}

GROUP_SCHEMA = {
    "oneOf": [
        {"type": "object", "properties": {"catalog": {"type": "string"}},
         "required": ["catalog"], "additionalProperties": False},
        {"type": "object", "properties": {"order": {"type": "integer", "minimum": 1},
                                          "table": {"type": "array", "items": _INT_LIST}},
         "required": ["table"], "additionalProperties": False},
        {"type": "object", "properties": {"permutations": {"type": "array", "items": _INT_LIST}},
         "required": ["permutations"], "additionalProperties": False},
        {"type": "object", "properties": {"factors": _INT_LIST,
                                          "rank": {"type": "integer", "minimum": 0}},
         "required": ["factors"], "additionalProperties": False},
        {"type": "object", "properties": {"atoms": {"type": "array", "items": {
            "type": "object",
            "properties": {"kind": {"enum": ["int", "rat", "cyclic", "pruefer", "padic"]},
                           "p": {"type": "integer"}, "k": {"type": "integer"}},
            "required": ["kind"], "additionalProperties": False}}},
         "required": ["atoms"], "additionalProperties": False},
        {"type": "object", "properties": {"free": {"type": "integer", "minimum": 0}},
         "required": ["free"], "additionalProperties": False},
        {"type": "object", "properties": {"product": {"type": "array",
                                                      "items": {"$ref": "#/$defs/group"}}},
         "required": ["product"], "additionalProperties": False},
    ]
}

MAP_SCHEMA = {
    "type": "object",
    "properties": {
        "identity": {"const": True},
        "zero": {"const": True},
        "multiply": {"type": "integer"},
        "matrix": {"type": "array", "items": _INT_LIST},
        "table": _INT_LIST,
    },
    "minProperties": 1, "maxProperties": 1, "additionalProperties": False,
}

TAIL_SCHEMA = {
    "oneOf": [
        {"type": "object", "properties": {"kind": {"const": "constant"}},
         "required": ["kind"], "additionalProperties": False},
        {"type": "object", "properties": {"kind": {"const": "product"},
                                          "components": {"type": "array", "minItems": 1,
                                                         "items": {"$ref": "#/$defs/group"}}},
         "required": ["kind", "components"], "additionalProperties": False},
        {"type": "object", "properties": {
            "kind": {"const": "mult"}, "group": {"$ref": "#/$defs/group"},
            "multipliers": {"oneOf": [{"const": "n+1"}, {"type": "integer"},
                                      {"type": "array", "items": {"type": "integer"}, "minItems": 1}]}},
         "required": ["kind", "group", "multipliers"], "additionalProperties": False},
    ]
}

_DEFS = {"group": GROUP_SCHEMA, "map": MAP_SCHEMA, "tail": TAIL_SCHEMA}

_COMMON = {"kind": {}, "name": {"type": "string"}, "description": {"type": "string"}}

INSTANCE_SCHEMAS = {
    "group": {
        "type": "object",
        "properties": {**_COMMON, "kind": {"const": "group"}, "group": {"$ref": "#/$defs/group"},
                       "element": {}, "elements": {"type": "array"},
                       "word": {"type": "string"}, "words": {"type": "array", "items": {"type": "string"}},
                       "primes": _INT_LIST,
                       "threads": {"type": "array", "items": {"type": "array"}},
                       "witness": {"type": "object", "properties": {
                           "x": _INT_LIST, "k": {"type": "integer", "minimum": 0},
                           "p": {"type": "integer"}},
                           "required": ["x", "k"], "additionalProperties": False}},
        "required": ["kind", "group"], "additionalProperties": False,
    },
    "tower": {
        "type": "object",
        "properties": {**_COMMON, "kind": {"const": "tower"},
                       "prefix": {"type": "array", "items": {
                           "type": "object",
                           "properties": {"group": {"$ref": "#/$defs/group"},
                                          "map": {"$ref": "#/$defs/map"}},
                           "required": ["group"], "additionalProperties": False}},
                       "tail": {"oneOf": [{"$ref": "#/$defs/tail"}, {"type": "null"}]},
                       "six_term": {"type": "object", "properties": {
                           "sequence": {"const": "commutator"}},
                           "required": ["sequence"], "additionalProperties": False}},
        "required": ["kind"], "additionalProperties": False,
    },
    "system": {
        "type": "object",
        "properties": {**_COMMON, "kind": {"const": "system"},
                       "matrix": {"oneOf": [
                           {"type": "object", "properties": {"kind": {"const": "divisibility"}},
                            "required": ["kind"], "additionalProperties": False},
                           {"type": "object", "properties": {
                               "kind": {"const": "explicit_rows"},
                               "rows": {"type": "array", "items": {"oneOf": [
                                   _INT_LIST,
                                   {"type": "object", "patternProperties": {
                                       "^[0-9]+$": {"type": "integer"}},
                                    "additionalProperties": False}]}}},
                            "required": ["kind", "rows"], "additionalProperties": False}]},
                       "group": {"$ref": "#/$defs/group"},
                       "rhs": {"oneOf": [
                           {"enum": ["ones", "zeros"]},
                           {"type": "array"},
                           {"type": "object", "properties": {
                               "random": {"type": "integer"}, "samples": {"type": "integer", "minimum": 1},
                               "bound": {"type": "integer", "minimum": 0}},
                            "required": ["random"], "additionalProperties": False}]}},
        "required": ["kind", "matrix", "group", "rhs"], "additionalProperties": False,
    },
    "product": {
        "type": "object",
        "properties": {**_COMMON, "kind": {"const": "product"},
                       "components": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/group"}},
                       "corpus": {"type": "array", "items": {
                           "type": "array", "minItems": 1, "items": {"$ref": "#/$defs/group"}}},
                       "f": {"type": "object", "properties": {
                           "diagonal_order": {"type": "integer", "minimum": 1},
                           "diagonal_element": {"type": "integer", "minimum": 0}},
                           "minProperties": 1, "maxProperties": 1, "additionalProperties": False}},
        "required": ["kind", "components"], "additionalProperties": False,
    },
    "witness-request": {
        "type": "object",
        "properties": {**_COMMON, "kind": {"const": "witness-request"},
                       "family": {"enum": ["odd-powers"]},
                       "words": {"type": "array", "items": {"type": "string"}},
                       "factor_len_bound": {"type": "integer", "minimum": 0},
                       "quotients": {"type": "array", "items": {"type": "string"}}},
        "required": ["kind"], "additionalProperties": False,
    },
}


def validate(data: Any) -> dict:
    if not isinstance(data, dict) or "kind" not in data:
        raise SchemaError("instance must be an object with a 'kind' field")
    kind = data["kind"]
    if kind not in INSTANCE_SCHEMAS:
        raise SchemaError(f"unknown instance kind {kind!r}")
    schema = dict(INSTANCE_SCHEMAS[kind])
    schema["$defs"] = _DEFS
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {exc.message}") from None
    return data


def load_instance(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return validate(data)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(data: Any) -> str:
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()


# ---------------------------------------------------------------------------
# builders


def build_group(desc: dict):
    if "catalog" in desc:
        try:
            return catalog.get(desc["catalog"])
        except KeyError as exc:
            raise UnsupportedInstance(str(exc)) from None
    if "table" in desc:
        return FiniteGroup.from_json(desc)
    if "permutations" in desc:
        return FiniteGroup.from_permutations(desc["permutations"])
    if "factors" in desc:
        return FgAbGroup.from_cyclic_orders(list(desc["factors"]) + [0] * desc.get("rank", 0))
    if "atoms" in desc:
        return SymbolicAbGroup(tuple(Atom(a["kind"], a.get("p", 0), a.get("k", 0)) for a in desc["atoms"]))
    if "free" in desc:
        return FreeGroup(desc["free"])
    if "product" in desc:
        return ProductGroup([build_group(s) for s in desc["product"]])
    raise SchemaError(f"unrecognized group {desc}")


def build_element(G, value):
    if isinstance(G, FgAbGroup):
        return G.element(value if isinstance(value, list) else [value])
    if isinstance(G, FreeGroup):
        return G.word(value)
    if isinstance(G, ProductGroup):
        return tuple(build_element(c, v) for c, v in zip(G.components, value))
    return int(value)


def build_map(desc: dict | None, dom, cod) -> GroupHom:
    if desc is None:
        raise SchemaError("every prefix level above 0 needs a map")
    if "identity" in desc:
        if dom != cod:
            raise SchemaError("identity map between different groups")
        return GroupHom.identity(dom)
    if "zero" in desc:
        return GroupHom.trivial(dom, cod)
    if "multiply" in desc:
        if not isinstance(dom, FgAbGroup) or dom != cod:
            raise UnsupportedInstance("multiplication maps need equal f.g. abelian levels")
        return GroupHom.multiplication(dom, desc["multiply"])
    if "matrix" in desc:
        if not isinstance(dom, FgAbGroup):
            raise UnsupportedInstance("matrix maps need an f.g. abelian domain")
        rows = desc["matrix"]
        if len(rows) != dom.ngens:
            raise SchemaError(f"matrix needs {dom.ngens} rows (one per generator)")
        return GroupHom.matrix(dom, cod, [build_element(cod, r) for r in rows])
    if "table" in desc:
        if not isinstance(dom, FiniteGroup):
            raise UnsupportedInstance("table maps need a finite Cayley-table domain")
        f = GroupHom.from_table(dom, cod, [build_element(cod, v) for v in desc["table"]])
        if not f.is_homomorphism():
            raise SchemaError("table map is not a homomorphism")
        return f
    raise SchemaError(f"unrecognized map {desc}")


def build_tower(data: dict) -> Tower:
    prefix = data.get("prefix", [])
    groups = [build_group(p["group"]) for p in prefix]
    maps = []
    for i in range(1, len(prefix)):
        maps.append(build_map(prefix[i].get("map"), groups[i], groups[i - 1]))
    tail = data.get("tail")
    name = data.get("name", "")
    if tail is None:
        if not groups:
            raise SchemaError("tower needs a prefix or a tail")
        return Tower.finite(groups, maps, name)
    from .tower import ConstantTail, MultiplicationTail, ProductTail
    if any(isinstance(g, (SymbolicAbGroup, FreeGroup)) for g in groups):
        raise UnsupportedInstance("tower levels must be finite groups or f.g. abelian groups")
    if tail["kind"] == "constant":
        if not groups:
            raise SchemaError("a constant tail repeats the top prefix level")
        return Tower(groups, maps, ConstantTail(), name)
    if tail["kind"] == "product":
        comps = [build_group(c) for c in tail["components"]]
        if any(isinstance(c, (ProductGroup, SymbolicAbGroup, FreeGroup)) for c in comps):
            raise UnsupportedInstance("product components must be finite or f.g. abelian, not products")
        return Tower(groups, maps, ProductTail(tuple(comps)), name)
    H = build_group(tail["group"])
    if not isinstance(H, FgAbGroup):
        raise UnsupportedInstance("multiplication tails need an f.g. abelian group")
    rule = tail["multipliers"]
    if not groups:
        groups = [H]
    return Tower(groups, maps, MultiplicationTail(H, rule if not isinstance(rule, list) else tuple(rule)), name)
