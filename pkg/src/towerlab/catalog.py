"""Built-in library of small finite groups.

Set ``TOWERLAB_CATALOG`` to a JSON file mapping names to
``{"order": n, "table": [...]}`` or ``{"permutations": [[...], ...]}`` to add
or replace entries.
"""

from __future__ import annotations

import json
import os
from functools import lru_cache

from .groups import FiniteGroup, GroupError, ProductGroup, to_finite_group


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], name=f"Z{n}")


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return FiniteGroup([[0]], name=f"S{n}")
    swap = (1, 0) + tuple(range(2, n))
    cycle = tuple(range(1, n)) + (0,)
    return FiniteGroup.from_permutations([swap, cycle], name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    # the 3-cycles (0 1 i) generate A_n
    gens = [_three_cycle(n, i) for i in range(2, n)]
    return FiniteGroup.from_permutations(gens or [tuple(range(max(n, 1)))], name=f"A{n}")


def _three_cycle(n: int, i: int) -> tuple:
    p = list(range(n))
    p[0], p[1], p[i] = 1, i, 0
    return tuple(p)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of a regular n-gon, order 2n."""
    r = tuple((i + 1) % n for i in range(n))
    s = tuple((-i) % n for i in range(n))
    return FiniteGroup.from_permutations([r, s], name=f"D{n}")


def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def quaternion() -> FiniteGroup:
    """Q8 realized by Hamilton products of the units ±1, ±i, ±j, ±k."""
    units = [(s * (k == 0), s * (k == 1), s * (k == 2), s * (k == 3))
             for k in range(4) for s in (1, -1)]
    return FiniteGroup.from_elements(units, _qmul, name="Q8")


def direct_product_table(*groups, name: str | None = None) -> FiniteGroup:
    G, _ = to_finite_group(ProductGroup(groups))
    G.name = name or "x".join(str(g) for g in groups)
    return G


def _builtin() -> dict:
    cat = {f"Z{n}": (lambda n=n: cyclic(n)) for n in range(1, 17)}
    z2 = cyclic(2)
    cat.update({
        "Z2xZ2": lambda: direct_product_table(z2, z2, name="Z2xZ2"),
        "Z2xZ4": lambda: direct_product_table(z2, cyclic(4), name="Z2xZ4"),
        "Z2xZ2xZ2": lambda: direct_product_table(z2, z2, z2, name="Z2xZ2xZ2"),
        "Z4xZ4": lambda: direct_product_table(cyclic(4), cyclic(4), name="Z4xZ4"),
        "Z2xZ6": lambda: direct_product_table(z2, cyclic(6), name="Z2xZ6"),
        "S3": lambda: symmetric(3),
        "D4": lambda: dihedral(4),
        "D5": lambda: dihedral(5),
        "D6": lambda: dihedral(6),
        "Q8": quaternion,
        "A4": lambda: alternating(4),
        "S4": lambda: symmetric(4),
        "S3xZ2": lambda: direct_product_table(symmetric(3), z2, name="S3xZ2"),
        "Q8xZ2": lambda: direct_product_table(quaternion(), z2, name="Q8xZ2"),
    })
    return cat


def _load_override(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    out = {}
    for name, desc in data.items():
        if "table" in desc:
            out[name] = lambda desc=desc, name=name: FiniteGroup.from_json(desc, name=name)
        elif "permutations" in desc:
            out[name] = lambda desc=desc, name=name: FiniteGroup.from_permutations(
                desc["permutations"], name=name)
        else:
            raise GroupError(f"catalog entry {name!r} needs 'table' or 'permutations'")
    return out


@lru_cache(maxsize=8)
def _catalog(override: str | None) -> dict:
    cat = _builtin()
    if override:
        cat.update(_load_override(override))
    return cat


_cache: dict = {}


def catalog_names() -> list[str]:
    return sorted(_catalog(os.environ.get("TOWERLAB_CATALOG")))


def get(name: str) -> FiniteGroup:
    override = os.environ.get("TOWERLAB_CATALOG")
    key = (override, name)
    if key not in _cache:
        cat = _catalog(override)
        if name not in cat:
            raise KeyError(f"no catalog group named {name!r}")
        _cache[key] = cat[name]()
    return _cache[key]


def groups_up_to(order: int) -> list[FiniteGroup]:
    out = [get(n) for n in catalog_names()]
    return sorted((g for g in out if g.order <= order), key=lambda g: (g.order, g.name))
