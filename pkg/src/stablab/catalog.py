"""Catalog of small groups given by finite presentations.

The shipped collection covers every isomorphism class of order at most
16 (42 groups).  Each entry is realized as an explicit multiplication
table by coset enumeration; ``validate_catalog`` re-checks the declared
orders and pairwise non-isomorphism within each order.
"""

from __future__ import annotations

import functools
from importlib import resources

from .errors import UnknownEntry
from .gtable import GroupTable, are_isomorphic, group_table
from .presentation import Presentation, parse_presentation

# name -> (file stem, expected order)
_ENTRIES = {
    "triv": ("triv", 1),
    "C2": ("c2", 2),
    "C3": ("c3", 3),
    "C4": ("c4", 4),
    "V4": ("v4", 4),
    "C5": ("c5", 5),
    "C6": ("c6", 6),
    "S3": ("s3", 6),
    "C7": ("c7", 7),
    "C8": ("c8", 8),
    "C2xC4": ("c2xc4", 8),
    "C2^3": ("c2_3", 8),
    "D4": ("d4", 8),
    "Q8": ("q8", 8),
    "C9": ("c9", 9),
    "C3xC3": ("c3xc3", 9),
    "C10": ("c10", 10),
    "D5": ("d5", 10),
    "C11": ("c11", 11),
    "C12": ("c12", 12),
    "C2xC6": ("c2xc6", 12),
    "D6": ("d6", 12),
    "A4": ("a4", 12),
    "Dic3": ("dic3", 12),
    "C13": ("c13", 13),
    "C14": ("c14", 14),
    "D7": ("d7", 14),
    "C15": ("c15", 15),
    "C16": ("c16", 16),
    "C4xC4": ("c4xc4", 16),
    "C2xC8": ("c2xc8", 16),
    "C2xC2xC4": ("c2xc2xc4", 16),
    "C2^4": ("c2_4", 16),
    "D8": ("d8", 16),
    "SD16": ("sd16", 16),
    "Q16": ("q16", 16),
    "M4_2": ("m16", 16),
    "D4xC2": ("d4xc2", 16),
    "Q8xC2": ("q8xc2", 16),
    "C4:C4": ("c4sc4", 16),
    "V4:C4": ("v4sc4", 16),
    "Pauli": ("pauli", 16),
}


def catalog_names(max_order: int | None = None) -> list[str]:
    names = [n for n, (_, o) in _ENTRIES.items()
             if max_order is None or o <= max_order]
    return sorted(names, key=lambda n: (_ENTRIES[n][1], n))


def expected_order(name: str) -> int:
    if name not in _ENTRIES:
        raise UnknownEntry(f"no catalog group named {name!r}")
    return _ENTRIES[name][1]


@functools.lru_cache(maxsize=None)
def catalog_presentation(name: str) -> Presentation:
    if name not in _ENTRIES:
        raise UnknownEntry(f"no catalog group named {name!r}")
    stem = _ENTRIES[name][0]
    text = (resources.files("stablab") / "data" / "groups"
            / f"{stem}.grp").read_text(encoding="utf-8")
    return parse_presentation(text)


@functools.lru_cache(maxsize=None)
def catalog_group(name: str) -> GroupTable:
    g = group_table(catalog_presentation(name))
    if g.order != _ENTRIES[name][1]:
        raise UnknownEntry(
            f"catalog group {name}: realized order {g.order} differs "
            f"from the declared {_ENTRIES[name][1]}")
    return g


def groups_up_to(max_order: int) -> list[GroupTable]:
    return [catalog_group(n) for n in catalog_names(max_order)]


def fingerprint(g: GroupTable) -> tuple:
    """Cheap isomorphism invariants, for sanity checks and reports."""
    orders = sorted(g.element_order(x) for x in range(g.order))
    return (g.order, tuple(orders), g.is_abelian(), len(g.center()),
            len(g.commutator_subgroup()))


def validate_catalog(max_order: int = 16) -> dict:
    """Orders match and same-order entries are pairwise non-isomorphic."""
    names = catalog_names(max_order)
    by_order: dict[int, list[str]] = {}
    for n in names:
        by_order.setdefault(_ENTRIES[n][1], []).append(n)
    bad_pairs = []
    for order, group_names in by_order.items():
        for i in range(len(group_names)):
            for j in range(i + 1, len(group_names)):
                a = catalog_group(group_names[i])
                b = catalog_group(group_names[j])
                if are_isomorphic(a, b):
                    bad_pairs.append((group_names[i], group_names[j]))
    return {"count": len(names), "max_order": max_order,
            "duplicate_pairs": bad_pairs, "ok": not bad_pairs}
