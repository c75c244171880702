"""Group builders, the group file format and the built-in test corpus."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from dergraph.errors import DergraphError, GroupError
from dergraph.perms import (
    DEFAULT_MAX_ORDER,
    Permutation,
    PermutationGroup,
    format_permutation,
    generate_group,
    parse_permutation,
)

log = logging.getLogger(__name__)

FAMILIES = ("symmetric", "alternating", "cyclic-regular", "dihedral", "paper-multipartite")
MULTIPARTITE_MAX_DEGREE = 18


def _cycle(points, n):
    return Permutation.from_cycles([list(points)], n)


def multipartite_generators(n: int) -> list[Permutation]:
    """Generators for the even part of ``<(1,2),(3,4),...,(n-1,n), c>``.

    ``c = (1,3,...,n-1)(2,4,...,n)``. The returned set is the products of
    cyclically consecutive pair swaps together with ``c``; ``c`` is even
    because ``n/2`` is odd.
    """
    _check_multipartite_degree(n)
    k = n // 2
    pairs = [(2 * i, 2 * i + 1) for i in range(k)]
    gens = [Permutation.from_cycles([pairs[i], pairs[(i + 1) % k]], n) for i in range(k)]
    gens.append(Permutation.from_cycles([list(range(0, n, 2)), list(range(1, n, 2))], n))
    return gens


def _check_multipartite_degree(n: int) -> None:
    if n < 6 or n % 2 or (n // 2) % 2 == 0:
        raise GroupError(f"construction needs n even, n/2 odd and n >= 6 (got n={n})")
    if n > MULTIPARTITE_MAX_DEGREE:
        raise GroupError(f"construction is capped at degree {MULTIPARTITE_MAX_DEGREE}")


def multipartite_construction(n: int, max_order: int = DEFAULT_MAX_ORDER) -> PermutationGroup:
    """Even permutations of ``<(1,2),...,(n-1,n), (1,3,...,n-1)(2,4,...,n)>``.

    The full group is enumerated and filtered to its even elements; the
    result is checked against the closure of :func:`multipartite_generators`.
    """
    _check_multipartite_degree(n)
    swaps = [Permutation.from_cycles([[2 * i, 2 * i + 1]], n) for i in range(n // 2)]
    c = Permutation.from_cycles([list(range(0, n, 2)), list(range(1, n, 2))], n)
    big = generate_group(swaps + [c], max_order=max_order)
    expected = (n // 2) * 2 ** (n // 2)
    if big.order != expected:
        raise GroupError(f"closure has order {big.order}, expected {expected}")
    even = {p for p in big.elements if p.is_even()}
    G = generate_group(multipartite_generators(n), max_order=max_order, name=f"paper-multipartite-{n}")
    if set(G.elements) != even:
        raise GroupError("generating set does not realise the even subgroup")
    return G


def standard_family(kind: str, n: int, max_order: int = DEFAULT_MAX_ORDER) -> PermutationGroup:
    """Natural actions of the classical families; ``cyclic-regular`` is C_n on itself."""
    if n < 1:
        raise GroupError("degree must be positive")
    if kind == "paper-multipartite":
        return multipartite_construction(n, max_order)
    if kind == "symmetric":
        gens = [_cycle(range(n), n)] if n < 3 else [_cycle([0, 1], n), _cycle(range(n), n)]
        order = math.factorial(n)
    elif kind == "alternating":
        if n < 3:
            raise GroupError("alternating family starts at degree 3")
        long = range(n) if n % 2 else range(1, n)
        gens = [_cycle([0, 1, 2], n)] if n == 3 else [_cycle([0, 1, 2], n), _cycle(long, n)]
        order = math.factorial(n) // 2
    elif kind == "cyclic-regular":
        gens = [_cycle(range(n), n)]
        order = n
    elif kind == "dihedral":
        if n < 3:
            raise GroupError("dihedral family starts at degree 3")
        refl = Permutation(tuple((-i) % n for i in range(n)))
        gens = [_cycle(range(n), n), refl]
        order = 2 * n
    else:
        raise GroupError(f"unknown family {kind!r}; choose from {', '.join(FAMILIES)}")
    G = generate_group(gens, max_order=max_order, name=f"{kind}-{n}")
    if G.order != order:
        raise GroupError(f"{kind}-{n} closed to order {G.order}, expected {order}")
    return G


# -- group file format -------------------------------------------------------


def group_to_dict(G: PermutationGroup, name: str | None = None) -> dict[str, Any]:
    return {
        "name": name or G.name or "group",
        "degree": G.degree,
        "generators": [format_permutation(g) for g in G.generators],
    }


def write_group_file(G: PermutationGroup, path, name: str | None = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(group_to_dict(G, name), indent=2) + "\n", encoding="utf-8")
    return path


def group_from_dict(doc: dict, max_order: int = DEFAULT_MAX_ORDER) -> PermutationGroup:
    if not isinstance(doc, dict):
        raise GroupError("group file must hold a JSON object")
    missing = [k for k in ("name", "degree", "generators") if k not in doc]
    if missing:
        raise GroupError(f"missing field(s): {', '.join(missing)}")
    name, degree, gens = doc["name"], doc["degree"], doc["generators"]
    if not isinstance(name, str):
        raise GroupError("'name' must be a string")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise GroupError("'degree' must be a positive integer")
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise GroupError("'generators' must be a list of strings")
    perms = [parse_permutation(g, degree) for g in gens]
    G = generate_group(perms, max_order=max_order, name=name, degree=degree)
    if "order" in doc and doc["order"] != G.order:
        raise GroupError(f"file states order {doc['order']} but generators give {G.order}")
    return G


def read_group_file(path, max_order: int = DEFAULT_MAX_ORDER) -> PermutationGroup:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GroupError(f"invalid JSON: {e}") from None
    return group_from_dict(doc, max_order)


# -- corpus ------------------------------------------------------------------


@dataclass
class CorpusEntry:
    name: str
    group: PermutationGroup | None
    expected: dict[str, Any] = field(default_factory=dict)
    source: str | None = None
    error: str | None = None


def builtin_corpus(max_order: int = DEFAULT_MAX_ORDER) -> list[CorpusEntry]:
    """Transitive groups of degree 3..10 from the standard families plus constructions.

    Every family member that fits the default vertex cap is included.
    """
    one = "1/1"
    specs = (
        [("symmetric", n, {"order": math.factorial(n), "rho": one}) for n in range(3, 7)]
        + [("alternating", n, {"order": math.factorial(n) // 2, "rho": one}) for n in range(3, 8)]
        + [("cyclic-regular", n, {"order": n, "rho": one, "join_kind": "complete-graph"}) for n in range(3, 11)]
        # the rotation subgroup is a regular clique of size n
        + [("dihedral", n, {"order": 2 * n, "rho": one}) for n in range(3, 11)]
        + [
            ("paper-multipartite", 6, {"order": 12, "multipartite_parts": 3, "alpha": 4, "rho": "2/1"}),
            ("paper-multipartite", 10, {"order": 80, "multipartite_parts": 5, "alpha": 16, "rho": "2/1"}),
        ]
    )
    out = []
    for kind, n, expected in specs:
        G = standard_family(kind, n, max_order)
        out.append(CorpusEntry(G.name, G, expected, source=f"builtin:{kind}:{n}"))
    return out


def load_corpus(path, max_order: int = DEFAULT_MAX_ORDER) -> list[CorpusEntry]:
    """Read every ``*.json`` group file in a directory, sorted by file name.

    A file that fails to load becomes an entry with ``group=None`` and the
    error message; the rest of the directory is still read.
    """
    out = []
    for f in sorted(Path(path).glob("*.json")):
        try:
            G = read_group_file(f, max_order)
        except (DergraphError, OSError) as e:
            log.warning("skipping %s: %s", f.name, e)
            out.append(CorpusEntry(f.stem, None, source=str(f), error=f"{f.name}: {e}"))
            continue
        out.append(CorpusEntry(G.name, G, source=str(f)))
    return out


def write_corpus(entries, directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [write_group_file(e.group, directory / f"{e.name}.json", e.name) for e in entries]
