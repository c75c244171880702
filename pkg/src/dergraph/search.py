"""Bitset branch-and-bound for maximum cliques.

Graphs are lists of int bitsets. Upper bounds come from a greedy sequential
colouring of the candidate set, as in the MCQ/BBMC family of solvers.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Sequence


class _Exhausted(Exception):
    pass


class _Done(Exception):
    pass


@dataclass(frozen=True)
class CliqueSearch:
    size: int
    vertices: tuple[int, ...]
    exact: bool
    nodes: int
    upper: int


def _color_sort(rows, P):
    order = []
    bounds = []
    U = P
    k = 0
    while U:
        k += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~rows[v]
            Q &= ~low
            U ^= low
            order.append(v)
            bounds.append(k)
    return order, bounds


def _popcount(x: int) -> int:
    return bin(x).count("1")


def max_clique_bitset(
    rows: Sequence[int],
    candidates: int | None = None,
    forced: Sequence[int] = (),
    initial: Sequence[int] = (),
    stop_at: int | None = None,
    budget: int = 10**8,
) -> CliqueSearch:
    """Maximum clique containing ``forced`` inside ``candidates``.

    ``initial`` is a known clique (including ``forced``) used as the starting
    incumbent. ``stop_at`` is a proven upper bound: the search ends as soon
    as the incumbent reaches it. On budget exhaustion the incumbent is
    returned with ``exact=False``.
    """
    m = len(rows)
    if candidates is None:
        candidates = (1 << m) - 1
    forced = list(forced)
    P = candidates
    for v in forced:
        P &= rows[v]
    best = sorted(initial) if initial else sorted(forced)
    nodes = 0
    color_bound = len(forced) + _popcount(P)
    limit = stop_at if stop_at is not None else m

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 3 * m + 200))

    def expand(R, P):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise _Exhausted
        order, bounds = _color_sort(rows, P)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + bounds[idx] <= len(best):
                return
            v = order[idx]
            R.append(v)
            NP = P & rows[v]
            if NP:
                expand(R, NP)
            elif len(R) > len(best):
                best = sorted(R)
                if len(best) >= limit:
                    raise _Done
            R.pop()
            P &= ~(1 << v)

    exact = True
    try:
        if len(best) < limit:
            if P:
                order, bounds = _color_sort(rows, P)
                color_bound = len(forced) + (max(bounds) if bounds else 0)
                expand(list(forced), P)
            elif len(forced) > len(best):
                best = sorted(forced)
    except _Done:
        pass
    except _Exhausted:
        exact = False
    finally:
        sys.setrecursionlimit(old_limit)
    upper = len(best) if exact else min(color_bound, limit)
    return CliqueSearch(len(best), tuple(best), exact, nodes, upper)


@dataclass(frozen=True)
class CliqueEnumeration:
    cliques: tuple[tuple[int, ...], ...]
    complete: bool
    nodes: int


def enumerate_cliques_of_size(
    rows: Sequence[int],
    size: int,
    candidates: int | None = None,
    forced: Sequence[int] = (),
    cap: int = 10_000,
    budget: int = 10**7,
) -> CliqueEnumeration:
    """All cliques of exactly ``size`` vertices that contain ``forced``.

    Intended for ``size`` equal to the clique number, where every such clique
    is maximal. ``complete`` is False when ``cap`` or ``budget`` cut the
    enumeration short.
    """
    m = len(rows)
    if candidates is None:
        candidates = (1 << m) - 1
    P = candidates
    for v in forced:
        P &= rows[v]
    found: list[tuple[int, ...]] = []
    nodes = 0
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 3 * m + 200))

    def expand(R, P):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Exhausted
        order, bounds = _color_sort(rows, P)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + bounds[idx] < size:
                return
            v = order[idx]
            R.append(v)
            if len(R) == size:
                found.append(tuple(sorted(R)))
                if len(found) > cap:
                    raise _Exhausted
            else:
                NP = P & rows[v]
                if NP:
                    expand(R, NP)
            R.pop()
            P &= ~(1 << v)

    complete = True
    try:
        if len(forced) == size:
            found.append(tuple(sorted(forced)))
        elif P:
            expand(list(forced), P)
    except _Exhausted:
        complete = False
    finally:
        sys.setrecursionlimit(old_limit)
    return CliqueEnumeration(tuple(sorted(set(found))), complete, nodes)
