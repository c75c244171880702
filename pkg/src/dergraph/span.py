"""Exact row-reduction over the rationals for span-membership tests."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class RationalSpan:
    """Incrementally maintained reduced row echelon basis of sparse vectors.

    Vectors are mappings ``column -> value`` (zeros omitted) or iterables of
    column indices, the latter meaning a 0/1 indicator vector.
    """

    def __init__(self, vectors: Iterable = ()):
        self._rows: dict[int, dict[int, Fraction]] = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @staticmethod
    def _as_sparse(v) -> dict[int, Fraction]:
        if isinstance(v, Mapping):
            return {int(k): Fraction(x) for k, x in v.items() if x != 0}
        return {int(k): Fraction(1) for k in v}

    def _reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        vec = dict(vec)
        for p, row in self._rows.items():
            c = vec.get(p)
            if not c:
                continue
            for k, x in row.items():
                y = vec.get(k, 0) - c * x
                if y:
                    vec[k] = y
                else:
                    vec.pop(k, None)
        return vec

    def add(self, v) -> bool:
        """Add a vector; returns True when it raised the rank."""
        r = self._reduce(self._as_sparse(v))
        if not r:
            return False
        p = min(r)
        lead = r[p]
        r = {k: x / lead for k, x in r.items()}
        for q, row in self._rows.items():
            c = row.get(p)
            if c:
                for k, x in r.items():
                    y = row.get(k, 0) - c * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        self._rows[p] = r
        return True

    def contains(self, v) -> bool:
        return not self._reduce(self._as_sparse(v))
