"""Roots of definite even lattices and their ADE types."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lattice import IntegerLattice, is_positive_definite, rational_rank
from .quadbody import QuadraticForm, search

_ORDER = {"A": 0, "D": 1, "E": 2}


class ClassificationError(ValueError):
    pass


def _normalize(components: Iterable[tuple[str, int]]) -> Counter:
    out: Counter = Counter()
    for letter, n in components:
        if letter == "D" and n <= 3:
            if n == 3:
                out[("A", 3)] += 1
            elif n == 2:
                out[("A", 1)] += 2
            continue
        if letter == "A" and n < 1:
            continue
        if letter == "E" and n not in (6, 7, 8):
            raise ClassificationError(f"no root system E{n}")
        out[(letter, n)] += 1
    return out


@dataclass(frozen=True)
class ADEType:
    """Formal sum of A_l, D_m, E_n; D3 = A3, D2 = 2A1 and D1 = D0 = 0."""

    components: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        counts = _normalize(self.components)
        comps = sorted(counts.elements(), key=lambda c: (c[1], _ORDER[c[0]]))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def parse(cls, text: str) -> ADEType:
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls()
        comps = []
        for term in text.split("+"):
            m = re.fullmatch(r"(\d*)([ADE])(\d+)", term)
            if not m:
                raise ClassificationError(f"cannot parse ADE term {term!r}")
            mult = int(m.group(1) or 1)
            comps += [(m.group(2), int(m.group(3)))] * mult
        return cls(tuple(comps))

    @classmethod
    def single(cls, letter: str, n: int) -> ADEType:
        return cls(((letter, n),))

    def __add__(self, other: ADEType) -> ADEType:
        return ADEType(self.components + other.components)

    @property
    def milnor_number(self) -> int:
        return sum(n for _, n in self.components)

    @property
    def root_count(self) -> int:
        return sum(root_count_of(letter, n) for letter, n in self.components)

    def __str__(self) -> str:
        if not self.components:
            return "0"
        counts = Counter(self.components)
        seen = []
        for c in self.components:
            if c not in seen:
                seen.append(c)
        return "+".join(f"{counts[c] if counts[c] > 1 else ''}{c[0]}{c[1]}" for c in seen)


def root_count_of(letter: str, n: int) -> int:
    if letter == "A":
        return n * (n + 1)
    if letter == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]


def classify_component(rank: int, count: int) -> tuple[str, int]:
    """Irreducible root system from (rank, number of roots)."""
    if count == rank * (rank + 1):
        return ("A", rank)
    if rank >= 4 and count == 2 * rank * (rank - 1):
        return ("D", rank)
    if (rank, count) in ((6, 72), (7, 126), (8, 240)):
        return ("E", rank)
    raise ClassificationError(f"no irreducible root system of rank {rank} with {count} roots")


@dataclass
class RootInventory:
    roots: list[tuple[int, ...]]
    components: list[list[int]]  # indices into roots, each closed under negation
    ranks: list[int]
    nodes: int = 0

    @property
    def count(self) -> int:
        return len(self.roots)

    def component_table(self) -> list[tuple[int, int]]:
        return [(rk, len(c)) for rk, c in zip(self.ranks, self.components)]

    def to_json(self) -> dict:
        return {"count": self.count,
                "components": [{"rank": rk, "roots": n, "type": "%s%d" % classify_component(rk, n)}
                               for rk, n in self.component_table()]}


def root_components(gram: Sequence[Sequence[int]], roots: Sequence[Sequence[int]]
                    ) -> tuple[list[list[int]], list[int]]:
    """Connected components (under non-zero inner product) and their ranks."""
    lat_rows = [tuple(row) for row in gram]
    parent = list(range(len(roots)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    images = [tuple(sum(g * x for g, x in zip(row, r)) for row in lat_rows) for r in roots]
    for i in range(len(roots)):
        gi = images[i]
        for j in range(i + 1, len(roots)):
            if find(i) != find(j) and sum(a * b for a, b in zip(gi, roots[j])) != 0:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(i)
    comps = sorted(groups.values(), key=lambda c: min(roots[i] for i in c))
    ranks = [rational_rank([roots[i] for i in c]) for c in comps]
    return comps, ranks


def enumerate_roots(lat: IntegerLattice) -> RootInventory:
    """All v with v.v = 2 in a positive-definite even lattice."""
    if not lat.is_even:
        raise ValueError(f"{lat.name or 'lattice'} is not even")
    if not is_positive_definite(lat.gram):
        raise ValueError(f"{lat.name or 'lattice'} is not positive definite")
    form = QuadraticForm.from_gram(lat.gram, const=-2)
    res = search(form, target=0)
    roots = [tuple(int(x) for x in pt) for pt in res.points]
    comps, ranks = root_components(lat.gram, roots)
    return RootInventory(roots, comps, ranks, res.nodes)


def ade_type(inv: RootInventory) -> ADEType:
    return ADEType(tuple(classify_component(rk, len(c))
                         for rk, c in zip(inv.ranks, inv.components)))


def lattice_ade_type(lat: IntegerLattice) -> ADEType:
    return ade_type(enumerate_roots(lat))


# Venkov lattices whose glue coset contributes roots: ps + (r - s) = 8.
VENKOV_EXCEPTIONS = {
    (7, 2, 1): ADEType.parse("A1"),
    (5, 4, 1): ADEType.parse("A4"),
    (3, 4, 2): ADEType.parse("2A2"),
    (3, 6, 1): ADEType.parse("E6"),
}


def venkov_type(p: int, r: int, s: int) -> ADEType:
    """Root type of V(p; r, s) without enumeration: D_{r-s} or an exception."""
    if (r, s) == (8, 0):
        return ADEType.single("E", 8)
    if (p, r, s) in VENKOV_EXCEPTIONS:
        return VENKOV_EXCEPTIONS[(p, r, s)]
    return ADEType.single("D", r - s)


_definite_cache: dict[tuple, ADEType] = {}


def sigma_of_definite_part(decomp, summands=None, cross_check: bool = True) -> ADEType:
    """Root type of the positive-definite summands of a Lambda decomposition.

    ``summands`` restricts the sum to a subset of the decomposition.  Venkov
    summands of rank <= 16 are confirmed by enumeration when ``cross_check``
    is set.
    """
    total = ADEType()
    for part in (decomp.summands if summands is None else summands):
        if part.kind == "V":
            spec = part.venkov
            expected = venkov_type(spec.p, spec.r, spec.s)
            key = (spec.p, spec.r, spec.s)
            if cross_check and spec.r <= 16:
                if key not in _definite_cache:
                    _definite_cache[key] = lattice_ade_type(part.lattice)
                if _definite_cache[key] != expected:
                    raise ClassificationError(
                        f"{part.descriptor}: enumerated {_definite_cache[key]}, expected {expected}")
            total = total + expected
        elif part.kind == "root":
            total = total + ADEType.parse(part.root_type)
    return total
