"""Finite ultrametric spaces and the one-third partition."""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from ..errors import EmptyInput, NotUltrametric
from ..pl_core import as_rational, format_rational, parse_rational
from .certificates import HomogeneityCertificate, PredicateTable, Threshold, certify

THIRD = Fraction(1, 3)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


@dataclass(frozen=True)
class UltrametricSpace:
    dist: tuple

    @property
    def size(self) -> int:
        return len(self.dist)

    def d(self, x: int, y: int) -> Fraction:
        return self.dist[x][y]

    @cached_property
    def levels(self) -> tuple[tuple[Fraction, ...], tuple[tuple[int, ...], ...]]:
        """Sorted distinct distances and the matrix of their ranks; rank order is distance order."""
        # Fraction hashing is slow; (numerator, denominator) pairs are exact keys
        keys = [[(x.numerator, x.denominator) for x in row] for row in self.dist]
        values = sorted(Fraction(*k) for k in {k for row in keys for k in row})
        index = {(v.numerator, v.denominator): rank for rank, v in enumerate(values)}
        return tuple(values), tuple(tuple(index[k] for k in row) for row in keys)

    @cached_property
    def is_ultrametric(self) -> bool:
        ranks = self.levels[1]
        return _subdominant(ranks) == [list(row) for row in ranks]

    def require_ultrametric(self) -> None:
        if not self.is_ultrametric:
            raise NotUltrametric("distance matrix violates d(x,z) <= max(d(x,y), d(y,z))")

    def table(self) -> PredicateTable:
        dist = self.dist
        return PredicateTable(2, lambda x, y: dist[x][y])


def _subdominant(dist) -> list[list]:
    """Single-linkage (subdominant) ultrametric; equals ``dist`` iff ``dist`` is ultrametric."""
    n = len(dist)
    edges = sorted((dist[i][j], i, j) for i in range(n) for j in range(i + 1, n))
    members = {i: [i] for i in range(n)}
    owner = list(range(n))
    out = [[0] * n for _ in range(n)]
    for w, i, j in edges:
        ri, rj = owner[i], owner[j]
        if ri == rj:
            continue
        for x in members[ri]:
            for y in members[rj]:
                out[x][y] = out[y][x] = w
        for y in members[rj]:
            owner[y] = ri
        members[ri].extend(members.pop(rj))
    return out


def make_space(dist: Sequence[Sequence], rescale: bool = True) -> UltrametricSpace:
    """Validated space; distances are rescaled into [0, 1] when the diameter exceeds 1."""
    rows = [[as_rational(x) for x in row] for row in dist]
    n = len(rows)
    if n == 0:
        raise EmptyInput("empty distance matrix")
    if any(len(row) != n for row in rows):
        raise ValueError("distance matrix is not square")
    keys = [[(x.numerator, x.denominator) for x in row] for row in rows]
    for i, row in enumerate(keys):
        if row[i][0] != 0:
            raise ValueError(f"nonzero diagonal entry at {i}")
        for j in range(i + 1, n):
            if row[j] != keys[j][i]:
                raise ValueError(f"asymmetric entries at ({i},{j})")
            if row[j][0] <= 0:
                raise ValueError(f"distinct points {i},{j} at distance {rows[i][j]}")
    diam = max(Fraction(*k) for k in {k for row in keys for k in row})
    if rescale and diam > 1:
        rows = [[x / diam for x in row] for row in rows]
    elif diam > 1:
        raise ValueError("distances must lie in [0, 1]")
    return UltrametricSpace(tuple(tuple(row) for row in rows))


def closed_ball_classes(space: UltrametricSpace, points: Sequence[int], r: Fraction) -> list[list[int]]:
    """Partition of ``points`` into closed r-balls, ordered by smallest member."""
    values, ranks = space.levels
    cut = bisect_right(values, as_rational(r))  # d <= r  iff  rank < cut
    uf = UnionFind(points)
    pts = list(points)
    for a in range(len(pts)):
        row = ranks[pts[a]]
        for b in range(a + 1, len(pts)):
            if row[pts[b]] < cut:
                uf.union(pts[a], pts[b])
    groups: dict[int, list[int]] = {}
    for x in sorted(pts):
        groups.setdefault(uf.find(x), []).append(x)
    return sorted(groups.values(), key=lambda g: g[0])


def _minimal_cover(masses: list[Fraction], candidates: list[int]) -> list[int]:
    """Inclusion-minimal subset of ``candidates`` with total mass >= 1/3.

    Greedy by descending mass, then drop members (smallest first) whose
    removal keeps the total at or above 1/3.
    """
    order = sorted(candidates, key=lambda k: (-masses[k], k))
    chosen, total = [], Fraction(0)
    for k in order:
        if total >= THIRD:
            break
        chosen.append(k)
        total += masses[k]
    for k in sorted(chosen, key=lambda k: (masses[k], k)):
        if total - masses[k] >= THIRD:
            chosen.remove(k)
            total -= masses[k]
    return sorted(chosen)


def ultrametric_partition(
    space: UltrametricSpace, A: Sequence[int], B: Sequence[int], r
) -> HomogeneityCertificate:
    """Subsets A_0 of A and B_0 of B, each at least a third, with all cross distances <= r or all > r."""
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise EmptyInput("A and B must be nonempty")
    r = as_rational(r)
    space.require_ultrametric()
    table = space.table()
    if r < 0:
        return certify(table, (A, B), (A, B), Threshold(r, "gt"))

    classes = closed_ball_classes(space, sorted(set(A) | set(B)), r)
    set_a, set_b = set(A), set(B)
    na, nb = len(A), len(B)
    a_parts = [[x for x in c if x in set_a] for c in classes]
    b_parts = [[x for x in c if x in set_b] for c in classes]
    for ap, bp in zip(a_parts, b_parts):
        if 3 * len(ap) >= na and 3 * len(bp) >= nb:
            return certify(table, (A, B), (ap, bp), Threshold(r, "le"))

    a_mass = [Fraction(len(ap), na) for ap in a_parts]
    b_mass = [Fraction(len(bp), nb) for bp in b_parts]
    heavy_a = [k for k in range(len(classes)) if a_mass[k] >= b_mass[k]]
    if sum(a_mass[k] for k in heavy_a) >= Fraction(1, 2):
        chosen = set(_minimal_cover(a_mass, heavy_a))
        a0 = [x for k in chosen for x in a_parts[k]]
        b0 = [x for k in range(len(classes)) if k not in chosen for x in b_parts[k]]
    else:
        heavy_b = [k for k in range(len(classes)) if a_mass[k] < b_mass[k]]
        chosen = set(_minimal_cover(b_mass, heavy_b))
        b0 = [x for k in chosen for x in b_parts[k]]
        a0 = [x for k in range(len(classes)) if k not in chosen for x in a_parts[k]]
    return certify(table, (A, B), (a0, b0), Threshold(r, "gt"))


@dataclass(frozen=True)
class UltrametricCutter:
    """Threshold cutter for the distance predicate of an ultrametric space."""

    space: UltrametricSpace
    delta: Fraction = THIRD

    @property
    def table(self) -> PredicateTable:
        return self.space.table()

    def __call__(self, sets: Sequence[Sequence[int]], r) -> HomogeneityCertificate:
        A, B = sets
        return ultrametric_partition(self.space, A, B, r)


def space_to_json(space: UltrametricSpace) -> dict:
    return {"n": space.size, "dist": [[format_rational(x) for x in row] for row in space.dist]}


def space_from_json(obj: dict) -> UltrametricSpace:
    rows = [[parse_rational(x) for x in row] for row in obj["dist"]]
    if len(rows) != int(obj["n"]):
        raise ValueError("'n' does not match the matrix size")
    return make_space(rows, rescale=False)
