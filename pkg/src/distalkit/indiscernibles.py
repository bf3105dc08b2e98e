"""Indiscernible sequences in M_[0,1].

Types are determined by their two-variable restrictions, so a sequence of
k-tuples is order-indiscernible as soon as every element has one k-type and
every increasing pair of elements has one 2k-type.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    ArityMismatch,
    DiagonalConditionFailed,
    DimensionMismatch,
    PreconditionFailed,
    TooShort,
)
from .pl_core import ONE, ZERO, MonotoneMap, eval_many, make_map, map_from_json, map_to_json, merged_grid
from .type_chains import Chain, canonicalize, chain_to_tuple, image_chain


@dataclass(frozen=True)
class MapSequence:
    arity: int
    elements: tuple

    def __post_init__(self):
        for e in self.elements:
            if len(e) != self.arity:
                raise ArityMismatch(f"element of arity {len(e)} in a sequence of arity {self.arity}")

    def __len__(self):
        return len(self.elements)


def make_sequence(elements) -> MapSequence:
    elems = tuple(((e,) if isinstance(e, MonotoneMap) else tuple(e)) for e in elements)
    if not elems:
        raise TooShort("empty sequence")
    return MapSequence(len(elems[0]), elems)


def element_type(s: MapSequence, i: int) -> Chain:
    return image_chain(list(s.elements[i]))


def pair_type(s: MapSequence, i: int, j: int) -> Chain:
    return image_chain(list(s.elements[i]) + list(s.elements[j]))


def is_indiscernible(s: MapSequence) -> bool:
    if len(s) < 2:
        raise TooShort("need at least two elements")
    first = element_type(s, 0)
    if any(element_type(s, i) != first for i in range(1, len(s))):
        return False
    p = pair_type(s, 0, 1)
    return all(pair_type(s, i, j) == p for i, j in combinations(range(len(s)), 2))


def _diagonal_hits(p: Chain) -> list[tuple[Fraction, Fraction]]:
    """The set {a : (a, a) in p} as sorted, merged closed intervals."""
    hits = []
    for (a0, b0), (a1, b1) in zip(p.vertices, p.vertices[1:]):
        d0, d1 = a0 - b0, a1 - b1
        if d0 == 0 and d1 == 0:
            hits.append((a0, a1))
        elif d0 == 0:
            hits.append((a0, a0))
        elif d1 == 0:
            hits.append((a1, a1))
        elif d0 * d1 < 0:
            lam = d0 / (d0 - d1)
            x = a0 + lam * (a1 - a0)
            hits.append((x, x))
    hits.sort()
    merged = []
    for lo, hi in hits:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return merged


def _param_set(x0: Fraction, x1: Fraction, hits) -> list[tuple[Fraction, Fraction]]:
    """Parameters lam in [0,1] with x0 + lam*(x1 - x0) inside one of the hit intervals."""
    if x0 == x1:
        return [(ZERO, ONE)] if any(lo <= x0 <= hi for lo, hi in hits) else []
    out = []
    for lo, hi in hits:
        l0, l1 = (lo - x0) / (x1 - x0), (hi - x0) / (x1 - x0)
        if l0 > l1:
            l0, l1 = l1, l0
        l0, l1 = max(l0, ZERO), min(l1, ONE)
        if l0 <= l1:
            out.append((l0, l1))
    return out


def _covers_unit(intervals) -> bool:
    reach = ZERO
    started = False
    for lo, hi in sorted(intervals):
        if lo > reach or (not started and lo > 0):
            return False
        started = True
        reach = max(reach, hi)
        if reach >= 1:
            return True
    return False


def diagonal_condition(p: Chain) -> bool:
    """Whether every (a, b) on p has (a, a) or (b, b) on p."""
    if p.dim != 2:
        raise DimensionMismatch(f"pair type must be 2-dimensional, got {p.dim}")
    p = canonicalize(p)
    hits = _diagonal_hits(p)
    for (a0, b0), (a1, b1) in zip(p.vertices, p.vertices[1:]):
        if not _covers_unit(_param_set(a0, a1, hits) + _param_set(b0, b1, hits)):
            return False
    return True


def _sign_runs(f: MonotoneMap, g: MonotoneMap) -> list[tuple[Fraction, Fraction, int]]:
    """Consecutive pieces (t0, t1, sign) of [0, 1] on which sign(f - g) is constant.

    Pieces with sign 0 are stretches where f == g; the others are open
    components of {f > g} (sign 1) or {f < g} (sign -1).
    """
    grid = merged_grid((f, g))
    diffs = [a - b for a, b in zip(eval_many(f, grid), eval_many(g, grid))]
    pts = [(grid[0], diffs[0])]
    for k in range(1, len(grid)):
        d0, d1 = diffs[k - 1], diffs[k]
        if d0 * d1 < 0:
            pts.append((grid[k - 1] + (grid[k] - grid[k - 1]) * d0 / (d0 - d1), ZERO))
        pts.append((grid[k], d1))
    zeros = [k for k, (_, d) in enumerate(pts) if d == 0]
    runs = []
    for za, zb in zip(zeros, zeros[1:]):
        if zb == za + 1:
            runs.append((pts[za][0], pts[zb][0], 0))
        else:
            runs.append((pts[za][0], pts[zb][0], 1 if pts[za + 1][1] > 0 else -1))
    return runs


def build_indiscernible(p: Chain, n: int) -> MapSequence:
    """n maps f_1..f_n with tp(f_i, f_j) = p for all i < j.

    On the coincidence set of a realization (f, g) of p every f_i is the
    identity.  On a component (a, b) where f > g the functions rise from a
    to b one after another on n equal subintervals, f_1 first; where f < g
    the order is reversed.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not diagonal_condition(p):
        raise DiagonalConditionFailed(f"{p} is not the pair type of an indiscernible sequence")
    f, g = chain_to_tuple(p)
    pts = [[(ZERO, ZERO)] for _ in range(n)]
    for t0, t1, sign in _sign_runs(f, g):
        if sign == 0:
            for i in range(n):
                pts[i].append((t1, t1))
            continue
        width = (t1 - t0) / n
        for i in range(n):
            slot = i if sign > 0 else n - 1 - i
            pts[i].append((t0 + slot * width, t0))
            pts[i].append((t0 + (slot + 1) * width, t1))
            pts[i].append((t1, t1))
    maps = []
    for bp in pts:
        clean = []
        for t, v in bp:
            if clean and clean[-1][0] == t:
                continue
            clean.append((t, v))
        maps.append(make_map(clean))
    return make_sequence(maps)


def base_change_check(f1, f2, f3, f4, f5) -> bool:
    """tp(f2, f4) == tp(f1, f3), given (f1,f2,f3,f5) and (f1,f3,f4,f5) indiscernible."""
    s = make_sequence([f1, f2, f3, f4, f5])
    e = s.elements
    for idx in ((0, 1, 2, 4), (0, 2, 3, 4)):
        if not is_indiscernible(MapSequence(s.arity, tuple(e[i] for i in idx))):
            raise PreconditionFailed(f"subsequence {tuple(i + 1 for i in idx)} is not indiscernible")
    return pair_type(s, 1, 3) == pair_type(s, 0, 2)


def sequence_to_json(s: MapSequence) -> dict:
    return {"arity": s.arity, "elements": [[map_to_json(f) for f in e] for e in s.elements]}


def sequence_from_json(obj: dict) -> MapSequence:
    s = MapSequence(int(obj["arity"]), tuple(tuple(map_from_json(f) for f in e) for e in obj["elements"]))
    if not s.elements:
        raise TooShort("empty sequence")
    return s
