"""Types of tuples in M_[0,1] as monotone chains from 0 to 1.

The type of ``(f_1, ..., f_n)`` is the image of ``t -> (f_1(t), ..., f_n(t))``,
a polyline in [0,1]^n that is totally ordered in the product order.  Along
such a chain the coordinate sum is strictly increasing, which gives every
point a unique "average parameter" and makes most questions about chains
reduce to a bisection on vertex sums.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import (
    DimensionMismatch,
    EmptyInput,
    InconsistentAverages,
    InvalidChain,
    MissingPair,
    OutOfRange,
)
from .pl_core import (
    ONE,
    ZERO,
    MonotoneMap,
    _preimage_hi,
    _preimage_lo,
    as_rational,
    compose,
    eval_many,
    format_rational,
    make_map,
    merged_grid,
    parse_rational,
)

Point = tuple


@dataclass(frozen=True)
class Chain:
    dim: int
    vertices: tuple

    def __post_init__(self):
        _validate(self.dim, self.vertices)

    @property
    def sums(self) -> list[Fraction]:
        return [sum(v) for v in self.vertices]

    def __repr__(self) -> str:
        body = " -> ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"Chain[{self.dim}]({body})"


def _validate(dim: int, vertices) -> None:
    if dim < 1:
        raise InvalidChain("dimension must be positive")
    if len(vertices) < 1:
        raise InvalidChain("a chain needs vertices")
    for v in vertices:
        if len(v) != dim:
            raise DimensionMismatch(f"vertex {v} does not have {dim} coordinates")
    if any(x != 0 for x in vertices[0]) or any(x != 1 for x in vertices[-1]):
        raise InvalidChain("chain must run from the all-zeros point to the all-ones point")
    for p, q in zip(vertices, vertices[1:]):
        if any(b < a for a, b in zip(p, q)):
            raise InvalidChain(f"consecutive vertices {p}, {q} are not increasing in the product order")


def _canonical_vertices(vertices) -> tuple:
    out = []
    for v in vertices:
        if out and out[-1] == v:
            continue
        if len(out) >= 2:
            a, b = out[-2], out[-1]
            d1 = [y - x for x, y in zip(a, b)]
            d2 = [y - x for x, y in zip(b, v)]
            s1, s2 = sum(d1), sum(d2)
            # nonnegative direction vectors: parallel iff proportional with the sum ratio
            if all(x * s2 == y * s1 for x, y in zip(d1, d2)):
                out[-1] = v
                continue
        out.append(v)
    if len(out) == 1:
        out.append(out[0])
    return tuple(out)


def make_chain(vertices: Sequence[Sequence]) -> Chain:
    """Validated, canonical chain from a vertex list."""
    if not vertices:
        raise EmptyInput("no vertices")
    verts = tuple(tuple(as_rational(x) for x in v) for v in vertices)
    dim = len(verts[0])
    _validate(dim, verts)
    return Chain(dim, _canonical_vertices(verts))


def canonicalize(c: Chain) -> Chain:
    return Chain(c.dim, _canonical_vertices(c.vertices))


def diagonal(n: int) -> Chain:
    return Chain(n, ((ZERO,) * n, (ONE,) * n))


def image_chain(fs: Sequence[MonotoneMap]) -> Chain:
    if not fs:
        raise EmptyInput("need at least one map")
    grid = merged_grid(fs)
    cols = [eval_many(f, grid) for f in fs]
    return Chain(len(fs), _canonical_vertices(list(zip(*cols))))


def type_eq(c1: Chain, c2: Chain) -> bool:
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"dimensions {c1.dim} and {c2.dim} differ")
    return canonicalize(c1).vertices == canonicalize(c2).vertices


def point_at_sum(c: Chain, sigma) -> Point:
    """The unique point of ``c`` whose coordinates sum to ``sigma`` (0 <= sigma <= dim)."""
    c = canonicalize(c)
    sigma = as_rational(sigma)
    if sigma < 0 or sigma > c.dim:
        raise OutOfRange(f"coordinate sum {sigma} outside [0, {c.dim}]")
    return _point_at_sum(c.vertices, c.sums, sigma)


def _point_at_sum(vertices, sums, sigma) -> Point:
    k = bisect_left(sums, sigma)
    if sums[k] == sigma:
        return vertices[k]
    s0, s1 = sums[k - 1], sums[k]
    lam = (sigma - s0) / (s1 - s0)
    a, b = vertices[k - 1], vertices[k]
    return tuple(x + lam * (y - x) for x, y in zip(a, b))


def contains(c: Chain, point: Sequence) -> bool:
    point = tuple(as_rational(x) for x in point)
    if len(point) != c.dim:
        raise DimensionMismatch(f"point has {len(point)} coordinates, chain has {c.dim}")
    if any(x < 0 or x > 1 for x in point):
        return False
    c = canonicalize(c)
    return _point_at_sum(c.vertices, c.sums, sum(point)) == point


def project(c: Chain, coords: Sequence[int]) -> Chain:
    return Chain(len(coords), _canonical_vertices([tuple(v[i] for i in coords) for v in c.vertices]))


def phi_alpha(f: MonotoneMap, g: MonotoneMap, alpha) -> Fraction:
    """First coordinate of the point (a, b) on the chain im(f, g) with a + b = alpha."""
    alpha = as_rational(alpha)
    if alpha < 0 or alpha > 1:
        raise OutOfRange(f"alpha={alpha} outside [0,1]")
    return _phi_sum(f, g, alpha)


def _phi_sum(f: MonotoneMap, g: MonotoneMap, sigma: Fraction) -> Fraction:
    # Sweep the merged breakpoints of f and g until f + g reaches sigma.
    fts, fvs, gts, gvs = f.ts, f.vs, g.ts, g.vs
    i = j = 0
    prev_a = prev_s = ZERO
    while True:
        tf, tg = fts[i], gts[j]
        if tf == tg:
            a, b = fvs[i], gvs[j]
            i += 1
            j += 1
        elif tf < tg:
            a = fvs[i]
            b = gvs[j - 1] + (gvs[j] - gvs[j - 1]) * (tf - gts[j - 1]) / (tg - gts[j - 1])
            i += 1
        else:
            b = gvs[j]
            a = fvs[i - 1] + (fvs[i] - fvs[i - 1]) * (tg - fts[i - 1]) / (tf - fts[i - 1])
            j += 1
        s = a + b
        if s >= sigma:
            if s == sigma:
                return a
            return prev_a + (a - prev_a) * (sigma - prev_s) / (s - prev_s)
        prev_a, prev_s = a, s


def chain_to_tuple(c: Chain) -> list[MonotoneMap]:
    """Maps (f_1..f_n) with image c, parametrized so their average is the identity."""
    c = canonicalize(c)
    n = c.dim
    params = [s / n for s in c.sums]
    return [make_map(zip(params, [v[i] for v in c.vertices])) for i in range(n)]


def _pair_profile(c: Chain, i: int, k: int):
    p = project(c, (i, k))
    return p.vertices, p.sums


def hausdorff_distance(c1: Chain, c2: Chain) -> Fraction:
    """Exact Hausdorff distance of two chains under the sup norm on [0,1]^n.

    For monotone chains the sup-norm box around x meets B iff, for every
    ordered coordinate pair (i, k), the (i, k)-projection of B has a point
    (p, q) with p >= x_i - r and q <= x_k + r.  On a 2-dimensional chain the
    best such point is the one with p + q = x_i + x_k, so the distance is
    the largest gap between the two chains' pair projections at equal
    coordinate sum.  Both profiles are piecewise linear in the sum, so the
    supremum sits on a vertex sum of one of them.
    """
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"dimensions {c1.dim} and {c2.dim} differ")
    best = ZERO
    for i, k in combinations(range(c1.dim), 2):
        v1, s1 = _pair_profile(c1, i, k)
        v2, s2 = _pair_profile(c2, i, k)
        for sigma in sorted(set(s1) | set(s2)):
            gap = abs(_point_at_sum(v1, s1, sigma)[0] - _point_at_sum(v2, s2, sigma)[0])
            if gap > best:
                best = gap
    return best


def point_chain_distance(x: Sequence, c: Chain) -> Fraction:
    """Sup-norm distance from a point of [0,1]^n to a chain."""
    x = tuple(as_rational(v) for v in x)
    if len(x) != c.dim:
        raise DimensionMismatch("point and chain dimensions differ")
    best = ZERO
    for i in range(c.dim):
        for k in range(c.dim):
            if i == k:
                continue
            verts, sums = _pair_profile(c, i, k)
            gap = x[i] - _point_at_sum(verts, sums, x[i] + x[k])[0]
            if gap > best:
                best = gap
    return best


def hausdorff_bounds(c1: Chain, c2: Chain, resolution) -> tuple[Fraction, Fraction]:
    """Certified ``(lo, hi)`` around the Hausdorff distance from samples.

    Each chain is sampled so consecutive samples are within ``resolution`` in
    sup norm; exact point-to-chain distances at the samples give ``lo`` and
    ``lo + resolution`` bounds every unsampled point.
    """
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"dimensions {c1.dim} and {c2.dim} differ")
    resolution = as_rational(resolution)
    lo = ZERO
    for a, b in ((c1, c2), (c2, c1)):
        for x in _samples(canonicalize(a), resolution):
            d = point_chain_distance(x, b)
            if d > lo:
                lo = d
    return lo, lo + resolution


def _samples(c: Chain, h: Fraction):
    verts = c.vertices
    yield verts[0]
    for a, b in zip(verts, verts[1:]):
        span = max(y - x for x, y in zip(a, b))
        steps = max(1, -(-span // h))
        for s in range(1, int(steps) + 1):
            lam = Fraction(s, int(steps))
            yield tuple(x + lam * (y - x) for x, y in zip(a, b))


def _lower_free_boundary(F: list[MonotoneMap], G: list[MonotoneMap], H: Fraction) -> Chain:
    """Completed graph of t -> min{u : |F(t) - G(u)|_inf <= H}, as a 2-chain."""

    def lo_i(i, t):
        v = F[i](t) - H
        return ZERO if v <= 0 else _preimage_lo(G[i], v)

    cuts = set(F[0].ts)
    for f in F:
        cuts.update(f.ts)
    for f, g in zip(F, G):
        for w in set(g.vs):
            level = w + H
            if level <= 1:
                cuts.add(_preimage_lo(f, level))
                cuts.add(_preimage_hi(f, level))
    cuts = sorted(cuts)

    verts = [(ZERO, ZERO)]
    for t0, t1 in zip(cuts, cuts[1:]):
        width = t1 - t0
        p, q = t0 + width / 3, t0 + 2 * width / 3
        lines = []
        for i in range(len(F)):
            yp, yq = lo_i(i, p), lo_i(i, q)
            slope = (yq - yp) / (q - p)
            lines.append((yp - slope * p, slope))
        pieces = {t0, t1}
        for (a1, b1), (a2, b2) in combinations(lines, 2):
            if b1 != b2:
                x = (a2 - a1) / (b1 - b2)
                if t0 < x < t1:
                    pieces.add(x)
        pieces = sorted(pieces)
        for s0, s1 in zip(pieces, pieces[1:]):
            mid = (s0 + s1) / 2
            a, b = max(lines, key=lambda ln: ln[0] + ln[1] * mid)
            verts.append((s0, a + b * s0))
            verts.append((s1, a + b * s1))
    verts.append((ONE, ONE))
    return make_chain(verts)


def optimal_coupling(c1: Chain, c2: Chain) -> tuple[list[MonotoneMap], list[MonotoneMap]]:
    """Realizations of c1 and c2 whose coordinatewise sup distance is the Hausdorff distance.

    Both chains are parametrized by their coordinate average; for each
    parameter t of c1 the c2-parameters within distance H form an interval,
    and the coupling follows its lower end, with jumps filled vertically.
    """
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"dimensions {c1.dim} and {c2.dim} differ")
    F = chain_to_tuple(c1)
    G = chain_to_tuple(c2)
    H = hausdorff_distance(c1, c2)
    if H == 0:
        return F, list(F)
    coupling = _lower_free_boundary(F, G, H)
    f_reparam, g_reparam = chain_to_tuple(coupling)
    return [compose(f, f_reparam) for f in F], [compose(g, g_reparam) for g in G]


def helly_member(point: Sequence, pairwise: Mapping[tuple[int, int], Chain]) -> bool:
    """Whether every coordinate pair (a_i, a_j), i < j, lies on its pairwise chain."""
    point = tuple(as_rational(x) for x in point)
    for i, j in combinations(range(len(point)), 2):
        chain = pairwise.get((i, j))
        if chain is None:
            raise MissingPair(f"no chain for coordinate pair {(i, j)}")
        if chain.dim != 2:
            raise DimensionMismatch(f"pair chain {(i, j)} has dimension {chain.dim}")
        if not contains(chain, (point[i], point[j])):
            return False
    return True


def pairwise_chains(c: Chain) -> dict[tuple[int, int], Chain]:
    return {(i, j): project(c, (i, j)) for i, j in combinations(range(c.dim), 2)}


def pair_type_compose(type_f: Chain, type_g: Chain, type_averages: Chain) -> Chain:
    """Joint type of (f-bar, g-bar) from the two tuple types and the type of their averages.

    A point of type_f is fixed by its average, so the joint chain is
    ``{(P_f(s), P_g(s')) : (s, s') in type_averages}``.
    """
    if type_averages.dim != 2:
        raise InconsistentAverages(f"averages type must be 2-dimensional, got {type_averages.dim}")
    if type_f.dim != type_g.dim:
        raise InconsistentAverages(f"tuple types have dimensions {type_f.dim} and {type_g.dim}")
    F = chain_to_tuple(type_f)
    G = chain_to_tuple(type_g)
    # F and G are average-parametrized, so averages of their images are the identity;
    # the 1-variable projections of type_averages must therefore be [0, 1] itself.
    for coord in (0, 1):
        if project(type_averages, (coord,)).vertices != ((ZERO,), (ONE,)):
            raise InconsistentAverages("projection of the averages type is not [0,1]")
    h_f, h_g = chain_to_tuple(type_averages)
    return image_chain([compose(f, h_f) for f in F] + [compose(g, h_g) for g in G])


def chain_to_json(c: Chain) -> dict:
    c = canonicalize(c)
    return {"dim": c.dim, "vertices": [[format_rational(x) for x in v] for v in c.vertices]}


def chain_from_json(obj: dict) -> Chain:
    verts = [tuple(parse_rational(x) for x in v) for v in obj["vertices"]]
    c = Chain(int(obj["dim"]), tuple(verts))
    if canonicalize(c).vertices != c.vertices:
        raise InvalidChain("serialized chain is not canonical")
    return c
