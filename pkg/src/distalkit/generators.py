"""Seeded random instance generators.

Maps: ``k`` interior breakpoints are drawn as distinct multiples of ``1/q``
in (0, 1) for the parameters and as multiples of ``1/q`` in [0, 1] (with
replacement) for the values; both lists are sorted and framed by (0, 0) and
(1, 1).  Chains are images of random tuples.  Ultrametrics come either from
p-adic distances on random integers or from random agglomerative merge
trees with increasing rational heights.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .pl_core import ONE, ZERO, MonotoneMap, make_map, mix
from .type_chains import Chain, image_chain, make_chain


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent stream for one trial; string seeds hash deterministically."""
    return random.Random(f"{seed}/{trial}")


def random_map(rng: random.Random, k: int | None = None, q: int | None = None) -> MonotoneMap:
    if q is None:
        q = rng.choice([2, 3, 4, 5, 6, 8, 10, 12])
    if k is None:
        k = rng.randint(0, min(4, q - 1))
    k = min(k, q - 1)
    ts = sorted(rng.sample(range(1, q), k))
    vs = sorted(rng.randint(0, q) for _ in range(k))
    pts = [(ZERO, ZERO)] + [(Fraction(t, q), Fraction(v, q)) for t, v in zip(ts, vs)] + [(ONE, ONE)]
    return make_map(pts)


def random_tuple(rng: random.Random, n: int, **kw) -> list[MonotoneMap]:
    return [random_map(rng, **kw) for _ in range(n)]


def random_chain(rng: random.Random, n: int, **kw) -> Chain:
    return image_chain(random_tuple(rng, n, **kw))


def random_diagonal_chain(rng: random.Random, q: int | None = None) -> Chain:
    """A 2-chain that meets the diagonal between every excursion.

    [0, 1] is cut at random multiples of 1/q; each piece [a, b] is either
    traversed along the diagonal or by an L-shaped excursion through
    (b, a) or (a, b).  Such chains pass the diagonal condition.
    """
    if q is None:
        q = rng.choice([2, 3, 4, 6, 8])
    cuts = [0] + sorted(rng.sample(range(1, q), rng.randint(0, q - 1))) + [q]
    verts = [(ZERO, ZERO)]
    for a, b in zip(cuts, cuts[1:]):
        a, b = Fraction(a, q), Fraction(b, q)
        kind = rng.choice(("diag", "below", "above"))
        if kind == "below":
            verts.append((b, a))
        elif kind == "above":
            verts.append((a, b))
        verts.append((b, b))
    return make_chain(verts)


def perturbed(rng: random.Random, f: MonotoneMap, scale: Fraction) -> MonotoneMap:
    """Convex mix of ``f`` with a random map; moves ``f`` by at most ``scale`` in sup distance."""
    lam = scale * Fraction(rng.randint(0, 16), 16)
    return mix(f, random_map(rng), lam)


def random_padic_points(rng: random.Random, size: int, p: int, max_exp: int = 6) -> list[int]:
    bound = p ** max_exp
    return rng.sample(range(bound * 4), size)


def random_hierarchical(rng: random.Random, size: int) -> list[list[Fraction]]:
    """Distance matrix of a random merge tree; merge heights increase in (0, 1]."""
    clusters = [[i] for i in range(size)]
    dist = [[ZERO] * size for _ in range(size)]
    merges = size - 1
    heights = sorted(rng.sample(range(1, 4 * size + 1), merges)) if merges else []
    top = 4 * size
    for h in heights:
        i, j = rng.sample(range(len(clusters)), 2)
        height = Fraction(h, top)
        for x in clusters[i]:
            for y in clusters[j]:
                dist[x][y] = dist[y][x] = height
        clusters[i] = clusters[i] + clusters[j]
        clusters.pop(j)
    return dist


def random_subset(rng: random.Random, universe: Sequence[int], min_size: int = 1) -> list[int]:
    k = rng.randint(min_size, len(universe))
    return sorted(rng.sample(list(universe), k))
