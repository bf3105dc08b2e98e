"""Shared strategies and brute-force oracles for the test suite."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from distalkit.generators import random_chain, random_map
from distalkit.indiscernibles import make_sequence
from distalkit.pl_core import ONE, ZERO, MonotoneMap, compose, eval_at, make_map, preimage_interval
from distalkit.type_chains import contains

F = Fraction
IDENTITY = make_map([(0, 0), (1, 1)])
UP = make_map([(0, 0), (F(1, 2), 1), (1, 1)])  # min(2t, 1)
DOWN = make_map([(0, 0), (F(1, 2), 0), (1, 1)])  # max(0, 2t - 1)


@st.composite
def maps(draw, max_breaks: int = 4) -> MonotoneMap:
    q = draw(st.sampled_from([2, 3, 4, 6, 8, 12, 16]))
    k = draw(st.integers(0, min(max_breaks, q - 1)))
    ts = sorted(draw(st.lists(st.integers(1, q - 1), min_size=k, max_size=k, unique=True)))
    vs = sorted(draw(st.lists(st.integers(0, q), min_size=k, max_size=k)))
    pts = [(ZERO, ZERO)] + [(F(t, q), F(v, q)) for t, v in zip(ts, vs)] + [(ONE, ONE)]
    return make_map(pts)


def seeded(fn):
    """Strategy that runs a seeded generator, so generator-built instances shrink by seed."""
    return st.integers(0, 2**32).map(lambda s: fn(random.Random(s)))


chains2 = seeded(lambda rng: random_chain(rng, 2))
unit_rationals = st.integers(0, 64).map(lambda k: F(k, 64))


# Hausdorff oracle: exact point-to-segment sup-norm distance, sampled along each segment.


def segment_distance(x, a, b) -> Fraction:
    d = [bb - aa for aa, bb in zip(a, b)]
    lines = []
    for i in range(len(x)):
        c0, c1 = x[i] - a[i], -d[i]
        lines += [(c0, c1), (-c0, -c1)]
    cands = {ZERO, ONE}
    for (p0, p1), (q0, q1) in combinations(lines, 2):
        if p1 != q1:
            u = (q0 - p0) / (p1 - q1)
            if 0 <= u <= 1:
                cands.add(u)
    return min(max(abs(x[i] - a[i] - u * d[i]) for i in range(len(x))) for u in cands)


def polyline_distance(x, c) -> Fraction:
    return min(segment_distance(x, a, b) for a, b in zip(c.vertices, c.vertices[1:]))


def hausdorff_lower(c1, c2, samples: int) -> Fraction:
    """Lower bound on the Hausdorff distance; the truth is within 1/samples above it."""
    lo = ZERO
    for src, dst in ((c1, c2), (c2, c1)):
        for a, b in zip(src.vertices, src.vertices[1:]):
            for s in range(samples + 1):
                x = tuple(aa + F(s, samples) * (bb - aa) for aa, bb in zip(a, b))
                lo = max(lo, polyline_distance(x, dst))
    return lo


def on_joint_image(point, fs) -> bool:
    """Some t has f_i(t) = point_i for all i: the preimage intervals intersect."""
    ivs = [preimage_interval(f, v) for f, v in zip(fs, point)]
    return max(lo for lo, _ in ivs) <= min(hi for _, hi in ivs)


def brute_force_seh(dist, A, B, r):
    """All (A0, B0) with both fractions >= 1/3 on which d is entirely <= r or entirely > r."""
    out = []
    for ka in range(len(A) + 1):
        if 3 * ka < len(A) or ka == 0:
            continue
        for A0 in combinations(A, ka):
            for kb in range(1, len(B) + 1):
                if 3 * kb < len(B):
                    continue
                for B0 in combinations(B, kb):
                    vals = [dist[x][y] for x in A0 for y in B0]
                    if all(v <= r for v in vals) or all(v > r for v in vals):
                        out.append((A0, B0))
    return out


def diagonal_oracle_failure(p, samples: int = 24):
    """A sampled point (a, b) of p with neither (a, a) nor (b, b) on p, if one is found."""
    for (a0, b0), (a1, b1) in zip(p.vertices, p.vertices[1:]):
        for s in range(samples + 1):
            lam = F(s, samples)
            a, b = a0 + lam * (a1 - a0), b0 + lam * (b1 - b0)
            if not contains(p, (a, a)) and not contains(p, (b, b)):
                return a, b
    return None


def lifted(seq, hs):
    """Arity-k sequence (h_1(f_i), ..., h_k(f_i)) from an arity-1 sequence."""
    return make_sequence([tuple(compose(h, e[0]) for h in hs) for e in seq.elements])


def plateau_triple(rng):
    """(f, g, a) with g != f only on the plateaus of a, where g takes another path.

    Draws are rejected until a has a plateau on which the two paths differ.
    """
    while True:
        a = random_map(rng, q=rng.choice([4, 6, 8]))
        f = random_map(rng)
        pts = [(t, eval_at(f, t)) for t in f.ts]
        plateaus = [(t0, t1) for t0, t1, v0, v1 in zip(a.ts, a.ts[1:], a.vs, a.vs[1:]) if v0 == v1]
        for t0, t1 in plateaus:
            v0, v1 = eval_at(f, t0), eval_at(f, t1)
            mid_t = t0 + (t1 - t0) * F(rng.randint(1, 7), 8)
            mid_v = v0 + (v1 - v0) * F(rng.randint(0, 8), 8)
            pts = [p for p in pts if not t0 < p[0] < t1]
            pts += [(t0, v0), (mid_t, mid_v), (t1, v1)]
        g = make_map(sorted(set(pts)))
        if g != f:
            return f, g, a
