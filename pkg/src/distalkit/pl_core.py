"""Exact piecewise-linear monotone surjections of [0, 1].

A :class:`MonotoneMap` is stored as its breakpoints; the function is the
linear interpolant.  Every map is continuous, nondecreasing, sends 0 to 0
and 1 to 1, and is kept in canonical form (no three consecutive collinear
breakpoints), so structural equality is function equality.

All arithmetic uses :class:`fractions.Fraction`.
"""
from __future__ import annotations

import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    DuplicateParameter,
    EmptyInput,
    EndpointViolation,
    NonCanonicalRational,
    NotMonotone,
    OutOfDomain,
    OutOfRange,
)

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^(-?)(0|[1-9][0-9]*)/([1-9][0-9]*)$")


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, Fraction or 'p/q'")
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def format_rational(q: Fraction) -> str:
    """``"p/q"`` with q > 0 in lowest terms (``Fraction`` already normalizes)."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    """Inverse of :func:`format_rational`; rejects every other spelling."""
    m = _RATIONAL_RE.match(s) if isinstance(s, str) else None
    if m is None:
        raise NonCanonicalRational(f"not a canonical 'p/q' rational: {s!r}")
    sign, num, den = m.groups()
    p, q = int(num), int(den)
    if gcd(p, q) != 1 or (sign and p == 0):
        raise NonCanonicalRational(f"not in lowest terms: {s!r}")
    return Fraction(-p if sign else p, q)


def _collinear(t0, v0, t1, v1, t2, v2) -> bool:
    return (v1 - v0) * (t2 - t1) == (v2 - v1) * (t1 - t0)


def _strip_collinear(ts: list, vs: list) -> tuple[tuple, tuple]:
    out_t, out_v = [ts[0]], [vs[0]]
    for k in range(1, len(ts)):
        if len(out_t) >= 2 and _collinear(out_t[-2], out_v[-2], out_t[-1], out_v[-1], ts[k], vs[k]):
            out_t[-1], out_v[-1] = ts[k], vs[k]
        else:
            out_t.append(ts[k])
            out_v.append(vs[k])
    return tuple(out_t), tuple(out_v)


@dataclass(frozen=True)
class MonotoneMap:
    """Canonical breakpoint data; build instances with :func:`make_map`."""

    ts: tuple
    vs: tuple

    @property
    def breakpoints(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.ts, self.vs))

    def __call__(self, t) -> Fraction:
        return eval_at(self, t)

    def __repr__(self) -> str:
        pts = ", ".join(f"({t}, {v})" for t, v in zip(self.ts, self.vs))
        return f"MonotoneMap([{pts}])"


def make_map(raw_breakpoints: Iterable[tuple]) -> MonotoneMap:
    pts = [(as_rational(t), as_rational(v)) for t, v in raw_breakpoints]
    if not pts:
        raise EmptyInput("a map needs at least the breakpoints (0,0) and (1,1)")
    if pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
        raise EndpointViolation(f"map must start at (0,0) and end at (1,1), got {pts[0]} .. {pts[-1]}")
    ts = [p[0] for p in pts]
    vs = [p[1] for p in pts]
    for k in range(1, len(pts)):
        if ts[k] == ts[k - 1]:
            raise DuplicateParameter(f"parameter {ts[k]} repeated")
        if ts[k] < ts[k - 1]:
            raise NotMonotone(f"parameters must increase: {ts[k - 1]} then {ts[k]}")
        if vs[k] < vs[k - 1]:
            raise NotMonotone(f"values must not decrease: {vs[k - 1]} then {vs[k]} at t={ts[k]}")
    return MonotoneMap(*_strip_collinear(ts, vs))


def identity() -> MonotoneMap:
    return MonotoneMap((ZERO, ONE), (ZERO, ONE))


def _eval(f: MonotoneMap, t: Fraction) -> Fraction:
    ts, vs = f.ts, f.vs
    k = bisect_right(ts, t)
    if k >= len(ts):
        return vs[-1]
    t0, t1 = ts[k - 1], ts[k]
    v0, v1 = vs[k - 1], vs[k]
    if v0 == v1:
        return v0
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


def eval_at(f: MonotoneMap, t) -> Fraction:
    t = as_rational(t)
    if t < 0 or t > 1:
        raise OutOfDomain(f"t={t} outside [0,1]")
    return _eval(f, t)


def eval_many(f: MonotoneMap, grid: Sequence[Fraction]) -> list[Fraction]:
    """Values of ``f`` on a sorted grid, by a single sweep."""
    ts, vs = f.ts, f.vs
    out = []
    k = 1
    last = len(ts) - 1
    for t in grid:
        while k < last and ts[k] < t:
            k += 1
        t0, t1 = ts[k - 1], ts[k]
        v0, v1 = vs[k - 1], vs[k]
        if t == t1:
            out.append(v1)
        elif v0 == v1:
            out.append(v0)
        else:
            out.append(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
    return out


def merged_grid(fs: Iterable[MonotoneMap]) -> list[Fraction]:
    grid = set()
    for f in fs:
        grid.update(f.ts)
    return sorted(grid)


def sup_distance(f: MonotoneMap, g: MonotoneMap) -> Fraction:
    # both interpolants are linear between merged breakpoints
    grid = merged_grid((f, g))
    return max(abs(a - b) for a, b in zip(eval_many(f, grid), eval_many(g, grid)))


def combine(fs: Sequence[MonotoneMap], weights: Sequence[Fraction]) -> MonotoneMap:
    """Pointwise convex combination ``sum(w_i * f_i)``; weights must be >= 0 and sum to 1."""
    if not fs:
        raise EmptyInput("no maps to combine")
    weights = [as_rational(w) for w in weights]
    if len(weights) != len(fs) or any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("weights must be nonnegative, sum to 1, and match the maps")
    grid = merged_grid(fs)
    total = [ZERO] * len(grid)
    for f, w in zip(fs, weights):
        if w:
            for k, v in enumerate(eval_many(f, grid)):
                total[k] += w * v
    return make_map(zip(grid, total))


def average(fs: Sequence[MonotoneMap]) -> MonotoneMap:
    if not fs:
        raise EmptyInput("cannot average an empty list")
    w = Fraction(1, len(fs))
    return combine(fs, [w] * len(fs))


def mix(f: MonotoneMap, g: MonotoneMap, lam) -> MonotoneMap:
    """``(1 - lam) * f + lam * g`` for ``lam`` in [0, 1]."""
    lam = as_rational(lam)
    return combine([f, g], [1 - lam, lam])


def preimage_interval(f: MonotoneMap, v) -> tuple[Fraction, Fraction]:
    """The closed interval ``f^{-1}({v})``."""
    v = as_rational(v)
    if v < 0 or v > 1:
        raise OutOfRange(f"v={v} outside [0,1]")
    return _preimage_lo(f, v), _preimage_hi(f, v)


def _preimage_lo(f: MonotoneMap, v: Fraction) -> Fraction:
    """inf {t : f(t) >= v}, for v in [0, 1]."""
    ts, vs = f.ts, f.vs
    k = bisect_left(vs, v)
    if k == 0:
        return ZERO
    t0, t1, v0, v1 = ts[k - 1], ts[k], vs[k - 1], vs[k]
    return t0 + (t1 - t0) * (v - v0) / (v1 - v0)


def _preimage_hi(f: MonotoneMap, v: Fraction) -> Fraction:
    """sup {t : f(t) <= v}, for v in [0, 1]."""
    ts, vs = f.ts, f.vs
    k = bisect_right(vs, v) - 1
    if k == len(vs) - 1:
        return ONE
    t0, t1, v0, v1 = ts[k], ts[k + 1], vs[k], vs[k + 1]
    return t0 + (t1 - t0) * (v - v0) / (v1 - v0)


def compose(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``f o g``; breakpoints are g's plus the g-preimages of f's."""
    grid = set(g.ts)
    for t in f.ts:
        lo, hi = _preimage_lo(g, t), _preimage_hi(g, t)
        grid.add(lo)
        grid.add(hi)
    grid = sorted(grid)
    return make_map(zip(grid, eval_many(f, eval_many(g, grid))))


def _envelope(f: MonotoneMap, g: MonotoneMap, pick) -> MonotoneMap:
    grid = merged_grid((f, g))
    fv, gv = eval_many(f, grid), eval_many(g, grid)
    pts = [(grid[0], pick(fv[0], gv[0]))]
    for k in range(1, len(grid)):
        d0, d1 = fv[k - 1] - gv[k - 1], fv[k] - gv[k]
        if d0 * d1 < 0:
            # crossing strictly inside the cell
            s = d0 / (d0 - d1)
            t = grid[k - 1] + s * (grid[k] - grid[k - 1])
            pts.append((t, fv[k - 1] + s * (fv[k] - fv[k - 1])))
        pts.append((grid[k], pick(fv[k], gv[k])))
    return make_map(pts)


def pointwise_max(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    return _envelope(f, g, max)


def pointwise_min(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    return _envelope(f, g, min)


def map_to_json(f: MonotoneMap) -> dict:
    return {"breakpoints": [[format_rational(t), format_rational(v)] for t, v in zip(f.ts, f.vs)]}


def map_from_json(obj: dict) -> MonotoneMap:
    pts = [(parse_rational(t), parse_rational(v)) for t, v in obj["breakpoints"]]
    f = make_map(pts)
    if len(f.ts) != len(pts):
        raise NonCanonicalRational("serialized map is not in canonical (collinear-merged) form")
    return f
