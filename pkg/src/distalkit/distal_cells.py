"""Explicit distal cell decompositions for the phi_alpha predicates.

Given alpha, a grid size n, an anchor ``a`` and a finite parameter set B,
:func:`build_cell` picks for each level i = 1..n-1 at most two witnesses
from B.  The resulting cell

    psi(x) = min over levels of F_i-(phi_alpha(x, b_-)) and F_i+(phi_alpha(x, b_+))

is positive at the anchor, and any x with psi(x) > 0 satisfies
|phi_alpha(a, b) - phi_alpha(x, b)| <= 2/n for every b in B.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BTooSmall, OutOfRange
from .pl_core import (
    ONE,
    ZERO,
    MonotoneMap,
    _preimage_hi,
    _preimage_lo,
    as_rational,
    format_rational,
    make_map,
    map_from_json,
    map_to_json,
    mix,
    parse_rational,
    pointwise_max,
    pointwise_min,
)
from .type_chains import _phi_sum


@dataclass(frozen=True)
class Level:
    i: int
    minus: Optional[MonotoneMap]
    plus: Optional[MonotoneMap]


@dataclass(frozen=True)
class CellCertificate:
    alpha: Fraction
    n: int
    levels: tuple

    @property
    def shape(self) -> tuple:
        """Which level entries are nontrivial; the formula family is indexed by this."""
        return tuple((lv.minus is not None, lv.plus is not None) for lv in self.levels)

    @property
    def tolerance(self) -> Fraction:
        return Fraction(2, self.n)


def _preimage_sup(b: MonotoneMap, v: Fraction) -> Fraction:
    # values below the range have empty preimage; sup is taken as 0
    return ZERO if v < 0 else _preimage_hi(b, v)


def _preimage_inf(b: MonotoneMap, v: Fraction) -> Fraction:
    return ZERO if v < 0 else _preimage_lo(b, v)


def build_cell(alpha, n: int, anchor: MonotoneMap, B: Sequence[MonotoneMap]) -> CellCertificate:
    alpha = as_rational(alpha)
    if alpha < 0 or alpha > 1:
        raise OutOfRange(f"alpha={alpha} outside [0,1]")
    if n < 1:
        raise ValueError("grid size must be positive")
    if len(B) < 2:
        raise BTooSmall(f"need |B| >= 2, got {len(B)}")
    phis = [_phi_sum(anchor, b, alpha) for b in B]
    levels = []
    for i in range(1, n):
        thr = Fraction(i, n)
        v = alpha - thr
        minus = plus = None
        best = None
        for b, ph in zip(B, phis):
            if ph < thr:
                key = _preimage_sup(b, v)
                if best is None or key > best:
                    minus, best = b, key
        best = None
        for b, ph in zip(B, phis):
            if ph > thr:
                key = _preimage_inf(b, v)
                if best is None or key < best:
                    plus, best = b, key
        levels.append(Level(i, minus, plus))
    cert = CellCertificate(alpha, n, tuple(levels))
    if not eval_cell(cert, anchor) > 0:
        raise AssertionError("cell does not contain its anchor")
    return cert


def eval_cell(cert: CellCertificate, x: MonotoneMap) -> Fraction:
    value = ONE
    cache = {}
    for lv in cert.levels:
        thr = Fraction(lv.i, cert.n)
        for b, sign in ((lv.minus, -1), (lv.plus, 1)):
            if b is None:
                continue
            key = id(b)
            ph = cache.get(key)
            if ph is None:
                ph = cache[key] = _phi_sum(x, b, cert.alpha)
            term = thr - ph if sign < 0 else ph - thr
            if term <= 0:
                return ZERO
            if term < value:
                value = term
    return value


@dataclass
class Violation:
    probe: int
    b: int
    anchor_value: Fraction
    probe_value: Fraction

    def to_json(self) -> dict:
        return {
            "probe": self.probe,
            "b": self.b,
            "anchor_phi": format_rational(self.anchor_value),
            "probe_phi": format_rational(self.probe_value),
        }


@dataclass
class CellReport:
    anchor_value: Fraction
    probes: int = 0
    probes_in_cell: int = 0
    violations: int = 0
    first_violation: Optional[Violation] = None
    max_deviation: Fraction = ZERO
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.anchor_value > 0 and self.violations == 0

    def to_json(self) -> dict:
        return {
            "anchor_value": format_rational(self.anchor_value),
            "anchor_positive": self.anchor_value > 0,
            "probes": self.probes,
            "probes_in_cell": self.probes_in_cell,
            "violations": self.violations,
            "first_violation": self.first_violation.to_json() if self.first_violation else None,
            "max_deviation": format_rational(self.max_deviation),
            "passed": self.passed,
        }


def verify_cell(
    cert: CellCertificate,
    anchor: MonotoneMap,
    B: Sequence[MonotoneMap],
    probes: Sequence[MonotoneMap],
) -> CellReport:
    """Check anchor positivity and the 2/n homogeneity bound on every probe inside the cell."""
    tol = cert.tolerance
    base = [_phi_sum(anchor, b, cert.alpha) for b in B]
    report = CellReport(anchor_value=eval_cell(cert, anchor))
    for k, x in enumerate(probes):
        report.probes += 1
        if eval_cell(cert, x) <= 0:
            continue
        report.probes_in_cell += 1
        for j, (b, ph) in enumerate(zip(B, base)):
            px = _phi_sum(x, b, cert.alpha)
            dev = abs(ph - px)
            if dev > report.max_deviation:
                report.max_deviation = dev
            if dev > tol:
                report.violations += 1
                if report.first_violation is None:
                    report.first_violation = Violation(k, j, ph, px)
    return report


def _corner_maps(q: int) -> tuple[MonotoneMap, MonotoneMap]:
    hi = make_map([(ZERO, ZERO), (Fraction(1, q), ONE), (ONE, ONE)])
    lo = make_map([(ZERO, ZERO), (1 - Fraction(1, q), ZERO), (ONE, ONE)])
    return hi, lo


def boundary_probes(cert: CellCertificate, anchor: MonotoneMap, steps: int = 10) -> list[MonotoneMap]:
    """Points just inside the cell, found by pushing the anchor toward extreme maps.

    phi_alpha(x, b) is monotone in x, so raising x drives the minus levels
    toward zero and lowering it drives the plus levels; bisection on the
    mixing weight stops at the last weight where the cell is still positive.
    """
    out = []
    for target in _corner_maps(64):
        if eval_cell(cert, target) > 0:
            out.append(target)
            continue
        lo, hi = ZERO, ONE
        for _ in range(steps):
            mid = (lo + hi) / 2
            if eval_cell(cert, mix(anchor, target, mid)) > 0:
                lo = mid
            else:
                hi = mid
        out.append(mix(anchor, target, lo))
        out.append(mix(anchor, target, hi))
    return out


def critical_probes(cert: CellCertificate, anchor: MonotoneMap, B: Sequence[MonotoneMap]) -> list[MonotoneMap]:
    """Finite probe family built from the breakpoints of the anchor and of B.

    The anchor, each b, their pointwise max and min, their convex mixes at
    1/4, 1/2, 3/4, and the boundary probes of the cell.
    """
    out = [anchor]
    for b in B:
        out.append(b)
        out.append(pointwise_max(anchor, b))
        out.append(pointwise_min(anchor, b))
        for lam in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            out.append(mix(anchor, b, lam))
    out.extend(boundary_probes(cert, anchor))
    return out


def certificate_to_json(cert: CellCertificate) -> dict:
    return {
        "alpha": format_rational(cert.alpha),
        "n": cert.n,
        "levels": [
            {
                "i": lv.i,
                "minus": map_to_json(lv.minus) if lv.minus is not None else None,
                "plus": map_to_json(lv.plus) if lv.plus is not None else None,
            }
            for lv in cert.levels
        ],
    }


def certificate_from_json(obj: dict) -> CellCertificate:
    levels = tuple(
        Level(
            int(lv["i"]),
            map_from_json(lv["minus"]) if lv["minus"] is not None else None,
            map_from_json(lv["plus"]) if lv["plus"] is not None else None,
        )
        for lv in obj["levels"]
    )
    return CellCertificate(parse_rational(obj["alpha"]), int(obj["n"]), levels)
