"""p-adic instance generators: integer point sets and finite extensions of Q."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DuplicatePoints, NotPrime, ZeroElement
from ..pl_core import as_rational, format_rational
from .ultrametric import UltrametricSpace, make_space


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def vp(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise ZeroElement("valuation of 0 is undefined")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_space(points: Sequence[int], p: int) -> UltrametricSpace:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if len(set(points)) != len(points):
        raise DuplicatePoints("points must be pairwise distinct")
    n = len(points)
    zero = Fraction(0)
    powers: dict[int, Fraction] = {}
    dist = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diff, v = points[i] - points[j], 0
            while diff % p == 0:
                diff //= p
                v += 1
            d = powers.get(v)
            if d is None:
                d = powers[v] = Fraction(1, p**v)
            dist[i][j] = dist[j][i] = d
    space = make_space(dist, rescale=False)
    space.require_ultrametric()
    return space


@dataclass(frozen=True)
class PAdicAbs:
    """The real number base ** exponent, kept symbolic because exponents may be fractional."""

    base: int
    exponent: Fraction

    def __mul__(self, other: "PAdicAbs") -> "PAdicAbs":
        if self.base != other.base:
            raise ValueError("bases differ")
        return PAdicAbs(self.base, self.exponent + other.exponent)

    def __lt__(self, other: "PAdicAbs") -> bool:
        if self.base != other.base:
            raise ValueError("bases differ")
        return self.exponent < other.exponent

    def to_json(self) -> dict:
        return {"base": self.base, "exponent": format_rational(self.exponent)}

    def __str__(self) -> str:
        return f"{self.base}^({self.exponent})"


def _reduce(poly: list[Fraction], min_poly: Sequence[int]) -> list[Fraction]:
    """Remainder of ``poly`` modulo the monic ``min_poly`` (both ascending coefficients)."""
    d = len(min_poly) - 1
    poly = list(poly)
    for k in range(len(poly) - 1, d - 1, -1):
        c = poly[k]
        if c:
            for i in range(d + 1):
                poly[k - d + i] -= c * min_poly[i]
    return (poly + [Fraction(0)] * d)[:d]


def field_mul(min_poly: Sequence[int], x: Sequence, y: Sequence) -> list[Fraction]:
    """Product in Q[X]/(min_poly) of elements given in the power basis."""
    d = len(min_poly) - 1
    prod = [Fraction(0)] * (2 * d - 1)
    for i, a in enumerate(x):
        for j, b in enumerate(y):
            prod[i + j] += as_rational(a) * as_rational(b)
    return _reduce(prod, min_poly)


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def norm(min_poly: Sequence[int], coords: Sequence) -> Fraction:
    """Field norm of sum(coords[i] * alpha**i): determinant of multiplication by it."""
    d = len(min_poly) - 1
    if min_poly[-1] != 1:
        raise ValueError("minimal polynomial must be monic")
    if len(coords) != d:
        raise ValueError(f"expected {d} coordinates")
    x = [as_rational(c) for c in coords]
    cols = []
    basis = [Fraction(0)] * d
    for j in range(d):
        e = basis[:]
        e[j] = Fraction(1)
        cols.append(field_mul(min_poly, x, e))
    return _det([[cols[j][i] for j in range(d)] for i in range(d)])


def extension_valuation(min_poly: Sequence[int], coords: Sequence, p: int) -> PAdicAbs:
    """|x| for x = sum(coords[i] * alpha**i), as p ** exponent with |x|^d = |N(x)|_p."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    n = norm(min_poly, coords)
    if n == 0:
        raise ZeroElement("x = 0 has no finite valuation")
    d = len(min_poly) - 1
    return PAdicAbs(p, Fraction(-vp(n, p), d))
