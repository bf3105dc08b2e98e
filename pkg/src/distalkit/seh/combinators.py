"""Closure operations for the strong Erdos-Hajnal property on finite boxes.

A *cutter* is called as ``cutter(sets, r)`` and returns a certificate with a
``Threshold(r, side)`` claim on subsets of ``sets``; it may expose ``delta``,
the guaranteed fraction.  A *finder* is called as ``finder(sets, tol)`` and
returns an ``Epsilon`` certificate with ``eps <= tol``; it may expose
``gamma(tol)`` and ``table``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Callable, Sequence

from ..errors import (
    CertificateInvalid,
    CutterContractViolation,
    FinderContractViolation,
    NoSuchN,
)
from ..pl_core import ONE, ZERO, as_rational
from .certificates import Epsilon, HomogeneityCertificate, PredicateTable, Threshold, certify


def rounds_needed(eps: Fraction) -> int:
    """ceil(log2(1/eps)): halvings of [0, 1] until the width is at most eps."""
    k, width = 0, ONE
    while width > eps:
        width /= 2
        k += 1
    return k


def refine_to_eps(
    cutter: Callable,
    table: PredicateTable,
    eps,
    sets: Sequence[Sequence[int]],
) -> HomogeneityCertificate:
    """Binary search on the value range, shrinking the box with one cut per halving."""
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    parents = [sorted(set(s)) for s in sets]
    current = [list(s) for s in parents]
    delta = getattr(cutter, "delta", None)
    lo, hi = ZERO, ONE
    while hi - lo > eps:
        mid = (lo + hi) / 2
        cert = cutter(current, mid)
        claim = cert.claim
        if not isinstance(claim, Threshold) or claim.r != mid:
            raise CutterContractViolation(f"cutter answered {claim} for threshold {mid}")
        try:
            checked = certify(table, current, cert.subsets, claim)
        except CertificateInvalid as exc:
            raise CutterContractViolation(str(exc)) from exc
        if delta is not None and any(q < delta for q in checked.fractions):
            raise CutterContractViolation(f"fractions {checked.fractions} below {delta}")
        current = [list(s) for s in checked.subsets]
        if claim.side == "le":
            hi = mid
        else:
            lo = mid
    return certify(table, parents, current, Epsilon(eps))


@dataclass(frozen=True)
class RefiningFinder:
    """Epsilon-finder obtained from a threshold cutter by :func:`refine_to_eps`."""

    cutter: Callable
    table: PredicateTable

    def gamma(self, tol: Fraction) -> Fraction:
        return Fraction(self.cutter.delta) ** rounds_needed(tol)

    def __call__(self, sets, tol) -> HomogeneityCertificate:
        return refine_to_eps(self.cutter, self.table, tol, sets)


def _check_finder(finder, cert, current, tol):
    if not isinstance(cert.claim, Epsilon) or cert.claim.eps > tol:
        raise FinderContractViolation(f"finder answered {cert.claim}, wanted tolerance {tol}")
    for sub, parent in zip(cert.subsets, current):
        if not sub or not set(sub) <= set(parent):
            raise FinderContractViolation("finder returned subsets outside its input")
    table = getattr(finder, "table", None)
    if table is not None:
        try:
            cert = certify(table, current, cert.subsets, cert.claim)
        except CertificateInvalid as exc:
            raise FinderContractViolation(str(exc)) from exc
    gamma = getattr(finder, "gamma", None)
    if gamma is not None and any(q < gamma(tol) for q in cert.fractions):
        raise FinderContractViolation(f"fractions {cert.fractions} below {gamma(tol)}")
    return cert


def combine_continuous(
    finders: Sequence[Callable],
    modulus: Callable[[Fraction], Fraction],
    table_u: PredicateTable,
    eps,
    sets: Sequence[Sequence[int]],
) -> HomogeneityCertificate:
    """Homogeneity for u(phi_1, ..., phi_k), shrinking the box through each finder in turn.

    ``modulus(eps)`` must be a tolerance at which coordinatewise closeness of
    the inputs keeps u within eps.
    """
    eps = as_rational(eps)
    tol = as_rational(modulus(eps))
    parents = [sorted(set(s)) for s in sets]
    current = [list(s) for s in parents]
    for finder in finders:
        cert = _check_finder(finder, finder(current, tol), current, tol)
        current = [list(s) for s in cert.subsets]
    out = certify(table_u, parents, current, Epsilon(eps))
    gammas = [getattr(f, "gamma", None) for f in finders]
    if all(g is not None for g in gammas):
        bound = prod((g(tol) for g in gammas), start=ONE)
        if any(q < bound for q in out.fractions):
            raise FinderContractViolation(f"fractions {out.fractions} below {bound}")
    return out


def uniform_limit_finder(
    finder_at: Callable[[int], Callable],
    error_at: Callable[[int], Fraction],
    table: PredicateTable,
    eps,
    sets: Sequence[Sequence[int]],
    max_index: int = 10_000,
) -> HomogeneityCertificate:
    """Homogeneity for a uniform limit phi of predicates phi_N.

    Picks the first N with sup|phi_N - phi| <= eps/3, asks that approximant's
    finder for eps/3, and re-checks the box against phi itself at eps.
    """
    eps = as_rational(eps)
    third = eps / 3
    for N in range(1, max_index + 1):
        if as_rational(error_at(N)) <= third:
            break
    else:
        raise NoSuchN(f"no index up to {max_index} has error <= {third}")
    finder = finder_at(N)
    parents = [sorted(set(s)) for s in sets]
    cert = _check_finder(finder, finder(parents, third), parents, third)
    return certify(table, parents, cert.subsets, Epsilon(eps))
