"""Homogeneity claims over finite boxes and their exhaustive verification."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence, Union

from ..errors import CertificateInvalid
from ..pl_core import format_rational, parse_rational


@dataclass(frozen=True)
class Threshold:
    """phi <= r everywhere (side "le") or phi > r everywhere (side "gt")."""

    r: Fraction
    side: str

    def __post_init__(self):
        if self.side not in ("le", "gt"):
            raise ValueError(f"side must be 'le' or 'gt', got {self.side!r}")

    def holds(self, values) -> bool:
        if self.side == "le":
            return all(v <= self.r for v in values)
        return all(v > self.r for v in values)

    def to_json(self) -> dict:
        return {"kind": "threshold", "r": format_rational(self.r), "side": self.side}


@dataclass(frozen=True)
class Epsilon:
    eps: Fraction

    def holds(self, values) -> bool:
        lo = hi = None
        for v in values:
            if lo is None:
                lo = hi = v
            elif v < lo:
                lo = v
            elif v > hi:
                hi = v
        return lo is None or hi - lo <= self.eps

    def to_json(self) -> dict:
        return {"kind": "epsilon", "eps": format_rational(self.eps)}


Claim = Union[Threshold, Epsilon]


def claim_from_json(obj: dict) -> Claim:
    if obj["kind"] == "threshold":
        return Threshold(parse_rational(obj["r"]), obj["side"])
    if obj["kind"] == "epsilon":
        return Epsilon(parse_rational(obj["eps"]))
    raise ValueError(f"unknown claim kind {obj['kind']!r}")


@dataclass(frozen=True)
class PredicateTable:
    """A predicate on A_1 x ... x A_n given by a function of index tuples, valued in [0, 1]."""

    arity: int
    fn: Callable[..., Fraction]

    def __call__(self, *idx) -> Fraction:
        return self.fn(*idx)

    def values(self, subsets: Sequence[Sequence[int]]):
        fn = self.fn
        for idx in product(*subsets):
            yield fn(*idx)


@dataclass(frozen=True)
class HomogeneityCertificate:
    subsets: tuple
    claim: Claim
    fractions: tuple

    def to_json(self) -> dict:
        return {
            "subsets": [list(s) for s in self.subsets],
            "claim": self.claim.to_json(),
            "fractions": [format_rational(q) for q in self.fractions],
        }


def certificate_from_json(obj: dict) -> HomogeneityCertificate:
    return HomogeneityCertificate(
        tuple(tuple(int(i) for i in s) for s in obj["subsets"]),
        claim_from_json(obj["claim"]),
        tuple(parse_rational(q) for q in obj["fractions"]),
    )


def certify(
    table: PredicateTable,
    parents: Sequence[Sequence[int]],
    subsets: Sequence[Sequence[int]],
    claim: Claim,
) -> HomogeneityCertificate:
    """Build a certificate after re-checking the claim over the whole product of ``subsets``."""
    if len(subsets) != table.arity or len(parents) != table.arity:
        raise CertificateInvalid(f"expected {table.arity} sets")
    subs = tuple(tuple(sorted(set(s))) for s in subsets)
    for s, parent in zip(subs, parents):
        if not s:
            raise CertificateInvalid("empty subset")
        if not set(s) <= set(parent):
            raise CertificateInvalid("subset is not contained in its parent set")
    if not claim.holds(table.values(subs)):
        raise CertificateInvalid(f"claim {claim} fails on the certified box")
    fractions = tuple(Fraction(len(s), len(set(p))) for s, p in zip(subs, parents))
    return HomogeneityCertificate(subs, claim, fractions)


def verify(table: PredicateTable, cert: HomogeneityCertificate) -> bool:
    return all(cert.subsets) and cert.claim.holds(table.values(cert.subsets))
