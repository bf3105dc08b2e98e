import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from distalkit.distal_cells import (
    CellCertificate,
    Level,
    boundary_probes,
    build_cell,
    certificate_from_json,
    certificate_to_json,
    critical_probes,
    eval_cell,
    verify_cell,
)
from distalkit.errors import BTooSmall, OutOfRange
from distalkit.generators import perturbed, random_map, random_tuple
from distalkit.pl_core import make_map, preimage_interval
from distalkit.type_chains import phi_alpha
from helpers import DOWN, IDENTITY, UP

F = Fraction


def test_all_trivial_at_boundary_value():
    cert = build_cell(1, 2, IDENTITY, [IDENTITY, make_map([(0, 0), (1, 1)])])
    assert all(lv.minus is None and lv.plus is None for lv in cert.levels)
    assert eval_cell(cert, UP) == 1


def test_witness_selection_example():
    cert = build_cell(1, 4, IDENTITY, [UP, DOWN])
    assert [(lv.minus, lv.plus) for lv in cert.levels] == [(None, UP), (UP, DOWN), (DOWN, None)]
    assert eval_cell(cert, IDENTITY) == F(1, 12)


def test_support_boundary():
    cert = CellCertificate(F(1, 2), 4, (Level(1, UP, None),))
    # y(1/8) = 1/4 = UP(1/8), so the sum-1/2 point of im(y, UP) is (1/4, 1/4)
    y = make_map([(0, 0), (F(1, 8), F(1, 4)), (1, 1)])
    assert phi_alpha(y, UP, F(1, 2)) == F(1, 4)
    assert eval_cell(cert, y) == 0


def test_errors():
    with pytest.raises(BTooSmall):
        build_cell(F(1, 2), 4, IDENTITY, [UP])
    with pytest.raises(OutOfRange):
        build_cell(F(3, 2), 4, IDENTITY, [UP, DOWN])


def test_anchor_only_probe():
    cert = build_cell(F(1, 2), 8, UP, [IDENTITY, DOWN])
    assert verify_cell(cert, UP, [IDENTITY, DOWN], [UP]).passed


def _instance(seed, sizes=(2, 20)):
    rng = random.Random(seed)
    alpha = F(rng.randint(0, 8), 8)
    n = rng.choice([2, 4, 8, 16])
    anchor = random_map(rng)
    B = random_tuple(rng, rng.choice(sizes))
    return rng, alpha, n, anchor, B


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_soundness_on_probes(seed):
    rng, alpha, n, anchor, B = _instance(seed)
    cert = build_cell(alpha, n, anchor, B)
    assert eval_cell(cert, anchor) > 0
    probes = [perturbed(rng, anchor, F(1, n)) for _ in range(60)] + [random_map(rng) for _ in range(60)]
    report = verify_cell(cert, anchor, B, probes + critical_probes(cert, anchor, B))
    assert report.passed, report.to_json()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_boundary_probes_stay_sound(seed):
    _, alpha, n, anchor, B = _instance(seed)
    cert = build_cell(alpha, n, anchor, B)
    probes = boundary_probes(cert, anchor, steps=16)
    assert verify_cell(cert, anchor, B, probes).violations == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_monotone_containment(seed):
    _, alpha, n, anchor, B = _instance(seed)
    cert = build_cell(alpha, n, anchor, B)
    for lv in cert.levels:
        thr, v = F(lv.i, n), alpha - F(lv.i, n)
        if lv.minus is None or v < 0:
            continue
        top = preimage_interval(lv.minus, v)[1]
        for b in B:
            if phi_alpha(anchor, b, alpha) < thr:
                assert preimage_interval(b, v)[1] <= top
        assert phi_alpha(anchor, lv.minus, alpha) < thr


def test_shape_family_is_finite():
    shapes = set()
    rng = random.Random(11)
    for _ in range(200):
        cert = build_cell(F(1, 2), 3, random_map(rng), random_tuple(rng, 3))
        assert len(cert.shape) == 2
        shapes.add(cert.shape)
    assert len(shapes) <= 4 ** 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_serialization_round_trip(seed):
    _, alpha, n, anchor, B = _instance(seed)
    cert = build_cell(alpha, n, anchor, B)
    obj = certificate_to_json(cert)
    assert obj["alpha"] == f"{alpha.numerator}/{alpha.denominator}" and obj["n"] == n
    back = certificate_from_json(obj)
    assert back == cert
    assert eval_cell(back, anchor) == eval_cell(cert, anchor)
