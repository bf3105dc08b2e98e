from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from distalkit.errors import (
    DuplicateParameter,
    EmptyInput,
    EndpointViolation,
    NonCanonicalRational,
    NotMonotone,
    OutOfDomain,
    OutOfRange,
)
from distalkit.pl_core import (
    average,
    compose,
    eval_at,
    eval_many,
    format_rational,
    make_map,
    map_from_json,
    map_to_json,
    mix,
    parse_rational,
    pointwise_max,
    pointwise_min,
    preimage_interval,
    sup_distance,
)
from helpers import DOWN, IDENTITY, UP, maps, unit_rationals

F = Fraction


class TestMakeMap:
    def test_identity(self):
        assert IDENTITY.breakpoints == [(0, 0), (1, 1)]

    def test_collinear_midpoint_is_merged(self):
        assert make_map([(0, 0), (F(1, 2), F(1, 2)), (1, 1)]) == IDENTITY

    def test_bend_is_kept(self):
        assert UP.breakpoints == [(0, 0), (F(1, 2), 1), (1, 1)]

    @pytest.mark.parametrize(
        "pts, exc",
        [
            ([(0, 0), (F(1, 2), F(3, 4)), (F(3, 4), F(1, 2)), (1, 1)], NotMonotone),
            ([(0, F(1, 4)), (1, 1)], EndpointViolation),
            ([(0, 0), (1, F(1, 2))], EndpointViolation),
            ([(0, 0), (F(1, 2), F(1, 2)), (F(1, 2), F(3, 4)), (1, 1)], DuplicateParameter),
            ([], EmptyInput),
        ],
    )
    def test_rejects(self, pts, exc):
        with pytest.raises(exc):
            make_map(pts)

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            make_map([(0.0, 0.0), (1, 1)])


class TestEval:
    def test_examples(self):
        assert eval_at(IDENTITY, F(1, 2)) == F(1, 2)
        assert eval_at(UP, F(3, 4)) == 1
        assert eval_at(UP, F(1, 4)) == F(1, 2)

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            eval_at(UP, F(5, 4))

    @given(maps(), st.lists(unit_rationals, max_size=20))
    def test_sweep_matches_pointwise(self, f, grid):
        grid = sorted(grid)
        assert eval_many(f, grid) == [eval_at(f, t) for t in grid]


class TestSupDistance:
    def test_examples(self):
        assert sup_distance(IDENTITY, IDENTITY) == 0
        assert sup_distance(IDENTITY, UP) == F(1, 2)
        assert sup_distance(UP, DOWN) == 1

    @given(maps(), maps(), maps())
    def test_metric_axioms(self, f, g, h):
        assert sup_distance(f, g) == sup_distance(g, f)
        assert sup_distance(f, h) <= sup_distance(f, g) + sup_distance(g, h)
        assert (sup_distance(f, g) == 0) == (f == g)

    @given(maps(), maps())
    def test_attained_on_dense_grid(self, f, g):
        grid = [F(k, 96) for k in range(97)]
        sampled = max(abs(a - b) for a, b in zip(eval_many(f, grid), eval_many(g, grid)))
        assert sampled == sup_distance(f, g)


class TestAverage:
    def test_examples(self):
        assert average([IDENTITY]) == IDENTITY
        assert average([UP, DOWN]) == IDENTITY
        assert average([IDENTITY] * 3) == IDENTITY

    def test_empty(self):
        with pytest.raises(EmptyInput):
            average([])

    @given(st.lists(st.tuples(maps(), maps()), min_size=1, max_size=4))
    def test_one_lipschitz(self, pairs):
        fs, gs = zip(*pairs)
        assert sup_distance(average(fs), average(gs)) <= max(sup_distance(f, g) for f, g in pairs)

    @given(maps(), maps(), unit_rationals)
    def test_mix_is_pointwise(self, f, g, lam):
        h = mix(f, g, lam)
        for k in range(17):
            t = F(k, 16)
            assert eval_at(h, t) == (1 - lam) * eval_at(f, t) + lam * eval_at(g, t)


class TestPreimage:
    def test_examples(self):
        assert preimage_interval(IDENTITY, F(1, 3)) == (F(1, 3), F(1, 3))
        assert preimage_interval(UP, 1) == (F(1, 2), 1)
        assert preimage_interval(UP, F(1, 2)) == (F(1, 4), F(1, 4))

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            preimage_interval(UP, F(-1, 8))

    @given(maps(), unit_rationals)
    def test_endpoints_and_neighbourhood(self, f, v):
        lo, hi = preimage_interval(f, v)
        assert eval_at(f, lo) == v == eval_at(f, hi)
        step = F(1, 10**6)
        if lo > 0:
            assert eval_at(f, max(0, lo - step)) < v
        if hi < 1:
            assert eval_at(f, min(1, hi + step)) > v


class TestLatticeAndComposition:
    @given(maps(), maps())
    def test_max_min(self, f, g):
        hi, lo = pointwise_max(f, g), pointwise_min(f, g)
        for k in range(25):
            t = F(k, 24)
            a, b = eval_at(f, t), eval_at(g, t)
            assert eval_at(hi, t) == max(a, b)
            assert eval_at(lo, t) == min(a, b)

    @given(maps(), maps(), unit_rationals)
    def test_compose(self, f, g, t):
        assert eval_at(compose(f, g), t) == eval_at(f, eval_at(g, t))


class TestSerialization:
    def test_format(self):
        assert map_to_json(UP) == {"breakpoints": [["0/1", "0/1"], ["1/2", "1/1"], ["1/1", "1/1"]]}

    @given(maps())
    def test_round_trip(self, f):
        assert map_from_json(map_to_json(f)) == f
        assert make_map(f.breakpoints) == f

    @pytest.mark.parametrize("text", ["2/4", "1/-2", "0.5", "1", "-0/1", "01/2", " 1/2"])
    def test_rejects_non_canonical(self, text):
        with pytest.raises(NonCanonicalRational):
            parse_rational(text)

    @given(st.fractions())
    def test_rational_round_trip(self, q):
        assert parse_rational(format_rational(q)) == q

    def test_rejects_non_canonical_map(self):
        obj = {"breakpoints": [["0/1", "0/1"], ["1/2", "1/2"], ["1/1", "1/1"]]}
        with pytest.raises(ValueError):
            map_from_json(obj)
