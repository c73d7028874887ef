import random
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import dbm_pairs, oct_pairs
from oracles import random_dbm, random_oct, relax
from weakrel.bounds import INF
from weakrel.dbm import DimensionError, Shape, close, from_constraints, join, leq
from weakrel.domains import DBM, OCT
from weakrel.octagon import oct_join, oct_leq, strong_close
from weakrel.reduction import ThresholdSet, transitive_reduce
from weakrel.widening import (DIVERGENT, PLAIN_STANDARD, WideningPoint, WideningStrategy,
                              widen, widen_delayed, widen_standard, widen_syntactic,
                              widen_upto)

F = Fraction
SYN = WideningStrategy(kind="syntactic", thresholds=None)


def _dbm(n, *cs):
    return close(from_constraints(n, cs))


def test_syntactic_is_entrywise():
    a = from_constraints(1, [(1, 0, 1), (0, 1, 0)])
    b = from_constraints(1, [(1, 0, 2), (0, 1, 0)])
    w = widen_syntactic(a, b)
    assert w[1, 0] is INF and w[0, 1] == 0


def test_syntactic_kind_mismatch():
    with pytest.raises(TypeError):
        widen_syntactic(from_constraints(1, []), OCT.top_matrix(1))
    with pytest.raises(DimensionError):
        widen_syntactic(from_constraints(1, []), from_constraints(2, []))


@given(dbm_pairs())
def test_standard_covers_both_arguments_dbm(pair):
    a, b = (close(x) for x in pair)
    if a.is_empty:
        return
    b = join(a, b)
    w = widen_standard(a, b)
    assert leq(a, w) and leq(b, w)


@given(oct_pairs())
def test_standard_covers_both_arguments_oct(pair):
    a, b = (strong_close(x) for x in pair)
    if a.is_empty:
        return
    b = oct_join(a, b)
    w = widen(a, b, PLAIN_STANDARD)
    assert oct_leq(a, w) and oct_leq(b, w)


def test_standard_drops_redundant_bounds_that_syntactic_keeps():
    s1 = _dbm(2, (1, 0, 1), (2, 1, 0))          # x <= 1, y <= x  (so y <= 1 is implied)
    s2 = _dbm(2, (1, 0, 2), (2, 0, 1), (2, 1, 0))
    std = widen(s1, s2, PLAIN_STANDARD)
    syn = widen(s1, s2, SYN)
    assert std == _dbm(2, (2, 1, 0))
    assert syn == _dbm(2, (2, 0, 1), (2, 1, 0))
    assert leq(syn, std)


def test_standard_equals_syntactic_on_redundancy_free_input():
    rng = random.Random(13)
    checked = 0
    for _ in range(400):
        s1 = close(random_dbm(rng, 2, -4, 4, 0.4))
        if s1.is_empty or len(transitive_reduce(s1)) != len(s1.matrix.finite_cells()):
            continue
        s2 = join(s1, close(relax(s1.matrix, rng, 3)))
        assert widen(s1, s2, PLAIN_STANDARD) == widen(s1, s2, SYN)
        checked += 1
    assert checked >= 30


def test_widen_requires_inclusion():
    with pytest.raises(ValueError):
        widen(_dbm(1, (1, 0, 2)), _dbm(1, (1, 0, 1)))


def test_widen_from_empty_returns_second():
    s2 = _dbm(1, (1, 0, 1))
    assert widen(Shape.empty(1), s2) == s2
    assert widen_upto(Shape.empty(1), s2, ThresholdSet()) == s2


def test_upto_installs_least_satisfied_threshold():
    s1 = _dbm(1, (1, 0, 0), (0, 1, 0))
    s2 = _dbm(1, (1, 0, 1), (0, 1, 0))
    t = ThresholdSet({(1, 0): (F(0), F(3), F(10))})
    w = widen_upto(s1, s2, t)
    assert w == _dbm(1, (1, 0, 3), (0, 1, 0))
    assert widen(s1, s2) == _dbm(1, (0, 1, 0))


def test_upto_is_never_worse_than_plain():
    rng = random.Random(17)
    for _ in range(150):
        s1 = close(random_dbm(rng, 2, -4, 4))
        if s1.is_empty:
            continue
        s2 = join(s1, close(relax(s1.matrix, rng, 4)))
        t = ThresholdSet({(i, j): (F(rng.randint(-6, 6)),) for i in range(3) for j in range(3)
                          if i != j})
        up, plain = widen_upto(s1, s2, t), widen(s1, s2)
        assert leq(up, plain) and leq(s2, up)


def test_delayed_uses_join_first():
    s0 = _dbm(1, (1, 0, 0), (0, 1, 0))
    s1 = _dbm(1, (1, 0, 1), (0, 1, 0))
    s2 = _dbm(1, (1, 0, 2), (0, 1, 0))
    op = widen_delayed(2)
    assert op(s0, s1) == s1
    assert op(s1, s2) == s2
    assert op(s2, _dbm(1, (1, 0, 3), (0, 1, 0))) == _dbm(1, (0, 1, 0))
    with pytest.raises(ValueError):
        widen_delayed(-1)


def _counting_chain(k):
    return [_dbm(1, (1, 0, i), (0, 1, 0)) for i in range(k)]


def test_point_delay_defers_widening():
    wp = WideningPoint(DBM, WideningStrategy(thresholds=None, delay=2))
    out = [wp.update(y) for y in _counting_chain(5)]
    assert out[1] == _counting_chain(5)[1] and out[2] == _counting_chain(5)[2]
    assert out[3] == _dbm(1, (0, 1, 0))
    assert wp.changes == 3


def test_point_stable_joins_are_not_counted():
    wp = WideningPoint(DBM, PLAIN_STANDARD)
    y = _dbm(1, (1, 0, 1))
    for _ in range(4):
        wp.update(y)
    assert wp.changes == 0 and wp.m0 == y


def test_point_auto_harvests_from_first_nonempty():
    wp = WideningPoint(DBM, WideningStrategy())
    wp.update(Shape.empty(2))
    first = _dbm(2, (1, 0, 1), (2, 1, 2))
    wp.update(first)
    assert wp.m0 == first
    assert wp.thresholds.get((2, 0)) == (F(3),)


def test_point_raw_scheme_never_recloses_state():
    s = WideningStrategy(kind="syntactic", thresholds=None)
    wp = WideningPoint(DBM, s)
    wp.update(_dbm(2, (1, 0, 1), (2, 1, 0)))
    wp.update(_dbm(2, (1, 0, 2), (2, 1, 0)))
    assert wp.raw[1, 0] is INF and wp.raw[2, 0] is INF
    assert wp.value == _dbm(2, (2, 1, 0))


def test_strategy_validation():
    with pytest.raises(ValueError):
        WideningStrategy(kind="bogus")
    with pytest.raises(ValueError):
        WideningStrategy(delay=-1)
    with pytest.raises(ValueError):
        WideningStrategy(thresholds="sometimes")
    assert DIVERGENT.describe()["close_interleave"] is True


def test_second_arg_reduced_representation_loses_implied_bounds():
    s1 = _dbm(2, (1, 0, 0), (0, 1, 0), (2, 0, 0), (0, 2, 0))   # the point (0, 0)
    s2 = _dbm(2, (0, 2, 0), (2, 1, 0), (1, 0, 5))              # 0 <= y <= x <= 5
    closed = widen(s1, s2, PLAIN_STANDARD)
    reduced = widen(s1, s2, WideningStrategy(thresholds=None, second_arg_closed=False))
    assert closed == _dbm(2, (0, 1, 0))
    assert reduced == Shape.top(2)
    assert leq(closed, reduced)


def test_octagon_certificate_on_random_chains():
    rng = random.Random(29)
    for _ in range(40):
        y = strong_close(random_oct(rng, 2, -4, 4))
        if y.is_empty:
            continue
        wp = WideningPoint(OCT, PLAIN_STANDARD)
        prev = wp.update(y)
        for _ in range(12):
            y = oct_join(y, strong_close(relax(y.matrix, rng, 3)))
            cur = wp.update(y)
            if cur != prev:
                assert len(OCT.reduce(cur)) < len(OCT.reduce(prev))
            prev = cur
        assert wp.changes <= OCT.cells(2)
