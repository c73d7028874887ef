"""Small hand-sized instances, each checked two ways: by the library and by an oracle."""

import io
from fractions import Fraction

from conftest import CORPUS
from oracles import greedy_reduce_cells, oracle_close_rows, oracle_strong_close_rows, points
from weakrel.analyzer import analyze
from weakrel.bounds import INF
from weakrel.cli import main
from weakrel.dbm import close, forget, from_constraints, join, meet
from weakrel.domains import DBM
from weakrel.lang import AssignVar, parse
from weakrel.analyzer import transfer
from weakrel.octagon import OctMatrix, bar, oct_forget, oct_from_constraints, strong_close
from weakrel.reduction import ThresholdSet, harvest_thresholds, strong_reduce, transitive_reduce
from weakrel.widening import PLAIN_STANDARD, WideningPoint, WideningStrategy, widen, \
    widen_syntactic, widen_upto

F = Fraction
GRID = dict(lo=-4, hi=12, step=F(1))


def dbm(n, *cs):
    return close(from_constraints(n, cs))


def octa(n, *cs):
    return strong_close(oct_from_constraints(n, cs))


def test_triangle_closure():
    m = from_constraints(2, [(1, 2, 1), (2, 0, 2)])
    s = close(m)
    assert s.matrix[1, 0] == 3
    assert s.matrix.entries == oracle_close_rows(m.entries)


def test_join_of_two_segments_is_unit_square():
    a = dbm(2, (1, 0, 1), (0, 1, 0), (2, 0, 0), (0, 2, 0))
    b = dbm(2, (1, 0, 0), (0, 1, 0), (2, 0, 1), (0, 2, 0))
    j = join(a, b)
    square = dbm(2, (1, 0, 1), (0, 1, 0), (2, 0, 1), (0, 2, 0))
    assert j == square
    assert len(transitive_reduce(j)) == 4
    hull = {(x, y) for x in (0, 1) for y in (0, 1)}
    assert {p for p in points(j.matrix, -2, 2, F(1))} == {tuple(map(F, p)) for p in hull}


def test_meet_derives_bound():
    m = meet(dbm(2, (1, 2, 1)), dbm(2, (2, 0, 2)))
    assert m.matrix[1, 0] == 3


def test_forget_keeps_derived_bound():
    s = dbm(2, (1, 2, 1), (2, 0, 2))
    f = forget(s, 2)
    assert f == dbm(2, (1, 0, 3))
    assert {p[0] for p in points(s.matrix, **GRID)} == {p[0] for p in points(f.matrix, **GRID)}


def test_closure_has_three_constraints():
    s = dbm(2, (1, 2, 1), (2, 0, 2))
    assert sorted(s.matrix.finite_cells()) == [(1, 0, 3), (1, 2, 1), (2, 0, 2)]


def test_strengthening_instance():
    rows = OctMatrix.top(2).to_lists()
    rows[0][1], rows[2][3] = F(2), F(4)
    m = OctMatrix(2, tuple(map(tuple, rows)))
    s = strong_close(m)
    assert s.matrix[0, 3] == 3
    assert s.matrix.entries == oracle_strong_close_rows(m.entries)
    pts = points(m, -3, 3)
    assert max(x + y for x, y in pts) == 3


def test_octagon_forget_literal_and_lower_bound_forms():
    literal = octa(2, (1, 0, 0, 0, 1), (1, 1, 0, 1, 3))          # x <= 1, x + y <= 3
    assert oct_forget(literal, 0) == octa(2)
    # y is unbounded above: x = min(1, 3 - y) always exists
    ys = {p[1] for p in points(literal.matrix, -6, 6)}
    assert max(ys) == 6
    lower = octa(2, (-1, 0, 0, 0, -1), (1, 1, 0, 1, 3))          # x >= 1, x + y <= 3
    assert oct_forget(lower, 0) == octa(2, (1, 0, 1, 1, 2))
    assert max(p[1] for p in points(lower.matrix, -6, 6)) == 2


def test_reduce_drops_triangle_edge():
    s = dbm(2, (1, 2, 1), (2, 0, 2), (1, 0, 3))
    assert transitive_reduce(s).kept == ((1, 2, F(1)), (2, 0, F(2)))
    pairs = {(i, j): [(i, j)] for i, j, _ in s.matrix.finite_cells()}
    assert sorted(greedy_reduce_cells(s.matrix.entries, oracle_close_rows, pairs)) == \
        [(1, 2), (2, 0)]


def test_reduce_equality_keeps_one_upper_bound():
    s = dbm(2, (1, 2, 0), (2, 1, 0), (1, 0, 5))
    kept = set(transitive_reduce(s).kept)
    assert {(1, 2, 0), (2, 1, 0)} <= kept
    assert len(kept) == 3 and len(kept & {(1, 0, 5), (2, 0, 5)}) == 1
    pairs = {(i, j): [(i, j)] for i, j, _ in s.matrix.finite_cells()}
    assert len(greedy_reduce_cells(s.matrix.entries, oracle_close_rows, pairs)) == 3


def test_strong_reduce_instances():
    s = octa(2, (1, 0, 0, 0, 1), (1, 0, 1, 1, 2), (1, 1, 0, 1, 3))
    assert sorted(strong_reduce(s).constraints()) == [(1, 0, 0, 0, 1), (1, 0, 1, 1, 2)]
    t = octa(2, (1, 1, 0, 1, 2), (1, -1, 0, 1, 0), (1, 0, 0, 0, 1))
    assert sorted(strong_reduce(t).constraints()) == [(1, -1, 0, 1, 0), (1, 1, 0, 1, 2)]
    pairs = {(i, j): sorted({(i, j), (bar(j), bar(i))}) for i, j, _ in strong_reduce(t).kept}
    all_pairs = {}
    for i, j, _ in t.matrix.finite_cells():
        key = min((i, j), (bar(j), bar(i)))
        all_pairs[key] = sorted({(i, j), (bar(j), bar(i))})
    assert len(greedy_reduce_cells(t.matrix.entries, oracle_strong_close_rows, all_pairs)) == \
        len(pairs)


def test_harvested_thresholds():
    t = harvest_thresholds(dbm(2, (1, 2, 1), (2, 0, 2)))
    assert t.cells == {(1, 0): (F(3),)}


def test_standard_widening_keeps_only_equality():
    a = dbm(2, (1, 2, 0), (2, 1, 0), (1, 0, 5))
    b = dbm(2, (1, 2, 0), (2, 1, 0), (1, 0, 7))
    assert widen(a, b, PLAIN_STANDARD) == dbm(2, (1, 2, 0), (2, 1, 0))
    # on the closed first argument both upper bounds are present and both fail, same result here
    assert close(widen_syntactic(a.matrix, b.matrix)) == dbm(2, (1, 2, 0), (2, 1, 0))


def test_upto_threshold_instance():
    a, b = dbm(1, (1, 0, 1), (0, 1, 0)), dbm(1, (1, 0, 2), (0, 1, 0))
    w = widen_upto(a, b, ThresholdSet({(1, 0): (F(10),)}))
    assert w == dbm(1, (1, 0, 10), (0, 1, 0))
    assert points(a.matrix, **GRID) <= points(w.matrix, **GRID)
    assert points(b.matrix, **GRID) <= points(w.matrix, **GRID)


def test_delay_two_on_counting_sequence():
    chain = [dbm(1, (1, 0, k), (0, 1, 0)) for k in range(6)]
    first_inf = {}
    for delay in (0, 2):
        wp = WideningPoint(DBM, WideningStrategy(thresholds=None, delay=delay))
        for k, y in enumerate(chain):
            if wp.update(y).matrix[1, 0] is INF:
                first_inf[delay] = k
                break
    assert first_inf[2] - first_inf[0] == 2


def test_shift_transfer():
    s = dbm(2, (1, 0, 0), (0, 1, 0), (2, 1, 0), (1, 2, 0))
    t = transfer(AssignVar("x", 1, "x", 1), s, ("x", "y"))
    assert t == dbm(2, (1, 0, 1), (0, 1, -1), (2, 0, 0), (0, 2, 0))
    assert points(t.matrix, **GRID) == {(p[0] + 1, p[1]) for p in points(s.matrix, **GRID)}


def test_counting_loop_head_and_exit():
    prog = parse("x := 0; while (x <= 9) { x := x + 1; }")
    res = analyze(prog, "dbm", PLAIN_STANDARD, descend=1)
    (h,) = res.cfg.loop_heads
    assert res.invariants(h) == ["0 <= x <= 10"]
    assert res.invariants(res.cfg.exit) == ["x = 10"]
    x, seen = 0, [0]
    while x <= 9:
        x += 1
        seen.append(x)
    assert (min(seen), max(seen), x) == (0, 10, 10)


def test_cli_counting_and_matrix_files(tmp_path):
    out = io.StringIO()
    assert main(["analyze", str(CORPUS / "counting.w")], out, io.StringIO()) == 0
    assert out.getvalue().rstrip().splitlines()[-1] == "  x = 10"
    f = tmp_path / "m.dbm"
    f.write_text("dbm 2\n0 inf inf\ninf 0 1\n2 inf 0\n")
    out = io.StringIO()
    main(["op", "close", str(f)], out, io.StringIO())
    closed = out.getvalue()
    assert closed.splitlines()[2].split()[0] == "3"
    g = tmp_path / "c.dbm"
    g.write_text(closed)
    out = io.StringIO()
    main(["op", "reduce", str(g)], out, io.StringIO())
    assert out.getvalue() == "1 2 1\n2 0 2\n"
