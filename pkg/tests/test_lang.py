import pytest

from weakrel.cfg import build_cfg
from weakrel.lang import (AssignConst, AssignVar, Assume, Havoc, If, Lin, Nondet, ParseError,
                          Skip, TrueCond, While, negate, parse)


def test_parses_every_statement_form():
    p = parse("x := 3; y := -x + 2; z := ?; skip; assume(x - y >= -1);\n"
              "if (?) { x := y - 1; } else { y := x; }\nwhile (true) { z := z + 1; }")
    assert p.variables == ("x", "y", "z")
    assert p.body[0] == AssignConst("x", 3)
    assert p.body[1] == AssignVar("y", -1, "x", 2)
    assert p.body[2] == Havoc("z")
    assert p.body[3] == Skip()
    assert p.body[4] == Assume(Lin(((-1, "x"), (1, "y")), 1))
    assert isinstance(p.body[5], If) and p.body[5].cond == Nondet()
    assert isinstance(p.body[6], While) and p.body[6].cond == TrueCond() and p.body[6].line == 3


def test_negative_constants_and_comments():
    p = parse("// header\nx := -4; // trailing\nassume(x <= -2);")
    assert p.body == (AssignConst("x", -4), Assume(Lin(((1, "x"),), -2)))


def test_sum_condition():
    p = parse("assume(x + y <= 3);")
    assert p.body[0].cond == Lin(((1, "x"), (1, "y")), 3)


@pytest.mark.parametrize("src,line,col", [
    ("x := 1", 1, 7),
    ("x := 1;\ny = 2;", 2, 3),
    ("while (x <= 1 { }", 1, 15),
    ("assume(x < 1);", 1, 10),
    ("x := 1; @", 1, 9),
    ("if (?) { x := 1;", 1, 17),
])
def test_parse_errors_carry_position(src, line, col):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert (info.value.line, info.value.col) == (line, col)


def test_integer_negation():
    c = Lin(((1, "x"),), 9)
    assert negate(c) == Lin(((-1, "x"),), -10)
    assert negate(negate(c)) == c
    assert negate(Nondet()) == Nondet()


def test_cfg_shape_of_a_loop():
    g = build_cfg(parse("x := 0; while (x <= 9) { x := x + 1; }"))
    assert len(g.loop_heads) == 1
    (h,) = g.loop_heads
    assert "loop head line 1" in g.labels[h]
    assert len(g.preds(h)) == 2
    assert g.reverse_postorder()[0] == g.entry
    assert g.labels[g.exit] == "exit"


def test_cfg_nested_loops_have_two_heads():
    g = build_cfg(parse("while (?) { while (?) { x := 1; } }"))
    assert len(g.loop_heads) == 2
