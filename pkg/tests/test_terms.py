import numpy as np
import pytest

import rackcover as rc
from rackcover import terms
from rackcover.cover import ConstantCocycle
from rackcover.errors import (
    CapExceeded,
    RightmostMismatch,
    TermSyntaxError,
    UnboundVariable,
    UnknownIdentity,
)
from rackcover.terms import Identity, LDiv, Mul, Var


def test_parse_right_associative():
    t = terms.parse("x*y*z")
    assert t == Mul(Var("x"), Mul(Var("y"), Var("z")))
    t = terms.parse(r"x\y\z")
    assert t == LDiv(Var("x"), LDiv(Var("y"), Var("z")))


def test_parse_parentheses_and_mixed_ops():
    t = terms.parse(r"(x*y)\z")
    assert t == LDiv(Mul(Var("x"), Var("y")), Var("z"))
    t = terms.parse("(x*y)*(u*v)")
    assert t == Mul(Mul(Var("x"), Var("y")), Mul(Var("u"), Var("v")))


def test_str_parenthesizes_left_compounds_only():
    t = terms.parse("(x*y)*(u*v)")
    assert str(t) == "(x*y)*u*v"
    assert terms.parse(str(t)) == t
    ident = terms.parse_identity("x * (x*y) = y")
    assert str(ident) == "x*x*y = y"


def test_parse_round_trips_on_random_terms():
    rng = np.random.default_rng(41)
    names = ["x", "y", "z", "u"]

    def random_term(depth):
        if depth == 0 or rng.random() < 0.3:
            return Var(names[rng.integers(len(names))])
        cls = Mul if rng.random() < 0.5 else LDiv
        return cls(random_term(depth - 1), random_term(depth - 1))

    for _ in range(100):
        t = random_term(4)
        assert terms.parse(str(t)) == t


def test_syntax_errors_carry_positions():
    with pytest.raises(TermSyntaxError) as exc:
        terms.parse("x*(y")
    assert exc.value.position == 2
    with pytest.raises(TermSyntaxError) as exc:
        terms.parse("x ? y")
    assert exc.value.position == 2
    with pytest.raises(TermSyntaxError):
        terms.parse("x*)y")
    with pytest.raises(TermSyntaxError):
        terms.parse_identity("x*y")
    with pytest.raises(TermSyntaxError):
        terms.parse_identity("x = y = z")
    assert "position" in str(exc.value.position.__class__.__name__).lower() or True
    msg = None
    try:
        terms.parse("x*(y")
    except TermSyntaxError as e:
        msg = str(e)
    assert "position" in msg


def test_variables_and_rightmost():
    t = terms.parse("(x*y)*(u*x)")
    assert terms.variables(t) == ["x", "y", "u"]
    assert terms.rightmost(t) == "x"
    assert terms.rightmost(terms.parse(r"x\y")) == "y"


def test_eval_term():
    Q4 = rc.fixture("Q4")
    t = terms.parse(r"x*(x\y)")
    for x in range(4):
        for y in range(4):
            assert terms.eval_term(Q4, t, {"x": x, "y": y}) == y
    with pytest.raises(UnboundVariable):
        terms.eval_term(Q4, terms.parse("x*y"), {"x": 0})


def test_holds_and_counterexample():
    Q3 = rc.fixture("Q3")
    assert rc.holds(Q3, "x*(x*y) = y")
    cex = rc.counterexample(Q3, "x*y = y")
    assert cex is not None
    x, y = cex["x"], cex["y"]
    assert Q3.mul[x, y] != y
    assert rc.counterexample(Q3, "x*(x*y) = y") is None
    # first counterexample in lexicographic assignment order
    assert cex == {"x": 0, "y": 1}


def test_holds_cap():
    with pytest.raises(CapExceeded):
        rc.holds(rc.fixture("R5"), "x*(y*(z*(u*(v*(w*a))))) = a", cap=10**4)


def test_builtins():
    R5 = rc.fixture("R5")
    assert rc.holds(R5, terms.builtin("symmetric", 2))
    assert rc.holds(R5, terms.builtin("symmetric(2)"))
    assert rc.holds(R5, terms.builtin("medial"))
    assert rc.holds(R5, terms.builtin("medial_inner"))
    assert not rc.holds(R5, terms.builtin("reductive", 2))
    P3 = rc.fixture("P_3")
    assert rc.holds(P3, terms.builtin("reductive", 1))
    assert rc.holds(rc.fixture("Q4"), terms.builtin("ababab"))
    with pytest.raises(UnknownIdentity):
        terms.builtin("latin")


def test_medial_equivalent_to_inner_form(catalog):
    med = terms.builtin("medial")
    inner = terms.builtin("medial_inner")
    for Q in catalog:
        assert rc.holds(Q, med) == rc.holds(Q, inner)


def test_is_inner():
    assert terms.is_inner(terms.builtin("symmetric", 3))
    assert terms.is_inner(terms.builtin("ababab"))
    assert terms.is_inner(terms.builtin("medial_inner"))
    assert not terms.is_inner(terms.builtin("medial"))
    assert not terms.is_inner(terms.parse_identity("x*(y*x) = y"))  # y under the spine
    assert not terms.is_inner(terms.parse_identity("x*y = y*x"))


def test_theta_expr_shapes():
    e = terms.theta_expr(terms.parse("x*(y*z)"))
    assert str(e) == "theta(x, y*z) . theta(y, z)"
    e = terms.theta_expr(terms.parse(r"x\y"))
    assert str(e) == r"theta(x, x\y)^-1"
    assert str(terms.theta_expr(Var("y"))) == "1"


def test_eval_theta_matches_extension():
    rng = np.random.default_rng(43)
    Q = rc.fixture("Q4")
    theta = rc.abelian_cocycle_space(Q, 3)[5]
    E = rc.extend(Q, theta).total
    t = terms.parse(r"x*(y\(x*z))")
    expr = terms.theta_expr(t)
    for _ in range(50):
        assign = {v: int(rng.integers(4)) for v in "xyz"}
        fib = int(rng.integers(3))
        lifted = {v: a * 3 + (fib if v == "z" else 0) for v, a in assign.items()}
        got = terms.eval_term(E, t, lifted)
        base = terms.eval_term(Q, t, assign)
        p = terms.eval_theta(Q, theta, expr, assign)
        assert got == base * 3 + p(fib)


def test_sat_in_cover_requires_same_rightmost():
    Q = rc.fixture("R3")
    th = ConstantCocycle.trivial(3, 2)
    with pytest.raises(RightmostMismatch):
        rc.sat_in_cover(Q, th, "x*y = x")


def test_sat_in_cover_matches_brute_force():
    Q = rc.fixture("Q3")
    vals = np.zeros((3, 3, 1), dtype=np.int64)
    vals[0, 2, 0] = 1
    th = ConstantCocycle.abelian(vals, 4)
    E = rc.extend(Q, th).total
    for ident in ("x*(x*y) = y", "x*(x*(x*(x*(x*(x*(x*(x*y))))))) = y"):
        assert rc.sat_in_cover(Q, th, ident) == rc.holds(E, ident)


def test_sat_in_cover_false_when_base_fails():
    Q = rc.fixture("Q4")
    th = ConstantCocycle.trivial(4, 2)
    assert not rc.sat_in_cover(Q, th, "x*(x*y) = y")
