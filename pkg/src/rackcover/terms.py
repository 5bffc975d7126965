"""Terms over {*, \\}, identity checking, and the Theta calculus that
decides whether an identity transfers to a covering extension.

Both operations parse right-associatively at equal precedence, so
"x*y*z\\u*v" means x*(y*(z\\(u*v))).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    CapExceeded,
    RightmostMismatch,
    TermSyntaxError,
    UnboundVariable,
    UnknownIdentity,
)
from .permgroup import Permutation

HOLDS_CAP = 10**7


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Mul:
    left: object
    right: object

    def __str__(self):
        return f"{_wrap(self.left)}*{self.right}"


@dataclass(frozen=True)
class LDiv:
    left: object
    right: object

    def __str__(self):
        return f"{_wrap(self.left)}\\{self.right}"


def _wrap(t):
    return str(t) if isinstance(t, Var) else f"({t})"


@dataclass(frozen=True)
class Identity:
    lhs: object
    rhs: object

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


# ------------------------------------------------------------------ parser

def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "*\\()":
            tokens.append((ch, i))
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
        else:
            raise TermSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


def parse(text):
    """Parse a term; '*' and '\\' associate to the right at equal precedence."""
    tokens = _tokenize(text)
    term, pos = _parse_term(tokens, 0, text)
    if pos != len(tokens):
        raise TermSyntaxError(f"unexpected {tokens[pos][0]!r}", tokens[pos][1])
    return term


def _parse_term(tokens, pos, text):
    left, pos = _parse_atom(tokens, pos, text)
    if pos < len(tokens) and tokens[pos][0] in ("*", "\\"):
        op = tokens[pos][0]
        right, pos = _parse_term(tokens, pos + 1, text)
        return (Mul if op == "*" else LDiv)(left, right), pos
    return left, pos


def _parse_atom(tokens, pos, text):
    if pos >= len(tokens):
        raise TermSyntaxError("unexpected end of input", len(text))
    tok, at = tokens[pos]
    if tok == "(":
        inner, pos = _parse_term(tokens, pos + 1, text)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise TermSyntaxError("unbalanced parenthesis", at)
        return inner, pos + 1
    if tok in ("*", "\\", ")"):
        raise TermSyntaxError(f"unexpected {tok!r}", at)
    return Var(tok), pos + 1


def parse_identity(text):
    if text.count("=") != 1:
        raise TermSyntaxError("an identity needs exactly one '='", text.find("=") + 1)
    lhs, rhs = text.split("=")
    return Identity(parse(lhs), parse(rhs.rstrip()))


def _as_identity(ident):
    return parse_identity(ident) if isinstance(ident, str) else ident


# ----------------------------------------------------------- term utilities

def variables(t):
    """Variable names in first-occurrence order."""
    if isinstance(t, Var):
        return [t.name]
    out = variables(t.left)
    for v in variables(t.right):
        if v not in out:
            out.append(v)
    return out


def rightmost(t):
    while not isinstance(t, Var):
        t = t.right
    return t.name


def eval_term(Q, t, assignment):
    if isinstance(t, Var):
        try:
            return int(assignment[t.name])
        except KeyError:
            raise UnboundVariable(f"no value for variable {t.name!r}") from None
    left = eval_term(Q, t.left, assignment)
    right = eval_term(Q, t.right, assignment)
    table = Q.mul if isinstance(t, Mul) else Q.ldiv
    return int(table[left, right])


def _postfix(t, index):
    if isinstance(t, Var):
        return [index[t.name]]
    op = _kernels.OP_MUL if isinstance(t, Mul) else _kernels.OP_LDIV
    return _postfix(t.left, index) + _postfix(t.right, index) + [op]


def _identity_vars(ident):
    names = variables(ident.lhs)
    for v in variables(ident.rhs):
        if v not in names:
            names.append(v)
    return names


def _first_counterexample(Q, ident, cap):
    names = _identity_vars(ident)
    k = len(names)
    if Q.size**k > cap:
        raise CapExceeded(f"{Q.size}^{k} assignments exceed cap {cap}")
    index = {v: i for i, v in enumerate(names)}
    lcode = np.asarray(_postfix(ident.lhs, index), dtype=np.int64)
    rcode = np.asarray(_postfix(ident.rhs, index), dtype=np.int64)
    hit = _kernels.identity_counterexample(Q.mul, Q.ldiv, lcode, rcode, k)
    if hit < 0:
        return None
    assignment = {}
    for i in range(k - 1, -1, -1):
        assignment[names[i]] = hit % Q.size
        hit //= Q.size
    return assignment


def holds(Q, ident, cap=HOLDS_CAP):
    """True iff the identity holds under every assignment."""
    return _first_counterexample(Q, _as_identity(ident), cap) is None


def counterexample(Q, ident, cap=HOLDS_CAP):
    """First failing assignment in lexicographic order, or None."""
    return _first_counterexample(Q, _as_identity(ident), cap)


# ------------------------------------------------------------- builtins

def builtin(name, *params):
    """Named identity families: symmetric(n), medial, medial_inner,
    reductive(n), ababab.  Accepts either builtin("symmetric", 2) or the
    combined string form builtin("symmetric(2)")."""
    name = name.strip()
    if "(" in name and name.endswith(")") and not params:
        head, _, tail = name.partition("(")
        try:
            params = tuple(int(p) for p in tail[:-1].split(","))
        except ValueError:
            raise UnknownIdentity(f"bad parameter list in {name!r}") from None
        name = head.strip()
    if name == "symmetric":
        (n,) = params or (2,)
        if n < 1:
            raise UnknownIdentity("symmetric(n) needs n >= 1")
        t = Var("y")
        for _ in range(n):
            t = Mul(Var("x"), t)
        return Identity(t, Var("y"))
    if name == "medial":
        if params:
            raise UnknownIdentity("medial takes no parameters")
        return parse_identity("(x*y)*(u*v) = (x*u)*(y*v)")
    if name == "medial_inner":
        if params:
            raise UnknownIdentity("medial_inner takes no parameters")
        return parse_identity("x*y\\u*v\\y*x\\v*u\\z = z")
    if name == "reductive":
        (n,) = params or (1,)
        if n < 1:
            raise UnknownIdentity("reductive(n) needs n >= 1")
        lhs, rhs = Var("u"), Var("v")
        for i in range(1, n + 1):
            lhs = Mul(lhs, Var(f"x{i}"))
            rhs = Mul(rhs, Var(f"x{i}"))
        return Identity(lhs, rhs)
    if name == "ababab":
        if params:
            raise UnknownIdentity("ababab takes no parameters")
        return parse_identity("x*(y*(x*(y*(x*(y*z))))) = z")
    raise UnknownIdentity(f"no builtin identity named {name!r}")


def is_inner(ident):
    """True iff the identity reads t1 . (t2 . (... (tm . y))) = y with y a
    variable absent from every ti."""
    ident = _as_identity(ident)
    if not isinstance(ident.rhs, Var):
        return False
    y = ident.rhs.name
    node = ident.lhs
    while not isinstance(node, Var):
        if y in variables(node.left):
            return False
        node = node.right
    return node.name == y


# -------------------------------------------------------- Theta calculus

@dataclass(frozen=True)
class ThetaExpr:
    """Formal composition of cocycle factors; factors[0] is applied last.

    Each factor is (left term, right term, sign): theta(left, right)^sign.
    """

    factors: tuple

    def __str__(self):
        if not self.factors:
            return "1"
        bits = []
        for lt, rt, sign in self.factors:
            inv = "" if sign > 0 else "^-1"
            bits.append(f"theta({lt}, {rt}){inv}")
        return " . ".join(bits)


def theta_expr(t):
    """Theta_y = 1; Theta_{t*s} = theta(t,s) . Theta_s;
    Theta_{t\\s} = theta(t, t\\s)^-1 . Theta_s."""
    if isinstance(t, Var):
        return ThetaExpr(())
    rest = theta_expr(t.right)
    if isinstance(t, Mul):
        head = (t.left, t.right, 1)
    else:
        head = (t.left, LDiv(t.left, t.right), -1)
    return ThetaExpr((head,) + rest.factors)


def eval_theta(Q, theta, expr, assignment):
    """The fiber permutation an assignment gives the formal composition."""
    out = Permutation.identity(theta.degree)
    for lt, rt, sign in expr.factors:
        p = theta.perm(eval_term(Q, lt, assignment), eval_term(Q, rt, assignment))
        out = out * (p if sign > 0 else p.inverse())
    return out


def sat_in_cover(Q, theta, ident, cap=HOLDS_CAP):
    """Decide whether extend(Q, theta) satisfies the identity, without
    building the extension: the base must satisfy it and the two Theta
    compositions must agree on every base assignment."""
    ident = _as_identity(ident)
    ly, ry = rightmost(ident.lhs), rightmost(ident.rhs)
    if ly != ry:
        raise RightmostMismatch(f"sides end in different variables: {ly!r} vs {ry!r}")
    if not holds(Q, ident, cap=cap):
        return False
    names = _identity_vars(ident)
    if Q.size ** len(names) > cap:
        raise CapExceeded(f"{Q.size}^{len(names)} assignments exceed cap {cap}")
    le, re = theta_expr(ident.lhs), theta_expr(ident.rhs)
    for values in itertools.product(range(Q.size), repeat=len(names)):
        assignment = dict(zip(names, values))
        if eval_theta(Q, theta, le, assignment) != eval_theta(Q, theta, re, assignment):
            return False
    return True
