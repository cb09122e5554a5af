"""The group expression mini-language used on the command line.

    expr   := ATOM | perm | product | sdp | wreath
    ATOM   := C<n> | S<n> | A<n> | D<n> | Q8
    perm   := 'perm' '{' CYCLES (',' CYCLES)* '}'
    product:= 'product' '(' expr (',' expr)* ')'
    sdp    := 'semidirect' '(' expr ',' expr [',' 'action' '=' act] ')'
    wreath := 'wreath' '(' expr ',' expr ',' 'over' '=' sub [',' 'action' '=' act] ')'
    act    := 'trivial' | 'inversion' | 'power' '(' INT ')' | 'index' '(' INT ')'
    sub    := 'trivial' | 'whole' | 'index' '(' INT ')'

``semidirect(A, B, ...)`` is ``A ⋊ B`` with ``B`` acting; ``wreath(A, G,
over=H)`` is ``A ≀_H G``.  ``index(k)`` picks the ``k``-th (0-based) action of
:meth:`GroupAction.all_actions` or subgroup of :meth:`FiniteGroup.subgroups`
in their deterministic orders.  Each keyword is decided by one token of
lookahead.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import fingroup
from .fingroup import (CapExceeded, FiniteGroup, GroupAction, GroupError, Perm, SemidirectProduct, alternating,
                       cyclic, dihedral, direct_product, quaternion, symmetric)


class GroupExprError(ValueError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        where = "" if pos is None else f" at position {pos}"
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class Atom:
    kind: str  # C, S, A, D or Q
    n: int

    def __str__(self):
        return "Q8" if self.kind == "Q" else f"{self.kind}{self.n}"


@dataclass(frozen=True)
class PermGroup:
    gens: tuple  # cycle strings in canonical form

    def __str__(self):
        return "perm{" + ", ".join(self.gens) + "}"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self):
        return "product(" + ", ".join(map(str, self.factors)) + ")"


@dataclass(frozen=True)
class Choice:
    kind: str  # trivial, inversion, whole, power, index
    k: int = None

    def __str__(self):
        return self.kind if self.k is None else f"{self.kind}({self.k})"


@dataclass(frozen=True)
class Semidirect:
    kernel: object
    top: object
    action: Choice = Choice("trivial")

    def __str__(self):
        return f"semidirect({self.kernel}, {self.top}, action={self.action})"


@dataclass(frozen=True)
class Wreath:
    base: object
    top: object
    over: Choice
    action: Choice = Choice("trivial")

    def __str__(self):
        return f"wreath({self.base}, {self.top}, over={self.over}, action={self.action})"


_TOKEN = re.compile(r"\s*(?:(?P<atom>[CSAD][0-9]+|Q8)\b|(?P<word>[a-z]+)|(?P<int>-?[0-9]+)|(?P<sym>[(){},=]))")


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise GroupExprError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def fail(self, msg):
        raise GroupExprError(msg, self.peek()[2], self.text)

    def take(self, value=None, kind=None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            self.fail(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail("trailing input")
        return e

    def expr(self):
        kind, val, pos = self.peek()
        if kind == "atom":
            self.i += 1
            if val == "Q8":
                return Atom("Q", 8)
            n = int(val[1:])
            if n < 1:
                raise GroupExprError("group parameter must be positive", pos, self.text)
            return Atom(val[0], n)
        if val == "perm":
            return self.perm()
        if val == "product":
            self.take("product")
            self.take("(")
            factors = [self.expr()]
            while self.peek()[1] == ",":
                self.take(",")
                factors.append(self.expr())
            self.take(")")
            return Product(tuple(factors))
        if val == "semidirect":
            self.take("semidirect")
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            act = Choice("trivial")
            if self.peek()[1] == ",":
                self.take(",")
                self.take("action")
                self.take("=")
                act = self.choice(("trivial", "inversion", "power", "index"))
            self.take(")")
            return Semidirect(a, b, act)
        if val == "wreath":
            self.take("wreath")
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take(",")
            self.take("over")
            self.take("=")
            over = self.choice(("trivial", "whole", "index"))
            act = Choice("trivial")
            if self.peek()[1] == ",":
                self.take(",")
                self.take("action")
                self.take("=")
                act = self.choice(("trivial", "inversion", "power", "index"))
            self.take(")")
            return Wreath(a, b, over, act)
        self.fail(f"expected a group, found {val or 'end of input'!r}")

    def choice(self, allowed):
        kind, val, pos = self.peek()
        if val not in allowed:
            self.fail(f"expected one of {', '.join(allowed)}")
        self.i += 1
        if val in ("power", "index"):
            self.take("(")
            k = int(self.take(kind="int")[1])
            self.take(")")
            return Choice(val, k)
        return Choice(val)

    def perm(self):
        self.take("perm")
        start = self.take("{")[2]
        # the cycle text runs to the matching brace; cycles are split on commas
        end = self.text.find("}", start)
        if end < 0:
            raise GroupExprError("unterminated perm{", start, self.text)
        body = self.text[start + 1:end]
        gens = []
        offset = start + 1
        for part in body.split(","):
            try:
                p = Perm.parse(part.strip())
            except ValueError as exc:
                raise GroupExprError(f"bad permutation: {exc}", offset, self.text) from None
            gens.append(p)
            offset += len(part) + 1
        if not gens:
            raise GroupExprError("empty generator list", start, self.text)
        degree = max(g.degree for g in gens)
        gens = [g.extend(degree) if hasattr(g, "extend") else g for g in gens]
        while self.peek()[2] <= end:
            self.i += 1
        return PermGroup(tuple(_canon(g) for g in gens))


def _canon(p):
    s = str(p)
    return s if s else "()"


def parse_group(text):
    return _Parser(text).parse()


_CACHE = {}


def elaborate(expr, cap=None):
    """The finite group denoted by ``expr`` (cached per expression)."""
    if isinstance(expr, str):
        expr = parse_group(expr)
    key = (expr, cap)
    if key not in _CACHE:
        _CACHE[key] = _build(expr, cap)
    G = _CACHE[key]
    # a cached group must still respect the budget in force now
    limit = fingroup.DEFAULT_CAP if cap is None else cap
    if G.order > limit:
        raise CapExceeded(f"group closure exceeds {limit} elements")
    return G


def _pick_action(choice, acting, module):
    if choice.kind == "trivial":
        return GroupAction.trivial(acting, module)
    if choice.kind == "inversion":
        return GroupAction.inversion(acting, module)
    if choice.kind == "power":
        return GroupAction.power(acting, module, choice.k)
    acts = GroupAction.all_actions(acting, module)
    if not 0 <= choice.k < len(acts):
        raise GroupError(f"action index {choice.k} out of range (0..{len(acts) - 1})")
    return acts[choice.k]


def pick_action(text, acting, module):
    """An action from its textual choice (``trivial``, ``power(2)``, ...)."""
    p = _Parser(text)
    c = p.choice(("trivial", "inversion", "power", "index"))
    if p.peek()[0] != "end":
        p.fail("trailing input")
    return _pick_action(c, acting, module)


def _build(expr, cap):
    if isinstance(expr, Atom):
        build = {"C": cyclic, "S": symmetric, "A": alternating, "D": dihedral}
        G = quaternion() if expr.kind == "Q" else build[expr.kind](expr.n)
        G.name = str(expr)
        return G
    if isinstance(expr, PermGroup):
        gens = [Perm.parse(g) for g in expr.gens]
        degree = max(g.degree for g in gens)
        gens = [Perm(list(g.images) + list(range(g.degree, degree))) for g in gens]
        return FiniteGroup(gens, cap=cap, name=str(expr))
    if isinstance(expr, Product):
        G = direct_product(*[elaborate(f, cap) for f in expr.factors], cap=cap)
        G.name = str(expr)
        return G
    if isinstance(expr, Semidirect):
        A = elaborate(expr.kernel, cap)
        B = elaborate(expr.top, cap)
        G = SemidirectProduct(A, B, _pick_action(expr.action, B, A), cap=cap).group
        G.name = str(expr)
        return G
    if isinstance(expr, Wreath):
        from .wreath import TwistedWreath
        A = elaborate(expr.base, cap)
        G = elaborate(expr.top, cap)
        if expr.over.kind == "trivial":
            H = G.trivial_subgroup()
        elif expr.over.kind == "whole":
            H = G.whole()
        else:
            subs = G.subgroups()
            if not 0 <= expr.over.k < len(subs):
                raise GroupError(f"subgroup index {expr.over.k} out of range (0..{len(subs) - 1})")
            H = subs[expr.over.k]
        act = _pick_action(expr.action, H.as_group(), A)
        W = TwistedWreath(A, G, H, act, cap=cap).group
        W.name = str(expr)
        return W
    raise GroupError(f"unknown expression {expr!r}")
