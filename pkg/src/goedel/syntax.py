"""Terms and formulas of first-order arithmetic.

Two views of the same tree type are used throughout:

* the *concrete* tree returned by `parse`, which keeps every parenthesis as a
  `Paren` node so that `to_symbols(parse(s)) == s` for symbol strings;
* the *abstract* view (`abstract`), with parentheses dropped and successor
  chains over 0 folded into `Num` nodes.  Logical identity of formulas is
  equality of abstract views.

`canonicalize` maps any tree to the concrete tree whose symbol string follows
the code templates of the arithmetized syntax: operands of ′, + and · are
wrapped, bodies of ¬ and ∀ are wrapped, equations and implications get no
extra parentheses.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .numbering import DEFAULT_MAX_BITS, GuardError, Rope

EXPANSION_GUARD = 1 << 20


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at symbol {position}")
        self.position = position


class CanonicalError(ValueError):
    """Tree uses a connective outside the core {¬, ⇒, ∀}."""


# --- nodes ------------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Num:
    """The numeral 0 followed by n primes (n >= 1)."""
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Num needs n >= 1; use Zero() for 0")

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Var:
    """Variable number k, written (0 followed by k primes)."""
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("variable index must be positive")

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Succ:
    t: "Node"

    def children(self) -> tuple:
        return (self.t,)


@dataclass(frozen=True)
class Sum:
    left: "Node"
    right: "Node"

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Prod:
    left: "Node"
    right: "Node"

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Paren:
    body: "Node"

    def children(self) -> tuple:
        return (self.body,)


@dataclass(frozen=True)
class Eq:
    left: "Node"
    right: "Node"

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Imp:
    left: "Node"
    right: "Node"

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class And:
    left: "Node"
    right: "Node"

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Or:
    left: "Node"
    right: "Node"

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Not:
    body: "Node"

    def children(self) -> tuple:
        return (self.body,)


@dataclass(frozen=True)
class ForAll:
    var: int
    body: "Node"

    def children(self) -> tuple:
        return (self.body,)


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Node"

    def children(self) -> tuple:
        return (self.body,)


Node = Union[Zero, Num, Var, Succ, Sum, Prod, Paren, Eq, Imp, And, Or, Not, ForAll, Exists]
TERM_TYPES = (Zero, Num, Var, Succ, Sum, Prod)
BINARY_FORMULA = (Imp, And, Or)
QUANTIFIERS = (ForAll, Exists)

_INFIX = {Sum: "+", Prod: "·", Eq: "=", Imp: "⇒", And: "∧", Or: "∨"}
_PREFIX = {Not: "¬"}
_QUANT = {ForAll: "∀", Exists: "∃"}


def numeral(n: int) -> Node:
    return Zero() if n == 0 else Num(n)


def is_term(a: Node) -> bool:
    while isinstance(a, Paren):
        a = a.body
    return isinstance(a, TERM_TYPES)


# --- serialization ----------------------------------------------------------

def _pieces(a: Node) -> Iterator[Union[str, int]]:
    """Yield strings and prime-run lengths left to right, without recursion."""
    stack: list = [a]
    while stack:
        n = stack.pop()
        if isinstance(n, str):
            yield n
        elif isinstance(n, Zero):
            yield "0"
        elif isinstance(n, Num):
            yield "0"
            yield n.n
        elif isinstance(n, Var):
            yield "(0"
            yield n.k
            yield ")"
        elif isinstance(n, Succ):
            stack.append("′")
            stack.append(n.t)
        elif isinstance(n, Paren):
            stack.extend((")", n.body, "("))
        elif isinstance(n, Not):
            stack.extend((n.body, "¬"))
        elif isinstance(n, QUANTIFIERS):
            stack.extend((n.body, Var(n.var), _QUANT[type(n)]))
        else:
            stack.extend((n.right, _INFIX[type(n)], n.left))


def to_rope(a: Node) -> Rope:
    return Rope.of(*_pieces(a))


def to_symbols(a: Node, guard: int | None = DEFAULT_MAX_BITS) -> str:
    """Exact symbol string of a concrete tree."""
    return to_rope(a).text(guard)


# --- ASCII surface ----------------------------------------------------------

_ASCII_TOKEN = re.compile(r"\s+|->|=>|[A-Za-z][A-Za-z0-9]*|\d+|.", re.S)
_WORDS = {"all": "∀", "forall": "∀", "ex": "∃", "exists": "∃"}
_SIMPLE = {"'": "′", "*": "·", "&": "∧", "|": "∨", "~": "¬", "!": "¬",
           "->": "⇒", "=>": "⇒"}
_PASS = set("0(){}[]+=,′·⇒∧∨¬∀∃")
_RENDER = {"′": "'", "·": "*", "⇒": "->", "∧": "&", "∨": "|", "¬": "~",
           "∀": "all", "∃": "ex"}


def _var_text(k: int) -> str:
    return "(0" + "′" * k + ")"


def ascii_to_symbols(text: str) -> str:
    """Translate the ASCII surface syntax to the 18-symbol alphabet."""
    out = []
    pos = 0
    for m in _ASCII_TOKEN.finditer(text):
        tok = m.group(0)
        pos = m.start()
        if tok.isspace():
            continue
        if tok in _SIMPLE:
            out.append(_SIMPLE[tok])
        elif tok in _WORDS:
            out.append(_WORDS[tok])
        elif tok[0].isalpha():
            if len(tok) == 1 and tok.islower():
                out.append(_var_text(ord(tok) - ord("a") + 1))
            elif re.fullmatch(r"v[1-9]\d*", tok):
                out.append(_var_text(int(tok[1:])))
            else:
                raise ParseError(f"unknown word {tok!r}", pos)
        elif tok.isdigit():
            out.append("0" + "′" * int(tok))
        elif tok in _PASS:
            out.append(tok)
        else:
            raise ParseError(f"unknown character {tok!r}", pos)
    return "".join(out)


def render(symbols: str) -> str:
    """ASCII rendering of a symbol string; inverse of ascii_to_symbols."""
    return "".join(_RENDER.get(c, c) for c in symbols)


# --- tokenizer --------------------------------------------------------------

@dataclass(frozen=True)
class _Tok:
    kind: str  # "var", "num", or the symbol itself
    value: int
    pos: int


def _runs(src: Union[str, Rope]) -> list[tuple[str, int]]:
    parts = src.parts if isinstance(src, Rope) else (src,)
    runs: list[list] = []
    for p in parts:
        if isinstance(p, int):
            if runs and runs[-1][0] == "′":
                runs[-1][1] += p
            else:
                runs.append(["′", p])
            continue
        for c in p:
            if c == "′" and runs and runs[-1][0] == "′":
                runs[-1][1] += 1
            else:
                runs.append([c, 1])
    return [(c, n) for c, n in runs]


def tokenize(src: Union[str, Rope]) -> list[_Tok]:
    if isinstance(src, str) and any(c not in _PASS for c in src):
        src = ascii_to_symbols(src)
    runs = _runs(src)
    toks: list[_Tok] = []
    pos = 0
    i = 0
    while i < len(runs):
        c, n = runs[i]
        if (c == "(" and i + 3 < len(runs) and runs[i + 1][0] == "0"
                and runs[i + 2][0] == "′" and runs[i + 3][0] == ")"):
            k = runs[i + 2][1]
            toks.append(_Tok("var", k, pos))
            pos += k + 3
            i += 4
            continue
        if c == "0":
            k = runs[i + 1][1] if i + 1 < len(runs) and runs[i + 1][0] == "′" else 0
            toks.append(_Tok("num", k, pos))
            pos += 1 + k
            i += 2 if k else 1
            continue
        if c not in _PASS:
            raise ParseError(f"not a symbol {c!r}", pos)
        toks.append(_Tok(c, n, pos))
        pos += n
        i += 1
    toks.append(_Tok("end", 0, pos))
    return toks


# --- parser -----------------------------------------------------------------

class _Parser:
    """Recursive descent; precedence ′ > · > + > = > ¬ ∀ ∃ > ∧ > ∨ > ⇒."""

    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0
        self.term_memo: dict[int, tuple[Node, int] | ParseError] = {}
        self.furthest = ParseError("empty input", 0)

    def fail(self, msg: str) -> ParseError:
        tok = self.toks[self.i]
        err = ParseError(msg, tok.pos)
        if err.position >= self.furthest.position:
            self.furthest = err
        return err

    def peek(self) -> str:
        return self.toks[self.i].kind

    def expect(self, kind: str) -> _Tok:
        if self.peek() != kind:
            raise self.fail(f"expected {kind!r}, found {self.peek()!r}")
        tok = self.toks[self.i]
        self.i += 1
        return tok

    # terms
    def term(self) -> Node:
        start = self.i
        hit = self.term_memo.get(start)
        if hit is None:
            try:
                node = self._sum()
                hit = (node, self.i)
            except ParseError as exc:
                hit = exc
            self.term_memo[start] = hit
        if isinstance(hit, ParseError):
            self.i = start
            raise hit
        self.i = hit[1]
        return hit[0]

    def _sum(self) -> Node:
        node = self._prod()
        while self.peek() == "+":
            self.i += 1
            node = Sum(node, self._prod())
        return node

    def _prod(self) -> Node:
        node = self._post()
        while self.peek() == "·":
            self.i += 1
            node = Prod(node, self._post())
        return node

    def _post(self) -> Node:
        node = self._prim()
        while self.peek() == "′":
            for _ in range(self.toks[self.i].value):
                node = Succ(node)
            self.i += 1
        return node

    def _prim(self) -> Node:
        tok = self.toks[self.i]
        if tok.kind == "var":
            self.i += 1
            return Var(tok.value)
        if tok.kind == "num":
            self.i += 1
            return numeral(tok.value)
        if tok.kind == "(":
            self.i += 1
            inner = self.term()
            self.expect(")")
            return Paren(inner)
        raise self.fail(f"expected a term, found {tok.kind!r}")

    # formulas
    def formula(self) -> Node:
        left = self._disj()
        if self.peek() == "⇒":
            self.i += 1
            return Imp(left, self.formula())
        return left

    def _disj(self) -> Node:
        node = self._conj()
        while self.peek() == "∨":
            self.i += 1
            node = Or(node, self._conj())
        return node

    def _conj(self) -> Node:
        node = self._unary()
        while self.peek() == "∧":
            self.i += 1
            node = And(node, self._unary())
        return node

    def _unary(self) -> Node:
        kind = self.peek()
        if kind == "¬":
            self.i += 1
            return Not(self._unary())
        if kind in ("∀", "∃"):
            self.i += 1
            v = self.expect("var").value
            body = self._unary()
            return ForAll(v, body) if kind == "∀" else Exists(v, body)
        start = self.i
        try:
            left = self.term()
            self.expect("=")
            return Eq(left, self.term())
        except ParseError:
            self.i = start
        if kind == "(":
            self.i += 1
            inner = self.formula()
            self.expect(")")
            return Paren(inner)
        raise self.fail(f"expected a formula, found {kind!r}")


def _parse(src: Union[str, Rope]) -> Node:
    p = _Parser(tokenize(src))
    for start in (p.formula, p.term):  # a bare term is accepted too
        p.i = 0
        try:
            node = start()
        except ParseError:
            continue
        if p.peek() == "end":
            return node
        p.fail(f"unexpected {p.peek()!r}")
    raise p.furthest


def parse(src: Union[str, Rope]) -> Node:
    """Parse ASCII surface text, a symbol string, or a rope, to a concrete tree."""
    if len(src) > 20_000:
        from ._deep import run_deep
        return run_deep(_parse, src)
    return _parse(src)


# --- abstract view ----------------------------------------------------------

def _rebuild(a: Node, kids: list) -> Node:
    if isinstance(a, QUANTIFIERS):
        return type(a)(a.var, kids[0])
    return type(a)(*kids)


def _fold(a: Node) -> Node:
    if isinstance(a, Succ):
        if isinstance(a.t, Zero):
            return Num(1)
        if isinstance(a.t, Num):
            return Num(a.t.n + 1)
    return a


def strip_parens(a: Node) -> Node:
    if isinstance(a, Paren):
        return strip_parens(a.body)
    kids = a.children()
    if not kids:
        return a
    return _rebuild(a, [strip_parens(k) for k in kids])


def abstract(a: Node) -> Node:
    """Drop parentheses and fold successors of numerals into numerals."""
    if isinstance(a, Paren):
        return abstract(a.body)
    kids = a.children()
    if not kids:
        return a
    return _fold(_rebuild(a, [abstract(k) for k in kids]))


def desugar(a: Node) -> Node:
    """Abstract view over the core connectives: ∧, ∨ and ∃ are rewritten."""
    a = abstract(a) if isinstance(a, Paren) else a
    if isinstance(a, And):
        return Not(Imp(desugar(a.left), Not(desugar(a.right))))
    if isinstance(a, Or):
        return Imp(Not(desugar(a.left)), desugar(a.right))
    if isinstance(a, Exists):
        return Not(ForAll(a.var, Not(desugar(a.body))))
    kids = a.children()
    if not kids:
        return a
    return _fold(_rebuild(a, [desugar(k) for k in kids]))


def variables(a: Node) -> set[int]:
    """Every variable index occurring anywhere, bound or free."""
    out: set[int] = set()
    stack = [a]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(n.k)
        elif isinstance(n, QUANTIFIERS):
            out.add(n.var)
        stack.extend(n.children())
    return out


def free_vars(a: Node) -> set[int]:
    out: set[int] = set()
    stack: list[tuple[Node, frozenset]] = [(a, frozenset())]
    while stack:
        n, bound = stack.pop()
        if isinstance(n, Var):
            if n.k not in bound:
                out.add(n.k)
            continue
        if isinstance(n, QUANTIFIERS):
            bound = bound | {n.var}
        for c in n.children():
            stack.append((c, bound))
    return out


def occurs_free(x: int, a: Node) -> bool:
    return x in free_vars(a)


def term_free_for(t: Node, x: int, f: Node) -> bool:
    """No free x in f sits under a quantifier binding a variable of t."""
    tv = variables(t)
    stack: list[tuple[Node, frozenset]] = [(f, frozenset())]
    while stack:
        n, bound = stack.pop()
        if isinstance(n, Var):
            if n.k == x and x not in bound and (bound & tv):
                return False
            continue
        if isinstance(n, QUANTIFIERS):
            bound = bound | {n.var}
        for c in n.children():
            stack.append((c, bound))
    return True


def subst(f: Node, x: int, t: Node) -> Node:
    """Replace the free occurrences of variable x by t (abstract result)."""
    f, t = abstract(f), abstract(t)

    def go(n: Node) -> Node:
        if isinstance(n, Var):
            return t if n.k == x else n
        if isinstance(n, QUANTIFIERS) and n.var == x:
            return n
        kids = n.children()
        if not kids:
            return n
        return _fold(_rebuild(n, [go(k) for k in kids]))

    return go(f)


def subst_convention(f: Node, n: int, x: int) -> Node:
    """∀x((x=n̄)⇒(f)), the substitution convention, as a concrete tree.

    Applied whether or not x occurs in f.  The symbol string matches the
    sub-code template exactly, so its code is sub_code(g(f), g(x), g(n̄)).
    """
    return ForAll(x, Paren(Imp(Paren(Eq(Var(x), numeral(n))), Paren(f))))


# --- canonical form ---------------------------------------------------------

def _canon_term(t: Node, guard: int) -> Node:
    if isinstance(t, (Zero, Num, Var)):
        return t
    if isinstance(t, Succ):
        return Succ(_operand(t.t, guard))
    if isinstance(t, (Sum, Prod)):
        return type(t)(_operand(t.left, guard), _operand(t.right, guard))
    raise CanonicalError(f"expected a term, found {type(t).__name__}")


def _operand(t: Node, guard: int) -> Node:
    # a wrapped numeral "(0′…)" would read as a variable; spell it as a chain
    if isinstance(t, Num):
        if 3 * t.n > guard:
            raise GuardError("numeral operand expansion", 3 * t.n, guard)
        node: Node = Zero()
        for _ in range(t.n):
            node = Succ(Paren(node))
        return Paren(node)
    return Paren(_canon_term(t, guard))


def _canon(a: Node, guard: int) -> Node:
    if isinstance(a, Eq):
        return Eq(_canon_term(a.left, guard), _canon_term(a.right, guard))
    if isinstance(a, Imp):
        left = _canon(a.left, guard)
        if isinstance(left, Imp):
            left = Paren(left)
        return Imp(left, _canon(a.right, guard))
    if isinstance(a, Not):
        return Not(Paren(_canon(a.body, guard)))
    if isinstance(a, ForAll):
        return ForAll(a.var, Paren(_canon(a.body, guard)))
    if isinstance(a, (And, Or, Exists)):
        raise CanonicalError(f"{type(a).__name__} must be desugared before printing")
    return _canon_term(a, guard)


def canonicalize(a: Node, guard: int = EXPANSION_GUARD) -> Node:
    return _canon(strip_parens(a), guard)


def print_canonical(a: Node, guard: int = EXPANSION_GUARD) -> str:
    return to_symbols(canonicalize(a, guard), guard)


# --- string classification through the parser -------------------------------

_LEQ_VAR = 1


def _term_n(a: Node) -> bool:
    if isinstance(a, (Zero, Num, Var)):
        return True
    if isinstance(a, Succ):
        return _operand_n(a.t)
    if isinstance(a, (Sum, Prod)):
        return _operand_n(a.left) and _operand_n(a.right)
    return False


def _operand_n(a: Node) -> bool:
    # "(0′…′)" doubles as a parenthesized numeral
    if isinstance(a, Var):
        return True
    return isinstance(a, Paren) and _term_n(a.body)


def _leq_n(a: Node) -> bool:
    # ¬(∀(0′)(¬(y+(0′)=z)))
    try:
        fa = a.body.body
        inner = fa.body.body.body.body
        ok = (isinstance(a, Not) and isinstance(a.body, Paren)
              and isinstance(fa, ForAll) and fa.var == _LEQ_VAR
              and isinstance(fa.body, Paren) and isinstance(fa.body.body, Not)
              and isinstance(fa.body.body.body, Paren)
              and isinstance(inner, Eq) and isinstance(inner.left, Sum)
              and inner.left.right == Var(_LEQ_VAR))
    except AttributeError:
        return False
    return ok and _term_n(inner.left.left) and _term_n(inner.right)


def _atom_n(a: Node) -> bool:
    if isinstance(a, Eq) and _term_n(a.left) and _term_n(a.right):
        return True
    return _leq_n(a)


def _form_n(a: Node) -> bool:
    if _atom_n(a):
        return True
    if isinstance(a, Imp):
        return _form_n(a.left) and _form_n(a.right)
    if isinstance(a, (Not, ForAll)):
        return isinstance(a.body, Paren) and _form_n(a.body.body)
    return False


def _parse_or_none(s: Union[str, Rope]) -> Node | None:
    if isinstance(s, str) and any(c not in _PASS for c in s):
        return None
    try:
        return parse(s)
    except (ParseError, RecursionError):
        return None


def is_term_string(s: Union[str, Rope]) -> bool:
    a = _parse_or_none(s)
    return a is not None and _term_n(a)


def is_atom_string(s: Union[str, Rope]) -> bool:
    a = _parse_or_none(s)
    return a is not None and _atom_n(a)


def is_form_string(s: Union[str, Rope]) -> bool:
    a = _parse_or_none(s)
    if a is None:
        return False
    if len(s) > 20_000:
        from ._deep import run_deep
        return run_deep(_form_n, a)
    return _form_n(a)


def is_var_string(s: str) -> bool:
    return re.fullmatch("\\(0′+\\)", s) is not None


def is_num_string(s: str) -> bool:
    return re.fullmatch("0′*", s) is not None


def is_succ_string(s: str) -> bool:
    return re.fullmatch("′+", s) is not None
