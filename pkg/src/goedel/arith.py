"""Arithmetized syntax predicates evaluated on concrete codes.

Every code is read as its chunk word (see `numbering.chunks`), so the
string-shaped predicates become ``str`` operations: ★ is concatenation, Begin is
``startswith`` and Part is ``in``.  Entries 1 to 4 are plain arithmetic and
are evaluated on integers.

Two evaluators are kept for the early entries.  The fast ones are decision
procedures on chunk words.  The ``literal`` ones loop over the stated bounds
and are only usable on small numbers; the test suite checks that the two
agree there.

Term and Form have an unbounded outer search for a construction sequence.
They are decided by a span recognizer for the code grammar.  That is sound
because every non-base clause builds a strictly longer expression from
earlier elements, so a construction sequence exists exactly when the
grammar derives the word.  `construction` then builds a certifying witness
and `check_construction` validates it against the matrix.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence, Union

from .numbering import (
    DEFAULT_MAX_BITS, GuardError, Rope, chunk_char, chunk_exp, chunks, decode,
    DecodeError, encode, from_chunks, star,
)
from ._deep import run_deep

Code = Union[int, str, Rope]

SEP = ","  # 2**17
S_CH, T_CH = chunk_char(18), chunk_char(19)
_VAR = re.compile("\\(0′+\\)")
_NUM = re.compile("0′*")
_DEEP = 4000
_CACHE_LEN = 4000


def word(x: Code, guard: int | None = DEFAULT_MAX_BITS) -> str:
    """Chunk word of a code; a str is taken to be a word already."""
    if isinstance(x, str):
        return x
    if isinstance(x, Rope):
        return x.text(guard)
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise ValueError(f"not a code: {x!r}")
    if guard is not None and x.bit_length() > guard:
        raise GuardError("code bit length", x.bit_length(), guard)
    return chunks(x)


def number(x: Code) -> int:
    if isinstance(x, int):
        return x
    return from_chunks(word(x))


def _lit(*exps: int) -> str:
    return "".join(chunk_char(k) for k in exps)


# --- entries 1-4: arithmetic ----------------------------------------------------

def _div(x: int, y: int) -> bool:
    return y == 0 or (x != 0 and y % x == 0)


def _power_of_2(x: int) -> bool:
    return x & (x - 1) == 0


def _least_pow2_value(x: int) -> int:
    return 2 if x == 0 else 1 << x.bit_length()


def _least_pow2(y: int, x: int) -> bool:
    return y == _least_pow2_value(x)


def _star_rel(z: int, x: int, y: int) -> bool:
    # the entry-4 relation: 2^l(0) reads as 2 here and w must not exceed z
    w = _least_pow2_value(y)
    return z == w * x + y and w <= z


# --- entries 5-13: words --------------------------------------------------------

def _begin(x: str, y: str) -> bool:
    return x == y or (x != "" and y.startswith(x))


def _end(x: str, y: str) -> bool:
    return x == y or (x != "" and y.endswith(x))


def _part(x: str, y: str) -> bool:
    return x == y or (x != "" and x in y)


def _succ(x: str) -> bool:
    return x != "" and x.count("′") == len(x)


def _var(x: str) -> bool:
    return _VAR.fullmatch(x) is not None


def _num(x: str) -> bool:
    return _NUM.fullmatch(x) is not None


def _seq(x: str) -> bool:
    return SEP in x


def _element_of(x: str, y: str) -> bool:
    if SEP not in y or SEP in x:
        return False
    return y.startswith(x + SEP) or y.endswith(SEP + x) or (SEP + x + SEP) in y


def _precedes(x: str, y: str, z: str) -> bool:
    """Some occurrence of x is followed, later, by one of y."""
    i = z.find(x)
    return i >= 0 and z.find(y, i + len(x)) >= 0


def _before(x: str, y: str, z: str) -> bool:
    return _element_of(x, z) and _element_of(y, z) and _precedes(x, y, z)


# --- entries 14, 15, 17: the code grammar -------------------------------------------

_LEQ_HEAD = "¬(∀(0′)(¬("
_LEQ_MID = "+(0′)="


class _Spans:
    """End positions of terms, atoms and formulas starting at each index.

    Formula ends are kept only where a formula can actually stop: at the end
    of the word or before ")".
    """

    def __init__(self, w: str):
        self.w, self.n = w, len(w)
        self._t: dict[int, frozenset] = {}
        self._u: dict[int, frozenset] = {}
        self._f: dict[int, frozenset] = {}

    def at(self, i: int) -> str:
        return self.w[i] if i < self.n else ""

    def _primes(self, i: int) -> int:
        j = i
        while j < self.n and self.w[j] == "′":
            j += 1
        return j

    def term(self, i: int) -> frozenset:
        got = self._t.get(i)
        if got is not None:
            return got
        out = set()
        c = self.at(i)
        if c == "0":
            out.add(self._primes(i + 1))
        elif c == "(":
            if self.at(i + 1) == "0":
                j = self._primes(i + 2)
                if j > i + 2 and self.at(j) == ")":
                    out.add(j + 1)
            for j in self.term(i + 1):
                if self.at(j) != ")":
                    continue
                op = self.at(j + 1)
                if op == "′":
                    out.add(j + 2)
                elif op in ("+", "·") and self.at(j + 2) == "(":
                    out.update(k + 1 for k in self.term(j + 3) if self.at(k) == ")")
        got = self._t[i] = frozenset(out)
        return got

    def atom(self, i: int) -> set:
        out = set()
        for j in self.term(i):
            if self.at(j) == "=":
                out.update(self.term(j + 1))
        if self.w.startswith(_LEQ_HEAD, i):
            for j in self.term(i + len(_LEQ_HEAD)):
                if self.w.startswith(_LEQ_MID, j):
                    out.update(k + 3 for k in self.term(j + len(_LEQ_MID))
                               if self.w.startswith(")))", k))
        return out

    def unit(self, i: int) -> frozenset:
        got = self._u.get(i)
        if got is not None:
            return got
        out = self.atom(i)
        c = self.at(i)
        if c == "¬" and self.at(i + 1) == "(":
            out.update(j + 1 for j in self.form(i + 2) if self.at(j) == ")")
        elif c == "∀":
            m = _VAR.match(self.w, i + 1)
            if m and self.at(m.end()) == "(":
                out.update(j + 1 for j in self.form(m.end() + 1) if self.at(j) == ")")
        got = self._u[i] = frozenset(out)
        return got

    def form(self, i: int) -> frozenset:
        got = self._f.get(i)
        if got is not None:
            return got
        out = set()
        for e in self.unit(i):
            c = self.at(e)
            if c == "⇒":
                out.update(self.form(e + 1))
            elif c in ("", ")"):
                out.add(e)
        got = self._f[i] = frozenset(out)
        return got


def _decide(kind: str, w: str) -> bool:
    if not w:
        return False
    sp = _Spans(w)
    fn = {"term": sp.term, "atom": sp.atom, "form": sp.form}[kind]
    if len(w) > _DEEP:
        return run_deep(lambda: len(w) in fn(0))
    return len(w) in fn(0)


@lru_cache(maxsize=1 << 16)
def _decide_cached(kind: str, w: str) -> bool:
    return _decide(kind, w)


def _is(kind: str, w: str) -> bool:
    return _decide_cached(kind, w) if len(w) < _CACHE_LEN else _decide(kind, w)


def is_term_word(w: str) -> bool:
    return _is("term", w)


def is_atom_word(w: str) -> bool:
    return _is("atom", w)


def is_form_word(w: str) -> bool:
    return _is("form", w)


def _term_parts(z: str) -> Optional[list[str]]:
    if _var(z) or _num(z):
        return []
    if not z.startswith("("):
        return None
    if z.endswith(")′") and is_term_word(z[1:-2]):
        return [z[1:-2]]
    if z.endswith(")"):
        for m in re.finditer("\\)[+·]\\(", z):
            v, w = z[1:m.start()], z[m.end():-1]
            if is_term_word(v) and is_term_word(w):
                return [v, w]
    return None


def _form_parts(z: str) -> Optional[list[str]]:
    if is_atom_word(z):
        return []
    if z.startswith("¬(") and z.endswith(")") and is_form_word(z[2:-1]):
        return [z[2:-1]]
    if z.startswith("∀"):
        m = _VAR.match(z, 1)
        if m and z[m.end():m.end() + 1] == "(" and z.endswith(")"):
            body = z[m.end() + 1:-1]
            if is_form_word(body):
                return [body]
    for i, c in enumerate(z):
        if c == "⇒" and is_form_word(z[:i]) and is_form_word(z[i + 1:]):
            return [z[:i], z[i + 1:]]
    return None


def construction(kind: str, w: str) -> Optional[list[str]]:
    """Elements of a construction sequence ending in w (post-order), or None."""
    parts = _term_parts if kind == "Term" else _form_parts
    order: list[str] = []
    seen: set[str] = set()

    def visit(z: str) -> bool:
        if z in seen:
            return True
        ps = parts(z)
        if ps is None:
            return False
        for p in ps:
            if not visit(p):
                return False
        seen.add(z)
        order.append(z)
        return True

    ok = run_deep(visit, w) if len(w) > _DEEP else visit(w)
    if not ok:
        return None
    if len(order) == 1:
        order.append(order[0])  # Seq needs a separator
    return order


def _matrix_term(z: str, y: str) -> bool:
    if _var(z) or _num(z):
        return True
    if not z.startswith("("):
        return False
    if z.endswith(")′") and _before(z[1:-2], z, y):
        return True
    if z.endswith(")"):
        for m in re.finditer("\\)[+·]\\(", z):
            v, w = z[1:m.start()], z[m.end():-1]
            if _before(v, z, y) and _before(w, z, y):
                return True
    return False


def _matrix_form(z: str, y: str) -> bool:
    if is_atom_word(z):
        return True
    if z.startswith("¬(") and z.endswith(")") and _before(z[2:-1], z, y):
        return True
    if z.startswith("∀") and z.endswith(")"):
        m = _VAR.match(z, 1)
        if m and z[m.end():m.end() + 1] == "(" and _before(z[m.end() + 1:-1], z, y):
            return True
    for i, c in enumerate(z):
        if c == "⇒" and _before(z[:i], z, y) and _before(z[i + 1:], z, y):
            return True
    return False


def check_construction(kind: str, y: Code, x: Code | None = None) -> bool:
    """Entry 14/17 matrix on a candidate sequence y (and x ∈ y when given)."""
    Y = word(y)
    if not _seq(Y):
        return False
    if x is not None and not _element_of(word(x), Y):
        return False
    matrix = _matrix_term if kind == "Term" else _matrix_form
    return all(matrix(z, Y) for z in set(Y.split(SEP)))


def _atom(x: str) -> bool:
    return is_atom_word(x)


def neq(x: Code, y: Code) -> int:
    return encode(_neq_w(word(x), word(y)))


def leq(x: Code, y: Code) -> int:
    return encode(_leq_w(word(x), word(y)))


def _neq_w(x: str, y: str) -> str:
    return _lit(14, 2) + x + _lit(10) + y + _lit(3)


def _leq_w(x: str, y: str) -> str:
    shifted = x + _lit(8, 2, 1, 0, 3)
    return _lit(14, 2, 15, 2, 1, 0, 3, 2) + _neq_w(shifted, y) + _lit(3, 3)


# --- entries 16, 19, 21 ----------------------------------------------------------

def _gen(x: str, y: str) -> bool:
    if not y.startswith("∀"):
        return False
    m = _VAR.match(y, 1)
    return m is not None and y[m.end():] == "(" + x + ")"


def _vars_in(x: str) -> set[str]:
    return {m.group() for m in _VAR.finditer(x)}


def _free(x: str, y: str) -> bool:
    if not is_term_word(x):
        return False
    # z < x keeps x itself out, so a bare variable passes vacuously
    return all("∀" + v not in y for v in _vars_in(x) if v != x)


def _seq_pair(x: str, y: str, u: str) -> bool:
    return (SEP not in x and SEP not in y and x != "" and y != ""
            and _part(x + SEP + y, u))


# --- templates for entries 18, 20, 24, 26 ----------------------------------------
# Written as the ★ products: an int k is the symbol 2**k, a letter a part.

_PROP = {
    1: ("a", 11, 2, "b", 11, "a", 3),
    2: (2, "a", 11, "b", 3, 11, 2, 2, "a", 11, 2, "b", 11, "c", 3, 3, 11, 2, "a", 11, "c", 3, 3),
    3: ("a", 11, 2, 2, "a", 11, "b", 3, 11, "b", 3),
    4: ("a", 11, 2, "b", 11, "a", 12, "b", 3),
    5: ("a", 12, "b", 11, "a"),
    6: ("a", 12, "b", 11, "b"),
    7: ("a", 11, "a", 13, "b"),
    8: ("b", 11, "a", 13, "b"),
    9: (2, "a", 11, "c", 3, 11, 2, 2, "b", 11, "c", 3, 11, 2, "a", 13, "b", 11, "c", 3, 3),
    10: (2, "a", 11, "b", 3, 11, 2, 2, "a", 11, 14, "b", 3, 11, 14, "a", 3),
    11: (14, 14, "a", 11, "a"),
}
_PRED1 = (2, "b", 11, "a", 3, 11, 2, "b", 11, 2, 15, "c", "a", 3, 3)
_NAT = {
    1: (2, "a", 0, 10, "b", 0, 3, 11, 2, "a", 10, "b", 3),
    2: (14, 2, "a", 0, 10, 1, 3),
    3: ("a", 10, "b", 11, 2, "a", 10, "c", 11, "b", 10, "c", 3),
    4: ("a", 10, "b", 11, "a", 0, 10, "b", 0),
    5: ("a", 8, 1, 10, "a"),
    6: ("a", 8, "b", 0, 10, 2, "a", 8, "b", 3, 0),
    7: ("a", 9, 1, 10, 1),
    8: ("a", 9, "b", 0, 10, "a", 9, "b", 8, "a"),
}


def _sub_tpl(x, y) -> tuple:
    return (15, x, 2, 2, x, 10, *y, 3, 11, 2, "a", 3, 3)


_MI = (2, *_sub_tpl("b", (1,)), 12, 15, "c", 2, *_sub_tpl("b", ("c",)), 11,
       *_sub_tpl("b", ("c", 0)), 3, 3, 11, 15, "c", *_sub_tpl("b", ("c",)))

_KIND_CHECK: dict[str, Callable[[str], bool]] = {"F": is_form_word, "T": is_term_word, "V": _var}


@dataclass(frozen=True)
class _Template:
    tokens: tuple  # str literal or (name,)
    kinds: dict

    @staticmethod
    def of(spec: tuple, kinds: dict) -> "_Template":
        toks: list = []
        for item in spec:
            if isinstance(item, int):
                if toks and isinstance(toks[-1], str):
                    toks[-1] += chunk_char(item)
                else:
                    toks.append(chunk_char(item))
            else:
                toks.append((item,))
        return _Template(tuple(toks), kinds)

    def matches(self, x: str) -> Iterator[dict]:
        """Bindings that spell x; part kinds are checked at the end."""
        toks, n = self.tokens, len(x)

        def go(i: int, pos: int, bnd: dict) -> Iterator[dict]:
            if i == len(toks):
                if pos == n:
                    yield bnd
                return
            tok = toks[i]
            if isinstance(tok, str):
                if x.startswith(tok, pos):
                    yield from go(i + 1, pos + len(tok), bnd)
                return
            name = tok[0]
            if name in bnd:
                v = bnd[name]
                if x.startswith(v, pos):
                    yield from go(i + 1, pos + len(v), bnd)
                return
            if self.kinds[name] == "V":
                m = _VAR.match(x, pos)
                if m:
                    yield from go(i + 1, m.end(), {**bnd, name: m.group()})
                return
            nxt = toks[i + 1] if i + 1 < len(toks) else None
            if nxt is None:
                ends: Iterator[int] = iter((n,))
            elif isinstance(nxt, str):
                ends = _occurrences(x, nxt, pos + 1)
            else:
                ends = iter(range(pos + 1, n))
            for e in ends:
                yield from go(i + 1, e, {**bnd, name: x[pos:e]})

        for bnd in go(0, 0, {}):
            if all(_KIND_CHECK[self.kinds[k]](v) for k, v in bnd.items()):
                yield bnd


def _occurrences(x: str, sub: str, start: int) -> Iterator[int]:
    i = x.find(sub, start)
    while i >= 0:
        yield i
        i = x.find(sub, i + 1)


_FFF = {"a": "F", "b": "F", "c": "F"}
PROP_TEMPLATES = {k: _Template.of(v, _FFF) for k, v in _PROP.items()}
PRED1_TEMPLATE = _Template.of(_PRED1, {"a": "F", "b": "F", "c": "V"})
NAT_TEMPLATES = {k: _Template.of(v, {"a": "T", "b": "T", "c": "T"}) for k, v in _NAT.items()}
MI_TEMPLATE = _Template.of(_MI, {"a": "F", "b": "V", "c": "V"})


def _prop(k: int, x: str) -> bool:
    return any(True for _ in PROP_TEMPLATES[k].matches(x))


def _pro(x: str) -> bool:
    return any(_prop(k, x) for k in PROP_TEMPLATES)


def _pred1(x: str) -> bool:
    return any(not _part(b["c"], b["b"]) for b in PRED1_TEMPLATE.matches(x))


def _nat_k(k: int, x: str) -> bool:
    return any(True for _ in NAT_TEMPLATES[k].matches(x))


def _nat(x: str) -> bool:
    return any(_nat_k(k, x) for k in NAT_TEMPLATES)


def _mi(x: str) -> bool:
    return any(True for _ in MI_TEMPLATE.matches(x))


# --- entries 22, 23: substitution of a free term -----------------------------------

def _alt(x: str, y: str, u: str, t: str) -> bool:
    """Structural reading: x is y with every occurrence of u replaced by t."""
    if not (is_form_word(x) and is_form_word(y) and _var(u) and is_term_word(t)):
        return False
    if not (_free(u, y) and _free(t, y) and _part(u, y)) or _part(u, x):
        return False
    return y.replace(u, t) == x


def _pred2(x: str) -> bool:
    if not x.startswith("∀"):
        return False
    m = _VAR.match(x, 1)
    if not m:
        return False
    b = m.group()
    for p in _occurrences(x, "⇒", m.end() + 1):
        a, c = x[m.end():p], x[p + 1:]
        t = _alt_term(c, a, b)
        if t is not None and _alt(c, a, b, t):
            return True
    return False


def _alt_term(x: str, y: str, u: str) -> Optional[str]:
    """The only t for which y with u replaced by t can equal x."""
    i, k = y.find(u), y.count(u)
    if i < 0:
        return None
    extra, rem = divmod(len(x) - len(y), k)
    size = len(u) + extra
    if rem or size < 1 or x[:i] != y[:i]:
        return None
    return x[i:i + size]


def alt_counterexample(x: Code, y: Code) -> tuple[int, int]:
    """A pair (a, b) that refutes the literal entry-22 matrix for every w
    containing "E_y,E_x": a is the last symbol of y, b the first two of x.

    Seq(a, b, w) holds, a ≠ b, and a is too short to contain a variable, so
    neither disjunct of the matrix can hold.
    """
    X, Y = word(x), word(y)
    if len(X) < 2 or not Y or SEP in X + Y:
        raise ValueError("needs comma-free y and x with at least two symbols")
    return from_chunks(Y[-1]), from_chunks(X[:2])


# --- entries 25, 27, 28 ------------------------------------------------------------

def _sub_w(a: str, x: str, y: str) -> str:
    return _lit(15) + x + _lit(2, 2) + x + _lit(10) + y + _lit(3, 11, 2) + a + _lit(3, 3)


def sub_code(a: Code, x: Code, y: Code) -> int:
    """2¹⁵★x★2²★2²★x★2¹⁰★y★2³★2¹¹★2²★a★2³★2³ on numbers."""
    a, x, y = number(a), number(x), number(y)
    return star(1 << 15, x, 4, 4, x, 1 << 10, y, 8, 1 << 11, 4, a, 8, 8)


def _axiom(x: str) -> bool:
    return _pro(x) or _pred1(x) or _pred2(x) or _nat(x) or _mi(x)


def _var_code_le(v: str, bound: str) -> bool:
    # compare bit lengths first: "(" is 3 bits, "0" 2, ")" 4, each prime 1
    bv = len(v) + 6
    bb = sum(chunk_exp(c) + 1 for c in bound)
    if bv != bb:
        return bv < bb
    return from_chunks(v) <= from_chunks(bound)


def _proof_step_ok(y: str, x: str, elems: set[str]) -> bool:
    if _axiom(y):
        return True
    tail = "⇒" + y
    for w in elems:
        if w.endswith(tail):
            v = w[:-len(tail)]
            if v in elems and _precedes(v, y, x) and _precedes(w, y, x):
                return True
    for p in _occurrences(y, "⇒", 0):
        b, c = y[:p], y[p + 1:]
        if not c.startswith("∀"):
            continue
        m = _VAR.match(c, 1)
        if not (m and c[m.end():m.end() + 1] == "(" and c.endswith(")")):
            continue
        a = c[m.end() + 1:-1]
        v = b + "⇒" + a
        if v not in elems or not _precedes(v, y, x):
            continue
        if all(not _var_code_le(z, a) for z in _vars_in(b)):
            return True
    return False


def _proof(x: str) -> bool:
    if not _seq(x):
        return False
    elems = set(x.split(SEP))
    return all(_proof_step_ok(y, x, elems) for y in elems)


# --- entries 31, 32 -----------------------------------------------------------------

def _seq_marks(x: str, y: str, w: str) -> bool:
    if any(m in v for m in (S_CH, T_CH) for v in (x, y)):
        return False
    return _part(S_CH + x + T_CH + y + S_CH, w)


def pow2_witness(x: int) -> int:
    """s 0 t 1 s 1 t 2 s … x t 2^x s, with numbers written as their chunk words."""
    return encode_word(_pow2_witness_w(x))


def _pow2_witness_w(x: int) -> str:
    parts = [S_CH]
    for n in range(x + 1):
        parts += [chunks(n), T_CH, chunks(1 << n), S_CH]
    return "".join(parts)


def encode_word(w: str) -> int:
    return from_chunks(w)


def seq_pairs(w: Code) -> list[tuple[int, int]]:
    """All (a, b) with SEQ(a, b, w): consecutive s…t…s marker triples."""
    W = word(w)
    marks = [(i, c) for i, c in enumerate(W) if c in (S_CH, T_CH)]
    out = []
    for (i, c1), (j, c2), (k, c3) in zip(marks, marks[1:], marks[2:]):
        if (c1, c2, c3) == (S_CH, T_CH, S_CH):
            out.append((from_chunks(W[i + 1:j]), from_chunks(W[j + 1:k])))
    return out


def _pow2_matrix(x: int, y: int, w: Code) -> bool:
    W = word(w)
    if not _seq_marks(chunks(x), chunks(y), W):
        return False
    pairs = seq_pairs(W)
    have = set(pairs)
    return all((a == 0 and b == 1) or (a >= 1 and b % 2 == 0 and (a - 1, b // 2) in have)
               for a, b in pairs)


# --- literal bounded loops (small inputs only) -------------------------------------

@lru_cache(maxsize=None)
def l_div(x: int, y: int) -> bool:
    return any(x * z == y for z in range(y + 1))


@lru_cache(maxsize=None)
def l_power_of_2(x: int) -> bool:
    return all(not (l_div(z, x) and z != 1) or l_div(2, z) for z in range(x + 1))


@lru_cache(maxsize=None)
def l_least_pow2(y: int, x: int) -> bool:
    def ok(v):
        return l_power_of_2(v) and v > x and v > 1
    return ok(y) and not any(ok(z) for z in range(y))


def l_star_rel(z: int, x: int, y: int) -> bool:
    return any(z == w * x + y and l_least_pow2(w, y) for w in range(z + 1))


@lru_cache(maxsize=None)
def l_begin(x: int, y: int) -> bool:
    return x == y or (x != 0 and any(star(x, z) == y for z in range(y + 1)))


@lru_cache(maxsize=None)
def l_end(x: int, y: int) -> bool:
    return x == y or (x != 0 and any(star(z, x) == y for z in range(y + 1)))


@lru_cache(maxsize=None)
def l_part(x: int, y: int) -> bool:
    return x == y or (x != 0 and any(l_end(z, y) and l_begin(x, z) for z in range(y + 1)))


@lru_cache(maxsize=None)
def l_succ(x: int) -> bool:
    return x != 0 and all(not l_part(y, x) or l_part(1, y) for y in range(x + 1))


def l_var(x: int) -> bool:
    return any(x == star(4, 2, y, 8) and l_succ(y) for y in range(x + 1))


def l_num(x: int) -> bool:
    return x == 2 or any(x == star(2, y) and l_succ(y) for y in range(x + 1))


def l_seq(x: int) -> bool:
    return l_part(1 << 17, x)


def l_element_of(x: int, y: int) -> bool:
    c = 1 << 17
    return (l_seq(y) and not l_part(c, x)
            and (l_begin(star(x, c), y) or l_end(star(c, x), y) or l_part(star(c, x, c), y)))


def l_before(x: int, y: int, z: int) -> bool:
    return (l_element_of(x, z) and l_element_of(y, z)
            and any(l_part(star(x, w, y), z) for w in range(z + 1)))


# --- registry --------------------------------------------------------------------

@dataclass(frozen=True)
class Predicate:
    name: str
    item: str
    arity: int
    kind: str  # bounded | searched | function | meta
    fast: Optional[Callable] = None
    args: str = "w"  # w: chunk words, i: integers
    literal: Optional[Callable] = None


def _p(name, item, arity, kind, fast=None, args="w", literal=None) -> Predicate:
    return Predicate(name, str(item), arity, kind, fast, args, literal)


_ENTRIES = [
    _p("Div", 1, 2, "bounded", _div, "i", l_div),
    _p("PowerOf2", 2, 1, "bounded", _power_of_2, "i", l_power_of_2),
    _p("LeastPow2", 3, 2, "bounded", _least_pow2, "i", l_least_pow2),
    _p("StarRel", 4, 3, "bounded", _star_rel, "i", l_star_rel),
    _p("Begin", 5, 2, "bounded", _begin, literal=l_begin),
    _p("End", 6, 2, "bounded", _end, literal=l_end),
    _p("Part", 7, 2, "bounded", _part, literal=l_part),
    _p("Succ", 8, 1, "bounded", _succ, literal=l_succ),
    _p("Var", 9, 1, "bounded", _var, literal=l_var),
    _p("Num", 10, 1, "bounded", _num, literal=l_num),
    _p("Seq", 11, 1, "bounded", _seq, literal=l_seq),
    _p("ElementOf", 12, 2, "bounded", _element_of, literal=l_element_of),
    _p("Before", 13, 3, "bounded", _before, literal=l_before),
    _p("Term", 14, 1, "searched"),
    _p("Atom", 15, 1, "bounded", _atom),
    _p("neq", "15.neq", 2, "function", neq),
    _p("leq", "15.leq", 2, "function", leq),
    _p("Gen", 16, 2, "bounded", _gen),
    _p("Form", 17, 1, "searched"),
    _p("Pro", 18, 1, "bounded", _pro),
    *[_p(f"Prop{k}", f"18.{k}", 1, "bounded", (lambda x, k=k: _prop(k, x))) for k in range(1, 12)],
    _p("Free", 19, 2, "bounded", _free),
    _p("Pred1", 20, 1, "bounded", _pred1),
    _p("SeqPair", 21, 3, "bounded", _seq_pair),
    _p("Alt", 22, 4, "searched"),
    _p("Pred2", 23, 1, "bounded", _pred2),
    _p("Nat", 24, 1, "bounded", _nat),
    *[_p(f"Nat{k}", f"24.{k}", 1, "bounded", (lambda x, k=k: _nat_k(k, x))) for k in range(1, 9)],
    _p("SubCode", 25, 3, "function", sub_code),
    _p("MI", 26, 1, "bounded", _mi),
    _p("Axiom", 27, 1, "bounded", _axiom),
    _p("Proof", 28, 1, "bounded", _proof),
    _p("Pr", 29, 1, "searched"),
    _p("Re", 30, 1, "searched"),
    _p("SEQ", 31, 3, "bounded", _seq_marks),
    _p("Pow2Rel", 32, 2, "searched"),
    _p("Gpred", 33, 2, "meta"),
    _p("Hpred", 34, 2, "meta"),
]
REGISTRY: dict[str, Predicate] = {p.name: p for p in _ENTRIES}
ITEMS: dict[int, str] = {int(p.item): p.name for p in _ENTRIES if p.item.isdigit()}


def lookup(name: str) -> Predicate:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown predicate {name!r}") from None


def _check_arity(p: Predicate, args: Sequence) -> None:
    if len(args) != p.arity:
        raise ValueError(f"{p.name} takes {p.arity} argument(s), got {len(args)}")


def eval_bounded(name: str, args: Sequence[Code], mode: str = "fast") -> bool:
    """Truth value of a predicate whose quantifiers are all bounded."""
    p = lookup(name)
    _check_arity(p, args)
    if p.kind == "searched":
        raise ValueError(f"{name} has an unbounded search; use eval_searched")
    if p.kind == "meta":
        raise ValueError(f"{name} is evaluated by eval_G / eval_H")
    if p.kind == "function":
        raise ValueError(f"{name} is a function, not a predicate")
    if mode == "literal":
        if p.literal is None:
            raise ValueError(f"no literal evaluator for {name}")
        return bool(p.literal(*(number(a) for a in args)))
    if mode != "fast":
        raise ValueError(f"unknown mode {mode!r}")
    conv = number if p.args == "i" else word
    return bool(p.fast(*(conv(a) for a in args)))


# --- searched ------------------------------------------------------------------

@dataclass(frozen=True)
class SearchBudget:
    element_bound: int = 10_000
    fuel: int = 1_000_000

    def __post_init__(self):
        if self.element_bound <= 0 or self.fuel <= 0:
            raise ValueError("budget must be positive")


@dataclass(frozen=True)
class SearchResult:
    value: Optional[bool]  # None: unknown within budget
    witness: Optional[int] = None
    note: str = ""


CERTIFY_LIMIT = 20_000


def eval_searched(name: str, args: Sequence[Code], budget: SearchBudget | None = None,
                  candidates: Sequence[Code] = ()) -> SearchResult:
    budget = budget or SearchBudget()
    p = lookup(name)
    _check_arity(p, args)
    if name in ("Term", "Form"):
        return _search_construction(name, word(args[0]))
    if name == "Alt":
        x, y, u, t = (word(a) for a in args)
        return SearchResult(_alt(x, y, u, t), note="structural substitution")
    if name == "Pow2Rel":
        x, y = (number(a) for a in args)
        if x > 4096:
            raise GuardError("Pow2Rel exponent", x, 4096)
        w = _pow2_witness_w(x)
        ok = _pow2_matrix(x, y, w)
        note = "" if ok else "no witness: every pair (a, b) of a witness has b = 2^a and b ≠ 2^18"
        return SearchResult(ok, encode_word(w) if ok else None, note)
    if name in ("Pr", "Re"):
        return _search_proof(name, word(args[0]), budget, candidates)
    raise ValueError(f"{name} is not searched; use eval_bounded")


def _search_construction(kind: str, w: str) -> SearchResult:
    decide = is_form_word if kind == "Form" else is_term_word
    if not decide(w):
        return SearchResult(False)
    if len(w) > CERTIFY_LIMIT:
        return SearchResult(True, note="decided by the grammar; witness not built")
    elems = construction(kind, w)
    y = SEP.join(elems)
    if not check_construction(kind, y, w):
        raise AssertionError(f"construction witness failed the matrix for {w!r}")
    return SearchResult(True, from_chunks(y))


def _search_proof(name: str, x: str, budget: SearchBudget, candidates) -> SearchResult:
    target = x if name == "Pr" else _lit(14, 2) + x + _lit(3)
    pool: list[str] = [word(c) for c in candidates]
    if _axiom(target):
        pool.insert(0, target + SEP + target)
    fuel = budget.fuel
    for y in pool:
        fuel -= 1
        if _element_of(target, y) and _proof(y):
            return SearchResult(True, from_chunks(y))
    for n in range(budget.element_bound):
        if fuel <= 0:
            break
        fuel -= 1
        y = chunks(n)
        if _element_of(target, y) and _proof(y):
            return SearchResult(True, n)
    return SearchResult(None, note="no proof found within budget")


# --- entries 33, 34 ---------------------------------------------------

def sequence_code(steps: Sequence, as_rope: bool = False) -> Union[int, Rope]:
    """Code of a comma-separated formula sequence; one step is written twice."""
    from .syntax import to_rope
    ropes = [to_rope(s) for s in steps]
    if len(ropes) == 1:
        ropes.append(ropes[0])
    out = Rope.of()
    for i, r in enumerate(ropes):
        out = out + ("," if i else "") + r
    return out if as_rope else encode(out)


def _formula_of(a: Code):
    from .syntax import ParseError, is_term, parse
    try:
        src = a if isinstance(a, Rope) else decode(a) if isinstance(a, int) else a
        f = parse(src)
    except (ParseError, DecodeError, ValueError):
        return None
    return None if is_term(f) else f


def _steps_of(b: Code):
    if isinstance(b, Rope):
        pieces = b.split(SEP)
    else:
        try:
            text = decode(b) if isinstance(b, int) else b
        except DecodeError:
            return None
        if not text:
            return None
        pieces = text.split(SEP)
    steps = []
    for piece in pieces:
        f = _formula_of(piece)
        if f is None:
            return None
        steps.append(f)
    return steps


def _diagonal_member(a: Code, b: Code, negate: bool, which: str) -> bool:
    from .calculus import check_proof
    from .syntax import Not, abstract, free_vars, subst_convention
    if which not in ("member", "last"):
        raise ValueError("which is 'member' or 'last'")
    f = _formula_of(a)
    if f is None:
        return False
    fv = free_vars(f)
    if len(fv) != 1:
        return False
    steps = _steps_of(b)
    if not steps or not check_proof(steps).ok:
        return False
    target = abstract(subst_convention(f, number(a) if not isinstance(a, Rope) else encode(a),
                                       next(iter(fv))))
    if negate:
        target = Not(target)
    pool = steps if which == "member" else steps[-1:]
    return any(abstract(s) == target for s in pool)


def eval_G(a: Code, b: Code, which: str = "member") -> bool:
    """b proves the diagonal instance of the one-variable formula a."""
    return _diagonal_member(a, b, False, which)


def eval_H(a: Code, b: Code, which: str = "member") -> bool:
    """b proves the negation of the diagonal instance of a."""
    return _diagonal_member(a, b, True, which)


def g_literal(a: Code, b: Code, pow2: str = "literal", guard: int = 1 << 20) -> bool:
    """The entry-33 matrix read literally, with Free and membership.

    ``pow2="literal"`` finds w through Pow2Rel, which has no witness once
    a ≥ 18, so the matrix is false on every formula code.  ``"arithmetic"``
    takes w = 2^a - 1 directly.
    """
    A, n = word(a), number(a)
    if pow2 == "literal":
        if n > 17 or not eval_searched("Pow2Rel", [n, 1 << n]).value:
            return False
    elif pow2 != "arithmetic":
        raise ValueError("pow2 is 'literal' or 'arithmetic'")
    if n > guard:
        raise GuardError("numeral length", n, guard)
    B = word(b)
    if not _proof(B):
        return False
    numeral = "0" + "′" * n
    for x in _vars_in(A):
        if _free(x, A) and _element_of(_sub_w(A, x, numeral), B):
            return True
    return False


def reflexive_diagonal_proof(a: int, x: int) -> list:
    """Eleven steps proving ∀x((x=ā)⇒(x=x)), the diagonal of x=x at a.

    No diagonal is itself an axiom (they all start with ∀), so this is the
    shortest end-to-end positive case for G.
    """
    from .syntax import Eq, ForAll, Imp, Not, Num, Sum, Var, Zero, canonicalize, subst_convention
    v = Var(x)
    refl = Eq(v, v)
    e1 = Eq(Sum(v, Zero()), v)
    p = Eq(v, Num(a))
    inner = Imp(p, refl)
    c = Not(Eq(Num(1), Zero()))
    steps = [
        e1,                                     # Nat5
        Imp(e1, Imp(e1, refl)),                 # Nat3
        Imp(e1, refl),                          # MP
        refl,                                   # MP
        Imp(refl, inner),                       # Prop1
        inner,                                  # MP
        Imp(inner, Imp(c, inner)),              # Prop1
        Imp(c, inner),                          # MP
        Imp(c, ForAll(x, inner)),               # Gen
        c,                                      # Nat2
    ]
    return [canonicalize(s) for s in steps] + [subst_convention(refl, a, x)]
