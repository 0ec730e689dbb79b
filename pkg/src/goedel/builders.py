"""Object-language formulas for the arithmetized predicates.

Each predicate is a named template in a `DefDag`, written in a small DSL
(bounded quantifiers, ∧/∨/∃, ★-chains, references to earlier templates).
Templates are lowered once to a core over {=, ¬, ⇒, ∀, reference}; the full
expansion of a name replaces every reference by the referenced body.

Expansions grow exponentially with depth, so sizes are never obtained by
expanding.  A template's symbol count and code bit length are affine in

* ``M``, the highest variable index in scope where the template is used
  (its bound variables are numbered ``M+1, M+2, ...`` by binder depth), and
* the sizes of the argument terms substituted for its parameters,

so one affine form per template, composed along references, gives exact
sizes for every name.  Bound variables always exceed every variable free in
the arguments, which rules out capture.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from . import syntax as syn
from ._deep import run_deep
from .numbering import GuardError, star
from .syntax import EXPANSION_GUARD

# --- DSL ------------------------------------------------------------------------

TermLike = Union[str, int, "S", "Add", "Mul", "StarT", "Fn", "QBar", "Numeral", "Named"]


@dataclass(frozen=True)
class S:
    t: TermLike


@dataclass(frozen=True)
class Add:
    left: TermLike
    right: TermLike


@dataclass(frozen=True)
class Mul:
    left: TermLike
    right: TermLike


@dataclass(frozen=True)
class Numeral:
    n: int


@dataclass(frozen=True)
class QBar:
    """The numeral of the diagonal number, left symbolic until evaluation."""


@dataclass(frozen=True)
class Named:
    """The numeral of a number known only by name (too large to ever write out)."""
    label: str


@dataclass(frozen=True)
class StarT:
    """The term p1★…★pn; used inside an atom it is lifted to ∃u(u = p1★…★pn ∧ …)."""
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", parts)


@dataclass(frozen=True)
class Fn:
    """Function term given by a relation template whose first parameter is the value."""
    name: str
    args: tuple

    def __init__(self, name, *args):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", args)


@dataclass(frozen=True)
class Eq:
    left: TermLike
    right: TermLike


@dataclass(frozen=True)
class Neq:
    left: TermLike
    right: TermLike


@dataclass(frozen=True)
class Le:
    left: TermLike
    right: TermLike


@dataclass(frozen=True)
class Lt:
    left: TermLike
    right: TermLike


def Gt(a: TermLike, b: TermLike) -> Lt:
    return Lt(b, a)


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class Imp:
    left: object
    right: object


class _Nary:
    def __init__(self, *fs):
        if len(fs) < 2:
            raise ValueError(f"{type(self).__name__} needs two or more operands")
        self.fs = fs


class And(_Nary):
    pass


class Or(_Nary):
    pass


@dataclass(frozen=True)
class All:
    var: str
    body: object


@dataclass(frozen=True)
class Ex:
    var: str
    body: object


@dataclass(frozen=True)
class AllAt:
    """∀ over a fixed variable index (used to place the diagonal's ∀a)."""
    var: str
    index: int
    body: object


@dataclass(frozen=True)
class BAll:
    var: str
    bound: TermLike
    body: object


@dataclass(frozen=True)
class BEx:
    var: str
    bound: TermLike
    body: object


@dataclass(frozen=True)
class BAllLt:
    var: str
    bound: TermLike
    body: object


@dataclass(frozen=True)
class BExLt:
    var: str
    bound: TermLike
    body: object


@dataclass(frozen=True)
class R:
    name: str
    args: tuple

    def __init__(self, name, *args):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", args)


@dataclass(frozen=True)
class Star:
    """z = p1★…★pn, as a left fold of StarRel with ∃-bound intermediates."""
    z: TermLike
    parts: tuple

    def __init__(self, z, *parts):
        if not parts:
            raise ValueError("Star needs at least one part")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "parts", parts)


def const_term(n: int) -> syn.Node:
    """A short closed term with value n built from 0, ′ and ·."""
    if n < 0:
        raise ValueError("constants are natural numbers")
    return _mat_term(_const_core(n), 0, (), None)


def _const_core(n: int) -> tuple:
    if n == 0:
        return ("0",)
    if n <= 2:
        return ("s", _const_core(n - 1))
    if n % 2 == 0:
        return ("*", _const_core(2), _const_core(n // 2))
    return ("s", _const_core(n - 1))


# --- core -------------------------------------------------------------------------
#
# terms:    ("p", i) parameter, ("b", d) variable bound at depth d, ("a", k) variable k,
#           ("0",), ("s", t), ("+", l, r), ("*", l, r), ("n", n) numeral, ("q",) diagonal numeral
# formulas: ("=", l, r), ("¬", f), ("⇒", l, r), ("∀", f) binds depth+1, ("∀a", k, f), ("R", name, args)


@dataclass
class Definition:
    name: str
    params: tuple
    body: object
    core: tuple
    item: Optional[str] = None
    reserve: int = 0

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class _Aff:
    """sym + m·M + q·Q + Σ n_i·|arg_i| + Σ c_L·L (and the same with bits).

    The last sum runs over named numerals; `s` holds sorted (label, c_L) pairs.
    """
    sym: int = 0
    bits: int = 0
    m: int = 0
    q: int = 0
    n: tuple = ()
    s: tuple = ()

    def __add__(self, o: "_Aff") -> "_Aff":
        n = tuple(a + b for a, b in itertools.zip_longest(self.n, o.n, fillvalue=0))
        return _Aff(self.sym + o.sym, self.bits + o.bits, self.m + o.m, self.q + o.q, n,
                    _merge(self.s, o.s))

    def scale(self, c: int) -> "_Aff":
        return _Aff(self.sym * c, self.bits * c, self.m * c, self.q * c,
                    tuple(x * c for x in self.n), tuple((k, v * c) for k, v in self.s))


def _merge(a: tuple, b: tuple) -> tuple:
    if not b:
        return a
    if not a:
        return b
    out = dict(a)
    for k, v in b:
        out[k] = out.get(k, 0) + v
    return tuple(sorted(out.items()))


def _const(sym: int, bits: int) -> _Aff:
    return _Aff(sym, bits)


# wrapping an operand in parentheses: "(" has 3 bits, ")" has 4
_WRAP = _const(2, 7)


@dataclass(frozen=True)
class QLinear:
    """base + per_q·q, for sizes that depend on a diagonal number q."""
    base: int
    per_q: int

    def at(self, q: int) -> int:
        return self.base + self.per_q * q

    def __str__(self) -> str:
        return f"{self.base} + {self.per_q}·q"


@dataclass(frozen=True)
class SymLinear:
    """base + Σ coef·L over named numbers L (the diagonal number is named "q")."""
    base: int
    terms: tuple  # sorted (label, coef) pairs

    def coef(self, label: str) -> int:
        return dict(self.terms).get(label, 0)

    def labels(self) -> list[str]:
        return [k for k, _ in self.terms]

    def __str__(self) -> str:
        return " + ".join([str(self.base)] + [f"{c}·{k}" for k, c in self.terms])


@dataclass(frozen=True)
class Placeholder:
    """Stands for a Gödel number too large to compute; its size is exact.

    The size is an int, or a SymLinear when it depends on other named numbers.
    """
    bit_length: Union[int, "SymLinear"]
    symbol_count: Union[int, "SymLinear"]

    def __str__(self) -> str:
        return f"<number with {self.bit_length} bits>"


@dataclass(frozen=True)
class SentenceStats:
    name: str
    expanded_symbol_count: Union[int, QLinear, SymLinear]
    free_vars: frozenset
    godel_number: Optional[int]
    bit_length: Union[int, QLinear, SymLinear]


class DefDag:
    def __init__(self):
        self._defs: dict[str, Definition] = {}
        self._aff: dict[str, _Aff] = {}
        self._top: dict[str, str] = {}
        self._fresh = itertools.count()

    # construction

    def define(self, name: str, params: tuple, body, item: Optional[str] = None,
               reserve: int = 0) -> Definition:
        if name in self._defs:
            raise ValueError(f"{name} is already defined")
        if len(set(params)) != len(params):
            raise ValueError(f"{name}: repeated parameter")
        env = {p: ("p", i) for i, p in enumerate(params)}
        core = self._formula(body, env, 0)
        d = Definition(name, tuple(params), body, core, item, reserve)
        self._defs[name] = d
        return d

    def copy(self) -> "DefDag":
        out = DefDag()
        out._defs = dict(self._defs)
        out._aff = dict(self._aff)
        out._top = dict(self._top)
        return out

    # queries

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def names(self) -> list[str]:
        return list(self._defs)

    def lookup(self, name: str) -> Definition:
        try:
            return self._defs[name]
        except KeyError:
            raise ValueError(f"no definition named {name!r}") from None

    def direct_dependencies(self, name: str) -> list[str]:
        seen: dict[str, None] = {}
        for ref, _args, _d in _refs(self.lookup(name).core):
            seen.setdefault(ref)
        return list(seen)

    def dependencies(self, name: str) -> set[str]:
        out: set[str] = set()
        todo = [name]
        while todo:
            for d in self.direct_dependencies(todo.pop()):
                if d not in out:
                    out.add(d)
                    todo.append(d)
        return out

    def contributions(self, name: str) -> list[tuple[str, int]]:
        """Symbol count of each reference occurrence in the expansion of name."""
        d = self.lookup(name)
        out = []
        for ref, args, depth in _refs(d.core):
            a = self._ref_aff(ref, args, depth)
            out.append((ref, _eval(a, d)[0]))
        return out

    # lowering

    def _ref(self, name: str, args: list) -> tuple:
        d = self.lookup(name)
        if len(args) != d.arity:
            raise ValueError(f"{name} takes {d.arity} argument(s), got {len(args)}")
        return ("R", name, tuple(args))

    def top(self, f: tuple) -> str:
        if f[0] != "R":
            return f[0]
        name = f[1]
        if name not in self._top:
            self._top[name] = self.top(self._defs[name].core)
        return self._top[name]

    def _imp(self, left: tuple, right: tuple) -> tuple:
        # an implication on the left of ⇒ would print inside parentheses, which
        # the formula grammar does not allow; ¬¬ keeps it well formed
        if self.top(left) == "⇒":
            left = ("¬", ("¬", left))
        return ("⇒", left, right)

    def _and(self, a: tuple, b: tuple) -> tuple:
        return ("¬", self._imp(a, ("¬", b)))

    def _or(self, a: tuple, b: tuple) -> tuple:
        return self._imp(("¬", a), b)

    @staticmethod
    def _ex(body: tuple) -> tuple:
        return ("¬", ("∀", ("¬", body)))

    def _le(self, a: tuple, b: tuple, depth: int) -> tuple:
        # t ≤ u is ∃c(t + c = u)
        return self._ex(("=", ("+", a, ("b", depth + 1)), b))

    def _lt(self, a: tuple, b: tuple, depth: int) -> tuple:
        return self._and(self._le(a, b, depth), ("¬", ("=", a, b)))

    def _term(self, t, env: dict) -> tuple:
        if isinstance(t, str):
            try:
                return env[t]
            except KeyError:
                raise ValueError(f"unbound variable {t!r}") from None
        if isinstance(t, bool):
            raise ValueError("booleans are not terms")
        if isinstance(t, int):
            return _const_core(t)
        if isinstance(t, S):
            return ("s", self._term(t.t, env))
        if isinstance(t, Add):
            return ("+", self._term(t.left, env), self._term(t.right, env))
        if isinstance(t, Mul):
            return ("*", self._term(t.left, env), self._term(t.right, env))
        if isinstance(t, Numeral):
            return ("n", t.n)
        if isinstance(t, QBar):
            return ("q",)
        if isinstance(t, Named):
            return ("c", t.label)
        if isinstance(t, (StarT, Fn)):
            raise ValueError("function terms may only appear as arguments of an atom")
        raise TypeError(f"not a term: {t!r}")

    def _lifted(self, terms: list, env: dict, depth: int, build) -> tuple:
        """Bind each function term to a fresh ∃u, then call build(core_terms, depth)."""
        for t in terms:
            if isinstance(t, (StarT, Fn)):
                u = f"%{next(self._fresh)}"
                inner = {**env, u: ("b", depth + 1)}
                defining = Star(u, *t.parts) if isinstance(t, StarT) else R(t.name, u, *t.args)
                core_def = self._formula(defining, inner, depth + 1)
                rest = [u if x == t else x for x in terms]
                return self._ex(self._and(core_def, self._lifted(rest, inner, depth + 1, build)))
        return build([self._term(t, env) for t in terms], depth)

    def _chain(self, z: tuple, ps: list, depth: int) -> tuple:
        if len(ps) == 1:
            return ("=", z, ps[0])
        if len(ps) == 2:
            return self._ref("StarRel", [z, ps[0], ps[1]])
        u = ("b", depth + 1)
        first = self._ref("StarRel", [u, ps[0], ps[1]])
        return self._ex(self._and(first, self._chain(z, [u, *ps[2:]], depth + 1)))

    def _formula(self, f, env: dict, depth: int) -> tuple:
        if isinstance(f, Eq):
            return self._lifted([f.left, f.right], env, depth, lambda ts, d: ("=", *ts))
        if isinstance(f, Neq):
            return ("¬", self._formula(Eq(f.left, f.right), env, depth))
        if isinstance(f, Le):
            return self._lifted([f.left, f.right], env, depth,
                                lambda ts, d: self._le(ts[0], ts[1], d))
        if isinstance(f, Lt):
            return self._lifted([f.left, f.right], env, depth,
                                lambda ts, d: self._lt(ts[0], ts[1], d))
        if isinstance(f, R):
            return self._lifted(list(f.args), env, depth, lambda ts, d: self._ref(f.name, ts))
        if isinstance(f, Star):
            parts = _fold_constants(f.parts)
            return self._lifted([f.z, *parts], env, depth,
                                lambda ts, d: self._chain(ts[0], ts[1:], d))
        if isinstance(f, Not):
            return ("¬", self._formula(f.body, env, depth))
        if isinstance(f, Imp):
            return self._imp(self._formula(f.left, env, depth), self._formula(f.right, env, depth))
        if isinstance(f, And):
            acc = self._formula(f.fs[0], env, depth)
            for g in f.fs[1:]:
                acc = self._and(acc, self._formula(g, env, depth))
            return acc
        if isinstance(f, Or):
            acc = self._formula(f.fs[0], env, depth)
            for g in f.fs[1:]:
                acc = self._or(acc, self._formula(g, env, depth))
            return acc
        if isinstance(f, All):
            return ("∀", self._formula(f.body, {**env, f.var: ("b", depth + 1)}, depth + 1))
        if isinstance(f, Ex):
            return self._ex(self._formula(f.body, {**env, f.var: ("b", depth + 1)}, depth + 1))
        if isinstance(f, AllAt):
            return ("∀a", f.index, self._formula(f.body, {**env, f.var: ("a", f.index)}, depth))
        if isinstance(f, (BAll, BEx, BAllLt, BExLt)):
            bound = self._term(f.bound, env)
            d = depth + 1
            v = ("b", d)
            guard = self._le(v, bound, d) if isinstance(f, (BAll, BEx)) else self._lt(v, bound, d)
            body = self._formula(f.body, {**env, f.var: v}, d)
            if isinstance(f, (BAll, BAllLt)):
                return ("∀", self._imp(guard, body))
            # (∃x≤t)E is ¬(∀x≤t)¬E
            return ("¬", ("∀", self._imp(guard, ("¬", body))))
        raise TypeError(f"not a formula: {f!r}")

    # sizes

    def aff(self, name: str) -> _Aff:
        if name not in self._aff:
            self._aff[name] = self._faff(self._defs[name].core, 0)
        return self._aff[name]

    def _ref_aff(self, name: str, args: tuple, depth: int) -> _Aff:
        inner = self.aff(name)
        out = _Aff(inner.sym + inner.m * depth, inner.bits + inner.m * depth, inner.m, inner.q,
                   s=inner.s)
        for c, t in zip(inner.n, args):
            if c:
                out = out + _taff(t).scale(c)
        return out

    def _faff(self, f: tuple, depth: int) -> _Aff:
        tag = f[0]
        if tag == "=":
            return _taff(f[1]) + _taff(f[2]) + _const(1, 11)
        if tag == "¬":
            return self._faff(f[1], depth) + _const(3, 22)
        if tag == "⇒":
            return self._faff(f[1], depth) + self._faff(f[2], depth) + _const(1, 12)
        if tag == "∀":
            d = depth + 1
            return self._faff(f[1], d) + _Aff(d + 6, d + 32, 1)
        if tag == "∀a":
            k = f[1]
            return self._faff(f[2], depth) + _const(k + 6, k + 32)
        if tag == "R":
            return self._ref_aff(f[1], f[2], depth)
        raise AssertionError(tag)


def _fold_constants(parts: tuple) -> list:
    out: list = []
    for p in parts:
        if isinstance(p, int) and not isinstance(p, bool) and out and isinstance(out[-1], int):
            out[-1] = star(out[-1], p)
        else:
            out.append(p)
    return out


def _refs(core: tuple, depth: int = 0) -> Iterator[tuple[str, tuple, int]]:
    stack = [(core, depth)]
    while stack:
        f, d = stack.pop()
        tag = f[0]
        if tag == "R":
            yield f[1], f[2], d
        elif tag == "¬":
            stack.append((f[1], d))
        elif tag == "⇒":
            stack.append((f[2], d))
            stack.append((f[1], d))
        elif tag == "∀":
            stack.append((f[1], d + 1))
        elif tag == "∀a":
            stack.append((f[2], d))


def _taff(t: tuple) -> _Aff:
    """Size of a term printed as an equation side (no outer parentheses)."""
    tag = t[0]
    if tag == "p":
        n = [0] * (t[1] + 1)
        n[t[1]] = 1
        return _Aff(n=tuple(n))
    if tag == "b":
        return _Aff(t[1] + 3, t[1] + 9, 1)
    if tag == "a":
        return _const(t[1] + 3, t[1] + 9)
    if tag == "0":
        return _const(1, 2)
    if tag == "s":
        return _taff(t[1]) + _WRAP + _const(1, 1)
    if tag in "+*":
        return _taff(t[1]) + _taff(t[2]) + _WRAP + _WRAP + _const(1, 9 if tag == "+" else 10)
    if tag == "n":
        return _const(t[1] + 1, t[1] + 2)
    if tag == "q":
        return _Aff(1, 2, q=1)
    if tag == "c":
        return _Aff(1, 2, s=((t[1], 1),))
    raise AssertionError(tag)


def _eval(a: _Aff, d: Definition, q: Optional[int] = None):
    """Top-level sizes: parameters are variables 1..k, bound variables start above k+reserve."""
    m = d.arity + d.reserve
    sym = a.sym + a.m * m + sum(c * (i + 4) for i, c in enumerate(a.n))
    bits = a.bits + a.m * m + sum(c * (i + 10) for i, c in enumerate(a.n))
    if a.s:
        if q is not None:
            sym, bits = sym + a.q * q, bits + a.q * q
        extra = (("q", a.q),) if a.q and q is None else ()
        terms = _merge(a.s, extra)
        return SymLinear(sym, terms), SymLinear(bits, terms)
    if a.q == 0:
        return sym, bits
    if q is None:
        return QLinear(sym, a.q), QLinear(bits, a.q)
    return sym + a.q * q, bits + a.q * q


# --- materialization ----------------------------------------------------------------

def _mat_term(t: tuple, m: int, args: tuple, q: Optional[int]) -> syn.Node:
    tag = t[0]
    if tag == "p":
        return args[t[1]]
    if tag == "b":
        return syn.Var(m + t[1])
    if tag == "a":
        return syn.Var(t[1])
    if tag == "0":
        return syn.Zero()
    if tag == "s":
        return syn.Succ(_mat_term(t[1], m, args, q))
    if tag == "+":
        return syn.Sum(_mat_term(t[1], m, args, q), _mat_term(t[2], m, args, q))
    if tag == "*":
        return syn.Prod(_mat_term(t[1], m, args, q), _mat_term(t[2], m, args, q))
    if tag == "n":
        return syn.numeral(t[1])
    if tag == "q":
        if q is None:
            raise ValueError("the diagonal numeral needs a value")
        return syn.numeral(q)
    if tag == "c":
        raise ValueError(f"the numeral of {t[1]} cannot be written out")
    raise AssertionError(tag)


class _Materializer:
    def __init__(self, dag: DefDag, q: Optional[int]):
        self.dag = dag
        self.q = q
        self.memo: dict = {}

    def formula(self, f: tuple, m: int, depth: int, args: tuple) -> syn.Node:
        tag = f[0]
        if tag == "=":
            return syn.Eq(_mat_term(f[1], m, args, self.q), _mat_term(f[2], m, args, self.q))
        if tag == "¬":
            return syn.Not(self.formula(f[1], m, depth, args))
        if tag == "⇒":
            return syn.Imp(self.formula(f[1], m, depth, args), self.formula(f[2], m, depth, args))
        if tag == "∀":
            return syn.ForAll(m + depth + 1, self.formula(f[1], m, depth + 1, args))
        if tag == "∀a":
            return syn.ForAll(f[1], self.formula(f[2], m, depth, args))
        if tag == "R":
            inner = tuple(_mat_term(t, m, args, self.q) for t in f[2])
            key = (f[1], m + depth, inner)
            if key not in self.memo:
                self.memo[key] = self.formula(self.dag.lookup(f[1]).core, m + depth, 0, inner)
            return self.memo[key]
        raise AssertionError(tag)


def _var_code(k: int) -> int:
    return star(4, 2, (1 << k) - 1, 8)


def _wrap(c: int) -> int:
    return star(4, c, 8)


class _Coder:
    """Gödel numbers by the ★ homomorphism, memoized per (template, scope, arguments)."""

    def __init__(self, dag: DefDag, q: Optional[int]):
        self.dag = dag
        self.q = q
        self.memo: dict = {}

    def term(self, t: tuple, m: int, args: tuple) -> int:
        tag = t[0]
        if tag == "p":
            return args[t[1]]
        if tag == "b":
            return _var_code(m + t[1])
        if tag == "a":
            return _var_code(t[1])
        if tag == "0":
            return 2
        if tag == "s":
            return star(_wrap(self.term(t[1], m, args)), 1)
        if tag in "+*":
            op = 1 << 8 if tag == "+" else 1 << 9
            return star(_wrap(self.term(t[1], m, args)), op, _wrap(self.term(t[2], m, args)))
        if tag in "nq":
            n = t[1] if tag == "n" else self.q
            if n is None:
                raise ValueError("the diagonal numeral needs a value")
            return star(2, (1 << n) - 1)
        if tag == "c":
            raise ValueError(f"the numeral of {t[1]} cannot be written out")
        raise AssertionError(tag)

    def formula(self, f: tuple, m: int, depth: int, args: tuple) -> int:
        tag = f[0]
        if tag == "=":
            return star(self.term(f[1], m, args), 1 << 10, self.term(f[2], m, args))
        if tag == "¬":
            return star(1 << 14, _wrap(self.formula(f[1], m, depth, args)))
        if tag == "⇒":
            return star(self.formula(f[1], m, depth, args), 1 << 11,
                        self.formula(f[2], m, depth, args))
        if tag == "∀":
            v = _var_code(m + depth + 1)
            return star(1 << 15, v, _wrap(self.formula(f[1], m, depth + 1, args)))
        if tag == "∀a":
            return star(1 << 15, _var_code(f[1]), _wrap(self.formula(f[2], m, depth, args)))
        if tag == "R":
            inner = tuple(self.term(t, m, args) for t in f[2])
            key = (f[1], m + depth, inner)
            if key not in self.memo:
                self.memo[key] = self.formula(self.dag.lookup(f[1]).core, m + depth, 0, inner)
            return self.memo[key]
        raise AssertionError(tag)


def _top_args(d: Definition) -> tuple:
    return tuple(syn.Var(i + 1) for i in range(d.arity))


def expand(dag: DefDag, name: str, guard: int = EXPANSION_GUARD,
           q: Optional[int] = None) -> syn.Node:
    """The fully expanded formula of a template, parameters as variables 1..k."""
    d = dag.lookup(name)
    count = _eval(dag.aff(name), d, q)[0]
    if isinstance(count, QLinear):
        raise ValueError(f"{name} contains the diagonal numeral; pass q")
    if isinstance(count, SymLinear):
        raise ValueError(f"{name} contains numerals of named numbers: {count.labels()}")
    if count > guard:
        raise GuardError(f"expansion of {name}", count, guard)
    mat = _Materializer(dag, q)
    return run_deep(mat.formula, d.core, d.arity + d.reserve, 0, _top_args(d))


def expansion_text(dag: DefDag, name: str, guard: int = EXPANSION_GUARD,
                   q: Optional[int] = None) -> str:
    node = expand(dag, name, guard, q)
    return run_deep(syn.print_canonical, node, max(guard, 3 * (q or 0) + 64))


def godel_number(dag: DefDag, name: str, q: Optional[int] = None) -> int:
    d = dag.lookup(name)
    args = tuple(_var_code(i + 1) for i in range(d.arity))
    return run_deep(_Coder(dag, q).formula, d.core, d.arity + d.reserve, 0, args)


def stats(dag: DefDag, name: str, guard: int = EXPANSION_GUARD,
          q: Optional[int] = None) -> SentenceStats:
    """Exact sizes without expanding; the Gödel number only when bit_length <= guard."""
    d = dag.lookup(name)
    a = dag.aff(name)
    count, bits = _eval(a, d, q)
    free = frozenset(i + 1 for i, c in enumerate(a.n) if c)
    number = None
    if isinstance(bits, int) and bits <= guard:
        number = godel_number(dag, name, q)
    return SentenceStats(name, count, free, number, bits)


# --- diagonal sentences ---------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalSentence:
    kind: str                       # "Rosser" or "Goedel"
    number: Union[int, Placeholder]  # q or p
    dag: DefDag = field(repr=False)
    matrix: str                     # template with one parameter a
    sentence: str                   # closed template containing the numeral of number

    def sentence_stats(self, guard: int = EXPANSION_GUARD) -> SentenceStats:
        q = self.number if isinstance(self.number, int) else None
        return stats(self.dag, self.sentence, guard, q)


# q for the full library has about 1.5e8 bits and takes seconds to compute
DIAGONAL_GUARD = 1 << 28


def _diag_ref(name: str, other: str) -> AllAt:
    # g(q̄, b) is ∀a(a = q̄ ⇒ g(a, b)), with a kept at variable 1
    return AllAt("a", 1, Imp(Eq("a", QBar()), R(name, "a", other)))


def _number_of(dag: DefDag, name: str, guard: int) -> Union[int, Placeholder]:
    st = stats(dag, name, guard)
    if st.godel_number is not None:
        return st.godel_number
    return Placeholder(st.bit_length, st.expanded_symbol_count)


def build_rosser(dag: DefDag, guard: int = DIAGONAL_GUARD, g: str = "g", h: str = "h",
                 suffix: str = "") -> DiagonalSentence:
    """A_q(a) = ∀b(g(a,b) ⇒ ∃c(c≤b ∧ h(a,c))) and its diagonal A_q(q̄)."""
    out = dag.copy()
    matrix, sentence = "A_q" + suffix, "A_q(q)" + suffix
    out.define(matrix, ("a",),
               All("b", Imp(R(g, "a", "b"), Ex("c", And(Le("c", "b"), R(h, "a", "c"))))))
    out.define(sentence, (), All("b", Imp(_diag_ref(g, "b"),
                                          Ex("c", And(Le("c", "b"), _diag_ref(h, "c"))))),
               reserve=1)
    return DiagonalSentence("Rosser", _number_of(out, matrix, guard), out, matrix, sentence)


def build_goedel(dag: DefDag, guard: int = DIAGONAL_GUARD) -> DiagonalSentence:
    """A_p(a) = ∀b¬g(a,b) and its diagonal A_p(p̄)."""
    out = dag.copy()
    out.define("A_p", ("a",), All("b", Not(R("g", "a", "b"))))
    out.define("A_p(p)", (), All("b", Not(_diag_ref("g", "b"))), reserve=1)
    return DiagonalSentence("Goedel", _number_of(out, "A_p", guard), out, "A_p", "A_p(p)")


# --- the library ----------------------------------------------------------------------

from .arith import _NAT, _PRED1, _PROP  # noqa: E402  (exponent templates shared with arith)


def _tpl(spec: tuple) -> list:
    return [1 << p if isinstance(p, int) else p for p in spec]


def _bex_lt(names: str, bound: str, body) -> object:
    for v in reversed(names):
        body = BExLt(v, bound, body)
    return body


def build_library() -> DefDag:
    """Entries 1 to 34 as templates, in dependency order."""
    L = DefDag()
    d = L.define
    P17, P18, P19 = 1 << 17, 1 << 18, 1 << 19

    d("Div", ("x", "y"), BEx("z", "y", Eq(Mul("x", "z"), "y")), "1")
    d("PowerOf2", ("x",),
      BAll("z", "x", Imp(And(R("Div", "z", "x"), Neq("z", 1)), R("Div", 2, "z"))), "2")
    d("LeastPow2", ("y", "x"),
      And(And(R("PowerOf2", "y"), Gt("y", "x"), Gt("y", 1)),
          BAllLt("z", "y", Not(And(R("PowerOf2", "z"), Gt("z", "x"), Gt("z", 1))))), "3")
    d("StarRel", ("z", "x", "y"),
      BEx("w", "z", And(Eq("z", Add(Mul("w", "x"), "y")), R("LeastPow2", "w", "y"))), "4")
    d("Begin", ("x", "y"), Or(Eq("x", "y"), And(Neq("x", 0), BEx("z", "y", Star("y", "x", "z")))), "5")
    d("End", ("x", "y"), Or(Eq("x", "y"), And(Neq("x", 0), BEx("z", "y", Star("y", "z", "x")))), "6")
    d("Part", ("x", "y"),
      Or(Eq("x", "y"), And(Neq("x", 0),
                           BEx("z", "y", And(R("End", "z", "y"), R("Begin", "x", "z"))))), "7")
    d("Succ", ("x",), And(Neq("x", 0), BAll("y", "x", Imp(R("Part", "y", "x"), R("Part", 1, "y")))), "8")
    d("Var", ("x",), BEx("y", "x", And(R("Succ", "y"), Star("x", 4, 2, "y", 8))), "9")
    d("Num", ("x",), Or(Eq("x", 2), BEx("y", "x", And(R("Succ", "y"), Star("x", 2, "y")))), "10")
    d("Seq", ("x",), R("Part", P17, "x"), "11")
    d("ElementOf", ("x", "y"),
      And(R("Seq", "y"), Not(R("Part", P17, "x")),
          Or(R("Begin", StarT("x", P17), "y"), R("End", StarT(P17, "x"), "y"),
             R("Part", StarT(P17, "x", P17), "y"))), "12")
    d("Before", ("x", "y", "z"),
      And(R("ElementOf", "x", "z"), R("ElementOf", "y", "z"),
          BEx("w", "z", R("Part", StarT("x", "w", "y"), "z"))), "13")

    def earlier(v, z, y, body):
        # (∃v ≺_y z) body
        return Ex(v, And(R("Before", v, z, y), body))

    def built_from(alternatives):
        # ∃y(x∈y ∧ (∀z∈y){…}), the construction-sequence shape of entries 14 and 17
        return Ex("y", And(R("ElementOf", "x", "y"),
                           All("z", Imp(R("ElementOf", "z", "y"), alternatives))))

    d("Term", ("x",), built_from(Or(
        R("Var", "z"), R("Num", "z"),
        earlier("v", "z", "y", earlier("w", "z", "y", Or(
            Star("z", 4, "v", 8, 1 << 8, 4, "w", 8),
            Star("z", 4, "v", 8, 1 << 9, 4, "w", 8),
            Star("z", 4, "v", 8, 1)))))), "14")
    d("neq", ("r", "x", "y"), Star("r", 1 << 14, 4, "x", 1 << 10, "y", 8), "15.neq")
    k1 = star(1 << 14, 4, 1 << 15, 4, 2, 1, 8, 4)
    d("leq", ("r", "x", "y"),
      Star("r", k1, Fn("neq", StarT("x", 1 << 8, 4, 2, 1, 8), "y"), 8, 8), "15.leq")
    d("Atom", ("x",),
      BEx("y", "x", BEx("z", "x", And(R("Term", "y"), R("Term", "z"),
                                      Or(Star("x", "y", 1 << 10, "z"), R("leq", "x", "y", "z"))))),
      "15")
    d("Gen", ("x", "y"), BEx("u", "y", And(R("Var", "u"), Star("y", 1 << 15, "u", 4, "x", 8))), "16")
    d("Form", ("x",), built_from(Or(
        R("Atom", "z"),
        earlier("v", "z", "y", earlier("w", "z", "y", Or(
            Star("z", "v", 1 << 11, "w"),
            Star("z", 1 << 14, 4, "v", 8),
            R("Gen", "w", "z")))))), "17")

    for k, spec in _PROP.items():
        used = [v for v in "abc" if v in spec]
        # Prop5 and Prop6 quantify c without using it
        names = "abc" if k in (2, 5, 6, 9) else "ab" if k != 11 else "a"
        forms = [R("Form", v) for v in used]
        d(f"Prop{k}", ("x",), _bex_lt(names, "x", And(*forms, Star("x", *_tpl(spec)))), f"18.{k}")
    d("Pro", ("x",), Or(*[R(f"Prop{k}", "x") for k in range(1, 12)]), "18")

    d("Free", ("x", "y"),
      And(R("Term", "x"),
          BAllLt("z", "x", Imp(And(R("Var", "z"), R("Part", "z", "x")),
                               Not(R("Part", StarT(1 << 15, "z"), "y"))))), "19")
    d("Pred1", ("x",), _bex_lt("abc", "x", And(
        R("Form", "a"), R("Form", "b"), R("Var", "c"), Not(R("Part", "c", "b")),
        Star("x", *_tpl(_PRED1)))), "20")
    d("SeqPair", ("x", "y", "u"),
      And(Not(R("Seq", "x")), Not(R("Seq", "y")), Neq("x", 0), Neq("y", 0),
          R("Part", StarT("x", P17, "y"), "u")), "21")
    split = And(R("SeqPair", "c1", "c2", "w"), R("SeqPair", "d1", "d2", "w"),
                Star("a", "c1", "u", "d1"), Star("b", "c2", "t", "d2"))
    step = Or(And(Not(R("Part", "u", "a")), Eq("a", "b")),
              BExLt("c1", "a", BExLt("c2", "b", BExLt("d1", "a", BExLt("d2", "b", split)))))
    pairs = BAllLt("a", "w", BAllLt("b", "w", Imp(R("SeqPair", "a", "b", "w"), step)))
    d("Alt", ("x", "y", "u", "t"), And(
        R("Form", "x"), R("Form", "y"), R("Var", "u"), R("Free", "u", "y"), R("Term", "t"),
        R("Free", "t", "y"), R("Part", "u", "y"), Not(R("Part", "u", "x")),
        Ex("w", And(R("SeqPair", "y", "x", "w"), pairs))), "22")
    d("Pred2", ("x",), _bex_lt("abct", "x", And(
        R("Form", "a"), R("Var", "b"), R("Term", "t"), R("Alt", "c", "a", "b", "t"),
        Star("x", 1 << 15, "b", "a", 1 << 11, "c"))), "23")

    for k, spec in _NAT.items():
        used = [v for v in "abc" if v in spec]
        d(f"Nat{k}", ("x",),
          _bex_lt("".join(used), "x", And(*[R("Term", v) for v in used], Star("x", *_tpl(spec)))),
          f"24.{k}")
    d("Nat", ("x",), Or(*[R(f"Nat{k}", "x") for k in range(1, 9)]), "24")

    d("sub", ("r", "a", "x", "y"),
      Star("r", 1 << 15, "x", 4, 4, "x", 1 << 10, "y", 8, 1 << 11, 4, "a", 8, 8), "25")

    def sub(y):
        return Fn("sub", "a", "b", y)

    d("MI", ("x",), _bex_lt("abc", "x", And(
        R("Form", "a"), R("Var", "b"), R("Var", "c"),
        Star("x", 4, sub(2), 1 << 12, 1 << 15, "c", 4, sub("c"), 1 << 11,
             sub(StarT("c", 1)), 8, 8, 1 << 11, 1 << 15, "c", sub("c")))), "26")
    d("Axiom", ("x",), Or(R("Pro", "x"), R("Pred1", "x"), R("Pred2", "x"), R("Nat", "x"),
                          R("MI", "x")), "27")
    gen_step = BExLt("a", "v", BExLt("b", "v", BExLt("c", "y", And(
        Star("v", "b", 1 << 11, "a"), Star("y", "b", 1 << 11, "c"), R("Gen", "a", "c"),
        BAll("z", "a", Imp(R("Var", "z"), Not(R("Part", "z", "b"))))))))
    mp_or_gen = earlier("v", "y", "x", earlier("w", "y", "x",
                                             Or(Star("w", "v", 1 << 11, "y"), gen_step)))
    d("Proof", ("x",), And(R("Seq", "x"), All("y", Imp(R("ElementOf", "y", "x"),
                                                       Or(R("Axiom", "y"), mp_or_gen)))), "28")
    d("Pr", ("x",), Ex("y", And(R("Proof", "y"), R("ElementOf", "x", "y"))), "29")
    d("Re", ("x",), Ex("y", And(R("Proof", "y"), R("ElementOf", StarT(1 << 14, 4, "x", 8), "y"))), "30")

    d("SEQ", ("x", "y", "w"),
      And(R("Part", StarT(P18, "x", P19, "y", P18), "w"), Not(R("Part", P18, "x")),
          Not(R("Part", P18, "y")), Not(R("Part", P19, "x")), Not(R("Part", P19, "y"))), "31")
    d("Pow2Rel", ("x", "y"), Ex("w", And(
        R("SEQ", "x", "y", "w"),
        BAll("a", "w", BAll("b", "w", Imp(R("SEQ", "a", "b", "w"), Or(
            And(Eq("a", 0), Eq("b", 1)),
            BEx("c", "a", BEx("d", "b", And(R("SEQ", "c", "d", "w"), Eq("a", Add("c", 1)),
                                            Eq("b", Mul("d", 2))))))))))), "32")

    def diagonal_member(member):
        # ∃x(Var(x) ∧ Part(x,a) ∧ Free(x,a) ∧ Proof(b) ∧ ∃w[w′ = 2^a ∧ member(sub_a(x, 2★w)) ∈ b])
        s = Fn("sub", "a", "x", StarT(2, "w"))
        return Ex("x", And(R("Var", "x"), R("Part", "x", "a"), R("Free", "x", "a"), R("Proof", "b"),
                           Ex("w", And(R("Pow2Rel", "a", S("w")), R("ElementOf", member(s), "b")))))

    d("g", ("a", "b"), diagonal_member(lambda s: s), "33")
    d("h", ("a", "b"), diagonal_member(lambda s: StarT(1 << 14, 4, s, 8)), "34")
    return L
