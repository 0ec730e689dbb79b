"""Primitive recursive schemas, the μ-operator and recursive relations.

Functions are terms over the six schemas (successor, constant, projection,
composition, primitive recursion on the first argument, unbounded μ).
Evaluation runs on a fuel budget; a μ-search that finds nothing before the
fuel runs out yields `NoResult` instead of looping.

A relation is represented by its characteristic function, with value 0
meaning *true*.  The combinators below close relations under the boolean
connectives, bounded quantifiers and bounded μ, and `compile_relation`
turns a bounded formula of the builders DSL into such a relation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, Union

DEFAULT_FUEL = 1_000_000


class _NoResultType:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NoResult"


NoResult = _NoResultType()


class _OutOfFuel(Exception):
    pass


# --- schemas ---------------------------------------------------------------------

@dataclass(frozen=True)
class Succ:
    @property
    def arity(self) -> int:
        return 1


@dataclass(frozen=True)
class Const:
    q: int
    n: int

    def __post_init__(self):
        if self.q < 0 or self.n < 1:
            raise ValueError("Const needs q >= 0 and arity >= 1")

    @property
    def arity(self) -> int:
        return self.n


@dataclass(frozen=True)
class Proj:
    i: int
    n: int

    def __post_init__(self):
        if not 1 <= self.i <= self.n:
            raise ValueError(f"projection index {self.i} outside 1..{self.n}")

    @property
    def arity(self) -> int:
        return self.n


@dataclass(frozen=True)
class Compose:
    """ψ(χ₁(x…), …, χ_m(x…))."""
    psi: "RecFun"
    chis: tuple

    def __init__(self, psi, chis):
        chis = tuple(chis)
        if not chis:
            raise ValueError("composition needs at least one inner function")
        if psi.arity != len(chis):
            raise ValueError(f"outer function takes {psi.arity} arguments, got {len(chis)}")
        if len({c.arity for c in chis}) != 1:
            raise ValueError("inner functions must share one arity")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "chis", chis)

    @property
    def arity(self) -> int:
        return self.chis[0].arity


@dataclass(frozen=True)
class PrimRec:
    """φ(0, x…) = base(x…), φ(k+1, x…) = step(k, φ(k, x…), x…).

    With an int base the function is unary: φ(0) = base, φ(k+1) = step(k, φ(k)).
    """
    base: Union[int, "RecFun"]
    step: "RecFun"

    def __post_init__(self):
        n = 1 if isinstance(self.base, int) else self.base.arity + 1
        if isinstance(self.base, int) and self.base < 0:
            raise ValueError("base value must be natural")
        if self.step.arity != n + 1:
            raise ValueError(f"step must take {n + 1} arguments, takes {self.step.arity}")

    @property
    def arity(self) -> int:
        return 1 if isinstance(self.base, int) else self.base.arity + 1


@dataclass(frozen=True)
class Mu:
    """μy[ψ(x…, y) = 0]."""
    psi: "RecFun"

    def __post_init__(self):
        if self.psi.arity < 2:
            raise ValueError("μ needs ψ of arity >= 2")

    @property
    def arity(self) -> int:
        return self.psi.arity - 1


RecFun = Union[Succ, Const, Proj, Compose, PrimRec, Mu]


class _Machine:
    def __init__(self, fuel: int):
        self.fuel = fuel

    def tick(self) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise _OutOfFuel

    def run(self, f: RecFun, args: tuple) -> int:
        self.tick()
        if isinstance(f, Succ):
            return args[0] + 1
        if isinstance(f, Const):
            return f.q
        if isinstance(f, Proj):
            return args[f.i - 1]
        if isinstance(f, Compose):
            return self.run(f.psi, tuple(self.run(c, args) for c in f.chis))
        if isinstance(f, PrimRec):
            k, rest = args[0], args[1:]
            acc = f.base if isinstance(f.base, int) else self.run(f.base, rest)
            for i in range(k):
                acc = self.run(f.step, (i, acc, *rest))
            return acc
        if isinstance(f, Mu):
            y = 0
            while self.run(f.psi, (*args, y)) != 0:
                y += 1
            return y
        raise TypeError(f"not a recursive function: {f!r}")


def evaluate(f: RecFun, args: Sequence[int], fuel: int = DEFAULT_FUEL) -> Union[int, _NoResultType]:
    """Value of f at args, or NoResult when the fuel runs out first."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if len(args) != f.arity:
        raise ValueError(f"function takes {f.arity} arguments, got {len(args)}")
    if any(not isinstance(a, int) or a < 0 for a in args):
        raise ValueError("arguments must be natural numbers")
    try:
        return _Machine(fuel).run(f, tuple(args))
    except _OutOfFuel:
        return NoResult


def mu_witness_ok(psi: RecFun, args: Sequence[int], y0: int, fuel: int = DEFAULT_FUEL) -> bool:
    """ψ(x…, y₀) = 0 and ψ(x…, y) ≠ 0 for every y < y₀."""
    if evaluate(psi, [*args, y0], fuel) != 0:
        return False
    return all(evaluate(psi, [*args, y], fuel) not in (0, NoResult) for y in range(y0))


# --- a small arithmetic library --------------------------------------------------------

def _p(i: int, n: int) -> Proj:
    return Proj(i, n)


plus = PrimRec(_p(1, 1), Compose(Succ(), [_p(2, 3)]))
times = PrimRec(Const(0, 1), Compose(plus, [_p(2, 3), _p(3, 3)]))
_pow_rev = PrimRec(Const(1, 1), Compose(times, [_p(2, 3), _p(3, 3)]))  # (y, x) ↦ x^y
power = Compose(_pow_rev, [_p(2, 2), _p(1, 2)])
pred = PrimRec(0, _p(1, 2))
_monus_rev = PrimRec(_p(1, 1), Compose(pred, [_p(2, 3)]))  # (y, x) ↦ x ∸ y
monus = Compose(_monus_rev, [_p(2, 2), _p(1, 2)])
sg = PrimRec(0, Const(1, 2))
nsg = PrimRec(1, Const(0, 2))
absdiff = Compose(plus, [monus, Compose(monus, [_p(2, 2), _p(1, 2)])])

LIBRARY: dict[str, RecFun] = {
    "succ": Succ(), "plus": plus, "times": times, "power": power, "pred": pred,
    "monus": monus, "sg": sg, "nsg": nsg, "absdiff": absdiff,
}


# --- accelerated evaluation ---------------------------------------------------------------
#
# Each function is compiled to a native closure by structural induction.  A
# primitive recursion whose step ignores the counter and acts on the
# accumulator as a translation, scaling or decrement by an amount that does
# not depend on the accumulator is collapsed to its closed form; anything else
# is iterated.  Every collapse is justified by the shape of the step alone,
# so the result equals `evaluate` whenever the latter terminates.

class MuLimit(RuntimeError):
    """A μ-search in `fast_evaluate` passed its search limit."""


def _deps(f: RecFun) -> frozenset:
    """Argument positions (1-based) f can depend on, syntactically."""
    if isinstance(f, Succ):
        return frozenset({1})
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Proj):
        return frozenset({f.i})
    if isinstance(f, Compose):
        out = set()
        for j in _deps(f.psi):
            out |= _deps(f.chis[j - 1])
        return frozenset(out)
    if isinstance(f, PrimRec):
        out = {1}
        if not isinstance(f.base, int):
            out |= {p + 1 for p in _deps(f.base)}
        out |= {p - 1 for p in _deps(f.step) if p >= 3}
        return frozenset(out)
    return frozenset(range(1, f.arity + 1))


# binary shapes: f(a, b) = OPS[tag](a, b)
_OPS = {
    "add": lambda a, b: a + b,
    "mul": lambda a, b: a * b,
    "monus": lambda a, b: max(a - b, 0),
    "pow": lambda a, b: a ** b,
}
_SWAP = {"radd": "add", "rmul": "mul", "rmonus": "monus", "rpow": "pow",
         "add": "radd", "mul": "rmul", "monus": "rmonus", "pow": "rpow"}


def _op_value(tag: str, a: int, b: int) -> int:
    if tag.startswith("r"):
        a, b = b, a
        tag = tag[1:]
    return _OPS[tag](a, b)


class _Fast:
    def __init__(self, mu_limit: int):
        self.mu_limit = mu_limit
        self.cache: dict = {}

    def shape(self, f: RecFun):
        """('succ'|'pred',) for unary shapes, (tag,) for binary ones, else None."""
        if isinstance(f, Succ):
            return "succ"
        if isinstance(f, PrimRec):
            if f.base == 0 and f.step == Proj(1, 2):
                return "pred"
            if f.arity == 2:
                act = self.action(f.step)
                if act is not None and act[1] == Proj(3, 3):
                    kind = act[0]
                    if f.base == Proj(1, 1) and kind == "add":
                        return "radd"        # φ(k, y) = y + k
                    if f.base == Proj(1, 1) and kind == "monus":
                        return "rmonus"      # φ(k, y) = y ∸ k
                    if f.base == Const(0, 1) and kind == "add":
                        return "mul"         # φ(k, y) = k·y
                    if f.base == Const(1, 1) and kind == "mul":
                        return "rpow"        # φ(k, y) = y^k
                if act is not None and act[0] == "add" and act[1] == Const(1, 3) \
                        and f.base == Proj(1, 1):
                    return "radd"
        if isinstance(f, Compose) and f.arity == 2 and len(f.chis) == 2:
            tag = self.shape(f.psi)
            if tag in _SWAP:
                if f.chis == (Proj(1, 2), Proj(2, 2)):
                    return tag
                if f.chis == (Proj(2, 2), Proj(1, 2)):
                    return _SWAP[tag]
        return None

    def action(self, step: RecFun):
        """(kind, t) with step(i, acc, x…) = acc ⊙ t(i, acc, x…), t free of i and acc."""
        n = step.arity
        acc = Proj(2, n)
        if step == acc:
            return ("add", Const(0, n))
        if not isinstance(step, Compose):
            return None
        tag = self.shape(step.psi)
        if tag == "succ" and step.chis[0] == acc:
            return ("add", Const(1, n))
        if tag == "pred" and step.chis[0] == acc:
            return ("monus", Const(1, n))
        if tag is None or tag not in _SWAP:
            return None
        a, b = step.chis
        if tag.startswith("r"):
            a, b, tag = b, a, tag[1:]
        if tag in ("add", "mul") and b == acc:
            a, b = b, a
        if a == acc and not (_deps(b) & {1, 2}) and tag in ("add", "mul", "monus"):
            return (tag, b)
        return None

    def fn(self, f: RecFun):
        got = self.cache.get(f)
        if got is None:
            got = self.cache[f] = self._build(f)
        return got

    def _build(self, f: RecFun):
        if isinstance(f, Succ):
            return lambda a: a[0] + 1
        if isinstance(f, Const):
            q = f.q
            return lambda a: q
        if isinstance(f, Proj):
            i = f.i - 1
            return lambda a: a[i]
        tag = self.shape(f)
        if tag in _SWAP:
            return lambda a: _op_value(tag, a[0], a[1])
        if tag == "pred":
            return lambda a: max(a[0] - 1, 0)
        if isinstance(f, Compose):
            psi = self.fn(f.psi)
            chis = [self.fn(c) for c in f.chis]
            return lambda a: psi(tuple(c(a) for c in chis))
        if isinstance(f, PrimRec):
            return self._primrec(f)
        if isinstance(f, Mu):
            psi, lim = self.fn(f.psi), self.mu_limit

            def mu(a):
                for y in range(lim + 1):
                    if psi((*a, y)) == 0:
                        return y
                raise MuLimit(f"no zero below {lim + 1}")
            return mu
        raise TypeError(f"not a recursive function: {f!r}")

    def _primrec(self, f: PrimRec):
        base = (lambda a, v=f.base: v) if isinstance(f.base, int) else self.fn(f.base)
        step = self.fn(f.step)
        sd = _deps(f.step)
        act = self.action(f.step) if 1 not in sd else None
        if act is not None:
            kind, t = act
            tf = self.fn(t)

            def closed(a):
                k, rest = a[0], a[1:]
                b = base(rest)
                if k == 0:
                    return b
                d = tf((0, 0, *rest))
                if kind == "add":
                    return b + k * d
                if kind == "monus":
                    return max(b - k * d, 0)
                if b == 0 or d == 1:
                    return b
                if d == 0:
                    return 0
                return b * d ** k
            return closed
        if not sd & {1, 2}:
            # the step ignores counter and accumulator
            return lambda a: base(a[1:]) if a[0] == 0 else step((0, 0, *a[1:]))

        def loop(a):
            k, rest = a[0], a[1:]
            acc = base(rest)
            for i in range(k):
                acc = step((i, acc, *rest))
            return acc
        return loop


def fast_evaluate(f: RecFun, args: Sequence[int], mu_limit: int = DEFAULT_FUEL) -> int:
    """Value of f at args with closed forms for recognised recursions.

    Agrees with `evaluate` wherever that returns a value.  A μ-search gives
    up after `mu_limit` candidates by raising `MuLimit`.
    """
    if len(args) != f.arity:
        raise ValueError(f"function takes {f.arity} arguments, got {len(args)}")
    if any(not isinstance(a, int) or a < 0 for a in args):
        raise ValueError("arguments must be natural numbers")
    return _Fast(mu_limit).fn(f)(tuple(args))


# --- relations and closure ------------------------------------------------------------

@dataclass(frozen=True)
class RecRel:
    """R(x…) holds iff char(x…) = 0."""
    char: RecFun

    @property
    def arity(self) -> int:
        return self.char.arity

    def holds(self, args: Sequence[int], fuel: int = DEFAULT_FUEL) -> bool:
        v = evaluate(self.char, args, fuel)
        if v is NoResult:
            raise RuntimeError("characteristic function ran out of fuel")
        return v == 0


def _same_arity(*rs: RecRel) -> int:
    if len({r.arity for r in rs}) != 1:
        raise ValueError("relations must have the same arity")
    return rs[0].arity


def _on(f: RecFun, *gs: RecFun) -> RecFun:
    return Compose(f, list(gs))


def neg(r: RecRel) -> RecRel:
    return RecRel(_on(nsg, r.char))


def conj(r: RecRel, s: RecRel) -> RecRel:
    _same_arity(r, s)
    return RecRel(_on(plus, r.char, s.char))


def disj(r: RecRel, s: RecRel) -> RecRel:
    # sg keeps the product at 0/1 so nested disjunctions stay cheap in unary arithmetic
    _same_arity(r, s)
    return RecRel(_on(times, _on(sg, r.char), _on(sg, s.char)))


def implies(r: RecRel, s: RecRel) -> RecRel:
    return disj(neg(r), s)


def equal(f: RecFun, g: RecFun) -> RecRel:
    if f.arity != g.arity:
        raise ValueError("functions must have the same arity")
    return RecRel(_on(absdiff, f, g))


def _fold_bound(r: RecRel, combine: RecFun) -> RecFun:
    """F(k, y…) = r(0, y…) ⊕ r(1, y…) ⊕ … ⊕ r(k, y…) for ⊕ = combine."""
    m = r.arity - 1
    n = m + 2  # (k, acc, y…)
    at_next = _on(r.char, _on(Succ(), _p(1, n)), *[_p(i, n) for i in range(3, n + 1)])
    step = _on(combine, _p(2, n), _on(sg, at_next))
    if m == 0:
        return PrimRec(min(_const_value(r.char, 0), 1), step)
    return PrimRec(_on(sg, _on(r.char, Const(0, m), *[_p(i, m) for i in range(1, m + 1)])), step)


def _const_value(f: RecFun, x: int) -> int:
    v = evaluate(f, [x])
    if v is NoResult:
        raise RuntimeError("base value ran out of fuel")
    return v


def _bounded(phi: RecFun, r: RecRel, folded: RecFun) -> RecFun:
    # (x…, y…) ↦ folded(φ(x…), y…)
    n, m = phi.arity, r.arity - 1
    if m < 0:
        raise ValueError("relation needs the bounded variable as first argument")
    total = n + m
    xs = [_p(i, total) for i in range(1, n + 1)]
    ys = [_p(i, total) for i in range(n + 1, total + 1)]
    return _on(folded, _on(phi, *xs), *ys)


def _check_bounded(phi: RecFun, r: RecRel) -> None:
    if not isinstance(phi, (Succ, Const, Proj, Compose, PrimRec, Mu)):
        raise ValueError("the bound must be a function")
    if r.arity < 1:
        raise ValueError("relation needs the bounded variable as first argument")
    if r.arity == 1 and phi.arity < 1:
        raise ValueError("nothing to bound")


def bounded_exists(phi: RecFun, r: RecRel) -> RecRel:
    """S(x…, y…) :⇔ ∃u ≤ φ(x…) R(u, y…)."""
    _check_bounded(phi, r)
    return RecRel(_bounded(phi, r, _fold_bound(r, times)))


def bounded_forall(phi: RecFun, r: RecRel) -> RecRel:
    """T(x…, y…) :⇔ ∀u ≤ φ(x…) R(u, y…)."""
    _check_bounded(phi, r)
    return RecRel(_bounded(phi, r, _fold_bound(r, plus)))


def bounded_mu(phi: RecFun, r: RecRel) -> RecFun:
    """ψ(x…, y…) = least u ≤ φ(x…) with R(u, y…), or 0 when there is none."""
    _check_bounded(phi, r)
    m = r.arity - 1
    none_upto = _fold_bound(r, times)  # (k, y…) ↦ 0 iff a witness u ≤ k exists
    n = m + 2
    ys = [_p(i, n) for i in range(3, n + 1)]
    k1 = _on(Succ(), _p(1, n))
    # M(k+1) = M(k) + sg(E(k)) · nsg(r(k+1)) · (k+1)
    fresh = _on(times, _on(sg, _on(none_upto, _p(1, n), *ys)),
                _on(times, _on(nsg, _on(r.char, k1, *ys)), k1))
    step = _on(plus, _p(2, n), fresh)
    base: Union[int, RecFun] = 0 if m == 0 else Const(0, m)
    return _bounded(phi, r, PrimRec(base, step))


# --- sugar ------------------------------------------------------------------------------

def compile_relation(expr, variables: Sequence[str],
                     relations: Mapping[str, RecRel] | None = None,
                     functions: Mapping[str, RecFun] | None = None) -> RecRel:
    """Compile a bounded builders-DSL formula over the given variables to a relation.

    ≠, ≤, <, ∧, ∨, ⇒ and the bounded quantifiers follow their definitions in
    terms of = and ¬; unbounded ∀/∃ are rejected.  `R(name, …)` refers to a
    relation in `relations`.
    """
    from . import builders as b

    if not variables:
        raise ValueError("at least one variable is needed")
    rels = dict(relations or {})
    funs = {**LIBRARY, **(functions or {})}

    def term(t, scope: list) -> RecFun:
        n = len(scope)
        if isinstance(t, str):
            if t not in scope:
                raise ValueError(f"unbound variable {t!r}")
            return _p(len(scope) - scope[::-1].index(t), n)
        if isinstance(t, int):
            return Const(t, n)
        if isinstance(t, b.S):
            return _on(Succ(), term(t.t, scope))
        if isinstance(t, b.Add):
            return _on(plus, term(t.left, scope), term(t.right, scope))
        if isinstance(t, b.Mul):
            return _on(times, term(t.left, scope), term(t.right, scope))
        raise ValueError(f"unsupported term {t!r}")

    def bounded(f, scope: list) -> RecRel:
        # body over scope + [v] moved to (v, scope…) so the bound variable comes first
        inner = rel(f.body, scope + [f.var])
        n = len(scope)
        order = [_p(i, n + 1) for i in range(2, n + 2)] + [_p(1, n + 1)]
        moved = RecRel(_on(inner.char, *order))
        bound = term(f.bound, scope)
        lt = isinstance(f, (b.BAllLt, b.BExLt))
        if lt:
            # u < t: quantify u ≤ t and require u ≠ t inside
            ne = RecRel(_on(nsg, _on(absdiff, _p(1, n + 1),
                                      _on(bound, *[_p(i, n + 1) for i in range(2, n + 2)]))))
            moved = (conj(ne, moved) if isinstance(f, b.BExLt) else implies(ne, moved))
        q = bounded_exists if isinstance(f, (b.BEx, b.BExLt)) else bounded_forall
        out = q(bound, moved)
        # out takes (scope…, scope…); feed the scope twice
        return RecRel(_on(out.char, *[_p(i, n) for i in range(1, n + 1)],
                          *[_p(i, n) for i in range(1, n + 1)]))

    def rel(f, scope: list) -> RecRel:
        if isinstance(f, b.Eq):
            return equal(term(f.left, scope), term(f.right, scope))
        if isinstance(f, b.Neq):
            return neg(rel(b.Eq(f.left, f.right), scope))
        if isinstance(f, b.Le):
            return RecRel(_on(monus, term(f.left, scope), term(f.right, scope)))
        if isinstance(f, b.Lt):
            return conj(rel(b.Le(f.left, f.right), scope), rel(b.Neq(f.left, f.right), scope))
        if isinstance(f, b.Not):
            return neg(rel(f.body, scope))
        if isinstance(f, b.Imp):
            return implies(rel(f.left, scope), rel(f.right, scope))
        if isinstance(f, b.And):
            acc = rel(f.fs[0], scope)
            for g in f.fs[1:]:
                acc = conj(acc, rel(g, scope))
            return acc
        if isinstance(f, b.Or):
            acc = rel(f.fs[0], scope)
            for g in f.fs[1:]:
                acc = disj(acc, rel(g, scope))
            return acc
        if isinstance(f, (b.BAll, b.BEx, b.BAllLt, b.BExLt)):
            return bounded(f, scope)
        if isinstance(f, b.R):
            if f.name not in rels:
                raise ValueError(f"unknown relation {f.name!r}")
            r = rels[f.name]
            if r.arity != len(f.args):
                raise ValueError(f"{f.name} takes {r.arity} arguments")
            return RecRel(_on(r.char, *[term(a, scope) for a in f.args]))
        if isinstance(f, (b.All, b.Ex, b.AllAt)):
            raise ValueError("unbounded quantifier: only bounded quantifiers are recursive here")
        raise ValueError(f"unsupported formula {f!r}")

    return rel(expr, list(variables))


# --- definition files -----------------------------------------------------------------
#
#   ; comment
#   (define name expr)
#   expr := succ | name | (const q n) | (proj i n) | (compose f g1 … gm)
#         | (primrec base step) | (mu f)        base := natural | expr

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s()]+))")


def _read(text: str) -> list:
    stack: list[list] = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        comment, lp, rp, atom = m.groups()
        if comment:
            continue
        if lp:
            stack.append([])
        elif rp:
            if len(stack) == 1:
                raise ValueError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        elif atom:
            stack[-1].append(int(atom) if atom.isdigit() else atom)
    if text[pos:].strip():
        raise ValueError(f"cannot read {text[pos:pos + 20]!r}")
    if len(stack) != 1:
        raise ValueError("unbalanced '('")
    return stack[0]


def parse_definitions(text: str) -> dict[str, RecFun]:
    """Parse a definition file; later definitions may use earlier ones."""
    env: dict[str, RecFun] = {}

    def build(e) -> RecFun:
        if isinstance(e, str):
            if e in env:
                return env[e]
            if e in LIBRARY:
                return LIBRARY[e]
            raise ValueError(f"unknown function {e!r}")
        if isinstance(e, int) or not e:
            raise ValueError(f"expected a function, got {e!r}")
        head, *rest = e
        try:
            if head == "const" and len(rest) == 2:
                return Const(*_ints(rest))
            if head == "proj" and len(rest) == 2:
                return Proj(*_ints(rest))
            if head == "compose" and len(rest) >= 2:
                return Compose(build(rest[0]), [build(x) for x in rest[1:]])
            if head == "primrec" and len(rest) == 2:
                base = rest[0] if isinstance(rest[0], int) else build(rest[0])
                return PrimRec(base, build(rest[1]))
            if head == "mu" and len(rest) == 1:
                return Mu(build(rest[0]))
        except TypeError as exc:
            raise ValueError(str(exc)) from None
        raise ValueError(f"malformed expression {e!r}")

    for form in _read(text):
        if not (isinstance(form, list) and len(form) == 3 and form[0] == "define"
                and isinstance(form[1], str)):
            raise ValueError(f"expected (define name expr), got {form!r}")
        name = form[1]
        if name in env:
            raise ValueError(f"{name} defined twice")
        env[name] = build(form[2])
    return env


def _ints(xs: list) -> list[int]:
    if not all(isinstance(x, int) for x in xs):
        raise ValueError(f"expected natural numbers, got {xs!r}")
    return xs


def load_definitions(path: Union[str, Path]) -> dict[str, RecFun]:
    return parse_definitions(Path(path).read_text(encoding="utf-8"))
