"""Axiom schemata, inference rules and proof checking for first-order arithmetic.

Formulas are compared through `desugar`, so ∧, ∨, ∃ and parentheses never
matter for identity.  Schemas are matched first against the abstract view
(where ∧/∨/∃ are still visible) and then against the desugared view.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .syntax import (
    And, Eq, Exists, ForAll, Imp, Node, Not, Num, Or, Paren, Prod, Succ, Sum, Var, Zero,
    abstract, canonicalize, desugar, free_vars, is_term, numeral, parse, subst,
    term_free_for, to_symbols, variables,
)


# --- schema patterns --------------------------------------------------------

@dataclass(frozen=True)
class MF:
    """Formula metavariable."""
    name: str

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class MT:
    """Term metavariable."""
    name: str

    def children(self) -> tuple:
        return ()


A, B, C, F, G = MF("A"), MF("B"), MF("C"), MF("F"), MF("G")
a, b, c = MT("a"), MT("b"), MT("c")
Bindings = dict


def _bind(key: str, value, bnd: Bindings) -> bool:
    old = bnd.get(key)
    if old is None:
        bnd[key] = value
        return True
    return old == value


def match(p, f: Node, bnd: Bindings) -> bool:
    """Structural match of an abstract tree against a pattern."""
    if isinstance(p, MF):
        return not is_term(f) and _bind(p.name, f, bnd)
    if isinstance(p, MT):
        return is_term(f) and _bind(p.name, f, bnd)
    if isinstance(p, Succ) and isinstance(f, Num):
        return match(p.t, numeral(f.n - 1), bnd)
    if type(p) is not type(f):
        return False
    if isinstance(p, (ForAll, Exists)):
        if isinstance(p.var, str):
            if not _bind(p.var, f.var, bnd):
                return False
        elif p.var != f.var:
            return False
    kids_p, kids_f = p.children(), f.children()
    if not kids_p:
        return p == f
    return all(match(x, y, bnd) for x, y in zip(kids_p, kids_f))


def instantiate_pattern(p, bnd: Bindings) -> Node:
    if isinstance(p, (MF, MT)):
        return bnd[p.name]
    if isinstance(p, (ForAll, Exists)):
        v = bnd[p.var] if isinstance(p.var, str) else p.var
        return type(p)(v, instantiate_pattern(p.body, bnd))
    kids = p.children()
    if not kids:
        return p
    return abstract(type(p)(*[instantiate_pattern(k, bnd) for k in kids]))


# --- side conditions --------------------------------------------------------

def find_substituted_term(f: Node, x: int, g: Node) -> Optional[Node]:
    """The t with g == f[x:=t], or None.  Var(x) when x is not free in f."""
    found: dict[str, Node] = {}

    def walk(fn: Node, gn: Node, bound: frozenset) -> bool:
        if isinstance(fn, Var) and fn.k == x and x not in bound:
            return is_term(gn) and _bind("t", gn, found)
        if isinstance(fn, Succ) and isinstance(gn, Num):
            return walk(fn.t, numeral(gn.n - 1), bound)
        if type(fn) is not type(gn):
            return False
        if isinstance(fn, (ForAll, Exists)):
            if fn.var != gn.var:
                return False
            bound = bound | {fn.var}
        kf, kg = fn.children(), gn.children()
        if not kf:
            return fn == gn
        return all(walk(p, q, bound) for p, q in zip(kf, kg))

    if not walk(f, g, frozenset()):
        return None
    t = found.get("t", Var(x))
    return t if subst(f, x, t) == g else None


def _pred1(bnd: Bindings) -> bool:
    return bnd["x"] not in free_vars(bnd["B"])


def _pred2(bnd: Bindings) -> bool:
    t = find_substituted_term(bnd["F"], bnd["x"], bnd["G"])
    if t is None or not term_free_for(t, bnd["x"], bnd["F"]):
        return False
    bnd["t"] = t
    return True


def _induction(bnd: Bindings) -> bool:
    x, f = bnd["x"], bnd["F"]
    return (subst(f, x, Zero()) == bnd["F0"]
            and subst(f, x, Succ(Var(x))) == bnd["F1"])


@dataclass(frozen=True)
class Schema:
    tag: str
    pattern: object
    check: Optional[Callable[[Bindings], bool]] = None
    build: Optional[Callable[[Bindings], Node]] = None


SCHEMAS: tuple[Schema, ...] = (
    Schema("Prop1", Imp(A, Imp(B, A))),
    Schema("Prop2", Imp(Imp(A, B), Imp(Imp(A, Imp(B, C)), Imp(A, C)))),
    Schema("Prop3", Imp(A, Imp(Imp(A, B), B))),
    Schema("Prop4", Imp(A, Imp(B, And(A, B)))),
    Schema("Prop5", Imp(And(A, B), A)),
    Schema("Prop6", Imp(And(A, B), B)),
    Schema("Prop7", Imp(A, Or(A, B))),
    Schema("Prop8", Imp(B, Or(A, B))),
    Schema("Prop9", Imp(Imp(A, C), Imp(Imp(B, C), Imp(Or(A, B), C)))),
    Schema("Prop10", Imp(Imp(A, B), Imp(Imp(A, Not(B)), Not(A)))),
    Schema("Prop11", Imp(Not(Not(A)), A)),
    Schema("Pred1", Imp(Imp(B, A), Imp(B, ForAll("x", A))), _pred1),
    Schema("Pred2", Imp(ForAll("x", F), G), _pred2,
           lambda b: Imp(ForAll(b["x"], b["F"]), subst(b["F"], b["x"], b["t"]))),
    Schema("Pred3", Imp(G, Exists("x", F)), _pred2,
           lambda b: Imp(subst(b["F"], b["x"], b["t"]), Exists(b["x"], b["F"]))),
    Schema("Pred4", Imp(Imp(A, B), Imp(Exists("x", A), B)), _pred1),
    Schema("Nat1", Imp(Eq(Succ(a), Succ(b)), Eq(a, b))),
    Schema("Nat2", Not(Eq(Succ(a), Zero()))),
    Schema("Nat3", Imp(Eq(a, b), Imp(Eq(a, c), Eq(b, c)))),
    Schema("Nat4", Imp(Eq(a, b), Eq(Succ(a), Succ(b)))),
    Schema("Nat5", Eq(Sum(a, Zero()), a)),
    Schema("Nat6", Eq(Sum(a, Succ(b)), Succ(Sum(a, b)))),
    Schema("Nat7", Eq(Prod(a, Zero()), Zero())),
    Schema("Nat8", Eq(Prod(a, Succ(b)), Sum(Prod(a, b), a))),
    Schema("Induction",
           Imp(And(MF("F0"), ForAll("x", Imp(F, MF("F1")))), ForAll("x", F)), _induction),
)
SCHEMA_BY_TAG = {s.tag: s for s in SCHEMAS}
AXIOM_TAGS = tuple(s.tag for s in SCHEMAS)
ARITHMETIZED_TAGS = tuple(t for t in AXIOM_TAGS if t not in ("Pred3", "Pred4"))


@dataclass(frozen=True)
class AxiomClass:
    tag: str
    bindings: dict = field(hash=False)
    also: tuple[str, ...] = ()


def _try(schema: Schema, f: Node, desugared: bool) -> Optional[Bindings]:
    pat = desugar(schema.pattern) if desugared else schema.pattern
    bnd: Bindings = {}
    if not match(pat, f, bnd):
        return None
    if schema.check is not None and not schema.check(bnd):
        return None
    return bnd


def _all_matches(f: Node) -> list[tuple[str, Bindings]]:
    view, core = abstract(f), desugar(f)
    out = []
    for schema in SCHEMAS:
        bnd = _try(schema, view, False)
        if bnd is None:
            bnd = _try(schema, core, True)
        if bnd is not None:
            out.append((schema.tag, bnd))
    return out


def classify_axiom(f: Node) -> Optional[AxiomClass]:
    """First schema (in fixed order) that f instantiates, with its bindings."""
    hits = _all_matches(f)
    if not hits:
        return None
    tag, bnd = hits[0]
    return AxiomClass(tag, bnd, tuple(t for t, _ in hits[1:]))


def instantiate(tag: str, bindings: Bindings) -> Node:
    schema = SCHEMA_BY_TAG[tag]
    if schema.build is not None:
        return schema.build(bindings)
    return instantiate_pattern(schema.pattern, bindings)


# --- rules and proofs -------------------------------------------------------

def _gen(c: Node, p: Node) -> bool:
    # premise C⇒F, conclusion C⇒∀x(F), x not in C
    if not (isinstance(c, Imp) and isinstance(c.right, ForAll) and isinstance(p, Imp)):
        return False
    return (p.left == c.left and p.right == c.right.body
            and c.right.var not in variables(c.left))


def _spec(c: Node, p: Node) -> bool:
    # premise F⇒C, conclusion ∃x(F)⇒C, with ∃ already desugared to ¬∀¬
    if not (isinstance(c, Imp) and isinstance(p, Imp)):
        return False
    e = c.left
    if not (isinstance(e, Not) and isinstance(e.body, ForAll) and isinstance(e.body.body, Not)):
        return False
    return (p.right == c.right and p.left == e.body.body.body
            and e.body.var not in variables(c.right))


def immediate_consequence(c: Node, premises: Sequence[Node]) -> Optional[str]:
    """'MP', 'Gen' or 'Spec' if c follows from the premises by one rule."""
    cc = desugar(c)
    ps = [desugar(p) for p in premises]
    if len(ps) == 2:
        x, y = ps
        if y == Imp(x, cc) or x == Imp(y, cc):
            return "MP"
        return None
    if len(ps) == 1:
        if _gen(cc, ps[0]):
            return "Gen"
        if _spec(cc, ps[0]):
            return "Spec"
    return None


@dataclass(frozen=True)
class Justification:
    kind: str  # Axiom | Assumption | MP | Gen | Spec
    refs: tuple[int, ...]
    axiom: Optional[AxiomClass] = None


@dataclass
class CheckResult:
    ok: bool
    steps: list
    justifications: list
    error_index: Optional[int]
    reason: str

    @property
    def conclusion(self) -> Optional[Node]:
        return self.steps[-1] if self.ok and self.steps else None

    def uses(self, kind: str) -> bool:
        return any(j.kind == kind for j in self.justifications)


def check_deduction(assumptions: Sequence[Node], steps: Sequence[Node]) -> CheckResult:
    steps = list(steps)
    if not steps:
        return CheckResult(False, steps, [], 0, "empty proof")
    hyps = {desugar(h): i for i, h in enumerate(assumptions)}
    seen: dict[Node, int] = {}
    by_consequent: dict[Node, list[tuple[int, Node]]] = {}
    just: list[Justification] = []
    for i, step in enumerate(steps):
        core = desugar(step)
        j = _justify(step, core, hyps, seen, by_consequent)
        if j is None:
            return CheckResult(False, steps, just, i,
                               "neither an axiom, an assumption, nor an immediate consequence "
                               "of earlier steps")
        just.append(j)
        seen.setdefault(core, i)
        if isinstance(core, Imp):
            by_consequent.setdefault(core.right, []).append((i, core.left))
    return CheckResult(True, steps, just, None, "")


def _justify(step, core, hyps, seen, by_consequent) -> Optional[Justification]:
    cls = classify_axiom(step)
    if cls is not None:
        return Justification("Axiom", (), cls)
    if core in hyps:
        return Justification("Assumption", (hyps[core],))
    for major, minor in by_consequent.get(core, ()):
        if minor in seen:
            return Justification("MP", (seen[minor], major))
    if isinstance(core, Imp):
        r = core.right
        if isinstance(r, ForAll):
            prem = Imp(core.left, r.body)
            if prem in seen and r.var not in variables(core.left):
                return Justification("Gen", (seen[prem],))
        e = core.left
        if isinstance(e, Not) and isinstance(e.body, ForAll) and isinstance(e.body.body, Not):
            prem = Imp(e.body.body.body, core.right)
            if prem in seen and e.body.var not in variables(core.right):
                return Justification("Spec", (seen[prem],))
    return None


def check_proof(steps: Sequence[Node]) -> CheckResult:
    return check_deduction((), steps)


def check_contradiction(p1: CheckResult, p2: CheckResult) -> bool:
    """True iff p2 concludes the negation of p1's conclusion."""
    if not (p1.ok and p2.ok):
        raise ValueError("both proofs must be valid")
    return desugar(p2.conclusion) == Not(desugar(p1.conclusion))


# --- proof files ------------------------------------------------------------

def load_proof(text: str) -> tuple[list[Node], list[Node]]:
    """Parse proof-file text: one formula per line, '#' comments, 'assume:' lines."""
    assumptions: list[Node] = []
    steps: list[Node] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        target = steps
        if line.startswith("assume:"):
            line = line[len("assume:"):].strip()
            target = assumptions
        try:
            target.append(parse(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return assumptions, steps


def load_proof_file(path) -> tuple[list[Node], list[Node]]:
    return load_proof(Path(path).read_text(encoding="utf-8"))


# --- instance generators ----------------------------------------------------

def random_term(rng: random.Random, depth: int, nvars: int = 4) -> Node:
    r = rng.random()
    if depth <= 0 or r < 0.35:
        pick = rng.randrange(3)
        if pick == 0:
            return Zero()
        if pick == 1:
            return Num(rng.randint(1, 3))
        return Var(rng.randint(1, nvars))
    kind = rng.randrange(3)
    if kind == 0:
        return Succ(random_term(rng, depth - 1, nvars))
    op = Sum if kind == 1 else Prod
    return op(random_term(rng, depth - 1, nvars), random_term(rng, depth - 1, nvars))


def random_formula(rng: random.Random, depth: int, nvars: int = 4) -> Node:
    """Random abstract core formula; left operands of ⇒ are never implications,
    so the canonical string is a well-formed formula of the code grammar."""
    if depth <= 0 or rng.random() < 0.3:
        return Eq(random_term(rng, 2, nvars), random_term(rng, 2, nvars))
    kind = rng.randrange(3)
    if kind == 0:
        return Not(random_formula(rng, depth - 1, nvars))
    if kind == 1:
        return ForAll(rng.randint(1, nvars), random_formula(rng, depth - 1, nvars))
    left = random_formula(rng, depth - 1, nvars)
    if isinstance(left, Imp):
        left = Not(Not(left))
    return Imp(left, random_formula(rng, depth - 1, nvars))


def unit_formula(rng: random.Random, depth: int = 2, nvars: int = 4) -> Node:
    """Canonical formula whose string is an atom, ¬(…) or ∀v(…)."""
    f = random_formula(rng, depth, nvars)
    if isinstance(f, Imp):
        f = Not(f) if rng.random() < 0.5 else ForAll(rng.randint(1, nvars), f)
    return canonicalize(f)


def postfix_term(rng: random.Random, nvars: int = 4) -> Node:
    """Canonical term that stays intact when followed by ′, +, · or =."""
    pick = rng.randrange(4)
    if pick == 0:
        return Zero()
    if pick == 1:
        return Num(rng.randint(1, 3))
    if pick == 2:
        return Var(rng.randint(1, nvars))
    return canonicalize(Succ(random_term(rng, 2, nvars)))


TEMPLATES = {
    "Prop1": "{a}⇒({b}⇒{a})",
    "Prop2": "({a}⇒{b})⇒(({a}⇒({b}⇒{c}))⇒({a}⇒{c}))",
    "Prop3": "{a}⇒(({a}⇒{b})⇒{b})",
    "Prop4": "{a}⇒({b}⇒{a}∧{b})",
    "Prop5": "{a}∧{b}⇒{a}",
    "Prop6": "{a}∧{b}⇒{b}",
    "Prop7": "{a}⇒{a}∨{b}",
    "Prop8": "{b}⇒{a}∨{b}",
    "Prop9": "({a}⇒{c})⇒(({b}⇒{c})⇒({a}∨{b}⇒{c}))",
    "Prop10": "({a}⇒{b})⇒(({a}⇒¬{b})⇒¬{a})",
    "Prop11": "¬¬{a}⇒{a}",
    "Pred1": "({b}⇒{a})⇒({b}⇒(∀{c}{a}))",
    "Pred2": "∀{b}{a}⇒{c}",
    "Pred3": "{c}⇒∃{b}{a}",
    "Pred4": "({a}⇒{b})⇒(∃{c}{a}⇒{b})",
    "Nat1": "({a}′={b}′)⇒({a}={b})",
    "Nat2": "¬({a}′=0)",
    "Nat3": "{a}={b}⇒({a}={c}⇒{b}={c})",
    "Nat4": "{a}={b}⇒{a}′={b}′",
    "Nat5": "{a}+0={a}",
    "Nat6": "{a}+{b}′=({a}+{b})′",
    "Nat7": "{a}·0=0",
    "Nat8": "{a}·{b}′={a}·{b}+{a}",
    "Induction": "({s0}∧∀{c}({sc}⇒{sc1}))⇒∀{c}{sc}",
}
SUB_TEMPLATE = "∀{x}(({x}={y})⇒({a}))"


def _s(node: Node) -> str:
    return to_symbols(node)


def _var_s(k: int) -> str:
    return _s(Var(k))


def generate_instance(tag: str, rng: random.Random) -> Node:
    """A concrete axiom instance whose symbol string follows the code template."""
    tpl = TEMPLATES[tag]
    if tag.startswith("Prop"):
        parts = {k: _s(unit_formula(rng)) for k in "abc"}
        return parse(tpl.format(**parts))
    if tag.startswith("Nat"):
        parts = {k: _s(postfix_term(rng)) for k in "abc"}
        return parse(tpl.format(**parts))
    if tag == "Pred1":
        while True:
            fa, fb = unit_formula(rng), unit_formula(rng)
            free = [k for k in range(1, 6) if k not in variables(fb)]
            if free:
                x = rng.choice(free)
                return parse(tpl.format(a=_s(fa), b=_s(fb), c=_var_s(x)))
    if tag in ("Pred2", "Pred3"):
        while True:
            f = unit_formula(rng)
            bound = {n.var for n in _walk(f) if isinstance(n, (ForAll, Exists))}
            cands = sorted(free_vars(f) - bound)
            if not cands:
                continue
            x = rng.choice(cands)
            t = postfix_term(rng)
            # a numeral dropped into "((x))" would read back as a variable
            if isinstance(t, Num) or x in variables(t) or variables(t) & bound:
                continue
            fs = _s(f)
            g = fs.replace(_var_s(x), _s(t))
            return parse(tpl.format(a=fs, b=_var_s(x), c=g))
    if tag == "Pred4":
        while True:
            fa, fb = unit_formula(rng), unit_formula(rng)
            free = [k for k in range(1, 6) if k not in variables(fb)]
            if free:
                return parse(tpl.format(a=_s(fa), b=_s(fb), c=_var_s(rng.choice(free))))
    if tag == "Induction":
        while True:
            body = _s(canonicalize(random_formula(rng, 2)))
            bv, cv = rng.sample(range(1, 7), 2)
            if _var_s(cv) in body:
                continue
            sub = lambda y: SUB_TEMPLATE.format(x=_var_s(bv), y=y, a=body)  # noqa: E731
            c_s = _var_s(cv)
            return parse(tpl.format(s0=sub("0"), c=c_s, sc=sub(c_s), sc1=sub(c_s + "′")))
    raise KeyError(tag)


def _walk(f: Node) -> Iterable[Node]:
    stack = [f]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(n.children())


def random_non_axiom(rng: random.Random, depth: int = 3) -> Optional[Node]:
    """A canonical formula that no schema classifies, or None on a hit."""
    f = canonicalize(random_formula(rng, depth))
    return None if classify_axiom(f) is not None else f
