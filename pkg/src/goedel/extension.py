"""The finite tower S⁽⁰⁾ ⊂ S⁽¹⁾ ⊂ … of Rosser extensions.

Stage n+1 adds A₍ₙ₎, which is the stage-n Rosser sentence or its negation, as
a new axiom.  The axiom predicate of stage n+1 is

    Axiom⁽ⁿ⁺¹⁾(x) = Axiom(x) ∨ x = q̂(0)‾ ∨ … ∨ x = q̂(n)‾

where q̂(k) is the Gödel number of A₍ₖ₎.  Every template that depends on the
axiom predicate (Proof, Pr, Re, g, h) is copied with that predicate swapped
in, and the stage Rosser sentence is built on the copies.

No q̂(k) can be computed: A₍ₖ₎ contains the numeral of q⁽ᵏ⁾, which has q⁽ᵏ⁾
symbols.  So each one is a named number in the builders' sense, and its
size is known as an affine form over earlier named numbers.  `Tower` orders
such numbers through the domination argument in `Tower.compare`.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Union

from . import builders as b
from .builders import DefDag, Placeholder, QLinear, SymLinear
from .calculus import classify_axiom
from .numbering import decode, encode
from .syntax import Node, ParseError, parse, print_canonical

AFFIRM, NEGATE = "affirm", "negate"
POLARITIES = (AFFIRM, NEGATE)
MAX_STAGE = 4

# the templates rebuilt at every stage, in dependency order
STAGE_RELATIVE = ("Proof", "Pr", "Re", "g", "h")

Size = Union[int, SymLinear]


class Undetermined(ValueError):
    """Two named numbers whose order the domination argument cannot settle."""


# --- ordering named numbers ---------------------------------------------------------

_CAP = 1 << 256  # lower bounds saturate here; still valid as lower bounds


class Tower:
    """Named numbers, each known through the bit length of its value.

    Names are registered in order; a bit length may mention only earlier
    names.  Exact values are stored as ints and never enter an expression.
    """

    def __init__(self):
        self._bits: dict[str, Size] = {}
        self._order: dict[str, int] = {}

    def copy(self) -> "Tower":
        out = Tower()
        out._bits, out._order = dict(self._bits), dict(self._order)
        return out

    def register(self, label: str, bits: Size) -> None:
        if label in self._bits:
            raise ValueError(f"{label} is already registered")
        if isinstance(bits, SymLinear):
            unknown = [k for k in bits.labels() if k not in self._bits]
            if unknown:
                raise ValueError(f"{label} refers to unregistered {unknown}")
        self._bits[label] = bits
        self._order[label] = len(self._order)

    def __contains__(self, label: str) -> bool:
        return label in self._bits

    def bits(self, label: str) -> Size:
        return self._bits[label]

    def labels(self) -> list[str]:
        return list(self._bits)

    def min_bits(self, label: str) -> int:
        """A lower bound on the bit length (saturating at 2²⁵⁶)."""
        e = self._bits[label]
        if isinstance(e, int):
            return e
        total = e.base
        for k, c in e.terms:
            lb = self.min_bits(k)
            total += c * (_CAP if lb > 257 else 1 << (lb - 1))
            if total >= _CAP:
                return _CAP
        return total

    def _dominated(self, i: str, j: str) -> bool:
        # j's bit length has a positive coefficient on i, directly or through a chain,
        # so j ≥ 2^(i - 1)
        e = self._bits[j]
        if not isinstance(e, SymLinear):
            return False
        return any(c > 0 and (k == i or self._dominated(i, k)) for k, c in e.terms)

    def sign(self, base: int, terms: dict[str, int]) -> int:
        """Sign of base + Σ c·L over named numbers L.

        The term of the latest name with a nonzero coefficient decides,
        provided every other term is dominated by it: the constant has far
        fewer bits, and each other name L' is dominated (latest ≥ 2^(L'-1)).
        """
        live = {k: c for k, c in terms.items() if c}
        if not live:
            return (base > 0) - (base < 0)
        top = max(live, key=self._order.__getitem__)
        top_min = self.min_bits(top)
        if abs(base).bit_length() + 64 >= top_min:
            raise Undetermined(f"constant not dominated by {top}")
        for k, c in live.items():
            if k == top:
                continue
            if abs(c) >= 1 << 32 or self.min_bits(k) < 80 or not self._dominated(k, top):
                raise Undetermined(f"{k} not dominated by {top}")
        return 1 if live[top] > 0 else -1

    def compare_sizes(self, x: Size, y: Size) -> int:
        """Sign of x - y for bit lengths (or symbol counts)."""
        terms: dict[str, int] = {}
        base = 0
        for e, s in ((x, 1), (y, -1)):
            if isinstance(e, int):
                base += s * e
            else:
                base += s * e.base
                for k, c in e.terms:
                    terms[k] = terms.get(k, 0) + s * c
        return self.sign(base, terms)

    def compare(self, x: Union[int, str], y: Union[int, str]) -> int:
        """Sign of x - y; ints are exact values, strs are registered names."""
        if isinstance(x, int) and isinstance(y, int):
            return (x > y) - (x < y)
        bx = x.bit_length() if isinstance(x, int) else self._bits[x]
        by = y.bit_length() if isinstance(y, int) else self._bits[y]
        s = self.compare_sizes(bx, by)
        if s == 0:
            raise Undetermined(f"{x} and {y} have the same bit length")
        return s


# --- stages --------------------------------------------------------------------------

@dataclass(frozen=True)
class AddedAxiom:
    k: int
    polarity: str
    template: str              # closed template in the stage DAG
    label: str                 # name of q̂(k) in the tower
    qhat: Placeholder          # sizes of the code of A₍ₖ₎


@dataclass(frozen=True)
class Stage:
    n: int
    added: tuple
    dag: DefDag = field(repr=False, compare=False)
    tower: Tower = field(repr=False, compare=False)

    def axiom_name(self) -> str:
        return _sfx("Axiom", self.n)

    def name(self, template: str) -> str:
        return _sfx(template, self.n) if template in STAGE_RELATIVE else template

    @property
    def polarities(self) -> tuple:
        return tuple(a.polarity for a in self.added)


def _sfx(name: str, n: int) -> str:
    return name if n == 0 else f"{name}^({n})"


_LIBRARY: Optional[DefDag] = None


def _library() -> DefDag:
    global _LIBRARY
    if _LIBRARY is None:
        _LIBRARY = b.build_library()
    return _LIBRARY


def base_stage(dag: Optional[DefDag] = None) -> Stage:
    """S⁽⁰⁾: the base axioms, nothing added."""
    dag = (dag or _library()).copy()
    for need in ("Axiom", *STAGE_RELATIVE):
        dag.lookup(need)
    return Stage(0, (), dag, Tower())


def rosser_at(s: Stage, guard: int = b.DIAGONAL_GUARD) -> b.DiagonalSentence:
    """The stage-relative Rosser sentence built on g⁽ⁿ⁾, h⁽ⁿ⁾."""
    return b.build_rosser(s.dag, guard, g=s.name("g"), h=s.name("h"),
                          suffix="" if s.n == 0 else f"^({s.n})")


def extend(s: Stage, polarity: str = AFFIRM, guard: int = b.DIAGONAL_GUARD,
           rosser: Optional[b.DiagonalSentence] = None) -> Stage:
    """Stage n+1: add the stage-n Rosser sentence (or its negation) as an axiom."""
    if polarity not in POLARITIES:
        raise ValueError(f"polarity must be one of {POLARITIES}")
    if s.n >= MAX_STAGE:
        raise ValueError(f"only stages up to {MAX_STAGE} are built")
    if len(s.added) != s.n:
        raise ValueError("invalid stage")
    r = rosser or rosser_at(s, guard)
    n = s.n
    tower = s.tower.copy()
    dag = r.dag.copy()

    # q⁽ⁿ⁾ is exact at stage 0 when under the guard; otherwise it gets a name
    q: Optional[int] = r.number if isinstance(r.number, int) else None
    q_label = f"q{n}"
    if q is None:
        tower.register(q_label, r.number.bit_length)

    template = f"A_({n})"
    body = b.R(r.sentence) if polarity == AFFIRM else b.Not(b.R(r.sentence))
    dag.define(template, (), body, reserve=1)
    st = b.stats(dag, template, guard=0, q=q)
    qhat = Placeholder(_rename_q(st.bit_length, q_label), _rename_q(st.expanded_symbol_count, q_label))
    label = f"q̂{n}"
    tower.register(label, qhat.bit_length)
    added = s.added + (AddedAxiom(n, polarity, template, label, qhat),)

    m = n + 1
    dag.define(f"IsA_({n})", ("x",), b.Eq("x", b.Named(label)))
    dag.define(_sfx("Axiom", m), ("x",),
               b.Or(b.R("Axiom", "x"), *[b.R(f"IsA_({k})", "x") for k in range(m)]))
    mapping = {"Axiom": _sfx("Axiom", m), **{t: _sfx(t, m) for t in STAGE_RELATIVE}}
    for t in STAGE_RELATIVE:
        d = dag.lookup(t)
        dag.define(mapping[t], d.params, _rename(d.body, mapping), d.item, d.reserve)
    return Stage(m, added, dag, tower)


def _rename_q(e, label: str) -> Size:
    if isinstance(e, QLinear):
        return SymLinear(e.base, ((label, e.per_q),))
    if isinstance(e, SymLinear) and e.coef("q"):
        terms = dict(e.terms)
        terms[label] = terms.pop("q")
        return SymLinear(e.base, tuple(sorted(terms.items())))
    return e


def _rename(f, mapping: dict):
    """The DSL expression f with references renamed."""
    if isinstance(f, (str, int)):
        return f
    if isinstance(f, b.R):
        return b.R(mapping.get(f.name, f.name), *[_rename(a, mapping) for a in f.args])
    if isinstance(f, b.Fn):
        return b.Fn(mapping.get(f.name, f.name), *[_rename(a, mapping) for a in f.args])
    if isinstance(f, b.StarT):
        return b.StarT(*[_rename(a, mapping) for a in f.parts])
    if isinstance(f, b.Star):
        return b.Star(_rename(f.z, mapping), *[_rename(a, mapping) for a in f.parts])
    if isinstance(f, (b.And, b.Or)):
        return type(f)(*[_rename(g, mapping) for g in f.fs])
    fields = getattr(f, "__dataclass_fields__", None)
    if fields is None:
        raise TypeError(f"cannot rename inside {f!r}")
    return type(f)(**{k: _rename(getattr(f, k), mapping) for k in fields})


def build_tower(polarities=(), dag: Optional[DefDag] = None,
                guard: int = b.DIAGONAL_GUARD) -> list[Stage]:
    """Stages 0..len(polarities), each extending the previous one."""
    stages = [base_stage(dag)]
    for p in polarities:
        stages.append(extend(stages[-1], p, guard))
    return stages


# --- axiom recognition ---------------------------------------------------------------

AxiomInput = Union[Node, int, str, AddedAxiom]


def is_axiom_at_stage(s: Stage, f: AxiomInput) -> bool:
    """Base axiom, or one of the added A₍ₖ₎.

    An added axiom can be named by its handle or template name.  A formula
    or code r is compared with the A₍ₖ₎ whose q̂(k) ≤ r; since no q̂(k) can
    be written out, that comparison settles on sizes.
    """
    if isinstance(f, AddedAxiom):
        return f.k < s.n and s.added[f.k] == f
    if isinstance(f, str) and f.startswith("A_("):
        return any(a.template == f for a in s.added)
    if isinstance(f, str):
        f = parse(f)
    if isinstance(f, int):
        r = f
        node = _formula_of(r)
    else:
        node = f
        r = encode(print_canonical(f)) if _printable(f) else None
    if node is not None and classify_axiom(node) is not None:
        return True
    if r is None:
        return False
    # q̂ increases with k, so only a prefix of the added axioms can equal r
    for a in s.added:
        if s.tower.compare(a.label, r) > 0:
            break
        raise Undetermined(f"{a.label} <= r: equality would need the value of {a.label}")
    return False


def _formula_of(r: int) -> Optional[Node]:
    try:
        return parse(decode(r))
    except (ParseError, ValueError):
        return None


def _printable(f: Node) -> bool:
    try:
        print_canonical(f)
        return True
    except ValueError:
        return False


def added_axioms(s: Stage) -> list[str]:
    """The disjuncts of the stage axiom predicate beyond the base one."""
    if s.n == 0:
        return []
    return [ref for ref in s.dag.direct_dependencies(s.axiom_name()) if ref != "Axiom"]


# --- descriptors -----------------------------------------------------------------------

def _fmt_int(x: int) -> str:
    if x.bit_length() <= 256:
        return str(x)
    h = hashlib.sha256(x.to_bytes((x.bit_length() + 7) // 8, "big")).hexdigest()[:32]
    return f"<{x.bit_length()}-bit:{h}>"


def _fmt_size(e: Size) -> str:
    if isinstance(e, int):
        return _fmt_int(e)
    return " + ".join([_fmt_int(e.base)] + [f"{c}*{k}" for k, c in e.terms])


def describe(s: Stage) -> str:
    """Text record of a stage: index, polarities and the size of every q̂."""
    lines = [f"stage {s.n}", "polarities " + " ".join(s.polarities or ("-",))]
    for label in s.tower.labels():
        lines.append(f"bits {label} = {_fmt_size(s.tower.bits(label))}")
    return "\n".join(lines) + "\n"


def load_stage(text: str, dag: Optional[DefDag] = None,
               guard: int = b.DIAGONAL_GUARD) -> Stage:
    """Rebuild the stage a record describes and check that the record matches."""
    fields = dict(line.split(" ", 1) for line in text.strip().splitlines() if " " in line)
    try:
        n = int(fields["stage"])
        pols = [p for p in fields["polarities"].split() if p != "-"]
    except (KeyError, ValueError):
        raise ValueError("not a stage record") from None
    if len(pols) != n or any(p not in POLARITIES for p in pols):
        raise ValueError("stage record has a bad polarity list")
    s = build_tower(pols, dag, guard)[-1]
    if describe(s).strip() != text.strip():
        raise ValueError("stage record does not match the rebuilt stage")
    return s
