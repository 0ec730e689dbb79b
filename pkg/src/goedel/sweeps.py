"""Exhaustive and sampled agreement checks between independent evaluators.

Each sweep returns a `SweepReport`; `disagreements` lists the first few
inputs where two sides differ, sorted by code.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import arith
from . import syntax as syn
from .calculus import AXIOM_TAGS, ARITHMETIZED_TAGS, classify_axiom, generate_instance, random_non_axiom
from .numbering import DecodeError, decode

SYNTAX_CLASSES = ("Var", "Num", "Succ", "Term", "Atom", "Form")
_KEEP = 20


@dataclass
class SweepReport:
    name: str
    checked: int = 0
    disagreement_count: int = 0
    disagreements: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.disagreement_count == 0

    def record(self, item) -> None:
        self.disagreement_count += 1
        if len(self.disagreements) < _KEEP:
            self.disagreements.append(item)


def parser_classes(x: int) -> dict[str, bool]:
    """Classification of decode(x) by the parser-based recognizers."""
    try:
        s = decode(x)
    except DecodeError:
        return dict.fromkeys(SYNTAX_CLASSES, False)
    return {"Var": syn.is_var_string(s), "Num": syn.is_num_string(s),
            "Succ": syn.is_succ_string(s), "Term": syn.is_term_string(s),
            "Atom": syn.is_atom_string(s), "Form": syn.is_form_string(s)}


def arith_classes(x: int) -> dict[str, bool]:
    """Classification of x by the arithmetized predicates."""
    out = {name: arith.eval_bounded(name, [x]) for name in ("Var", "Num", "Succ", "Atom")}
    for name in ("Term", "Form"):
        out[name] = bool(arith.eval_searched(name, [x]).value)
    return out


def syntax_oracle(limit: int = 1 << 18, start: int = 0) -> SweepReport:
    """arith vs parser on every code in [start, limit)."""
    rep = SweepReport("syntax-oracle")
    positives = dict.fromkeys(SYNTAX_CLASSES, 0)
    for x in range(start, limit):
        want, got = parser_classes(x), arith_classes(x)
        rep.checked += 1
        for k in SYNTAX_CLASSES:
            positives[k] += want[k]
            if want[k] != got[k]:
                rep.record((x, k, got[k], want[k]))
    rep.notes["positives"] = positives
    return rep


def axiom_coherence(per_schema: int = 1000, negatives: int = 10_000, seed: int = 0,
                    tags=ARITHMETIZED_TAGS) -> SweepReport:
    """classify_axiom vs entry-27 Axiom on generated instances and random non-axioms.

    Instances of a schema outside `tags` are still generated and classified;
    how often Axiom accepts them goes to `notes`.
    """
    rep = SweepReport("axiom-coherence")
    rng = random.Random(seed)
    for tag in AXIOM_TAGS:
        accepted = 0
        for _ in range(per_schema):
            f = generate_instance(tag, rng)
            s = syn.to_symbols(f)
            cls = classify_axiom(f) is not None
            ax = arith.eval_bounded("Axiom", [s])
            accepted += ax
            if tag in tags:
                rep.checked += 1
                if not (cls and ax):
                    rep.record((tag, s, cls, ax))
            elif not cls:
                rep.record((tag, s, cls, ax))
        if tag not in tags:
            rep.notes[f"{tag} accepted by Axiom"] = f"{accepted}/{per_schema}"
    n = 0
    while n < negatives:
        f = random_non_axiom(rng)
        if f is None:
            continue
        n += 1
        rep.checked += 1
        s = syn.print_canonical(f)
        if arith.eval_bounded("Axiom", [s]):
            rep.record(("non-axiom", s, False, True))
    return rep
