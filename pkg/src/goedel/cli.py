"""Command-line entry point.

Exit status: 0 success or true, 1 false or invalid input, 2 usage error,
3 unknown (search budget, size guard or fuel exhausted).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

from . import arith, builders, calculus, extension, recfun, sweeps
from . import syntax as syn
from .numbering import SYMBOLS, DecodeError, GuardError, decode, encode

OK, FALSE, USAGE, UNKNOWN = 0, 1, 2, 3


@dataclass
class Config:
    guard: int = syn.EXPANSION_GUARD
    budget: int = arith.SearchBudget().fuel
    limit: int = 1 << 18
    format: str = "text"

    def __post_init__(self):
        if self.guard <= 0 or self.budget <= 0 or self.limit <= 0:
            raise ValueError("limits must be positive")
        if self.format not in ("text", "json"):
            raise ValueError("format is text or json")


def load_config(path: Optional[str]) -> dict:
    """key=value lines; '#' starts a comment."""
    if path is None:
        return {}
    out = {}
    names = {f.name: f.type for f in fields(Config)}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in names:
            raise ValueError(f"{path}:{lineno}: expected one of {sorted(names)} = value")
        out[key] = value if key == "format" else int(value, 0)
    return out


class _Out:
    def __init__(self, fmt: str, stream):
        self.fmt, self.stream = fmt, stream

    def emit(self, text: str, **data) -> None:
        if self.fmt == "json":
            print(json.dumps(data, ensure_ascii=False, default=str, sort_keys=True), file=self.stream)
        else:
            print(text, file=self.stream)


# --- argument helpers -----------------------------------------------------------------

def _symbols(text: str) -> str:
    """Symbol-alphabet text as is; anything else goes through the ASCII surface."""
    return text if all(c in SYMBOLS for c in text) else syn.ascii_to_symbols(text)


def _code_arg(text: str):
    """A decimal/0b/0x number is a code; other text is read as an expression."""
    try:
        return int(text, 0)
    except ValueError:
        return _symbols(text)


def _show_code(x: int) -> str:
    if x.bit_length() > 4096:
        return f"<{x.bit_length()}-bit number>"
    return str(x)


# --- commands -----------------------------------------------------------------------------

def cmd_encode(a, cfg, out) -> int:
    s = _symbols(a.text)
    x = encode(s)
    out.emit(f"{x} / {bin(x)}", code=x, binary=bin(x), symbols=s)
    return OK


def cmd_decode(a, cfg, out) -> int:
    try:
        s = decode(int(a.code, 0))
    except DecodeError as exc:
        out.emit(f"not a code: {exc}", symbols=None, error=str(exc))
        return FALSE
    if not s:
        out.emit("ε (empty expression)", symbols="", ascii="")
    else:
        out.emit(f"{s}\n{syn.render(s)}", symbols=s, ascii=syn.render(s))
    return OK


def cmd_parse(a, cfg, out) -> int:
    node = syn.parse(a.text)
    kind = "term" if syn.is_term(node) else "formula"
    out.emit(f"{kind}: {node!r}", kind=kind, tree=repr(node),
             free_vars=sorted(syn.free_vars(node)))
    return OK


def cmd_print(a, cfg, out) -> int:
    node = syn.desugar(syn.parse(a.text))  # ∧, ∨ and ∃ have no codes of their own
    s = syn.print_canonical(node, cfg.guard)
    text = syn.render(s) if a.ascii else s
    out.emit(text, symbols=s, ascii=syn.render(s))
    return OK


def _report_check(res, out) -> int:
    lines = []
    for i, j in enumerate(res.justifications):
        how = j.kind if j.axiom is None else f"Axiom {j.axiom.tag}"
        refs = ", ".join(str(r + 1) for r in j.refs)
        lines.append(f"{i + 1:4d}  {how}" + (f" from {refs}" if refs else ""))
    if res.ok:
        lines.append(f"valid: {len(res.steps)} step(s)")
    else:
        lines.append(f"invalid at step {res.error_index + 1}: {res.reason}")
    out.emit("\n".join(lines), ok=res.ok, error_index=res.error_index, reason=res.reason,
             justifications=[(j.kind, j.refs, j.axiom.tag if j.axiom else None)
                             for j in res.justifications])
    return OK if res.ok else FALSE


def cmd_check_proof(a, cfg, out) -> int:
    assumptions, steps = calculus.load_proof_file(a.file)
    if assumptions:
        out.emit("invalid: a proof has no assumptions (use check-deduction)", ok=False)
        return FALSE
    return _report_check(calculus.check_proof(steps), out)


def cmd_check_deduction(a, cfg, out) -> int:
    assumptions, steps = calculus.load_proof_file(a.file)
    return _report_check(calculus.check_deduction(assumptions, steps), out)


def cmd_eval(a, cfg, out) -> int:
    p = arith.lookup(a.pred)
    args = [_code_arg(x) for x in a.args]
    if p.kind == "function":
        v = p.fast(*args)
        out.emit(_show_code(v), value=v)
        return OK
    if p.kind == "meta":
        f = arith.eval_G if p.name == "Gpred" else arith.eval_H
        if len(args) != 2:
            raise ValueError(f"{p.name} takes 2 argument(s), got {len(args)}")
        v = f(*args)
    elif p.kind == "searched":
        budget = arith.SearchBudget(fuel=cfg.budget)
        r = arith.eval_searched(p.name, args, budget)
        if r.value is None:
            out.emit(f"unknown ({r.note})", value=None, note=r.note)
            return UNKNOWN
        v = r.value
        if r.note:
            out.emit(f"note: {r.note}", note=r.note) if cfg.format == "text" else None
    else:
        v = arith.eval_bounded(p.name, args, a.mode)
    out.emit("true" if v else "false", value=v)
    return OK if v else FALSE


def _stats_line(st) -> str:
    fv = ",".join(map(str, sorted(st.free_vars))) or "none"
    num = "" if st.godel_number is None else f"  code={_show_code(st.godel_number)}"
    return (f"{st.name}: symbols={st.expanded_symbol_count}  bits={st.bit_length}  "
            f"free={{{fv}}}{num}")


def cmd_build(a, cfg, out) -> int:
    lib = builders.build_library()
    build = builders.build_rosser if a.kind == "rosser" else builders.build_goedel
    d = build(lib, a.number_guard)
    q = d.number if isinstance(d.number, int) else None
    mat = builders.stats(d.dag, d.matrix, guard=0)
    sent = builders.stats(d.dag, d.sentence, guard=0, q=q)
    if a.emit == "code":
        if q is None:
            out.emit(f"unknown: {d.number}", number=None)
            return UNKNOWN
        out.emit(hex(q), number=hex(q))
    elif a.emit == "tree":
        lines = []
        for name in d.dag.names():
            st = builders.stats(d.dag, name, guard=0)
            deps = " ".join(d.dag.direct_dependencies(name))
            lines.append(f"{name}({', '.join(d.dag.lookup(name).params)}) "
                         f"symbols={st.expanded_symbol_count}" + (f"  uses {deps}" if deps else ""))
        out.emit("\n".join(lines), names=d.dag.names())
    else:
        number = _show_code(q) if q is not None else str(d.number)
        out.emit(f"{d.kind}\n{_stats_line(mat)}\n{_stats_line(sent)}\nnumber: {number}",
                 kind=d.kind, matrix=_stats_dict(mat), sentence=_stats_dict(sent),
                 number_bits=q.bit_length() if q is not None else d.number.bit_length)
    if a.expand:
        try:
            text = builders.expansion_text(d.dag, d.sentence, cfg.guard, q)
        except GuardError as exc:
            out.emit(f"unknown: {exc}", expansion=None)
            return UNKNOWN
        out.emit(text, expansion=text)
    return OK


def _stats_dict(st) -> dict:
    return {"name": st.name, "symbols": str(st.expanded_symbol_count),
            "bits": str(st.bit_length), "free_vars": sorted(st.free_vars)}


def _polarities(a, n: int) -> list[str]:
    given = [p for chunk in (a.polarity or []) for p in chunk.split(",") if p]
    if len(given) > n:
        raise ValueError(f"{len(given)} polarities for {n} stage(s)")
    return given + [extension.AFFIRM] * (n - len(given))


def _stage(a) -> extension.Stage:
    if a.load:
        return extension.load_stage(Path(a.load).read_text(encoding="utf-8"))
    if a.n is None:
        raise ValueError("give a stage number or --load")
    if not 0 <= a.n <= extension.MAX_STAGE:
        raise ValueError(f"stages run from 0 to {extension.MAX_STAGE}")
    return extension.build_tower(_polarities(a, a.n))[-1]


def cmd_stage_build(a, cfg, out) -> int:
    s = _stage(a)
    text = extension.describe(s)
    labels = [x.label for x in s.added]
    order = [f"{x} < {y}" for x, y in zip(labels, labels[1:]) if s.tower.compare(x, y) < 0]
    if a.save:
        Path(a.save).write_text(text, encoding="utf-8")
    out.emit(text.rstrip("\n") + "".join(f"\norder {o}" for o in order),
             stage=s.n, polarities=list(s.polarities), record=text, order=order)
    return OK


def cmd_stage_check(a, cfg, out) -> int:
    s = _stage(a)
    f = a.formula
    target = f if f.startswith("A_(") else _code_arg(f)
    if isinstance(target, str) and not f.startswith("A_("):
        target = syn.parse(target)
    try:
        v = extension.is_axiom_at_stage(s, target)
    except extension.Undetermined as exc:
        out.emit(f"unknown: {exc}", value=None)
        return UNKNOWN
    out.emit("axiom" if v else "not an axiom", value=v, stage=s.n)
    return OK if v else FALSE


def cmd_recfun_eval(a, cfg, out) -> int:
    defs = recfun.load_definitions(a.file)
    if not defs:
        raise ValueError("no definitions in file")
    name = a.name or list(defs)[-1]
    if name not in defs:
        raise ValueError(f"no definition named {name!r}")
    fuel = a.fuel if a.fuel is not None else cfg.budget
    v = recfun.evaluate(defs[name], [int(x) for x in a.args], fuel)
    if v is recfun.NoResult:
        out.emit(f"no result within fuel {fuel}", value=None)
        return UNKNOWN
    out.emit(str(v), value=v, name=name)
    return OK


def cmd_sweep(a, cfg, out) -> int:
    if a.which == "syntax-oracle":
        rep = sweeps.syntax_oracle(cfg.limit)
    else:
        rep = sweeps.axiom_coherence(a.per_schema, a.negatives, a.seed)
    bad = sorted(rep.disagreements, key=str)
    lines = [f"{rep.name}: checked {rep.checked}, disagreements {rep.disagreement_count}"]
    lines += [f"  {k}: {v}" for k, v in sorted(rep.notes.items())]
    lines += [f"  differs: {d}" for d in bad]
    out.emit("\n".join(lines), name=rep.name, checked=rep.checked,
             disagreements=rep.disagreement_count, examples=bad, notes=rep.notes)
    return OK if rep.ok else FALSE


# --- parser ------------------------------------------------------------------------------

def _global_options(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--config", default=default, help="key=value file (guard, budget, limit, format)")
    p.add_argument("--guard", type=int, default=default,
                   help="largest expansion to materialize, in symbols")
    p.add_argument("--budget", type=int, default=default, help="fuel for unbounded searches")
    p.add_argument("--limit", type=int, default=default, help="sweep range (codes below this)")
    p.add_argument("--format", choices=("text", "json"), default=default)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="goedel", description="Gödel numbering, proof checking, "
                                "arithmetized syntax and undecidable sentences.")
    _global_options(p, None)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, argparse.SUPPRESS)  # the same options after the subcommand
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *args, **kw: _add(*args, parents=[common], **kw)

    c = sub.add_parser("encode", help="Gödel number of an expression")
    c.add_argument("text")
    c.set_defaults(func=cmd_encode)
    c = sub.add_parser("decode", help="expression with a given Gödel number")
    c.add_argument("code")
    c.set_defaults(func=cmd_decode)
    c = sub.add_parser("parse", help="parse tree of an expression")
    c.add_argument("text")
    c.set_defaults(func=cmd_parse)
    c = sub.add_parser("print", help="canonical symbol string of an expression")
    c.add_argument("text")
    c.add_argument("--ascii", action="store_true")
    c.set_defaults(func=cmd_print)
    c = sub.add_parser("check-proof", help="check a proof file")
    c.add_argument("file")
    c.set_defaults(func=cmd_check_proof)
    c = sub.add_parser("check-deduction", help="check a deduction with 'assume:' lines")
    c.add_argument("file")
    c.set_defaults(func=cmd_check_deduction)
    c = sub.add_parser("eval", help="evaluate an arithmetized predicate")
    c.add_argument("pred")
    c.add_argument("args", nargs="*")
    c.add_argument("--mode", choices=("fast", "literal"), default="fast")
    c.set_defaults(func=cmd_eval)
    c = sub.add_parser("build", help="build the Rosser or Gödel sentence")
    c.add_argument("kind", choices=("rosser", "goedel"))
    c.add_argument("--expand", action="store_true", help="also print the diagonal sentence")
    c.add_argument("--emit", choices=("stats", "tree", "code"), default="stats")
    c.add_argument("--number-guard", type=int, default=builders.DIAGONAL_GUARD,
                   help="compute the diagonal number when it has at most this many bits")
    c.set_defaults(func=cmd_build)

    st = sub.add_parser("stage", help="extension tower").add_subparsers(dest="action", required=True)
    _st_add = st.add_parser
    st.add_parser = lambda *args, **kw: _st_add(*args, parents=[common], **kw)
    for name, func in (("build", cmd_stage_build), ("axiom-check", cmd_stage_check)):
        c = st.add_parser(name)
        c.add_argument("n", type=int, nargs="?" if name == "build" else None)
        if name == "axiom-check":
            c.add_argument("formula", help="formula, code, or added-axiom name such as A_(0)")
        c.add_argument("--polarity", action="append",
                       help="affirm or negate per added axiom (comma list or repeated)")
        c.add_argument("--load", help="stage record written by 'stage build --save'")
        if name == "build":
            c.add_argument("--save", help="write the stage record here")
        c.set_defaults(func=func)

    rf = sub.add_parser("recfun", help="recursive functions").add_subparsers(dest="action",
                                                                              required=True)
    c = rf.add_parser("eval", parents=[common])
    c.add_argument("file")
    c.add_argument("args", nargs="*")
    c.add_argument("--name", help="function to evaluate (default: the last definition)")
    c.add_argument("--fuel", type=int)
    c.set_defaults(func=cmd_recfun_eval)

    c = sub.add_parser("sweep", help="oracle agreement sweeps")
    c.add_argument("which", choices=("syntax-oracle", "axiom-coherence"))
    c.add_argument("--per-schema", type=int, default=1000)
    c.add_argument("--negatives", type=int, default=10_000)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_sweep)
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a, extra = parser.parse_known_args(argv)
        # positionals given after an option land in extra; fold them back in
        if extra and (not hasattr(a, "args") or any(x.startswith("--") for x in extra)):
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
        if extra:
            a.args = list(a.args) + extra
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        settings = load_config(a.config)
        for k in ("guard", "budget", "limit", "format"):
            if getattr(a, k) is not None:
                settings[k] = getattr(a, k)
        cfg = Config(**settings)
    except (OSError, ValueError) as exc:
        print(f"goedel: {exc}", file=stderr)
        return USAGE
    try:
        return a.func(a, cfg, _Out(cfg.format, stdout))
    except GuardError as exc:
        print(f"goedel: {exc}", file=stderr)
        return UNKNOWN
    except OSError as exc:
        print(f"goedel: {exc}", file=stderr)
        return USAGE
    except ValueError as exc:
        print(f"goedel: {exc}", file=stderr)
        return FALSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
