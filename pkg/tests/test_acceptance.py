"""End-to-end acceptance checks, one test per target.

Every test records a PASS/FAIL line in RESULTS; conftest.py prints the
collected lines in the terminal summary.
"""
import itertools
import time
from pathlib import Path

from goedel import arith
from goedel import builders as b
from goedel import syntax as syn
from goedel.calculus import check_proof, load_proof_file
from goedel.extension import AFFIRM, NEGATE, build_tower, is_axiom_at_stage, rosser_at
from goedel.numbering import ell, encode, numeral_code, star
from goedel.recfun import (
    Compose, Mu, Proj, RecRel, NoResult, absdiff, bounded_exists, bounded_forall, bounded_mu,
    conj, disj, evaluate, fast_evaluate, implies, monus, mu_witness_ok, neg, plus, power,
    times,
)
from goedel.sweeps import axiom_coherence, syntax_oracle

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
RESULTS: dict[int, str] = {}


def record(n, title, ok, detail="", started=None):
    took = f" [{time.perf_counter() - started:.1f}s]" if started is not None else ""
    RESULTS[n] = f"{n:>2}. {'PASS' if ok else 'FAIL'}  {title}{took}" + (f": {detail}" if detail else "")
    print(RESULTS[n])
    assert ok, detail


# 1 ---------------------------------------------------------------------------

def test_01_encoding_fixtures():
    t = time.perf_counter()
    got = (encode("(0"), encode("(0)"), encode("(0)′"), star(4, 2), ell(2), ell(0))
    want = (18, 296, 593, 18, 2, 0)
    record(1, "encoding fixtures", got == want and bin(18) == "0b10010", f"got {got}", t)


# 2 ---------------------------------------------------------------------------

P1, P2 = (1 << 61) - 1, (1 << 89) - 1


def test_02_numeral_codes():
    t = time.perf_counter()
    bad = [a for a in range(4097) if numeral_code(a) != encode(syn.to_symbols(syn.numeral(a)))]
    # Up to 10^6 the code is followed through its defining recurrence: appending
    # ′ to a string s gives code 2·code(s)+1.  The recurrence is run modulo two
    # Mersenne primes for every a and compared with 3·2^a−1 there; the exact
    # big-integer value is compared at every 997th a and at the end.
    r1 = r2 = 2
    e1 = e2 = 1  # 2^a modulo each prime
    for a in range(10 ** 6 + 1):
        if r1 != (3 * e1 - 1) % P1 or r2 != (3 * e2 - 1) % P2:
            bad.append(a)
        if a % 997 == 0 or a == 10 ** 6:
            c = numeral_code(a)
            if c % P1 != r1 or c % P2 != r2 or c != 3 * 2 ** a - 1:
                bad.append(a)
        r1, r2 = (2 * r1 + 1) % P1, (2 * r2 + 1) % P2
        e1, e2 = 2 * e1 % P1, 2 * e2 % P2
    record(2, "numeral codes (exact to 2^12, identity to 10^6)", not bad,
           f"mismatches at {bad[:5]}", t)


# 3 ---------------------------------------------------------------------------

def test_03_syntax_oracle():
    t = time.perf_counter()
    rep = syntax_oracle(1 << 18)
    record(3, "syntax oracle sweep below 2^18", rep.ok and rep.checked == 1 << 18,
           f"{rep.disagreement_count} disagreements, positives {rep.notes['positives']}", t)


# 4 ---------------------------------------------------------------------------

def test_04_axiom_coherence():
    t = time.perf_counter()
    rep = axiom_coherence(per_schema=1000, negatives=10_000)
    record(4, "axiom classifier vs arithmetized Axiom", rep.ok,
           f"checked {rep.checked}, {rep.disagreement_count} disagreements; {rep.notes}", t)


# 5 ---------------------------------------------------------------------------

def _bump_zero(f):
    """f with its first 0 replaced by 0′, or None when f has no 0."""
    if isinstance(f, syn.Zero):
        return syn.Num(1)
    kids = list(f.children())
    for i, k in enumerate(kids):
        nk = _bump_zero(k)
        if nk is not None:
            kids[i] = nk
            return syn._rebuild(f, kids)
    return None


def mutations(res):
    """(label, steps) for every single-step swap, deletion and alteration."""
    steps = res.steps
    for i, j in enumerate(res.justifications):
        for r in j.refs:
            m = list(steps)
            m[i], m[r] = m[r], m[i]
            yield f"swap {r + 1}<->{i + 1}", m
    if len(steps) > 1:
        for i in range(len(steps)):
            yield f"delete {i + 1}", steps[:i] + steps[i + 1:]
    for i, s in enumerate(steps):
        yield f"negate {i + 1}", steps[:i] + [syn.Not(s)] + steps[i + 1:]
        bumped = _bump_zero(s)
        if bumped is not None:
            yield f"bump {i + 1}", steps[:i] + [bumped] + steps[i + 1:]


def test_05_proof_corpus():
    t = time.perf_counter()
    files = sorted(p for p in CORPUS.glob("*.proof") if p.name != "bad_order.proof")
    problems, n_mut, numeric = [], 0, []
    for p in files:
        hyps, steps = load_proof_file(p)
        res = check_proof(steps)
        if hyps or not res.ok:
            problems.append(f"{p.name} rejected")
            continue
        for label, m in mutations(res):
            n_mut += 1
            mr = check_proof(m)
            if mr.ok and syn.desugar(mr.conclusion) == syn.desugar(res.conclusion):
                problems.append(f"{p.name}: {label} accepted")
        if not res.uses("Spec"):
            ok = arith.eval_bounded("Proof", [arith.sequence_code(steps)])
            numeric.append((p.name, ok))
    bad_order = check_proof(load_proof_file(CORPUS / "bad_order.proof")[1])
    if bad_order.ok:
        problems.append("bad_order.proof accepted")
    disagree = [name for name, ok in numeric if not ok]
    if disagree:
        problems.append(f"numeric Proof rejects {len(disagree)}/{len(numeric)}: {', '.join(disagree)}")
    names = {p.name for p in files}
    enough = len(files) >= 10 and {"nat5.proof", "prop1_mp.proof"} <= names
    record(5, "proof corpus, mutations, numeric Proof", enough and not problems,
           f"{len(files)} proofs, {n_mut} mutants; " + ("; ".join(problems) or "all good"), t)


# 6 ---------------------------------------------------------------------------

def test_06_pow2rel():
    t = time.perf_counter()
    shape = arith.seq_pairs(arith.eval_searched("Pow2Rel", [3, 8]).witness)
    wrong = []
    for x in range(65):
        for y in {2 ** x, 2 ** x + 1, 2 ** x - 1, 2 ** (x + 1), 0}:
            got = arith.eval_searched("Pow2Rel", [x, y]).value
            if got != (y == 2 ** x):
                wrong.append((x, y))
    xs = sorted({x for x, _ in wrong})
    detail = f"witness pairs for 2^3 {shape}; wrong at {len(wrong)} (x, y) pairs"
    if xs:
        detail += f", x in {xs[0]}..{xs[-1]}"
    record(6, "Pow2Rel with constructed witness, x <= 64",
           not wrong and shape == [(0, 1), (1, 2), (2, 4), (3, 8)], detail, t)


# 7 ---------------------------------------------------------------------------

def test_07_diagonal_pipeline():
    t = time.perf_counter()
    f = syn.parse("(0′)=(0′)")
    a = encode(syn.to_symbols(f))
    proof = arith.reflexive_diagonal_proof(a, 1)
    code = arith.sequence_code(proof, as_rope=True)
    checked = check_proof(proof)
    diag = syn.desugar(syn.subst_convention(f, a, 1))
    ok = (checked.ok and syn.desugar(checked.conclusion) == diag
          and arith.eval_G(a, code) and not arith.eval_H(a, code))
    record(7, "G true and H false on a diagonal proof", ok,
           f"{len(proof)}-step proof of the diagonal of x=x", t)


# 8 ---------------------------------------------------------------------------

GUARD = 10 ** 6


def test_08_builders():
    t = time.perf_counter()
    r = b.build_rosser(b.build_library(), guard=0)
    mat = b.stats(r.dag, r.matrix, guard=0)
    diag = b.stats(r.dag, r.sentence, guard=0)
    problems = []
    if mat.free_vars != frozenset({1}):
        problems.append(f"matrix free vars {set(mat.free_vars)}")
    if diag.free_vars != frozenset():
        problems.append("diagonal not closed")
    checked = skipped = 0
    for name in r.dag.names():
        st = b.stats(r.dag, name, guard=0)
        n = st.expanded_symbol_count
        if not isinstance(n, int) or n > GUARD:
            skipped += 1
            continue
        checked += 1
        text = b.expansion_text(r.dag, name, guard=GUARD)
        exact = b.stats(r.dag, name, guard=1 << 23)
        if len(text) != n or exact.godel_number != encode(text):
            problems.append(f"{name}: stats differ from expansion")
        if not (syn.is_form_string(text) and arith.is_form_word(text)):
            problems.append(f"{name}: expansion is not a formula")
    record(8, "builders: free variables, stats vs materialization", not problems,
           f"{checked} templates materialized, {skipped} above 10^6 symbols; "
           + ("; ".join(problems) or "all exact"), t)


# 9 ---------------------------------------------------------------------------

R16 = range(16)


def test_09_recfun():
    t = time.perf_counter()
    problems = []
    for x, y in itertools.product(R16, R16):
        for f, want in ((plus, x + y), (times, x * y), (power, x ** y)):
            if fast_evaluate(f, [x, y]) != want:
                problems.append(f"{x},{y}")
        # the fuel-counted evaluator wherever unary arithmetic stays small
        if evaluate(plus, [x, y]) != x + y or evaluate(times, [x, y]) != x * y:
            problems.append(f"fuel {x},{y}")
        if x ** y <= 1024 and evaluate(power, [x, y], fuel=10 ** 7) != x ** y:
            problems.append(f"fuel pow {x},{y}")
    # μy[|y·y − x| = 0] with a post-hoc minimality check on every value found
    psi = Compose(absdiff, [Compose(times, [Proj(2, 2), Proj(2, 2)]), Proj(1, 2)])
    found = 0
    for x in R16:
        v = evaluate(Mu(psi), [x], fuel=200_000)
        if v is NoResult:
            if int(x ** 0.5) ** 2 == x:
                problems.append(f"mu missed sqrt {x}")
            continue
        found += 1
        if not mu_witness_ok(psi, [x], v):
            problems.append(f"mu minimality {x}")
    ge = RecRel(Compose(monus, [Proj(2, 2), Proj(1, 2)]))   # x ≥ y
    le = RecRel(Compose(monus, [Proj(1, 2), Proj(2, 2)]))   # x ≤ y
    bound = Compose(plus, [Proj(1, 1), Proj(1, 1)])           # 2x
    for x, y in itertools.product(R16, R16):
        direct = {
            "neg": x < y, "conj": x >= y and x <= y, "disj": x >= y or x <= y,
            "implies": (not x >= y) or x <= y,
            "exists": any(u >= y for u in range(2 * x + 1)),
            "forall": all(u >= y for u in range(2 * x + 1)),
            "mu": next((u for u in range(2 * x + 1) if u >= y), 0),
        }
        got = {
            "neg": neg(ge).holds([x, y]), "conj": conj(ge, le).holds([x, y]),
            "disj": disj(ge, le).holds([x, y]), "implies": implies(ge, le).holds([x, y]),
            "exists": bounded_exists(bound, ge).holds([x, y]),
            "forall": bounded_forall(bound, ge).holds([x, y]),
            "mu": evaluate(bounded_mu(bound, ge), [x, y]),
        }
        problems += [f"{k} at {x},{y}" for k in direct if direct[k] != got[k]]
    record(9, "recursive functions, μ minimality, closure combinators", not problems,
           f"{found} μ values checked; " + (", ".join(problems[:5]) or "all exact"), t)


# 10 --------------------------------------------------------------------------

def test_10_extension_tower():
    t = time.perf_counter()
    tower = build_tower([AFFIRM, NEGATE, AFFIRM])
    problems = []
    if [s.n for s in tower] != [0, 1, 2, 3]:
        problems.append("stages missing")
    top = tower[-1]
    for i, s in enumerate(tower):
        for a in top.added:
            if is_axiom_at_stage(s, a) != (a.k < i):
                problems.append(f"stage {i} vs A_({a.k})")
    labels = [a.label for a in top.added]
    for i, j in itertools.combinations(range(len(labels)), 2):
        if top.tower.compare(labels[i], labels[j]) != -1:
            problems.append(f"{labels[i]} !< {labels[j]}")
    rs = [rosser_at(s) for s in tower]
    sizes = [b.stats(r.dag, r.matrix, guard=0).bit_length for r in rs]
    deps = [frozenset(r.dag.dependencies(r.matrix)) for r in rs]
    for i, j in itertools.combinations(range(len(rs)), 2):
        if sizes[i] == sizes[j] or deps[i] == deps[j]:
            problems.append(f"Rosser DAGs {i} and {j} coincide")
    record(10, "extension tower, stages 0-3", not problems,
           f"bit length of q̂0 is itself a {top.added[0].qhat.bit_length.bit_length()}-bit number; "
           + ("; ".join(problems) or "monotone and distinct"), t)
