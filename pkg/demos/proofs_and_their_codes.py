"""
Checking proofs, symbolically and by arithmetic
===============================================

The proofs under corpus/ are checked step by step.  The same proofs are then
coded as numbers and handed to the arithmetized Proof predicate, which only
sees bits.
"""
from pathlib import Path

from goedel import arith
from goedel import syntax as syn
from goedel.calculus import check_proof, load_proof_file

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

# %% the three-liner: an axiom, a Prop1 instance over it, modus ponens
_, steps = load_proof_file(CORPUS / "prop1_mp.proof")
res = check_proof(steps)
for i, (s, j) in enumerate(zip(res.steps, res.justifications), 1):
    why = j.axiom.tag if j.axiom else f"{j.kind} {[r + 1 for r in j.refs]}"
    print(f"{i:2}  {syn.print_canonical(s):40}  {why}")

# %% one bad ordering is enough to break a proof
_, bad = load_proof_file(CORPUS / "bad_order.proof")
r = check_proof(bad)
print("bad_order:", r.ok, "at step", r.error_index + 1)

# %% the numeric predicate, file by file
# Modus ponens is checked on strings: the major premise must literally be the
# minor premise, ⇒, and the conclusion.  A conclusion detached from A⇒(B⇒C)
# keeps its parentheses, so it can never serve as a major premise in turn,
# and every file that chains two detachments is rejected.
for p in sorted(CORPUS.glob("*.proof")):
    _, steps = load_proof_file(p)
    res = check_proof(steps)
    if not res.ok:
        continue
    code = arith.sequence_code(steps)
    print(f"{p.name:24} checker {res.ok!s:5}  numeric {arith.eval_bounded('Proof', [code])!s:5}"
          f"  ({code.bit_length()} bits)")
