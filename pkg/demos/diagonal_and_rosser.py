"""
The diagonal step and the Rosser sentence
=========================================

First a tiny formula is fed through the diagonal pipeline and the G and H
relations are evaluated on a real proof.  Then the Rosser sentence of the
full predicate library is built, without ever writing it out.
"""
import time

from goedel import arith
from goedel import builders as b
from goedel import syntax as syn
from goedel.calculus import check_proof
from goedel.numbering import encode

# %% diagonal of x = x
f = syn.parse("(0′)=(0′)")
a = encode(syn.to_symbols(f))
proof = arith.reflexive_diagonal_proof(a, 1)
print("F =", syn.print_canonical(f), " g(F) =", a)
print("proof has", len(proof), "steps; checker says", check_proof(proof).ok)
code = arith.sequence_code(proof, as_rope=True)
print("G(g(F), g(proof)) =", arith.eval_G(a, code))
print("H(g(F), g(proof)) =", arith.eval_H(a, code))

# %% the library and its sizes
lib = b.build_library()
for name in ["Div", "Term", "Form", "Axiom", "Proof", "g", "h"]:
    st = b.stats(lib, name, guard=0)
    print(f"{name:6} {st.expanded_symbol_count:>22,} symbols")

# %% the Rosser matrix A_q(a), its number q and the closed diagonal
t = time.perf_counter()
r = b.build_rosser(lib)
mat = b.stats(r.dag, r.matrix, guard=0)
print(f"q has {r.number.bit_length():,} bits ({time.perf_counter() - t:.1f}s)")
print("free variables of the matrix:", set(mat.free_vars))
diag = b.stats(r.dag, r.sentence, guard=0)
print("free variables of the diagonal:", set(diag.free_vars))
print("diagonal symbol count is", diag.expanded_symbol_count)
