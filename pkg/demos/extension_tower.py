"""
A tower of extensions
=====================

Each stage adds the previous stage's Rosser sentence, or its negation, as a
new axiom.  The numbers involved are far too big to hold, so they are
compared through a chain of size bounds.
"""
from goedel.extension import AFFIRM, NEGATE, build_tower, describe, is_axiom_at_stage, rosser_at
from goedel import builders as b

tower = build_tower([AFFIRM, NEGATE, AFFIRM])

# %% what each stage adds
for s in tower:
    added = ", ".join(f"{a.template} ({a.polarity})" for a in s.added) or "nothing"
    print(f"stage {s.n}: {added}")

# %% the new axioms are accepted from the stage after they appear
top = tower[-1]
for a in top.added:
    print(a.template, [is_axiom_at_stage(s, a) for s in tower])

# %% sizes: exact for the first, symbolic after that
for a in top.added:
    print(a.label, "bit length", a.qhat.bit_length if a.k else f"<{a.qhat.bit_length.bit_length()}-bit int>")
labels = [a.label for a in top.added]
print("ordered:", all(top.tower.compare(x, y) == -1 for x, y in zip(labels, labels[1:])))

# %% every stage has its own Rosser matrix
for s in tower:
    r = rosser_at(s)
    print(s.n, r.matrix, len(r.dag.dependencies(r.matrix)), "definitions")

print(describe(tower[2]))
