"""
Recursive functions from six schemas
====================================

Functions are assembled from successor, constants, projections, composition,
primitive recursion and μ.  Relations are their zero sets.
"""
from goedel.recfun import (
    Compose, Mu, PrimRec, Proj, RecRel, Succ, absdiff, bounded_exists, evaluate,
    fast_evaluate, monus, neg, plus, power, times,
)

# %% arithmetic, counted step by step and in closed form
print(evaluate(plus, [3, 4]), evaluate(times, [3, 4]), evaluate(power, [2, 5], fuel=10 ** 6))
print(fast_evaluate(power, [15, 15]), 15 ** 15)

# %% factorial by primitive recursion: f(0) = 1, f(k+1) = (k+1)·f(k)
fact = PrimRec(1, Compose(times, [Compose(Succ(), [Proj(1, 2)]), Proj(2, 2)]))
print([evaluate(fact, [k]) for k in range(7)])

# %% μ: the least y with y·y = x, or no result at all
root = Mu(Compose(absdiff, [Compose(times, [Proj(2, 2), Proj(2, 2)]), Proj(1, 2)]))
print([evaluate(root, [x], fuel=50_000) for x in range(10)])

# %% a bounded quantifier: some u ≤ x has u ≥ y
ge = RecRel(Compose(monus, [Proj(2, 2), Proj(1, 2)]))
some = bounded_exists(Proj(1, 1), ge)
print([[int(some.holds([x, y])) for y in range(5)] for x in range(5)])
print("2 < 3:", neg(ge).holds([2, 3]))
