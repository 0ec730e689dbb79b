import itertools

import pytest
from hypothesis import given, settings, strategies as st

from goedel.recfun import (
    Succ, Const, Proj, Compose, PrimRec, Mu, RecRel, NoResult, evaluate, mu_witness_ok,
    plus, times, power, pred, monus, sg, nsg, absdiff,
    neg, conj, disj, implies, equal, bounded_exists, bounded_forall, bounded_mu,
    compile_relation, parse_definitions, load_definitions, fast_evaluate, MuLimit,
)
from goedel import builders as b

R16 = range(16)


def test_schema_examples():
    assert evaluate(plus, [2, 3]) == 5
    assert evaluate(Proj(2, 3), [7, 8, 9]) == 8
    assert evaluate(Succ(), [4]) == 5
    assert evaluate(Const(9, 2), [0, 0]) == 9


def test_arithmetic_exhaustive():
    for x, y in itertools.product(R16, R16):
        assert evaluate(plus, [x, y]) == x + y
        assert evaluate(times, [x, y]) == x * y
        assert evaluate(monus, [x, y]) == max(x - y, 0)
        assert evaluate(absdiff, [x, y]) == abs(x - y)
    for x, y in itertools.product(range(6), range(6)):
        assert evaluate(power, [x, y], fuel=10 ** 7) == x ** y
    for x in R16:
        assert evaluate(pred, [x]) == max(x - 1, 0)
        assert evaluate(sg, [x]) == min(x, 1)
        assert evaluate(nsg, [x]) == 1 - min(x, 1)


def test_mu_truncated_subtraction():
    # μy[x ∸ y = 0] = x
    m = Mu(monus)
    assert evaluate(m, [3]) == 3
    for x in R16:
        assert evaluate(m, [x]) == x


def test_mu_without_zero_has_no_result():
    r = evaluate(Mu(Const(1, 2)), [5], fuel=1000)
    assert r is NoResult
    assert not NoResult


def test_arity_and_fuel_errors():
    with pytest.raises(ValueError):
        evaluate(plus, [1])
    with pytest.raises(ValueError):
        evaluate(plus, [1, 2], fuel=0)
    with pytest.raises(ValueError):
        Proj(0, 2)
    with pytest.raises(ValueError):
        Proj(3, 2)
    with pytest.raises(ValueError):
        Compose(plus, [Proj(1, 1)])
    with pytest.raises(ValueError):
        Compose(plus, [Proj(1, 1), Proj(1, 2)])
    with pytest.raises(ValueError):
        PrimRec(Proj(1, 1), Proj(1, 2))
    with pytest.raises(ValueError):
        evaluate(plus, [-1, 2])


@settings(max_examples=60)
@given(st.integers(0, 12), st.integers(0, 12), st.integers(1, 400))
def test_fuel_monotone(x, y, f):
    r = evaluate(times, [x, y], fuel=f)
    if r is not NoResult:
        for g in (f + 1, 2 * f, 10 * f):
            assert evaluate(times, [x, y], fuel=g) == r


@settings(max_examples=60)
@given(st.integers(0, 10), st.integers(0, 10))
def test_mu_minimality_post_hoc(a, c):
    # ψ(x, y) = |y·y − x| vanishes only at the square root of x
    psi = Compose(absdiff, [Compose(times, [Proj(2, 2), Proj(2, 2)]), Proj(1, 2)])
    x = a * a if c % 2 else a
    r = evaluate(Mu(psi), [x], fuel=200_000)
    if r is NoResult:
        assert int(x ** 0.5) ** 2 != x
    else:
        assert mu_witness_ok(psi, [x], r)
        assert r * r == x


def _rel(fn):
    return RecRel(fn)


LT = _rel(Compose(nsg, [Compose(monus, [Proj(2, 2), Proj(1, 2)])]))  # x < y
EVEN = _rel(PrimRec(0, Compose(nsg, [Proj(2, 2)])))                     # parity bit 0


def test_boolean_combinators():
    for x, y in itertools.product(R16, R16):
        lt, ev = LT.holds([x, y]), EVEN.holds([x])
        ev2 = _rel(Compose(EVEN.char, [Proj(1, 2)]))
        assert lt == (x < y)
        assert ev == (x % 2 == 0)
        assert neg(LT).holds([x, y]) == (not lt)
        assert conj(LT, ev2).holds([x, y]) == (lt and ev)
        assert disj(LT, ev2).holds([x, y]) == (lt or ev)
        assert implies(LT, ev2).holds([x, y]) == ((not lt) or ev)
        assert equal(plus, times).holds([x, y]) == (x + y == x * y)


def test_negation_char_values():
    for x, y in itertools.product(R16, R16):
        c = evaluate(LT.char, [x, y])
        assert (evaluate(neg(LT).char, [x, y]) == 0) == (c != 0)


def test_bounded_quantifiers_against_loops():
    phi = Compose(plus, [Proj(1, 1), Const(1, 1)])  # bound x + 1
    for x, y in itertools.product(R16, R16):
        ex = any(u < y for u in range(x + 2))
        al = all(u < y for u in range(x + 2))
        assert bounded_exists(phi, LT).holds([x, y]) == ex
        assert bounded_forall(phi, LT).holds([x, y]) == al
        want = next((u for u in range(x + 2) if u >= y), 0)
        assert evaluate(bounded_mu(phi, neg(LT)), [x, y]) == want


def test_bounded_mu_empty_witness_set_is_zero():
    never = _rel(Const(1, 2))
    for x in range(5):
        assert evaluate(bounded_mu(Proj(1, 1), never), [x, 3]) == 0


def test_bounded_arity_errors():
    with pytest.raises(ValueError):
        bounded_exists(LT, LT)
    with pytest.raises(ValueError):
        conj(LT, EVEN)


# --- sugar -----------------------------------------------------------------------------

def test_sugar_le_lt_exhaustive():
    le = compile_relation(b.Le("x", "y"), ["x", "y"])
    lt = compile_relation(b.Lt("x", "y"), ["x", "y"])
    via_def = compile_relation(b.BEx("z", "y", b.Eq(b.Add("x", "z"), "y")), ["x", "y"])
    for x, y in itertools.product(R16, R16):
        assert le.holds([x, y]) == (x <= y) == via_def.holds([x, y])
        assert lt.holds([x, y]) == (x < y) == (le.holds([x, y]) and x != y)


def test_sugar_bounded_zero():
    e = b.Eq(b.Mul("x", "x"), "x")
    lhs = compile_relation(b.BAll("x", 0, e), ["y"])
    rhs = compile_relation(b.Eq(b.Mul(0, 0), 0), ["y"])
    assert lhs.holds([3]) == rhs.holds([3]) is True


def test_sugar_div_and_prime_agree():
    div = compile_relation(b.BEx("z", "y", b.Eq(b.Mul("x", "z"), "y")), ["x", "y"])
    for x, y in itertools.product(R16, R16):
        assert div.holds([x, y]) == ((y % x == 0) if x else (y == 0))
    prime = compile_relation(
        b.And(b.Gt("p", 1), b.BAllLt("d", "p", b.Imp(b.R("div", "d", "p"), b.Or(b.Eq("d", 1), b.Eq("d", 0))))),
        ["p"], relations={"div": div})
    assert [p for p in R16 if prime.holds([p])] == [2, 3, 5, 7, 11, 13]


def test_sugar_rejects_unbounded():
    with pytest.raises(ValueError):
        compile_relation(b.All("x", b.Eq("x", "x")), ["y"])
    with pytest.raises(ValueError):
        compile_relation(b.Ex("x", b.Eq("x", "y")), ["y"])


# --- definition files --------------------------------------------------------------------

SRC = """
; addition by recursion on the first argument
(define add (primrec (proj 1 1) (compose succ (proj 2 3))))
(define double (compose add (proj 1 1) (proj 1 1)))
(define half (mu (compose absdiff (compose double (proj 2 2)) (proj 1 2))))
(define fact (primrec 1 (compose times (compose succ (proj 1 2)) (proj 2 2))))
"""


def test_definition_file():
    defs = parse_definitions(SRC)
    assert evaluate(defs["add"], [4, 5]) == 9
    assert evaluate(defs["double"], [7]) == 14
    assert evaluate(defs["half"], [10]) == 5
    assert evaluate(defs["half"], [3], fuel=5000) is NoResult
    assert [evaluate(defs["fact"], [n]) for n in range(6)] == [1, 1, 2, 6, 24, 120]
    assert list(defs)[-1] == "fact"


def test_definition_file_errors(tmp_path):
    for bad in ["(define f (proj 3 2))", "(define f (nosuch 1))", "(define f (proj 1 1)",
                "(define f g)", "(define f (const 1 1)) (define f (const 2 1))"]:
        with pytest.raises(ValueError):
            parse_definitions(bad)
    p = tmp_path / "d.rf"
    p.write_text(SRC)
    assert "half" in load_definitions(p)


def _random_fun(rng, n, depth):
    pick = rng.randrange(6 if depth else 3)
    if pick == 0:
        return Proj(rng.randint(1, n), n)
    if pick == 1:
        return Const(rng.randrange(3), n)
    if pick == 2:
        return Compose(Succ(), [_random_fun(rng, n, 0)]) if n else Succ()
    if pick == 3:
        lib = rng.choice([plus, times, monus, absdiff, sg, pred])
        return Compose(lib, [_random_fun(rng, n, depth - 1) for _ in range(lib.arity)])
    if pick == 4 and n >= 2:
        return PrimRec(_random_fun(rng, n - 1, depth - 1), _random_fun(rng, n + 1, depth - 1))
    return Compose(plus, [_random_fun(rng, n, depth - 1), _random_fun(rng, n, depth - 1)])


@settings(max_examples=150)
@given(st.integers(0, 10 ** 9), st.lists(st.integers(0, 5), min_size=3, max_size=3))
def test_fast_evaluate_agrees_with_fuel_evaluator(seed, args):
    import random
    f = _random_fun(random.Random(seed), 3, 3)
    slow = evaluate(f, args, fuel=200_000)
    if slow is not NoResult:
        assert fast_evaluate(f, args) == slow


def test_fast_evaluate_library_and_mu():
    for x, y in itertools.product(R16, R16):
        assert fast_evaluate(power, [x, y]) == x ** y
        assert fast_evaluate(times, [x, y]) == x * y
    m = Mu(monus)
    assert fast_evaluate(m, [9]) == 9
    with pytest.raises(MuLimit):
        fast_evaluate(Mu(Const(1, 2)), [0], mu_limit=50)
