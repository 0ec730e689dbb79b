import pytest

from goedel.numbering import GuardError, encode, numeral_code
from goedel import syntax as syn
from goedel.syntax import print_canonical, is_form_string, free_vars
from goedel.arith import is_form_word
from goedel.builders import (
    DefDag, build_library, expand, expansion_text, stats, godel_number, build_rosser,
    build_goedel, Placeholder, QLinear, const_term,
    All, Ex, BAll, BEx, BAllLt, Eq, Neq, Le, Lt, And, Or, Not, Imp, R, Star, S, Add, Mul, StarT,
)

LIB = build_library()

V = lambda k: "(0" + "′" * k + ")"


def _op(s):
    return "(" + s + ")"


def test_div_expansion_oracle():
    # ¬∀z(∃c(z+c=y) ⇒ ¬(x·z=y)) with x, y, z, c = vars 1..4 and ∃ as ¬∀¬
    le = "¬(∀" + V(4) + "(¬(" + _op(V(3)) + "+" + _op(V(4)) + "=" + V(2) + ")))"
    body = le + "⇒¬(" + _op(V(1)) + "·" + _op(V(3)) + "=" + V(2) + ")"
    want = "¬(∀" + V(3) + "(" + body + "))"
    assert expansion_text(LIB, "Div") == want
    st = stats(LIB, "Div")
    assert st.expanded_symbol_count == len(want)
    assert st.free_vars == frozenset({1, 2})
    assert st.godel_number == encode(want)
    assert st.bit_length == st.godel_number.bit_length()


def test_gen_template_shape():
    # y = 2^15 ★ u ★ 2^2 ★ x ★ 2^3 as a StarRel chain under a bounded ∃u
    deps = LIB.dependencies("Gen")
    assert {"Var", "StarRel", "LeastPow2"} <= deps
    assert LIB.lookup("Gen").params == ("x", "y")


def test_dependency_closure_of_g():
    deps = LIB.dependencies("g")
    assert {"Proof", "sub", "Pow2Rel", "SEQ", "Free", "Part", "ElementOf"} <= deps
    assert "h" not in deps


def test_library_contents_and_order():
    names = list(LIB.names())
    for n in ["Div", "StarRel", "Part", "Term", "neq", "leq", "Atom", "Gen", "Form", "Pro",
              "Free", "Pred1", "SeqPair", "Alt", "Pred2", "Nat", "sub", "MI", "Axiom",
              "Proof", "Pr", "Re", "SEQ", "Pow2Rel", "g", "h"]:
        assert n in names
    for k in range(1, 12):
        assert f"Prop{k}" in names
    for k in range(1, 9):
        assert f"Nat{k}" in names
    # references only point backwards
    for i, n in enumerate(names):
        for d in LIB.direct_dependencies(n):
            assert names.index(d) < i


@pytest.mark.parametrize("name", build_library().names())
def test_declared_params_are_exactly_free(name):
    st = stats(LIB, name, guard=0)
    assert st.free_vars == frozenset(range(1, len(LIB.lookup(name).params) + 1))


def _small():
    return [n for n in LIB.names() if stats(LIB, n, guard=0).expanded_symbol_count <= 10 ** 6]


@pytest.mark.parametrize("name", _small())
def test_materialization_matches_recurrence(name):
    st = stats(LIB, name, guard=1 << 22)
    text = expansion_text(LIB, name, guard=10 ** 6)
    assert len(text) == st.expanded_symbol_count
    assert st.godel_number == encode(text)
    assert st.bit_length == st.godel_number.bit_length()
    assert is_form_string(text)
    assert is_form_word(text)
    node = expand(LIB, name, guard=10 ** 6)
    assert free_vars(node) == set(st.free_vars)
    # hygiene: no binder reuses a parameter index
    k = len(LIB.lookup(name).params)
    assert all(v > k for v in _binders(node))


def _binders(node):
    out, stack = [], [node]
    while stack:
        n = stack.pop()
        if isinstance(n, syn.ForAll):
            out.append(n.var)
        stack.extend(n.children())
    return out


@pytest.mark.parametrize("name", ["Div", "PowerOf2", "LeastPow2", "StarRel", "Begin", "Seq"])
def test_arith_form_recognizer_agrees(name):
    assert is_form_word(expansion_text(LIB, name))


def test_guard_error_reports_exact_count():
    n = stats(LIB, "Form", guard=0).expanded_symbol_count
    with pytest.raises(GuardError) as e:
        expand(LIB, "Form", guard=1000)
    assert e.value.size == n and e.value.limit == 1000
    assert stats(LIB, "Form").godel_number is None


def test_counts_grow_along_chain():
    for name in LIB.names():
        c = stats(LIB, name, guard=0).expanded_symbol_count
        for dep, contrib in LIB.contributions(name):
            assert c >= contrib > 0


def test_double_negation_guard_on_implication_left():
    dag = DefDag()
    dag.define("Or2", ("x", "y"), Or(Eq("x", 0), Eq("y", 0)))
    dag.define("T", ("x", "y"), Imp(R("Or2", "x", "y"), Eq("x", "y")))
    text = expansion_text(dag, "T")
    assert text.startswith("¬(¬(¬(")
    assert is_form_string(text)


def test_const_term_values():
    def value(t):
        if isinstance(t, syn.Zero):
            return 0
        if isinstance(t, syn.Succ):
            return value(t.t) + 1
        if isinstance(t, syn.Prod):
            return value(t.left) * value(t.right)
        raise AssertionError(t)
    for n in list(range(40)) + [1 << 17, (1 << 17) + 3, 123456789]:
        assert value(const_term(n)) == n


def test_star_chain_folds_constants():
    dag = DefDag()
    dag.define("StarRel", ("z", "x", "y"), Eq("z", Add(Mul("x", 2), "y")))
    dag.define("V9", ("x",), BEx("y", "x", Star("x", 4, 2, "y", 8)))
    # 4★2 folds to one constant, so one intermediate ∃u and two StarRel refs
    assert [d for d, _ in dag.contributions("V9")].count("StarRel") == 2


def test_function_terms_lift():
    dag = DefDag()
    dag.define("StarRel", ("z", "x", "y"), Eq("z", Add("x", "y")))
    dag.define("P", ("x", "y"), Eq("x", "y"))
    dag.define("Q", ("x", "y"), R("P", StarT("x", 1), "y"))
    node = expand(dag, "Q")
    assert free_vars(node) == {1, 2}
    assert is_form_string(print_canonical(node))


def test_unknown_reference_and_unbound_name():
    dag = DefDag()
    with pytest.raises(ValueError):
        dag.define("A", ("x",), R("Nope", "x"))
    with pytest.raises(ValueError):
        dag.define("B", ("x",), Eq("x", "y"))
    dag.define("C", ("x",), Eq("x", 0))
    with pytest.raises(ValueError):
        dag.define("C", ("x",), Eq("x", 0))
    with pytest.raises(ValueError):
        dag.define("D", ("x",), R("C", "x", "x"))


# --- diagonal sentences --------------------------------------------------------

def _toy():
    dag = DefDag()
    dag.define("g", ("a", "b"), Eq("a", S("b")))
    dag.define("h", ("a", "b"), Eq(S("a"), "b"))
    return dag


def test_rosser_on_toy_dag():
    r = build_rosser(_toy())
    assert isinstance(r.number, int)
    mat = stats(r.dag, r.matrix)
    assert mat.free_vars == frozenset({1})
    assert r.number == mat.godel_number
    assert r.number == encode(expansion_text(r.dag, r.matrix))
    st = stats(r.dag, r.sentence, q=r.number)
    assert st.free_vars == frozenset()
    # the numeral appears twice, each contributing q primes and a zero
    sym = stats(r.dag, r.sentence)
    assert isinstance(sym.expanded_symbol_count, QLinear)
    assert sym.expanded_symbol_count.per_q == 2
    assert st.expanded_symbol_count == sym.expanded_symbol_count.at(r.number)
    for n in (0, 1, 5, 12):
        text = expansion_text(r.dag, r.sentence, q=n)
        assert len(text) == sym.expanded_symbol_count.at(n)
        assert encode(text).bit_length() == sym.bit_length.at(n)
        assert is_form_string(text)
        assert free_vars(syn.parse(text)) == set()


def test_rosser_diagonal_shape():
    r = build_rosser(_toy())
    text = expansion_text(r.dag, r.sentence, q=3)
    # ∀b(∀a(a=3̄⇒g(a,b))⇒…) with a = var 1, b = var 2
    assert text.startswith("∀" + V(2) + "(∀" + V(1) + "(" + V(1) + "=0′′′⇒")


def test_goedel_on_toy_dag():
    dag = _toy()
    gd = build_goedel(dag)
    ro = build_rosser(dag)
    assert stats(gd.dag, gd.matrix).free_vars == frozenset({1})
    assert stats(gd.dag, gd.sentence, q=7).free_vars == frozenset()
    text = expansion_text(gd.dag, gd.matrix)
    assert text.startswith("∀" + V(2) + "(¬(")
    assert gd.number != ro.number
    assert gd.kind == "Goedel" and ro.kind == "Rosser"


def test_rosser_on_library_is_placeholder():
    r = build_rosser(LIB, guard=0)
    assert isinstance(r.number, Placeholder)
    mat = stats(r.dag, r.matrix, guard=0)
    assert r.number.bit_length == mat.bit_length
    assert mat.free_vars == frozenset({1})
    diag = stats(r.dag, r.sentence, guard=0)
    assert diag.free_vars == frozenset()
    assert diag.expanded_symbol_count.per_q == 2
    gd = build_goedel(LIB, guard=0)
    assert gd.number.bit_length != r.number.bit_length


def test_rosser_number_exact_for_library():
    r = build_rosser(LIB)
    assert isinstance(r.number, int)
    assert r.number.bit_length() == stats(r.dag, r.matrix, guard=0).bit_length
    diag = r.sentence_stats(guard=0)
    sym = stats(r.dag, r.sentence, guard=0).expanded_symbol_count
    assert diag.expanded_symbol_count == sym.base + 2 * r.number
    p = build_goedel(LIB).number
    assert p != r.number


def test_numeral_contribution_closed_form():
    dag = DefDag()
    dag.define("g", ("a", "b"), Eq("a", "b"))
    dag.define("h", ("a", "b"), Eq("a", "b"))
    r = build_rosser(dag)
    s = stats(r.dag, r.sentence)
    a, b = s.expanded_symbol_count.at(0), s.expanded_symbol_count.at(10)
    assert b - a == 2 * 10
    assert s.bit_length.at(10) - s.bit_length.at(0) == 2 * (numeral_code(10).bit_length()
                                                            - numeral_code(0).bit_length())
