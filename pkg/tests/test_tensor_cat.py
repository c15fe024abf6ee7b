"""Morphism words in the two-sided tensor construction: normalization,
coherence, parsing, and the concrete ideal-module evaluation."""

import pytest

from cmht.field_core import load_field
from cmht.ideal_lattice import FracIdeal
from cmht import tensor_cat as tc
from cmht.tensor_cat import (WordError, parse_elt, elt_str, inv_elt,
                             reduce_elt, ObjLabel, struct_atom, PureTensor,
                             Assoc, MorphismWord, identity_word, compose,
                             normalize, pentagon_words, triangle_words,
                             ConcreteModel, evaluate, parse_word)

from helpers import rng_for, nonprincipal_prime


# -- free-group elements ----------------------------------------------------

def test_parse_elt():
    assert parse_elt("a") == (("a", 1),)
    assert parse_elt("a^-1") == (("a", -1),)
    assert parse_elt("a*b^-1*c") == (("a", 1), ("b", -1), ("c", 1))
    with pytest.raises(WordError):
        parse_elt("a**b")


def test_elt_str_roundtrip():
    for s in ("a", "a^-1", "a*b^-1", "x1*x2*x1^-1"):
        assert elt_str(parse_elt(s)) == s
    assert elt_str(()) == "e"


from hypothesis import given, settings, strategies as st

factors = st.lists(st.tuples(st.sampled_from("abc"),
                             st.sampled_from([1, -1])),
                   max_size=8).map(tuple)


@given(c=factors)
@settings(max_examples=50, deadline=None)
def test_reduce_elt_properties(c):
    r = reduce_elt(c)
    assert reduce_elt(r) == r                      # idempotent
    assert reduce_elt(c + inv_elt(c)) == ()        # inverses cancel
    assert inv_elt(inv_elt(c)) == c


def test_inv_reduce():
    c = parse_elt("a*b^-1")
    assert inv_elt(c) == parse_elt("b*a^-1")
    assert reduce_elt(c + inv_elt(c)) == ()
    assert reduce_elt(parse_elt("a*a^-1*b")) == (("b", 1),)
    assert reduce_elt(inv_elt(inv_elt(c))) == c


# -- labels and symbols -----------------------------------------------------

def test_obj_label_repr():
    o = ObjLabel("X", parse_elt("a"), parse_elt("b^-1"), "Y")
    assert repr(o) == "X a (x) b^-1 Y"


def test_struct_atom_guards():
    struct_atom(parse_elt("a*a^-1"), ())          # isomorphic reductions
    with pytest.raises(WordError):
        struct_atom(parse_elt("a"), parse_elt("b"))


def test_assoc_apply():
    o = ObjLabel("X", parse_elt("a*b"), (), "Y")
    moved = Assoc(+1, parse_elt("b")).apply(o)
    assert moved == ObjLabel("X", parse_elt("a"), parse_elt("b"), "Y")
    back = Assoc(-1, parse_elt("b")).apply(moved)
    assert back == o
    with pytest.raises(WordError):
        Assoc(+1, parse_elt("c")).apply(o)        # trailing mismatch


def test_word_chaining():
    o = ObjLabel("X", parse_elt("a"), (), "Y")
    w = MorphismWord(o, [Assoc(+1, parse_elt("a"))])
    assert w.src == o
    assert w.tgt == ObjLabel("X", (), parse_elt("a"), "Y")
    w2 = compose(w, MorphismWord(w.tgt, [Assoc(-1, parse_elt("a"))]))
    assert w2.tgt == o
    with pytest.raises(WordError):
        compose(w, w)                             # does not chain


# -- normalization ----------------------------------------------------------

def test_normalize_identity():
    o = ObjLabel("X", (), (), "Y")
    nf = normalize(identity_word(o))
    assert nf.elt == () and nf.fx == () and nf.fy == ()
    assert nf.src == nf.tgt == o


def test_normalize_assoc_pair_trivial():
    # moving a across and back is the identity up to structure
    o = ObjLabel("X", parse_elt("a"), (), "Y")
    w = MorphismWord(o, [Assoc(+1, parse_elt("a")),
                         Assoc(-1, parse_elt("a"))])
    nf = normalize(w)
    assert nf.src == nf.tgt == o
    assert normalize(nf.as_word()) == nf


def test_normal_form_word_is_fixed_point():
    o = ObjLabel("X", parse_elt("a*b"), parse_elt("c"), "Y")
    w = MorphismWord(o, [PureTensor((("gen", "f"),), ()),
                         Assoc(+1, parse_elt("b")),
                         PureTensor((), (("gen", "p"),))])
    nf = normalize(w)
    assert nf.src == o and nf.tgt == w.tgt
    assert normalize(nf.as_word()) == nf


def test_pentagon():
    w1, w2 = pentagon_words("X", "a", "b", "Y")
    assert w1.src == w2.src and w1.tgt == w2.tgt
    assert normalize(w1) == normalize(w2)


def test_triangle():
    w1, w2 = triangle_words("X", "f", "Y")
    assert w1.src == w2.src and w1.tgt == w2.tgt
    assert normalize(w1) == normalize(w2)


def test_pentagon_other_labels():
    for a, b in (("a", "a"), ("u", "v^-1")):
        w1, w2 = pentagon_words("L", a, b, "R")
        assert normalize(w1) == normalize(w2)


# -- parsing ----------------------------------------------------------------

def test_parse_word_basic():
    w = parse_word(["# comment", "A X a Y", "PT f id", "PT id p"])
    assert w.src == ObjLabel("X", parse_elt("a"), (), "Y")
    assert w.tgt == ObjLabel("X", (), parse_elt("a"), "Y")
    assert len(w.symbols) == 3


def test_parse_word_default_bases():
    w = parse_word(["PT f p"])
    assert w.src == ObjLabel("X", (), (), "Y")


def test_parse_word_errors():
    with pytest.raises(WordError, match="empty word"):
        parse_word(["# only a comment"])
    with pytest.raises(WordError, match="line 1"):
        parse_word(["BOGUS x y"])
    with pytest.raises(WordError, match="line 2"):
        parse_word(["A X a Y", "A Z a W"])        # labels do not chain
    with pytest.raises(WordError):
        parse_word(["A X a"])                     # wrong arity


# -- concrete evaluation ----------------------------------------------------

def _model():
    field = load_field("Qm5")
    P = nonprincipal_prime(field)
    th = field.gen()
    return field, ConcreteModel(
        field,
        xobjects={"X": FracIdeal.ring(field)},
        yobjects={"Y": P},
        elements={"a": P,
                  "b": FracIdeal.principal(field, field.rational(3))},
        gens_x={"f": (field.rational(2), "X", "X")},
        gens_y={"p": (th, "Y", "Y")})


def test_evaluate_identity():
    field, model = _model()
    o = ObjLabel("X", (), (), "Y")
    ev = evaluate(model, identity_word(o))
    assert ev.scalar_x == field.one() and ev.scalar_y == field.one()
    assert ev.src_x == ev.tgt_x == FracIdeal.ring(field)


def test_evaluate_generators_scale():
    field, model = _model()
    w = parse_word(["PT f p", "PT f id"])
    ev = evaluate(model, w)
    assert ev.scalar_x == field.rational(4)
    assert ev.scalar_y == field.gen()


def test_evaluate_assoc_moves_factor():
    field, model = _model()
    w = parse_word(["A X a Y"])
    ev = evaluate(model, w)
    # X a (x) Y -> X (x) a Y: the source pairs (O_K * P, P), the target
    # (O_K, P * P)
    P = model.elements["a"]
    assert ev.src_x == P and ev.src_y == P
    assert ev.tgt_x == FracIdeal.ring(field) and ev.tgt_y == P * P


def test_evaluate_agrees_with_normal_form():
    field, model = _model()
    lines = ["PT f id", "A X a Y", "PT id p", "A' X a Y", "PT f p"]
    w = parse_word(["A X a Y"])  # seed src; rebuild with full program
    w = parse_word(["# full word", "A X a Y", "PT f p", "A' X a Y"])
    assert evaluate(model, w) == evaluate(model, normalize(w).as_word())


def test_evaluate_unknown_names():
    field, model = _model()
    with pytest.raises((WordError, KeyError)):
        evaluate(model, parse_word(["PT nosuch id"]))
    with pytest.raises((WordError, KeyError)):
        evaluate(model, parse_word(["A X nosuchelt Y"]))


def test_nonprincipal_contraction_is_exact():
    # a a^-1 = O_K holds exactly on ideal data even when a is not
    # principal: the structural contraction evaluates
    field, model = _model()
    w = parse_word(["A X a Y", "A' X a Y"])
    ev = evaluate(model, w)
    nf = normalize(w)
    assert evaluate(model, nf.as_word()) == ev
    assert ev.src_x == ev.tgt_x and ev.src_y == ev.tgt_y
