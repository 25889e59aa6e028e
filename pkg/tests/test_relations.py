import random

import pytest
from hypothesis import given

from conftest import partitions
from partcat.errors import ArityMismatch, BadParam, MissingName, SignatureMismatch
from partcat.functors import functor_f
from partcat.linear import DOT, DOWN
from partcat.partition import (
    BLACK,
    EXTRA_REGIME,
    LINE,
    PLAIN,
    TWOCOL,
    WHITE,
    generator,
    identity,
    involute,
    parse,
    random_partition,
)
from partcat.relations import (
    DEFAULT_NAMES,
    adjoint,
    dictionary_form,
    drop_symbol,
    emit_presentation,
    emit_relation,
    emit_separated_relation,
    normal_form,
    normalize_ws,
    product_relations,
    render,
    render_human,
    render_machine,
    substitute_glued,
)

EXTRA_NAMES = DEFAULT_NAMES[EXTRA_REGIME]
HALFLIB = generator("halflibpart")


def same(a, b):
    assert normalize_ws(a) == normalize_ws(b), a


# ------------------------------------------------------------- display forms

def test_cap_relation():
    same(render_human(emit_relation(generator("pairpart"), {LINE: "u"})), "δ_{s₁s₂} = Σⱼ u_{s₁j} u_{s₂j}")


def test_positioner_relation():
    same(render_human(emit_relation(generator("positionerext"))), "v_{ij} r = r v_{ij}")


def test_globcol_relation():
    same(render_human(emit_relation(generator("globcolext"))), "v_{ij}v_{kl} r = r v_{ij}v_{kl}")


@pytest.mark.parametrize("p, want", [
    (generator("pairpart"), "vvᵗ = 1"),
    (parse("P(; x:t y:t)"), "r² = 1"),
    (parse("P(; x:t)"), "r = 1"),
    (generator("positionerext"), "v_{ij}r = rv_{ij}"),
    (generator("globcolext"), "v_{ij}v_{kl}r = rv_{ij}v_{kl}"),
])
def test_dictionary_forms(p, want):
    same(dictionary_form(emit_relation(p, EXTRA_NAMES)), want)


def test_halflib_relation():
    same(render_human(emit_relation(HALFLIB)), "u_{ij} u_{kl} u_{mn} = u_{mn} u_{kl} u_{ij}")


def test_missing_name():
    with pytest.raises(MissingName):
        emit_relation(generator("positionerext"), {LINE: "v"})


# --------------------------------------------------------------- separated

def test_halflib_separated_forms():
    rel = emit_separated_relation(HALFLIB, (DOWN, DOT, DOT), (DOT, DOT, DOWN))
    same(render_human(rel), "r b c = c b r with b,c ∈ {u_{ij} − (1/N)r}")
    rel = emit_separated_relation(HALFLIB, (DOT,) * 3, (DOT,) * 3)
    same(render_human(rel), "a b c = c b a with a,b,c ∈ span{u_{ij} − (1/N)r}")


def test_identity_down_down_is_trivial():
    same(render_human(emit_separated_relation(identity((LINE,)), "↓", "↓")), "(1/N)r = (1/N)r")


def test_separated_errors():
    with pytest.raises(ArityMismatch):
        emit_separated_relation(HALFLIB, (DOT,), (DOT,) * 3)
    with pytest.raises(SignatureMismatch):
        emit_separated_relation(generator("positionerext"), (DOT, DOT), (DOT, DOT))


def test_general_separated_form_uses_projection_factors():
    rel = emit_separated_relation(generator("fourpart"), (), (DOT, DOT, DOWN, DOT))
    text = render_human(rel)
    assert "P^•" in text and "P^↓" in text
    assert rel.well_formed()


# --------------------------------------------------------------- structure

@given(partitions())
def test_relations_are_well_formed(p):
    rel = emit_relation(p)
    assert rel.well_formed()


@given(partitions())
def test_involution_gives_adjoint(p):
    assert normal_form(adjoint(emit_relation(p))) == normal_form(emit_relation(involute(p)))


def test_f_substitution_matches_up_to_r():
    # F forgets ▲, so the comparison is made after erasing r on both sides
    rng = random.Random(0)
    checked = 0
    while checked < 100:
        p = random_partition(rng, EXTRA_REGIME, rng.randint(0, 3), rng.randint(0, 3))
        if len(p) % 2 or not p.colors:
            continue
        glued = emit_relation(functor_f(p), {WHITE: "ṽ", BLACK: "ṽ*"})
        back = substitute_glued(glued, "ṽ", "ṽ*", "v", "r")
        direct = emit_relation(p, EXTRA_NAMES)
        assert normal_form(drop_symbol(back, "r")) == normal_form(drop_symbol(direct, "r"))
        checked += 1


def test_substitution_places_r():
    glued = emit_relation(functor_f(generator("positionerext")), {WHITE: "ṽ", BLACK: "ṽ*"})
    same(render_human(substitute_glued(glued, "ṽ", "ṽ*", "v", "r")), "v_{ij} r = r v_{ij}")


# ---------------------------------------------------------------- rendering

def test_machine_format():
    text = render_machine(emit_relation(generator("positionerext")))
    assert text == "(rel (free i1 s2) (+ (* 1 (v s2 i1) (r))) (+ (* 1 (r) (v s2 i1))))"
    assert text.count("(") == text.count(")")


def test_render_dispatch():
    rel = emit_relation(generator("pairpart"))
    assert render(rel, "human") == render_human(rel)
    assert render(rel, "machine") == render_machine(rel)
    with pytest.raises(BadParam):
        render(rel, "latex")


# ------------------------------------------------------------ presentations

def test_empty_extra_presentation():
    text = emit_presentation([], EXTRA_REGIME, 4)
    assert text.splitlines() == [
        "PRESENTATION N=4 regime=extra", "v = v̄", "vvᵗ = vᵗv = 1", "r = r*", "r² = 1",
    ]


def test_positioner_presentation_adds_commutation():
    lines = emit_presentation([generator("positionerext")], EXTRA_REGIME, 3).splitlines()
    assert len(lines) == 6
    same(lines[-1], "v_{ij} r = r v_{ij}")


def test_presentation_headers_and_machine():
    assert emit_presentation([], PLAIN, 2).splitlines()[0] == "PRESENTATION N=2 regime=plain"
    assert emit_presentation([], TWOCOL, 2).splitlines()[1] == "uu* = u*u = ūuᵗ = uᵗū = 1"
    machine = emit_presentation([generator("globcolext")], EXTRA_REGIME, 3, fmt="machine")
    assert all(line.startswith("(") for line in machine.splitlines()[1:])
    with pytest.raises(BadParam):
        emit_presentation([], "nosuch", 2)


def test_presentation_is_deterministic():
    gens = [generator("globcolext"), generator("positionerext")]
    assert emit_presentation(gens, EXTRA_REGIME, 3) == emit_presentation(gens, EXTRA_REGIME, 3)


# ---------------------------------------------------------------- products

def test_product_relations():
    assert product_relations("free") == []
    assert product_relations("tensor") == ["ax = xa"]
    assert product_relations("times0") == ["ab*x = xab*", "a*bx = xa*b"]
    assert product_relations("times2k", 2) == ["a₁x₁a₂x₂ = x₁a₁x₂a₂"]
    assert product_relations("ctimes_k", 3)[:2] == product_relations("times0")
    with pytest.raises(BadParam):
        product_relations("star_k")
    with pytest.raises(BadParam):
        product_relations("nosuch")
