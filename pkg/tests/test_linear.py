import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import composable, partitions
from partcat.errors import ArityMismatch, ContextMismatch, ParseError, SignatureMismatch
from partcat.linear import (
    DISCONNECTER,
    DOT,
    DOWN,
    ID,
    LinearCombination,
    all_words,
    canonical_words,
    dotted,
    format_lc,
    from_dotted_basis,
    is_separated,
    lin_compose,
    lin_involute,
    lin_tensor,
    parse_dotted_word,
    parse_lc,
    pi,
    pi_word,
    sandwich,
    scale,
    to_dotted_basis,
)
from partcat.partition import (
    EXTRA_REGIME,
    LINE,
    PLAIN,
    all_partitions,
    generator,
    identity,
    parse,
    random_partition,
    tensor,
)
from partcat.scalar import Scalar
from partcat.tensor_maps import ExactMatrix, t_matrix

L = LINE
PABCDCB = parse("P(x a b ; a b y)")


def lc(p, N, c=1):
    return LinearCombination.of(p, N, c)


def zero(sig, N):
    return LinearCombination.zero(sig, N)


# -------------------------------------------------------------- composition

@pytest.mark.parametrize("N", [2, 3, 5])
def test_display_composition_is_n_squared(N):
    q = parse("P(x a b y ; z b a a)")
    p = parse("P(a a a ; x a a y)")
    assert lin_compose(q, p, N) == lc(parse("P(a a a ; x a a a)"), N, N * N)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_extra_composition_is_n(N):
    q = parse("P(x a b y:t ; z:t b a a)")
    p = parse("P(a a a ; x a a y:t)")
    assert lin_compose(q, p, N) == lc(parse("P(a a a ; x:t a a a)"), N, N)


def test_identity_is_unit():
    p = lc(PABCDCB, 3)
    assert lin_compose(lc(identity((L,) * 3), 3), p) == p
    assert lin_compose(p, lc(identity((L,) * 3), 3)) == p


def test_context_and_signature_errors():
    with pytest.raises(ContextMismatch):
        lin_compose(lc(ID, 2), lc(ID, 3))
    with pytest.raises(SignatureMismatch):
        lin_compose(lc(ID, 2), lc(generator("pairpart"), 2))
    with pytest.raises(SignatureMismatch):
        lc(ID, 2) + lc(generator("pairpart"), 2)


@given(composable(), st.integers(1, 4))
def test_t_is_strict_on_linear_composition(pq, N):
    p, q = pq
    assert t_matrix(lin_compose(q, p, N), N) == t_matrix(q, N) @ t_matrix(p, N)


@st.composite
def combos(draw, regime=PLAIN, N=3):
    p = draw(partitions(regime, max_side=2))
    others = draw(st.lists(partitions(regime, upper=p.upper).filter(lambda q: q.l == p.l), max_size=2))
    coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    out = LinearCombination.of(p, N, draw(coeffs))
    for q in others:
        out = out + LinearCombination.of(q, N, draw(coeffs))
    return out


@given(combos(), combos())
def test_t_is_monoidal_on_combinations(a, b):
    assert t_matrix(lin_tensor(a, b), 3) == t_matrix(a, 3).kron(t_matrix(b, 3))
    assert t_matrix(lin_involute(a), 3) == t_matrix(a, 3).T


def test_tensor_of_caps():
    cap = generator("pairpart")
    assert lin_tensor(lc(cap, 2), lc(cap, 2)) == lc(tensor(cap, cap), 2)


def test_scale_zero_is_empty():
    assert not scale(0, lc(ID, 4))
    assert scale(0, lc(ID, 4)) == zero(ID.signature, 4)


def test_no_zero_terms_stored():
    a = lc(ID, 3) + lc(ID, 3, -1)
    assert len(a) == 0


# -------------------------------------------------------------- projections

@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_projection_identities(N):
    down, dot = pi(DOWN, N), pi(DOT, N)
    z = zero(ID.signature, N)
    assert lin_compose(down, dot) == z == lin_compose(dot, down)
    assert lin_compose(dot, dot) == dot
    assert lin_compose(down, down) == down
    assert lin_involute(dot) == dot and lin_involute(down) == down
    assert dot + down == lc(ID, N)


def test_disconnecter_squares_to_n():
    assert lin_compose(DISCONNECTER, DISCONNECTER, 5) == lc(DISCONNECTER, 5, 5)


@pytest.mark.parametrize("N", [2, 3])
def test_down_projects_onto_xi(N):
    m = t_matrix(pi(DOWN, N), N)
    assert m @ m == m and m.T == m
    assert all(v == Fraction(1, N) for v in m.entries.values())
    assert len(m.entries) == N * N


@pytest.mark.parametrize("k", range(1, 5))
def test_words_form_complete_orthogonal_family(k):
    N = 3
    words = list(all_words(k))
    total = zero(((L,) * k, (L,) * k), N)
    for w in words:
        total = total + pi_word(w, N)
    assert total == lc(identity((L,) * k), N)
    r = random.Random(k)
    for _ in range(6):
        w, v = r.choice(words), r.choice(words)
        prod = lin_compose(pi_word(w, N), pi_word(v, N))
        assert prod == (pi_word(w, N) if w == v else zero(prod.sig, N))


# ----------------------------------------------------------------- sandwich

def test_sandwich_orthogonal():
    assert not sandwich(lc(ID, 3), (DOT,), (DOWN,))


def test_sandwich_arity():
    with pytest.raises(ArityMismatch):
        sandwich(lc(ID, 3), (DOT, DOT), (DOWN,))


def test_sandwich_display():
    w1, w2 = (DOWN, DOT, DOT), (DOT, DOT, DOWN)
    assert sandwich(lc(PABCDCB, 3), w1, w2) == dotted(PABCDCB, 3)


@pytest.mark.parametrize("N", [2, 3])
def test_sandwich_sum_recovers_p(N):
    r = random.Random(N)
    for _ in range(100):
        p = random_partition(r, PLAIN, r.randint(0, 2), r.randint(0, 2))
        total = zero(p.signature, N)
        for w1 in all_words(p.k):
            for w2 in all_words(p.l):
                part = sandwich(lc(p, N), w1, w2)
                assert sandwich(part, w1, w2) == part
                total = total + part
        assert total == lc(p, N)


# ------------------------------------------------------------- dotted basis

@pytest.mark.parametrize("N", [2, 3, 4])
def test_dotted_display(N):
    inv = Fraction(1, N)
    want = LinearCombination(PABCDCB.signature, {
        PABCDCB: 1,
        parse("P(x y a ; z a x1)"): -inv,
        parse("P(x a y ; a z x1)"): -inv,
        parse("P(x y z ; x1 y1 z1)"): inv * inv,
    }, N)
    assert dotted(PABCDCB, N) == want


def test_dotted_cap():
    cap = generator("pairpart")
    want = lc(cap, 4) + lc(parse("P(; x y)"), 4, Fraction(-1, 4))
    assert dotted(cap, 4) == want


def test_dotted_is_separated_at_canonical_words():
    r = random.Random(2)
    for _ in range(50):
        p = random_partition(r, PLAIN, r.randint(0, 3), r.randint(0, 3))
        w1, w2 = canonical_words(p)
        assert is_separated(dotted(p, 3), w1, w2)
    assert not is_separated(lc(generator("pairpart"), 3), (), (DOT, DOT))
    assert is_separated(zero(((L,), (L, L)), 3), (DOWN,), (DOT, DOWN))


@pytest.mark.parametrize("total", range(7))
def test_basis_change_is_unit_triangular(total):
    for k in range(total + 1):
        for p in all_partitions((L,) * k, (L,) * (total - k)):
            d = dotted(p, 2)
            assert d.coefficient(p) == 1
            assert all(q == p or q.num_blocks > p.num_blocks for q in d)


def test_basis_roundtrip():
    r = random.Random(9)
    for _ in range(200):
        sig_k, sig_l = r.randint(0, 2), r.randint(0, 2)
        parts = list(all_partitions((L,) * sig_k, (L,) * sig_l))
        N = r.choice((2, 3))
        x = zero(((L,) * sig_k, (L,) * sig_l), N)
        for p in r.sample(parts, min(3, len(parts))):
            x = x + lc(p, N, Fraction(r.randint(-4, 4), r.randint(1, 3)))
        coeffs = to_dotted_basis(x)
        assert from_dotted_basis(coeffs, x.sig, N) == x


@pytest.mark.parametrize("N", [2, 3])
def test_t_of_dotted_is_projected(N):
    r = random.Random(N)
    mats = {DOT: t_matrix(pi(DOT, N), N), DOWN: t_matrix(pi(DOWN, N), N)}

    def word_matrix(w):
        m = ExactMatrix.identity(1)
        for letter in w:
            m = m.kron(mats[letter])
        return m

    for _ in range(40):
        p = random_partition(r, PLAIN, r.randint(0, 2), r.randint(0, 2))
        w1, w2 = canonical_words(p)
        assert t_matrix(dotted(p, N), N) == word_matrix(w2) @ t_matrix(p, N) @ word_matrix(w1)


# ---------------------------------------------------------------- text form

def test_parse_format_roundtrip():
    x = lc(PABCDCB, 3) + lc(parse("P(x y z ; x1 y1 z1)"), 3, Fraction(-2, 3))
    assert parse_lc(format_lc(x), 3) == x
    s = LinearCombination.of(ID, 3, Scalar(1, -1, 3))
    assert format_lc(s) == "(1-1*sqrtN) * P(a ; a)"
    assert parse_lc(format_lc(s), 3) == s


def test_parse_lc_zero_and_errors():
    assert parse_lc("0", 2, ID.signature) == zero(ID.signature, 2)
    with pytest.raises(ParseError):
        parse_lc("0", 2)
    with pytest.raises(ParseError):
        parse_lc("3 * Q(a ; a)", 2)


def test_dotted_words():
    assert parse_dotted_word("s.d↓") == (DOWN, DOT, DOT, DOWN)
    with pytest.raises(ParseError):
        parse_dotted_word("x")


def test_extra_points_in_combinations():
    p = generator("positionerext")
    assert p.regime == EXTRA_REGIME
    # the middle ▲ is closed off but contributes no factor
    assert lin_compose(p, lin_involute(lc(p, 3))) == lc(parse("P(x:t a ; y:t a)"), 3)
