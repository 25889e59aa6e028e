import random

import pytest
from hypothesis import given, strategies as st

from conftest import composable, partitions
from oracles import catalan, sympy_rank, t_entries
from partcat.errors import ArityMismatch, SignatureMismatch
from partcat.partition import (
    EXTRA_REGIME,
    LINE,
    REGIMES,
    all_partitions,
    TWOCOL,
    compose,
    generator,
    identity,
    involute,
    nc_pairings,
    parse,
    random_partition,
    tensor,
)
from partcat.tensor_maps import (
    U_TARGET,
    ExactMatrix,
    delta_p,
    dump_matrix,
    mor_dim,
    rank,
    t_matrix,
    verify_t_functor,
    word_dim,
)

L = LINE
P_EXAMPLE = parse("P(a a a ; x a a y)")
Q_EXAMPLE = parse("P(x a b y ; z b a a)")


# ------------------------------------------------------------------- delta_p

def test_delta_p_display_example():
    # δ_p(i, j) = δ_{i1 i2 i3 j2 j3}
    for i in [(1, 1, 1), (1, 2, 1), (2, 2, 2)]:
        for j in [(0, 1, 1, 0), (3, 2, 2, 1), (1, 1, 2, 1)]:
            want = int(len({*i, j[1], j[2]}) == 1)
            assert delta_p(P_EXAMPLE, i, j) == want


def test_delta_q_display_example():
    # δ_q(i, j) = δ_{i2 j3 j4} δ_{i3 j2}
    r = random.Random(1)
    for _ in range(200):
        i = tuple(r.randint(0, 2) for _ in range(4))
        j = tuple(r.randint(0, 2) for _ in range(4))
        want = int(i[1] == j[2] == j[3] and i[2] == j[1])
        assert delta_p(Q_EXAMPLE, i, j) == want


def test_delta_identity():
    i = identity((L,))
    assert delta_p(i, (3,), (3,)) == 1
    assert delta_p(i, (3,), (4,)) == 0


def test_delta_arity():
    with pytest.raises(ArityMismatch):
        delta_p(identity((L,)), (1, 2), (1,))


def test_delta_ignores_extra_points():
    p = generator("positionerext")
    assert delta_p(p, (2,), (2,)) == 1
    assert delta_p(p, (2, 0), (0, 2)) == 1
    assert delta_p(p, (2,), (1,)) == 0


# ------------------------------------------------------------------ t_matrix

def test_cap_vector():
    m = t_matrix(generator("pairpart"), 2)
    assert m.shape == (4, 1)
    assert [row[0] for row in m.to_dense()] == [1, 0, 0, 1]


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_positioner_is_identity(N):
    assert t_matrix(generator("positionerext"), N) == ExactMatrix.identity(N)


def test_extra_example_map():
    # T_p(e_i1 ⊗ e_i2 ⊗ e_i3) = δ_{i2 i3} e_i2 ⊗ e_i2 ⊗ Σ e_k
    p = parse("P(a x:t b b ; c:t b b d)")
    N = 3
    m = t_matrix(p, N)
    for i1 in range(N):
        for i2 in range(N):
            for i3 in range(N):
                col = (i1 * N + i2) * N + i3
                got = {r for (r, c) in m.entries if c == col}
                want = {(i2 * N + i2) * N + k for k in range(N)} if i2 == i3 else set()
                assert got == want


@given(partitions(max_side=3), st.integers(1, 3))
def test_t_matrix_matches_oracle(p, N):
    m = t_matrix(p, N)
    assert m.entries == t_entries(p, N)
    assert set(m.entries.values()) <= {1}


def test_u_target_dimensions():
    assert word_dim((L, L), 4, U_TARGET) == 9
    assert t_matrix(identity((L,)), 4, U_TARGET) == ExactMatrix.identity(3)


# ------------------------------------------------------------- functoriality

@pytest.mark.parametrize("regime", REGIMES)
def test_functor_on_random_pairs(regime):
    r = random.Random(11)
    for _ in range(60):
        p = random_partition(r, regime, r.randint(0, 3), r.randint(0, 3))
        q = random_partition(r, regime, p.l, r.randint(0, 3), upper=p.lower)
        rep = verify_t_functor(p, q, r.randint(1, 3))
        assert rep.ok, rep.witness


@given(composable(), st.integers(1, 3))
def test_composition_scales_by_loops(pq, N):
    p, q = pq
    r, loops = compose(q, p)
    assert t_matrix(r, N).scale(N ** loops) == t_matrix(q, N) @ t_matrix(p, N)


@given(st.sampled_from(REGIMES).flatmap(lambda r: st.tuples(partitions(r), partitions(r))),
       st.integers(1, 3))
def test_tensor_is_kron(pq, N):
    p, q = pq
    assert t_matrix(tensor(p, q), N) == t_matrix(p, N).kron(t_matrix(q, N))


@given(partitions(), st.integers(1, 3))
def test_involution_is_transpose(p, N):
    assert t_matrix(involute(p), N) == t_matrix(p, N).T


def test_cap_cup_loop():
    cap = generator("pairpart")
    for N in (1, 2, 5):
        m = t_matrix(involute(cap), N) @ t_matrix(cap, N)
        assert m.entries == {(0, 0): N}


def test_display_composition_factor():
    r, loops = compose(Q_EXAMPLE, P_EXAMPLE)
    assert loops == 2
    assert t_matrix(r, 3).scale(9) == t_matrix(Q_EXAMPLE, 3) @ t_matrix(P_EXAMPLE, 3)


def test_verify_rejects_noncomposable():
    with pytest.raises(SignatureMismatch):
        verify_t_functor(identity((L,)), generator("pairpart"), 2)


# ---------------------------------------------------------------------- rank

def test_mor_dim_examples():
    pairs = list(nc_pairings((), (L,) * 4))
    assert mor_dim(pairs, ((), (L,) * 4), 3) == 2
    assert mor_dim(pairs, ((), (L,) * 4), 1) == 1
    for N in (1, 2, 4):
        assert mor_dim([generator("fourpart")], ((), (L,) * 4), N) == 1


@pytest.mark.parametrize("k", range(1, 5))
def test_mor_dim_catalan_for_large_n(k):
    pairs = list(nc_pairings((), (L,) * (2 * k)))
    assert mor_dim(pairs, ((), (L,) * (2 * k)), 2 * k) == catalan(k)


def test_mor_dim_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        mor_dim([generator("pairpart")], ((), (L,) * 4), 2)


SMALL = list(all_partitions((L,), (L, L)))


@given(st.lists(st.sampled_from(SMALL), min_size=1, max_size=6), st.integers(1, 3))
def test_rank_matches_sympy(ps, N):
    vecs = [t_matrix(p, N).entries for p in ps]
    assert rank(vecs) == sympy_rank(vecs)


def test_rank_invariant_under_permutation():
    r = random.Random(5)
    sig = ((L, L), (L, L))
    ps = list(all_partitions(*sig))
    for N in (1, 2, 3):
        vecs = [t_matrix(p, N).entries for p in ps]
        base = rank(vecs)
        assert base == sympy_rank(vecs)
        for _ in range(5):
            perm = list(range(N ** 2))
            r.shuffle(perm)
            cperm = list(range(N ** 2))
            r.shuffle(cperm)
            shuffled = [{(perm[a], cperm[b]): v for (a, b), v in vec.items()} for vec in vecs]
            r.shuffle(shuffled)
            assert rank(shuffled) == base


def test_rank_with_irrational_entries():
    from partcat.scalar import Scalar
    s = Scalar.sqrt(2)
    assert rank([{0: s, 1: 1}, {0: 2, 1: s}]) == 1
    assert rank([{0: s, 1: 1}, {0: 1, 1: s}]) == 2


# ---------------------------------------------------------------------- dump

def test_dump_format():
    out = dump_matrix(t_matrix(generator("pairpart"), 2), ((), (L, L)), 2)
    assert out.splitlines() == ["T ;-- N=2", "0 0 1 0", "3 0 1 0"]


def test_twocol_dims():
    p = parse("P(a:w ; a:b)")
    assert t_matrix(p, 3) == ExactMatrix.identity(3)
    assert TWOCOL in REGIMES and EXTRA_REGIME in REGIMES
