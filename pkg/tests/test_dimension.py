from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F1, F2, systems
from tropkit.core import (
    INF,
    BudgetExceeded,
    InvalidSolutionError,
    PreconditionError,
    Relation,
    StarTable,
    TropicalSystem,
    TwoSidedSystem,
    joint_star_table,
    normalize,
    normalize_twosided,
    star_table,
    translate_rows,
)
from tropkit.dimension import (
    BlockTriangularForm,
    Convention,
    DimensionCertificate,
    Graph,
    Kind,
    decide_dim_at_least,
    global_dimension,
    global_witness,
    local_dimension,
    local_form,
    make_certificate,
    max_btf,
    min_vertex_cover,
    naive_max_btf,
    ordered_partitions,
    tropical_rank,
    vc_to_minplus,
    vc_to_tropical,
    verify_btf,
    verify_certificate,
)
from tropkit.oracles import enumerate_solutions

P3 = Graph.of(3, [(0, 1), (1, 2)])
K3 = Graph.of(3, [(0, 1), (1, 2), (0, 2)])

BTF = BlockTriangularForm.of


class TestVerify:
    def test_examples(self):
        assert verify_btf(star_table(F1), BTF([(0, 1, 2)], (0, 0)))
        assert verify_btf(star_table(F2), BTF([(0,), (1,), (2,), (3, 4)], (3, 3, 3, 3)))
        assert not verify_btf(star_table(F1), BTF([(0,), (1, 2)], (0, 1)))

    def test_later_star_forbidden(self):
        t = StarTable(((True, True, True),), 3)
        assert not verify_btf(t, BTF([(0, 1), (2,)], (0,)))
        assert not verify_btf(t, BTF([(0, 1), (2,)], (1,)))
        assert verify_btf(t, BTF([(0,), (1, 2)], (1,)))

    @pytest.mark.parametrize("form", [
        BTF([(0, 1)], (0, 0)),
        BTF([(0, 1, 2), ()], (0, 0)),
        BTF([(0, 1), (1, 2)], (0, 0)),
        BTF([(0, 1, 2)], (0,)),
        BTF([(0, 1, 2)], (0, 1)),
    ])
    def test_malformed(self, form):
        with pytest.raises(ValueError):
            verify_btf(star_table(F1), form)

    def test_minplus_kinds(self):
        t = StarTable(((True, False, False, True),), 4, split=2)
        assert verify_btf(t, BTF([(0, 1)], (0,)), Kind.MINPLUS_EQ)
        assert not verify_btf(t, BTF([(0,), (1,)], (1,)), Kind.MINPLUS_EQ)
        # inequality rows only need an A-part star next to a B-part star
        assert verify_btf(StarTable(((True, False, False, False),), 4, split=2), BTF([(1,), (0,)], (1,)), Kind.MINPLUS_INEQ)
        assert not verify_btf(StarTable(((False, False, True, False),), 4, split=2), BTF([(1,), (0,)], (1,)), Kind.MINPLUS_INEQ)


class TestMaxBtf:
    def test_examples(self):
        assert max_btf(star_table(F1))[0] == 1
        size, form = max_btf(star_table(F2))
        assert size == 4 and form == BTF([(0,), (1,), (2,), (3, 4)], (3, 3, 3, 3))
        assert max_btf(star_table(TropicalSystem.of([[0, 0]])))[0] == 1

    def test_no_form(self):
        assert max_btf(StarTable(((True, False),), 2)) == (0, None)

    def test_empty_table(self):
        size, form = max_btf(StarTable((), 3))
        assert size == 3 and form.column_blocks == ((0,), (1,), (2,))

    def test_cap(self):
        with pytest.raises(BudgetExceeded):
            max_btf(StarTable((), 17))

    def test_ordered_partitions_count(self):
        # ordered Bell numbers
        assert [sum(1 for _ in ordered_partitions(n)) for n in range(1, 5)] == [1, 3, 13, 75]


@st.composite
def star_tables(draw, kind):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(0, 4))
    width = n if kind is Kind.TROPICAL else 2 * n
    stars = draw(st.lists(st.lists(st.booleans(), min_size=width, max_size=width), min_size=m, max_size=m))
    return StarTable(tuple(tuple(r) for r in stars), width, None if kind is Kind.TROPICAL else n)


@pytest.mark.parametrize("kind", list(Kind))
@settings(max_examples=80)
@given(data=st.data())
def test_dp_matches_naive(kind, data):
    t = data.draw(star_tables(kind))
    size, form = max_btf(t, kind)
    assert size == naive_max_btf(t, kind)
    if form is not None:
        assert verify_btf(t, form, kind)


class TestLocal:
    def test_examples(self):
        assert local_dimension(F1, (0, 0, 0)) == 0
        assert local_dimension(F2, (0,) * 5) == 3
        assert local_dimension(vc_to_tropical(P3), (0,) * 4) == 2

    def test_not_a_solution(self):
        with pytest.raises(InvalidSolutionError):
            local_dimension(F1, (0, 1, 1))

    def test_infinite_coordinates_dropped(self):
        A = TropicalSystem.of([[0, 0, INF], [INF, INF, 0]])
        assert local_dimension(A, (0, 0, INF)) == 0

    @settings(max_examples=30)
    @given(systems(hi=2), st.integers(-3, 3), st.data())
    def test_invariance(self, A, c, data):
        r = data.draw(st.lists(st.integers(-3, 3), min_size=A.m, max_size=A.m))
        B = translate_rows(A, r)
        for x in enumerate_solutions(A, 2)[:5]:
            d = local_dimension(A, x)
            assert local_dimension(B, x) == d
            assert local_dimension(A, tuple(v + c for v in x)) == d


class TestGlobal:
    def test_examples(self):
        assert global_dimension(F1) == 0
        assert global_dimension(F2) == 3
        assert global_dimension(vc_to_tropical(K3)) == 1

    def test_unsolvable(self):
        assert global_dimension(TropicalSystem.of([[0, 1], [1, 0]])) is None

    def test_decide(self):
        assert decide_dim_at_least(F2, 4, Convention.AFFINE)
        assert not decide_dim_at_least(F1, 1, Convention.PROJECTIVE)
        assert decide_dim_at_least(F1, 0, Convention.PROJECTIVE)
        assert not decide_dim_at_least(TropicalSystem.of([[0, 1], [1, 0]]), 0)

    def test_extended(self):
        A = TropicalSystem.of([[0, 0, INF], [INF, 5, 0]])
        w = global_witness(A)
        assert w is not None and w.dimension == local_dimension(A, w.point)

    @settings(max_examples=40)
    @given(systems(m_max=3, n_max=3, hi=3))
    def test_wider_grid_agrees(self, A):
        M = normalize(A)[1]
        assert global_dimension(A) == global_dimension(A, bound=2 * (M + 1) * A.ncols)

    @settings(max_examples=40)
    @given(st.data())
    def test_minplus_wider_grid_agrees(self, data):
        n = data.draw(st.integers(1, 3))
        row = st.lists(st.integers(0, 2), min_size=n, max_size=n)
        m = data.draw(st.integers(1, 2))
        S = TwoSidedSystem.of(data.draw(st.lists(row, min_size=m, max_size=m)),
                              data.draw(st.lists(row, min_size=m, max_size=m)),
                              data.draw(st.sampled_from(Relation)), n)
        M = normalize_twosided(S)[1]
        assert global_dimension(S) == global_dimension(S, bound=2 * (M + 1) * n)

    @settings(max_examples=40)
    @given(systems(m_max=4, n_max=4, hi=2))
    def test_rank_bound(self, A):
        d = global_dimension(A)
        if d is not None:
            assert A.ncols - (d + 1) <= tropical_rank(A)


class TestCertificates:
    def test_round_trip(self):
        cert = make_certificate(F2, 3)
        assert cert is not None and verify_certificate(F2, cert)
        assert make_certificate(F2, 4) is None

    def test_moved_row_rejected(self):
        cert = make_certificate(F2, 3)
        moved = DimensionCertificate(cert.witness, BTF(cert.form.column_blocks, (3, 3, 3, 2)), 3)
        assert not verify_certificate(F2, moved)

    def test_non_solution_rejected(self):
        cert = make_certificate(F1, 0)
        assert not verify_certificate(F1, DimensionCertificate((0, 1, 1), cert.form, 0))

    def test_overclaim_rejected(self):
        cert = make_certificate(F1, 0)
        assert not verify_certificate(F1, DimensionCertificate(cert.witness, cert.form, 1))

    @settings(max_examples=30)
    @given(systems(m_max=3, n_max=3, hi=2), st.integers(0, 3))
    def test_decision_matches_certificates(self, A, k):
        # some grid solution carries a verifiable certificate iff the answer is yes
        found = False
        for x in enumerate_solutions(A, normalize(A)[1] * A.ncols):
            size, form = local_form(A, x)
            if verify_certificate(A, DimensionCertificate(x, form, k)):
                found = True
                break
        assert decide_dim_at_least(A, k) == found


class TestVertexCover:
    def test_tropical_instance(self):
        A = vc_to_tropical(P3)
        assert A.rows == ((0, 0, 0, 1), (0, 1, 0, 0))
        assert all(row.count(0) == 3 for row in vc_to_tropical(K3).rows)
        assert vc_to_tropical(K3).shape == (3, 4)

    def test_minplus_instance(self):
        S = vc_to_minplus(P3)
        assert S.lhs == ((1, 0, 0, 1), (1, 1, 0, 0))
        assert S.rhs == ((0, 1, 1, 2), (0, 2, 1, 1))
        size, _ = max_btf(joint_star_table(S), Kind.MINPLUS_EQ)
        assert size == 3 - min_vertex_cover(P3) + 1

    def test_disconnected(self):
        with pytest.raises(PreconditionError):
            vc_to_tropical(Graph.of(4, [(0, 1), (2, 3)]))

    def test_graph_validation(self):
        with pytest.raises(ValueError):
            Graph.of(3, [(0, 0)])
        with pytest.raises(ValueError):
            Graph.of(3, [(0, 1), (1, 0)])

    def test_min_vertex_cover(self):
        assert min_vertex_cover(P3) == 1
        assert min_vertex_cover(K3) == 2
        assert min_vertex_cover(Graph.of(4, [])) == 0


class TestRank:
    def test_examples(self):
        assert tropical_rank(F1) == 2
        assert tropical_rank(F2) == 4
        assert tropical_rank(TropicalSystem.of([[3], [1]])) == 1

    def test_decider_injection(self):
        calls = []

        def decider(A):
            calls.append(A.ncols)
            return A.ncols < 2

        assert tropical_rank(F1, decider) == 3
        assert calls == [3]


def test_all_grid_points_respect_global_max():
    for A in (F1, F2, vc_to_tropical(P3)):
        g = global_dimension(A)
        for x in enumerate_solutions(A, 2):
            assert local_dimension(A, x) <= g
    assert list(itertools.islice(ordered_partitions(2), 3)) == [((0, 1),), ((0,), (1,)), ((1,), (0,))]
