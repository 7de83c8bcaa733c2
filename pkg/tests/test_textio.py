from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F1
from instances import KINDS, random_instance
from tropkit.core import INF, Domain, Relation, TropicalSystem, TwoSidedSystem
from tropkit.dimension import Graph
from tropkit.maxatom import MaxAtom
from tropkit.textio import (
    ParseError,
    emit,
    emit_matrix,
    parse,
    parse_certificate,
    parse_graph,
    parse_map,
    parse_matrix,
    parse_mpg,
    parse_twosided,
    parse_vector_arg,
)


class TestExamples:
    def test_tropical(self):
        assert parse_matrix("tropical 2 3\n1 0 0\n0 1 0\n") == F1
        assert emit_matrix(F1) == "tropical 2 3\n1 0 0\n0 1 0\n"

    def test_tropical_inf(self):
        A = parse_matrix("tropical 1 2\n0 inf\n")
        assert A.rows == ((0, INF),) and A.domain is Domain.INT_INF

    def test_graph(self):
        assert parse_graph("graph 3 2\n0 1\n1 2\n") == Graph.of(3, [(0, 1), (1, 2)])

    def test_minplus(self):
        S = parse_twosided("minplus le 1 2\n0 inf\ninf 0\n")
        assert S == TwoSidedSystem.of([[0, INF]], [[INF, 0]], Relation.LE)

    def test_map(self):
        S = parse_map("map 3 1\natom 2 -1 2 0 0 1 3\n")
        assert S.atoms == (MaxAtom.of(2, [(0, 0), (1, 3)], -1),)

    def test_mpg(self):
        g = parse_mpg("mpg 1 1 2 0\n0 1 5\n1 0 -5\n")
        assert g.edges == ((0, 1, 5), (1, 0, -5))

    def test_certificate(self):
        c = parse_certificate("cert 1\n0 inf 0\nblocks 2\n0\n1 2\nrows 1\n1\n")
        assert c.witness == (0, INF, 0) and c.form.column_blocks == ((0,), (1, 2)) and c.claimed_k == 1

    def test_certificate_without_rows(self):
        text = "cert 0\n0\nblocks 1\n0\nrows 0\n"
        assert emit(parse_certificate(text)) == text

    def test_comments_and_blank_lines(self):
        assert parse_matrix("# F1\n\ntropical 2 3\n1 0 0\n\n0 1 0\n") == F1

    def test_int_tag(self):
        A = parse_matrix("tropical 1 2 inf\n0 1\n")
        assert A.domain is Domain.INT_INF and emit(A) == "tropical 1 2 inf\n0 1\n"
        assert emit(parse_matrix("tropical 1 2 int\n0 1\n")) == "tropical 1 2\n0 1\n"

    def test_big_integers(self):
        A = TropicalSystem.of([[10**40, -(10**40)]])
        assert parse(emit(A)) == A

    def test_vector_arg(self):
        assert parse_vector_arg("0,1,inf") == (0, 1, INF)
        assert parse_vector_arg("0 -3") == (0, -3)


class TestErrors:
    @pytest.mark.parametrize("text, line, col", [
        ("tropical 2 3\n1 0 0\n0 x 0\n", 3, 3),
        ("tropical 1 2 int\n0 inf\n", 2, 3),
        ("tropical 2 2\n0 0\n", 3, 1),
        ("tropical 1 2\n0 0 0\n", 2, 5),
        ("tropical 1 2\n0 0\n1 1\n", 3, 1),
        ("tropical 1\n0\n", 1, 1),
        ("tropicl 1 1\n0\n", 1, 1),
        ("  \n\nmpg 1 1 1 0\n0 1 1\n", 3, 1),
        ("graph 2 1\n0 0\n", 1, 1),
        ("", 1, 1),
    ])
    def test_positions(self, text, line, col):
        with pytest.raises(ParseError) as exc:
            parse(text)
        assert (exc.value.line, exc.value.col) == (line, col)
        assert f"line {line}, column {col}" in str(exc.value)

    def test_expected_kind(self):
        with pytest.raises(ParseError):
            parse_matrix("graph 1 0\n")

    def test_negative_count(self):
        with pytest.raises(ParseError):
            parse("tropical -1 2\n")


@given(st.sampled_from(KINDS), st.integers(0, 2**32))
def test_round_trip(kind, seed):
    x = random_instance(random.Random(seed), kind)
    text = emit(x)
    y = parse(text)
    assert y == x
    assert emit(y) == text
