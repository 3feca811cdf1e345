import json
from fractions import Fraction

import pytest
from conftest import dendrograms, metric_spaces
from hypothesis import given
from hypothesis import strategies as st

from unchain import ParseError, SL, SLalpha, TriangleViolation, barbell_k4, validate_metric
from unchain.formats import (
    decode_number,
    dendrogram_from_json,
    dendrogram_to_json,
    dump_edges,
    dump_matrix,
    emit_dendrogram,
    encode_number,
    parse_input,
    parse_number,
    snap,
    to_dot,
    to_newick,
)
from unchain.generators import BARBELL_LABELS, barbell_edges
from unchain.metric import Dendrogram, Partition


def test_two_point_csv():
    s = parse_input("0,0.5\n0.5,0")
    assert s.n == 2 and s.d(0, 1) == 0.5
    assert s.labels == ("0", "1")


def test_csv_header_supplies_labels():
    s = parse_input("p,q\n0,2\n2,0\n")
    assert s.labels == ("p", "q")
    assert s.d(0, 1) == 2


@pytest.mark.parametrize("text, line", [
    ("0,1\n1,0,3\n", 2),
    ("0,1\n1,x\n", 2),
    ("0,1,1\n1,0,1\n", 2),
    ("", 1),
])
def test_malformed_csv_reports_location(text, line):
    with pytest.raises(ParseError) as exc:
        parse_input(text)
    assert exc.value.line == line


def test_csv_values_still_validated():
    with pytest.raises(TriangleViolation):
        parse_input("0,1,3\n1,0,1\n3,1,0\n")


def test_edges_csv_gives_path_distances():
    text = "src,dst,weight\n" + "".join(f"{a},{b},{w}\n" for a, b, w in barbell_edges(0))
    s = parse_input(text, "edges-csv")
    xs = [s.index(f"x{k}") for k in range(4)]
    ys = [s.index(f"y{k}") for k in range(4)]
    assert {s.d(x, y) for x in xs for y in ys} == {1, 2, 3}
    assert {s.d(x, y) for x in xs[1:] for y in ys[1:]} == {3}


def test_edges_csv_rejects_wrong_arity():
    with pytest.raises(ParseError):
        parse_input("a,b\n", "edges-csv")


def test_matrix_json_accepts_strings_and_bare_lists():
    s = parse_input('{"labels": ["a", "b"], "matrix": [[0, "21/10"], ["21/10", 0]]}', "matrix-json", exact=True)
    assert s.d(0, 1) == Fraction(21, 10)
    s = parse_input("[[0, 1.5], [1.5, 0]]", "matrix-json")
    assert s.d(0, 1) == 1.5
    with pytest.raises(ParseError):
        parse_input("[[0, 1], [1]]", "matrix-json")
    with pytest.raises(ParseError):
        parse_input("{nope", "matrix-json")


def test_unknown_format():
    with pytest.raises(ValueError):
        parse_input("0", "xml")


def test_number_parsing_modes():
    assert parse_number("0.1", exact=True) == Fraction(1, 10)
    assert parse_number("0.1") == 0.1
    assert parse_number("3") == 3 and type(parse_number("3", exact=True)) is int
    assert parse_number("7/4") == 1.75
    with pytest.raises(ValueError):
        parse_number("")


def test_snap_stays_exact():
    assert snap(Fraction(1, 3), 2) == Fraction(33, 100)
    assert snap(0.123456, 3) == 0.123
    assert snap(Fraction(199, 100), 0) == 2


def test_snap_applies_to_input():
    s = parse_input("0,0.10000001\n0.10000001,0\n", exact=True, snap_decimals=6)
    assert s.d(0, 1) == Fraction(1, 10)


def test_number_codec():
    assert encode_number(Fraction(21, 10)) == "21/10"
    assert encode_number(Fraction(4, 2)) == 2
    assert decode_number("21/10") == Fraction(21, 10)
    with pytest.raises(ValueError):
        decode_number(True)


# -- writing dendrograms -------------------------------------------------------

def test_two_leaf_newick():
    s = validate_metric(["p", "q"], [[0, 0.5], [0.5, 0]])
    assert to_newick(SL.run(s)) == "(p:0.5,q:0.5);"


def test_singleton_outputs():
    d = SL.run(validate_metric(["only"], [[0]]))
    assert dendrogram_to_json(d)["heights"] == [0]
    assert to_newick(d) == "only;"


def test_barbell_json_heights_in_float_mode():
    text = dump_matrix(barbell_k4(Fraction(1, 10))[1])
    s = parse_input(text)
    data = json.loads(emit_dendrogram(SLalpha(1).run(s), "json"))
    assert data["heights"] == [0, 1, 2.1]
    assert data["labels"] == list(BARBELL_LABELS)
    assert [m["parents"] for m in data["merges"]][-1] == [8, 9]


def test_newick_quotes_awkward_labels():
    s = validate_metric(["a b", "c"], [[0, 1], [1, 0]])
    assert to_newick(SL.run(s)) == "('a b':1,c:1);"


def test_newick_multifurcates_on_ties():
    s = validate_metric(None, [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert to_newick(SL.run(s)) == "(0:1,1:1,2:1);"


def test_dot_has_one_cluster_per_level(abc):
    text = to_dot(SL.run(abc))
    assert text.count("subgraph cluster_level_") - text.count("_block_") == 3
    assert text.startswith("digraph dendrogram {")


def test_emission_is_byte_identical(abc):
    for fmt in ("json", "newick", "dot"):
        assert emit_dendrogram(SL.run(abc), fmt) == emit_dendrogram(SL.run(abc), fmt)
    with pytest.raises(ValueError):
        emit_dendrogram(SL.run(abc), "svg")


def test_fraction_heights_in_json():
    d = Dendrogram((0, Fraction(1, 3)), (Partition.singletons(2), Partition.one_block(2)))
    assert dendrogram_to_json(d)["heights"] == [0, "1/3"]


# -- round trips -----------------------------------------------------------------

@given(metric_spaces(min_n=1, max_n=7, rational=True), st.sampled_from(["matrix-csv", "matrix-json"]))
def test_exact_matrix_round_trip(space, fmt):
    back = parse_input(dump_matrix(space, fmt), fmt, exact=True)
    assert back.dist == space.dist and back.labels == space.labels


@given(metric_spaces(min_n=2, max_n=7, rational=True))
def test_edge_list_round_trip(space):
    back = parse_input(dump_edges(space), "edges-csv", exact=True)
    assert back.dist == space.dist


@given(st.lists(st.floats(0.01, 100, allow_nan=False), min_size=1, max_size=1))
def test_float_matrix_round_trip(vals):
    s = validate_metric(None, [[0, vals[0]], [vals[0], 0]])
    assert parse_input(dump_matrix(s)).dist == s.dist


@given(dendrograms(max_n=10))
def test_json_dendrogram_round_trip(d):
    data = json.loads(emit_dendrogram(d, "json"))
    assert dendrogram_from_json(data) == d
    new_blocks = sum(len(set(q.blocks) - set(p.blocks)) for p, q in zip(d.levels, d.levels[1:]))
    assert len(data["merges"]) == new_blocks
