import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latentgo import sgf
from latentgo.board import GameRecord, Move


def test_basic_parse():
    coll = sgf.parse("(;GM[1]SZ[9];B[ee];W[eg])")
    assert len(coll.trees) == 1
    tree = coll.trees[0]
    assert len(tree.nodes) == 3
    rec = sgf.to_record(tree, default_komi=7.0)
    assert rec.size == 9
    assert rec.moves == (Move.place(4, 4), Move.place(4, 6))


def test_pass_conventions():
    for text in ("(;B[])", "(;B[tt])"):
        rec = sgf.to_record(sgf.parse(text).trees[0], default_komi=7.0)
        assert rec.moves == (Move.pass_move(),)


def test_error_offset_and_expectation():
    with pytest.raises(sgf.SgfError) as exc:
        sgf.parse("(;B[e")
    assert exc.value.offset == 5
    assert "']'" in str(exc.value)


def test_lowercase_identifier_rejected():
    with pytest.raises(sgf.SgfError):
        sgf.parse("(;bad[1])")


def test_escaped_bracket_value():
    coll = sgf.parse(r"(;C[a\]b])")
    assert coll.trees[0].nodes[0][0] == ("C", ("a]b",))
    assert sgf.serialize(coll) == r"(;C[a\]b])"


def test_backslash_round_trip():
    coll = sgf.SgfCollection(
        (sgf.GameTree(((("C", ("back\\slash]x",)),),)),)
    )
    assert sgf.parse(sgf.serialize(coll)) == coll


def test_empty_collection_serializes_empty():
    assert sgf.serialize(sgf.SgfCollection(())) == ""
    assert sgf.parse("") == sgf.SgfCollection(())


def test_setup_stones_rejected():
    with pytest.raises(sgf.UnsupportedSetupError):
        sgf.to_record(sgf.parse("(;GM[1]AB[aa])").trees[0], 7.0)


def test_non_go_game_rejected():
    with pytest.raises(ValueError):
        sgf.to_record(sgf.parse("(;GM[2];B[aa])").trees[0], 7.0)


def test_komi_default_and_explicit():
    rec = sgf.to_record(sgf.parse("(;SZ[9];B[aa])").trees[0], default_komi=5.5)
    assert rec.komi == 5.5
    rec = sgf.to_record(sgf.parse("(;SZ[9]KM[7];B[aa])").trees[0], default_komi=5.5)
    assert rec.komi == 7.0


def test_ten_alternating_moves():
    moves = "".join(
        f";{'B' if i % 2 == 0 else 'W'}[{chr(97 + i % 9)}{chr(97 + i // 9)}]"
        for i in range(10)
    )
    rec = sgf.to_record(sgf.parse(f"(;SZ[9]KM[7]{moves})").trees[0], 7.0)
    assert len(rec.moves) == 10
    assert rec.moves[3] == Move.place(3, 0)


def test_mainline_ignores_variations():
    text = "(;GM[1]SZ[9];B[aa](;W[bb];B[cc])(;W[dd]))"
    rec = sgf.to_record(sgf.parse(text).trees[0], 7.0)
    assert rec.moves == (Move.place(0, 0), Move.place(1, 1), Move.place(2, 2))


def test_from_record_round_trips_moves():
    rec = GameRecord(
        9, 7.0, "selfplay", (Move.place(4, 4), Move.pass_move(), Move.place(0, 8))
    )
    back = sgf.to_record(sgf.from_record(rec), default_komi=0.0, source="selfplay")
    assert back.moves == rec.moves
    assert back.size == rec.size
    assert back.komi == rec.komi


def test_from_record_rejects_resign():
    rec = GameRecord(9, 7.0, "selfplay", (Move.resign(),))
    with pytest.raises(ValueError):
        sgf.from_record(rec)


def test_unknown_properties_preserved():
    text = "(;GM[1]SZ[9]RU[Chinese]PB[someone];B[aa]C[nice move])"
    coll = sgf.parse(text)
    assert sgf.parse(sgf.serialize(coll)) == coll


_idents = st.text(st.characters(min_codepoint=65, max_codepoint=90), min_size=1, max_size=3)
_values = st.text(
    st.characters(blacklist_categories=("Cs",), blacklist_characters=""),
    max_size=12,
)
_props = st.tuples(_idents, st.lists(_values, min_size=1, max_size=3).map(tuple))
_nodes = st.lists(_props, max_size=4).map(tuple)


def _trees(depth: int):
    if depth == 0:
        children = st.just(())
    else:
        children = st.lists(_trees(depth - 1), max_size=2).map(tuple)
    return st.builds(
        sgf.GameTree, st.lists(_nodes, min_size=1, max_size=4).map(tuple), children
    )


@settings(max_examples=150, deadline=None)
@given(st.lists(_trees(2), max_size=3).map(tuple).map(sgf.SgfCollection))
def test_parse_serialize_fixed_point(collection):
    text = sgf.serialize(collection)
    parsed = sgf.parse(text)
    assert parsed == collection
    assert sgf.parse(sgf.serialize(parsed)) == parsed
