"""SGF FF[4] parsing and writing for Go game records.

Only the structure needed to ingest played games: the grammar, escaped
property values, and mainline move extraction.  Unknown properties are kept
as opaque strings so a parsed collection serializes back without loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .board import Move, GameRecord

Property = tuple[str, tuple[str, ...]]
Node = tuple[Property, ...]


class SgfError(Exception):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class UnsupportedSetupError(Exception):
    pass


@dataclass(frozen=True)
class GameTree:
    nodes: tuple[Node, ...]
    children: tuple["GameTree", ...] = ()


@dataclass(frozen=True)
class SgfCollection:
    trees: tuple[GameTree, ...]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> SgfError:
        return SgfError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse_collection(self) -> SgfCollection:
        trees = []
        self.skip_ws()
        while self.peek() == "(":
            trees.append(self.parse_tree())
            self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("expected '(' or end of input")
        return SgfCollection(tuple(trees))

    def parse_tree(self) -> GameTree:
        self.expect("(")
        self.skip_ws()
        nodes = []
        while self.peek() == ";":
            nodes.append(self.parse_node())
            self.skip_ws()
        if not nodes:
            raise self.error("expected ';'")
        children = []
        while self.peek() == "(":
            children.append(self.parse_tree())
            self.skip_ws()
        self.expect(")")
        return GameTree(tuple(nodes), tuple(children))

    def parse_node(self) -> Node:
        self.expect(";")
        self.skip_ws()
        props = []
        while self.peek().isalpha():
            props.append(self.parse_property())
            self.skip_ws()
        return tuple(props)

    def parse_property(self) -> Property:
        start = self.pos
        while self.peek().isalpha():
            if not self.peek().isupper():
                raise self.error("property identifiers must be uppercase")
            self.pos += 1
        ident = self.text[start : self.pos]
        self.skip_ws()
        if self.peek() != "[":
            raise self.error("expected '['")
        values = []
        while self.peek() == "[":
            values.append(self.parse_value())
            self.skip_ws()
        return ident, tuple(values)

    def parse_value(self) -> str:
        self.expect("[")
        out = []
        while True:
            ch = self.peek()
            if ch == "":
                raise self.error("expected ']'")
            if ch == "\\":
                self.pos += 1
                nxt = self.peek()
                if nxt == "":
                    raise self.error("expected escaped character")
                out.append(nxt)
                self.pos += 1
                continue
            if ch == "]":
                self.pos += 1
                return "".join(out)
            out.append(ch)
            self.pos += 1


def parse(text: str) -> SgfCollection:
    return _Parser(text).parse_collection()


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("]", "\\]")


def _serialize_tree(tree: GameTree, out: list[str]) -> None:
    out.append("(")
    for node in tree.nodes:
        out.append(";")
        for ident, values in node:
            out.append(ident)
            for v in values:
                out.append(f"[{_escape(v)}]")
    for child in tree.children:
        _serialize_tree(child, out)
    out.append(")")


def serialize(collection: SgfCollection) -> str:
    out: list[str] = []
    for tree in collection.trees:
        _serialize_tree(tree, out)
    return "".join(out)


# ---------------------------------------------------------------------------
# Conversion to and from GameRecord.  Column letter first, 'a' = 0; the empty
# value and "tt" (on boards up to 19) both mean Pass.
# ---------------------------------------------------------------------------


def _decode_point(value: str, size: int) -> Move:
    if value == "" or (value == "tt" and size <= 19):
        return Move.pass_move()
    if len(value) != 2:
        raise ValueError(f"bad SGF point {value!r}")
    col = ord(value[0]) - ord("a")
    row = ord(value[1]) - ord("a")
    if not (0 <= col < size and 0 <= row < size):
        raise ValueError(f"SGF point {value!r} outside {size}x{size} board")
    return Move.place(col, row)


def _encode_point(move: Move) -> str:
    if move.is_pass:
        return ""
    return chr(ord("a") + move.col) + chr(ord("a") + move.row)


def _mainline_nodes(tree: GameTree):
    cur: Optional[GameTree] = tree
    while cur is not None:
        yield from cur.nodes
        cur = cur.children[0] if cur.children else None


def to_record(
    tree: GameTree, default_komi: float, source: str = "human"
) -> GameRecord:
    """Extract the mainline of one game tree as a GameRecord.

    Setup-stone properties (AB/AW/AE) are rejected; variations are ignored.
    """
    size = 19
    komi = default_komi
    moves: list[Move] = []
    for node in _mainline_nodes(tree):
        for ident, values in node:
            if ident == "GM" and values and values[0].strip() not in ("", "1"):
                raise ValueError(f"not a Go record: GM[{values[0]}]")
            elif ident == "SZ":
                size = int(values[0])
                if not 2 <= size <= 19:
                    raise ValueError(f"unsupported board size {size}")
            elif ident == "KM":
                try:
                    komi = float(values[0])
                except ValueError:
                    komi = default_komi  # some servers write junk komi
            elif ident in ("AB", "AW", "AE"):
                raise UnsupportedSetupError(f"setup property {ident} not supported")
            elif ident in ("B", "W"):
                moves.append(_decode_point(values[0], size))
    return GameRecord(size, komi, source, tuple(moves))


def from_record(record: GameRecord) -> GameTree:
    """Inverse writer: a single mainline tree whose move list round-trips."""
    root: list[Property] = [
        ("GM", ("1",)),
        ("FF", ("4",)),
        ("SZ", (str(record.size),)),
        ("KM", (f"{record.komi:g}",)),
        ("SO", (record.source,)),
    ]
    nodes: list[Node] = [tuple(root)]
    color = "B"
    for move in record.moves:
        if move.is_resign:
            raise ValueError("resign has no SGF move encoding")
        nodes.append(((color, (_encode_point(move),)),))
        color = "W" if color == "B" else "B"
    return GameTree(tuple(nodes))


def record_to_text(record: GameRecord) -> str:
    return serialize(SgfCollection((from_record(record),)))
