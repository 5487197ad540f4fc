"""9x9-centric Go rules engine: legality, capture, positional superko, scoring.

Board states are immutable values; ``play`` returns a fresh state.  Legality
uses positional superko (whole-board stone configuration, ignoring whose turn
it is) and forbids suicide.  Scoring is Tromp-Taylor area scoring.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

EMPTY = 0
BLACK = 1
WHITE = 2

_COLOR_NAMES = {EMPTY: "empty", BLACK: "black", WHITE: "white"}


def opponent(color: int) -> int:
    if color == BLACK:
        return WHITE
    if color == WHITE:
        return BLACK
    raise ValueError(f"no opponent for color {color}")


class Legality(enum.Enum):
    LEGAL = "legal"
    OCCUPIED = "occupied"
    SUICIDE = "suicide"
    SUPERKO = "superko"
    OUT_OF_BOUNDS = "out_of_bounds"


class EndReason(enum.Enum):
    TWO_PASSES = "two_passes"
    RESIGN = "resign"
    MOVE_CAP = "move_cap"
    ILLEGAL_MOVE = "illegal_move"


class IllegalMoveError(Exception):
    def __init__(self, verdict: Legality, move: "Move"):
        self.verdict = verdict
        self.move = move
        super().__init__(f"illegal move {move}: {verdict.value}")


class GameOverError(Exception):
    pass


class IllegalMoveAt(Exception):
    """Raised by replay when a recorded move is illegal at some index."""

    def __init__(self, index: int, verdict: Legality, move: "Move"):
        self.index = index
        self.verdict = verdict
        self.move = move
        super().__init__(f"move {index} ({move}) illegal: {verdict.value}")


@dataclass(frozen=True, slots=True)
class Move:
    """A placement at (col, row), a pass, or a resignation."""

    kind: str  # "place" | "pass" | "resign"
    col: int = -1
    row: int = -1

    @staticmethod
    def place(col: int, row: int) -> "Move":
        return Move("place", col, row)

    @staticmethod
    def pass_move() -> "Move":
        return Move("pass")

    @staticmethod
    def resign() -> "Move":
        return Move("resign")

    @property
    def is_place(self) -> bool:
        return self.kind == "place"

    @property
    def is_pass(self) -> bool:
        return self.kind == "pass"

    @property
    def is_resign(self) -> bool:
        return self.kind == "resign"

    def __repr__(self) -> str:
        if self.is_place:
            return f"Move({self.col},{self.row})"
        return f"Move({self.kind})"


PASS = Move.pass_move()
RESIGN = Move.resign()


# ---------------------------------------------------------------------------
# Zobrist tables.  One table per board size, seeded once; hashes cover
# (point, color) pairs only, so sides-to-move share a hash (positional
# superko convention).
# ---------------------------------------------------------------------------

_ZOBRIST_SEED = 0x9E3779B97F4A7C15
_zobrist_tables: dict[int, tuple[tuple[int, int], ...]] = {}
_neighbor_tables: dict[int, tuple[tuple[int, ...], ...]] = {}


def zobrist_table(size: int) -> tuple[tuple[int, int], ...]:
    table = _zobrist_tables.get(size)
    if table is None:
        rng = random.Random(_ZOBRIST_SEED ^ size)
        table = tuple(
            (rng.getrandbits(64), rng.getrandbits(64)) for _ in range(size * size)
        )
        _zobrist_tables[size] = table
    return table


def neighbor_table(size: int) -> tuple[tuple[int, ...], ...]:
    table = _neighbor_tables.get(size)
    if table is None:
        rows = []
        for idx in range(size * size):
            c, r = idx % size, idx // size
            ns = []
            if c > 0:
                ns.append(idx - 1)
            if c < size - 1:
                ns.append(idx + 1)
            if r > 0:
                ns.append(idx - size)
            if r < size - 1:
                ns.append(idx + size)
            rows.append(tuple(ns))
        table = tuple(rows)
        _neighbor_tables[size] = table
    return table


class BoardState:
    """Immutable whole-game position: grid, turn, pass count, superko history.

    ``history`` holds the zobrist hash of the current position and of every
    position that has occurred since ``new_game``.
    """

    __slots__ = (
        "size",
        "grid",
        "to_move",
        "move_number",
        "consecutive_passes",
        "history",
        "hash",
        "resigned",
    )

    def __init__(
        self,
        size: int,
        grid: bytes,
        to_move: int,
        move_number: int,
        consecutive_passes: int,
        history: frozenset[int],
        position_hash: int,
        resigned: int = EMPTY,
    ):
        self.size = size
        self.grid = grid
        self.to_move = to_move
        self.move_number = move_number
        self.consecutive_passes = consecutive_passes
        self.history = history
        self.hash = position_hash
        self.resigned = resigned

    @property
    def is_over(self) -> bool:
        return self.consecutive_passes >= 2 or self.resigned != EMPTY

    def point(self, col: int, row: int) -> int:
        return self.grid[row * self.size + col]

    def stone_count(self) -> int:
        return sum(1 for v in self.grid if v != EMPTY)

    def empty_indices(self) -> list[int]:
        return [i for i, v in enumerate(self.grid) if v == EMPTY]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BoardState)
            and self.size == other.size
            and self.grid == other.grid
            and self.to_move == other.to_move
            and self.move_number == other.move_number
            and self.consecutive_passes == other.consecutive_passes
            and self.resigned == other.resigned
        )

    def __hash__(self) -> int:
        return hash((self.size, self.grid, self.to_move, self.move_number))

    def __repr__(self) -> str:
        return (
            f"BoardState(size={self.size}, move={self.move_number}, "
            f"to_move={_COLOR_NAMES[self.to_move]})"
        )


def new_game(size: int = 9, komi: float = 7.0) -> BoardState:
    """Fresh empty board, Black to move.  ``komi`` is validated but not stored;
    scoring takes it explicitly."""
    if not 2 <= size <= 19:
        raise ValueError(f"board size {size} outside supported range 2..19")
    if komi < 0:
        raise ValueError("komi must be non-negative")
    grid = bytes(size * size)
    return BoardState(size, grid, BLACK, 0, 0, frozenset({0}), 0)


def _group_and_liberties(
    grid: bytes, size: int, start: int
) -> tuple[list[int], set[int]]:
    """Flood-fill the group containing ``start``; returns (stones, liberty set)."""
    color = grid[start]
    neighbors = neighbor_table(size)
    seen = bytearray(size * size)
    seen[start] = 1
    stack = [start]
    stones = []
    libs: set[int] = set()
    while stack:
        idx = stack.pop()
        stones.append(idx)
        for n in neighbors[idx]:
            v = grid[n]
            if v == EMPTY:
                libs.add(n)
            elif v == color and not seen[n]:
                seen[n] = 1
                stack.append(n)
    return stones, libs


def _analyze_place(
    state: BoardState, idx: int
) -> tuple[list[int], int] | Legality:
    """Resolve a placement at ``idx`` for the side to move without copying the grid.

    Returns (captured indices, new position hash) or a failure verdict
    (OCCUPIED / SUICIDE).  Superko is checked by the caller against history.
    """
    grid = state.grid
    if grid[idx] != EMPTY:
        return Legality.OCCUPIED
    size = state.size
    me = state.to_move
    opp = opponent(me)
    neighbors = neighbor_table(size)
    table = zobrist_table(size)

    empty_adjacent = False
    opp_neighbors = []
    own_neighbors = []
    for n in neighbors[idx]:
        v = grid[n]
        if v == EMPTY:
            empty_adjacent = True
        elif v == opp:
            opp_neighbors.append(n)
        else:
            own_neighbors.append(n)

    new_hash = state.hash ^ table[idx][me - 1]

    # An opponent chain dies exactly when its only liberty is the played point.
    captured: list[int] = []
    captured_seen: set[int] = set()
    for n in opp_neighbors:
        if n in captured_seen:
            continue
        stones, libs = _group_and_liberties(grid, size, n)
        captured_seen.update(stones)
        if libs == {idx}:
            captured.extend(stones)
            for s in stones:
                new_hash ^= table[s][opp - 1]

    if not captured and not empty_adjacent:
        # Suicide unless a friendly neighbor chain keeps a liberty besides idx.
        merged_libs: set[int] = set()
        own_seen: set[int] = set()
        for n in own_neighbors:
            if n in own_seen:
                continue
            stones, libs = _group_and_liberties(grid, size, n)
            own_seen.update(stones)
            merged_libs |= libs
        merged_libs.discard(idx)
        if not merged_libs:
            return Legality.SUICIDE
    return captured, new_hash


def is_legal(state: BoardState, move: Move) -> Legality:
    """Rules verdict for ``move`` in ``state``.  Pass and resign are always legal."""
    if move.is_pass or move.is_resign:
        return Legality.LEGAL
    if not (0 <= move.col < state.size and 0 <= move.row < state.size):
        return Legality.OUT_OF_BOUNDS
    sim = _analyze_place(state, move.row * state.size + move.col)
    if isinstance(sim, Legality):
        return sim
    if sim[1] in state.history:
        return Legality.SUPERKO
    return Legality.LEGAL


def play(state: BoardState, move: Move) -> BoardState:
    """Apply a legal move, resolving captures eagerly.  Raises on illegal input."""
    if state.is_over:
        raise GameOverError("game is over")
    if move.is_pass:
        return BoardState(
            state.size,
            state.grid,
            opponent(state.to_move),
            state.move_number + 1,
            state.consecutive_passes + 1,
            state.history,
            state.hash,
        )
    if move.is_resign:
        return BoardState(
            state.size,
            state.grid,
            opponent(state.to_move),
            state.move_number + 1,
            state.consecutive_passes,
            state.history,
            state.hash,
            resigned=state.to_move,
        )
    if not (0 <= move.col < state.size and 0 <= move.row < state.size):
        raise IllegalMoveError(Legality.OUT_OF_BOUNDS, move)
    idx = move.row * state.size + move.col
    sim = _analyze_place(state, idx)
    if isinstance(sim, Legality):
        raise IllegalMoveError(sim, move)
    captured, new_hash = sim
    if new_hash in state.history:
        raise IllegalMoveError(Legality.SUPERKO, move)
    work = bytearray(state.grid)
    work[idx] = state.to_move
    for s in captured:
        work[s] = EMPTY
    return BoardState(
        state.size,
        bytes(work),
        opponent(state.to_move),
        state.move_number + 1,
        0,
        state.history | {new_hash},
        new_hash,
    )


def legal_moves(state: BoardState) -> list[Move]:
    """All legal placements plus Pass.  Resign is legal but not enumerated."""
    if state.is_over:
        raise GameOverError("game is over")
    size = state.size
    moves = []
    for idx, v in enumerate(state.grid):
        if v != EMPTY:
            continue
        mv = Move.place(idx % size, idx // size)
        if is_legal(state, mv) is Legality.LEGAL:
            moves.append(mv)
    moves.append(PASS)
    return moves


def zobrist(state: BoardState) -> int:
    """From-scratch positional hash; ``state.hash`` maintains it incrementally."""
    table = zobrist_table(state.size)
    h = 0
    for idx, v in enumerate(state.grid):
        if v != EMPTY:
            h ^= table[idx][v - 1]
    return h


@dataclass(frozen=True, slots=True)
class GameResult:
    winner: int  # BLACK, WHITE, or EMPTY for a draw
    margin: float
    end_reason: EndReason

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError("margin must be non-negative")
        if self.end_reason in (EndReason.TWO_PASSES, EndReason.MOVE_CAP):
            if (self.winner == EMPTY) != (self.margin == 0):
                raise ValueError("scored draws must have zero margin and vice versa")


def areas(state: BoardState) -> tuple[int, int]:
    """Tromp-Taylor areas: stones plus empty regions touching only one color."""
    size = state.size
    grid = state.grid
    neighbors = neighbor_table(size)
    black = sum(1 for v in grid if v == BLACK)
    white = sum(1 for v in grid if v == WHITE)
    seen = bytearray(size * size)
    for idx, v in enumerate(grid):
        if v != EMPTY or seen[idx]:
            continue
        region = []
        touches_black = touches_white = False
        stack = [idx]
        seen[idx] = 1
        while stack:
            cur = stack.pop()
            region.append(cur)
            for n in neighbors[cur]:
                nv = grid[n]
                if nv == EMPTY:
                    if not seen[n]:
                        seen[n] = 1
                        stack.append(n)
                elif nv == BLACK:
                    touches_black = True
                else:
                    touches_white = True
        if touches_black and not touches_white:
            black += len(region)
        elif touches_white and not touches_black:
            white += len(region)
    return black, white


def score(
    state: BoardState, komi: float, end_reason: Optional[EndReason] = None
) -> GameResult:
    """Area-score any position: margin = |area(B) - area(W) - komi|."""
    black, white = areas(state)
    diff = black - white - komi
    if end_reason is None:
        end_reason = (
            EndReason.TWO_PASSES if state.consecutive_passes >= 2 else EndReason.MOVE_CAP
        )
    if diff > 0:
        return GameResult(BLACK, diff, end_reason)
    if diff < 0:
        return GameResult(WHITE, -diff, end_reason)
    return GameResult(EMPTY, 0.0, end_reason)


def resign_result(resigning_color: int) -> GameResult:
    return GameResult(opponent(resigning_color), 0.0, EndReason.RESIGN)


# ---------------------------------------------------------------------------
# Game records and annotations.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnotatedMove:
    """Oracle annotation for one position: played move, oracle best move, and
    win-probabilities for candidate moves from the mover's perspective."""

    played: Move
    best: Move
    action_values: Mapping[Move, float]

    def __post_init__(self):
        if self.best not in self.action_values:
            raise ValueError("best move missing from action_values")
        vals = self.action_values.values()
        if any(not 0.0 <= v <= 1.0 for v in vals):
            raise ValueError("action values must lie in [0, 1]")
        if self.action_values[self.best] < max(vals) - 1e-12:
            raise ValueError("best move must attain the maximum action value")


@dataclass(frozen=True)
class GameRecord:
    size: int
    komi: float
    source: str  # "human" | "selfplay" | "synthetic"
    moves: tuple[Move, ...]
    annotations: Optional[tuple[AnnotatedMove, ...]] = None

    def __post_init__(self):
        if self.annotations is not None and len(self.annotations) != len(self.moves):
            raise ValueError("annotations must align one-to-one with moves")


def replay(record: GameRecord) -> list[BoardState]:
    """States visited by the record: states[0] is the fresh board, states[i+1]
    follows moves[i].  Raises IllegalMoveAt on the first bad move."""
    state = new_game(record.size, record.komi)
    states = [state]
    for i, move in enumerate(record.moves):
        verdict = is_legal(state, move)
        if verdict is not Legality.LEGAL or state.is_over:
            raise IllegalMoveAt(i, verdict, move)
        state = play(state, move)
        states.append(state)
    return states


# ---------------------------------------------------------------------------
# Canonical textual dump, used in fixtures and error messages.
# ---------------------------------------------------------------------------

_CHARS = {EMPTY: ".", BLACK: "X", WHITE: "O"}
_CHARS_INV = {v: k for k, v in _CHARS.items()}


def board_text(state: BoardState) -> str:
    size = state.size
    rows = []
    for r in range(size):
        rows.append("".join(_CHARS[state.grid[r * size + c]] for c in range(size)))
    return "\n".join(rows)


def parse_board_text(text: str, to_move: int = BLACK) -> BoardState:
    """Build a position from a ``board_text`` dump.  History contains only the
    resulting position, so superko never triggers on synthetic states."""
    rows = [line.strip() for line in text.strip().splitlines()]
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise ValueError("board text must be square")
    grid = bytearray(size * size)
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            try:
                grid[r * size + c] = _CHARS_INV[ch]
            except KeyError:
                raise ValueError(f"unknown board character {ch!r}") from None
    state = BoardState(size, bytes(grid), to_move, 0, 0, frozenset(), 0)
    h = zobrist(state)
    return BoardState(size, bytes(grid), to_move, 0, 0, frozenset({h}), h)
