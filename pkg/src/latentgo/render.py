"""Deterministic board rendering and the symbolic frame tokenizer.

Rendering is integer-only (no anti-aliasing, fixed colors) so frames are
bit-identical across runs and platforms.  The tokenizer maps frames back to
an N x N grid of {empty, black, white} tokens, and ``extract_move`` inverts a
frame transition into the move that caused it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import board as B
from .board import BLACK, EMPTY, WHITE, BoardState, Move

# Token ids for the symbolic frame vocabulary; they deliberately coincide with
# board color codes.  Ids [0, 3) are the live frame-token region.
TOKEN_EMPTY, TOKEN_BLACK, TOKEN_WHITE = 0, 1, 2
FRAME_TOKEN_COUNT = 3

BACKGROUND = (0xDC, 0xB3, 0x5C)
LINE_COLOR = (0, 0, 0)
BLACK_STONE = (0, 0, 0)
WHITE_STONE = (255, 255, 255)


class UnrecognizedCell(Exception):
    def __init__(self, col: int, row: int, color: tuple[int, int, int]):
        self.col, self.row, self.color = col, row, color
        super().__init__(f"cell ({col},{row}) has unclassifiable color {color}")


class ExtractionError(Exception):
    pass


class AmbiguousMove(ExtractionError):
    pass


class InconsistentCaptures(ExtractionError):
    pass


@dataclass(frozen=True)
class RenderSpec:
    image_size: int = 256
    margin: int = 8
    line_width: int = 1
    stone_radius: Optional[int] = None  # default: cell // 2 - 2
    last_move_marker: bool = False

    def cell(self, board_size: int) -> int:
        return (self.image_size - 2 * self.margin) // board_size

    def radius(self, board_size: int) -> int:
        if self.stone_radius is not None:
            r = self.stone_radius
        else:
            r = self.cell(board_size) // 2 - 2
        if r * 2 >= self.cell(board_size):
            raise ValueError("stone radius must be below half the cell size")
        return max(r, 2)

    def center(self, board_size: int, col: int, row: int) -> tuple[int, int]:
        cell = self.cell(board_size)
        x = self.margin + cell * col + cell // 2
        y = self.margin + cell * row + cell // 2
        return x, y


@dataclass
class Frame:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8

    @staticmethod
    def blank(spec: RenderSpec) -> "Frame":
        px = np.empty((spec.image_size, spec.image_size, 3), dtype=np.uint8)
        px[:, :] = BACKGROUND
        return Frame(spec.image_size, spec.image_size, px)


def _disc(px: np.ndarray, cx: int, cy: int, r: int, color: tuple[int, int, int]) -> None:
    for dy in range(-r, r + 1):
        half = math.isqrt(r * r - dy * dy)
        px[cy + dy, cx - half : cx + half + 1] = color


def _circle_outline(
    px: np.ndarray, cx: int, cy: int, r: int, color: tuple[int, int, int]
) -> None:
    # Midpoint circle: plot all eight octants.
    x, y, err = r, 0, 1 - r
    while x >= y:
        for dx, dy in ((x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)):
            px[cy + dy, cx + dx] = color
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1


def render(
    state: BoardState, spec: RenderSpec, last_move: Optional[Move] = None
) -> Frame:
    """Rasterize a position: grid lines first, then stones, then the optional
    last-move marker ring (which never touches the sampled cell interior)."""
    n = state.size
    frame = Frame.blank(spec)
    px = frame.pixels
    lw = spec.line_width
    x0, y0 = spec.center(n, 0, 0)
    x1, y1 = spec.center(n, n - 1, n - 1)
    for i in range(n):
        x, y = spec.center(n, i, i)
        px[y - lw // 2 : y - lw // 2 + lw, x0 : x1 + 1] = LINE_COLOR
        px[y0 : y1 + 1, x - lw // 2 : x - lw // 2 + lw] = LINE_COLOR
    r = spec.radius(n)
    for idx, v in enumerate(state.grid):
        if v == EMPTY:
            continue
        cx, cy = spec.center(n, idx % n, idx // n)
        _disc(px, cx, cy, r, BLACK_STONE if v == BLACK else WHITE_STONE)
    if spec.last_move_marker and last_move is not None and last_move.is_place:
        stone = state.point(last_move.col, last_move.row)
        if stone != EMPTY:
            cx, cy = spec.center(n, last_move.col, last_move.row)
            marker = WHITE_STONE if stone == BLACK else BLACK_STONE
            _circle_outline(px, cx, cy, max(2, r // 2), marker)
    return frame


@dataclass(frozen=True)
class TokenGrid:
    """Board-aligned symbolic tokens; bijective with the stone configuration."""

    size: int
    cells: tuple[int, ...]  # row-major, values in [0, FRAME_TOKEN_COUNT)

    def cell(self, col: int, row: int) -> int:
        return self.cells[row * self.size + col]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.cells, dtype=np.int64).reshape(self.size, self.size)


def tokenize_state(state: BoardState) -> TokenGrid:
    return TokenGrid(state.size, tuple(state.grid))


def tokenize_frame(frame: Frame, board_size: int, spec: RenderSpec) -> TokenGrid:
    """Classify each intersection by a sampled pixel.

    The sample sits diagonally off-center by half the stone radius: inside any
    stone, clear of grid lines and of the last-move marker ring.
    """
    r = spec.radius(board_size)
    off = max(r // 2, spec.line_width // 2 + 1)
    cells = []
    for row in range(board_size):
        for col in range(board_size):
            cx, cy = spec.center(board_size, col, row)
            color = tuple(int(c) for c in frame.pixels[cy + off, cx + off])
            if color == BLACK_STONE:
                cells.append(TOKEN_BLACK)
            elif color == WHITE_STONE:
                cells.append(TOKEN_WHITE)
            elif color == BACKGROUND:
                cells.append(TOKEN_EMPTY)
            else:
                raise UnrecognizedCell(col, row, color)
    return TokenGrid(board_size, tuple(cells))


def grid_to_position(grid: TokenGrid) -> bytes:
    """Inverse of tokenize_state on the stone configuration."""
    for v in grid.cells:
        if not 0 <= v < FRAME_TOKEN_COUNT:
            raise ValueError(f"token {v} outside the frame-token region")
    return bytes(grid.cells)


def state_from_grid(grid: TokenGrid, to_move: int) -> BoardState:
    """Synthetic BoardState for rules queries; history holds only this position."""
    stones = grid_to_position(grid)
    probe = BoardState(grid.size, stones, to_move, 0, 0, frozenset(), 0)
    h = B.zobrist(probe)
    return BoardState(grid.size, stones, to_move, 0, 0, frozenset({h}), h)


def extract_move(before: TokenGrid, after: TokenGrid, to_move: int) -> Move:
    """Diff-based inverse dynamics: recover the move between two grids.

    Identical grids decode to Pass.  Otherwise exactly one cell must turn from
    empty to ``to_move`` and every other change must be the capture set that
    move implies.
    """
    if before.size != after.size:
        raise ExtractionError("grid sizes differ")
    if before.cells == after.cells:
        return Move.pass_move()
    n = before.size
    candidates = [
        i
        for i in range(n * n)
        if before.cells[i] == TOKEN_EMPTY and after.cells[i] == to_move
    ]
    if len(candidates) != 1:
        raise AmbiguousMove(
            f"{len(candidates)} candidate placements for the side to move"
        )
    idx = candidates[0]
    move = Move.place(idx % n, idx // n)
    state = state_from_grid(before, to_move)
    if B.is_legal(state, move) is not B.Legality.LEGAL:
        raise InconsistentCaptures(f"{move} is not a legal explanation")
    result = B.play(state, move)
    if result.grid != grid_to_position(after):
        raise InconsistentCaptures("resulting position does not match the diff")
    return move


# ---------------------------------------------------------------------------
# Frame representations consumed by the numeric models.
# ---------------------------------------------------------------------------


def grid_planes(grid: TokenGrid) -> np.ndarray:
    """One-hot (N, N, 3) float64 planes for {empty, black, white}."""
    arr = grid.as_array()
    planes = np.zeros((grid.size, grid.size, 3), dtype=np.float64)
    for ch in range(3):
        planes[:, :, ch] = arr == ch
    return planes


def planes_to_grid(planes: np.ndarray) -> TokenGrid:
    """Nearest-class inverse of grid_planes (argmax over channels)."""
    n = planes.shape[0]
    cells = planes.reshape(n * n, 3).argmax(axis=1)
    return TokenGrid(n, tuple(int(c) for c in cells))


def frame_to_grayscale(frame: Frame, out_size: int = 32) -> np.ndarray:
    """Block-averaged grayscale in [0, 1], shape (out_size, out_size, 1)."""
    if frame.height % out_size or frame.width % out_size:
        raise ValueError("frame size must be divisible by the downsample size")
    block = frame.height // out_size
    gray = frame.pixels.astype(np.float64).mean(axis=2) / 255.0
    pooled = gray.reshape(out_size, block, out_size, block).mean(axis=(1, 3))
    return pooled[:, :, None]


def write_png(frame: Frame, path) -> None:
    from PIL import Image

    Image.fromarray(frame.pixels, mode="RGB").save(path, format="PNG")
