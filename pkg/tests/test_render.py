import random

import numpy as np
import pytest

from latentgo import board as B
from latentgo import render as R
from latentgo.board import BLACK, WHITE, Move, legal_moves, new_game, play

SPEC = R.RenderSpec()


def random_state(size, moves, seed):
    rng = random.Random(seed)
    state = new_game(size, 7.0)
    for _ in range(moves):
        if state.is_over:
            break
        state = play(state, rng.choice(legal_moves(state)))
    return state


def test_render_deterministic_bytes():
    state = random_state(9, 20, 1)
    a = R.render(state, SPEC)
    b = R.render(state, SPEC)
    assert a.pixels.tobytes() == b.pixels.tobytes()


def test_render_dimensions():
    frame = R.render(new_game(9, 7.0), SPEC)
    assert frame.pixels.shape == (256, 256, 3)
    assert frame.pixels.dtype == np.uint8


def test_render_differs_for_every_legal_placement():
    for seed in (0, 1):
        state = random_state(9, 12, seed)
        if state.is_over:
            continue
        base = R.render(state, SPEC).pixels.tobytes()
        for mv in legal_moves(state):
            if not mv.is_place:
                continue
            nxt = R.render(play(state, mv), SPEC)
            assert nxt.pixels.tobytes() != base


def test_tokenize_state_empty_and_diff():
    state = new_game(9, 7.0)
    grid = R.tokenize_state(state)
    assert set(grid.cells) == {R.TOKEN_EMPTY}
    mv = Move.place(3, 5)
    nxt = R.tokenize_state(play(state, mv))
    changed = [i for i in range(81) if grid.cells[i] != nxt.cells[i]]
    assert changed == [5 * 9 + 3]


def test_tokenize_frame_matches_tokenize_state():
    for seed in range(40):
        state = random_state(9, seed % 60 + 1, seed)
        frame = R.render(state, SPEC)
        assert R.tokenize_frame(frame, 9, SPEC) == R.tokenize_state(state)


def test_tokenize_frame_with_last_move_marker():
    spec = R.RenderSpec(last_move_marker=True)
    state = new_game(9, 7.0)
    mv = Move.place(4, 4)
    nxt = play(state, mv)
    frame = R.render(nxt, spec, last_move=mv)
    assert R.tokenize_frame(frame, 9, spec) == R.tokenize_state(nxt)


def test_tokenize_frame_single_black_stone():
    state = play(new_game(9, 7.0), Move.place(0, 0))
    grid = R.tokenize_frame(R.render(state, SPEC), 9, SPEC)
    assert grid.cell(0, 0) == R.TOKEN_BLACK
    assert sum(1 for c in grid.cells if c != R.TOKEN_EMPTY) == 1


def test_tokenize_corrupted_frame_raises():
    frame = R.render(new_game(9, 7.0), SPEC)
    rng = np.random.default_rng(0)
    frame.pixels[:] = rng.integers(1, 254, size=frame.pixels.shape, dtype=np.uint8)
    with pytest.raises(R.UnrecognizedCell):
        R.tokenize_frame(frame, 9, SPEC)


def test_grid_to_position_round_trip():
    for seed in range(30):
        state = random_state(9, 30, seed + 100)
        grid = R.tokenize_state(state)
        assert R.grid_to_position(grid) == state.grid


def test_grid_to_position_rejects_latent_tokens():
    grid = R.TokenGrid(2, (0, 1, 2, 7))
    with pytest.raises(ValueError):
        R.grid_to_position(grid)


def test_extract_move_pass_on_identical():
    grid = R.tokenize_state(random_state(9, 10, 0))
    assert R.extract_move(grid, grid, BLACK) == Move.pass_move()


def test_extract_move_recovers_every_legal_move():
    for seed in range(25):
        state = random_state(9, seed * 3 % 50, seed)
        if state.is_over:
            continue
        before = R.tokenize_state(state)
        for mv in legal_moves(state):
            if not mv.is_place:
                continue
            after = R.tokenize_state(play(state, mv))
            assert R.extract_move(before, after, state.to_move) == mv


def test_extract_move_ambiguous_on_two_new_stones():
    state = new_game(9, 7.0)
    before = R.tokenize_state(state)
    two = play(play(play(state, Move.place(0, 0)), B.PASS), Move.place(5, 5))
    after = R.tokenize_state(two)
    with pytest.raises(R.AmbiguousMove):
        R.extract_move(before, after, BLACK)


def test_extract_move_inconsistent_captures():
    # One new black stone plus an unexplained removed white stone elsewhere.
    before = R.tokenize_state(
        B.parse_board_text(
            """
            .O.......
            .........
            .........
            .........
            .........
            .........
            .........
            .........
            .........
            """,
            to_move=BLACK,
        )
    )
    cells = list(before.cells)
    cells[40] = R.TOKEN_BLACK  # black plays center
    cells[1] = R.TOKEN_EMPTY  # white stone vanishes with no capture reason
    after = R.TokenGrid(9, tuple(cells))
    with pytest.raises(R.InconsistentCaptures):
        R.extract_move(before, after, BLACK)


def test_extract_move_with_capture():
    state = B.parse_board_text(
        """
        XOX
        ...
        ...
        """,
        to_move=BLACK,
    )
    before = R.tokenize_state(state)
    after = R.tokenize_state(play(state, Move.place(1, 1)))
    assert R.extract_move(before, after, BLACK) == Move.place(1, 1)


def test_grid_planes_round_trip():
    for seed in range(10):
        state = random_state(5, 12, seed)
        grid = R.tokenize_state(state)
        assert R.planes_to_grid(R.grid_planes(grid)) == grid


def test_grayscale_shape_and_range():
    frame = R.render(random_state(9, 15, 2), SPEC)
    g = R.frame_to_grayscale(frame, 32)
    assert g.shape == (32, 32, 1)
    assert 0.0 <= g.min() and g.max() <= 1.0


def test_write_png(tmp_path):
    frame = R.render(new_game(5, 7.0), SPEC)
    path = tmp_path / "board.png"
    R.write_png(frame, path)
    from PIL import Image

    img = Image.open(path)
    assert img.size == (256, 256)
