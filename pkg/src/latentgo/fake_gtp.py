"""Fake GTP engines so every test and demo runs without a real engine.

Two flavors:

* ``ScriptedTransport`` replays an authored transcript and records every byte
  the client sends, enabling byte-exact request-log assertions.
* ``RulesEngineTransport`` is an in-process engine that actually tracks the
  board (random legal genmove, deterministic analysis), also runnable as a
  child process via ``python -m latentgo.fake_gtp``.
"""

from __future__ import annotations

import random
import sys
from typing import Optional, Sequence

from . import board as B
from .board import BLACK, WHITE, Move
from .gtp import FramingError, move_to_vertex, vertex_to_move


class ScriptedTransport:
    """Transcript-driven fake engine endpoint.

    ``script`` is a list of (expected request without id, reply) pairs; the
    reply is the body of a success unless it starts with '?'.  Requests are
    matched in order after stripping the numeric id.
    """

    def __init__(self, script: Sequence[tuple[str, str]], preamble: bytes = b""):
        self.script = list(script)
        self.cursor = 0
        self.request_log = b""
        self._pending: list[bytes] = [preamble] if preamble else []

    def send_bytes(self, data: bytes) -> None:
        self.request_log += data
        text = data.decode().strip()
        req_id, _, command = text.partition(" ")
        if self.cursor >= len(self.script):
            raise AssertionError(f"unexpected extra request: {text!r}")
        expected, reply = self.script[self.cursor]
        self.cursor += 1
        if command != expected:
            raise AssertionError(f"expected request {expected!r}, got {command!r}")
        if reply.startswith("?"):
            framed = f"?{req_id} {reply[1:].lstrip()}\n\n"
        else:
            framed = f"={req_id} {reply}\n\n" if reply else f"={req_id}\n\n"
        self._pending.append(framed.encode())

    def read_line(self, timeout: Optional[float]) -> bytes:
        if not self._pending:
            raise FramingError("scripted engine has nothing more to say")
        chunk = self._pending[0]
        line, _, rest = chunk.partition(b"\n")
        if rest:
            self._pending[0] = rest
        else:
            self._pending.pop(0)
        return line + b"\n"

    def close(self) -> None:
        pass


class FakeEngine:
    """Minimal rules-aware GTP engine used behind RulesEngineTransport."""

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)
        self.size = 9
        self.komi = 7.0
        self.state = B.new_game(9, 7.0)

    def _color_of(self, name: str) -> int:
        return BLACK if name.lower().startswith("b") else WHITE

    def _with_to_move(self, color: int) -> None:
        s = self.state
        if s.to_move != color:
            self.state = B.BoardState(
                s.size, s.grid, color, s.move_number, 0, s.history, s.hash
            )

    def handle(self, command: str, args: list[str]) -> tuple[bool, str]:
        if command == "protocol_version":
            return True, "2"
        if command == "name":
            return True, "latentgo-fake"
        if command == "version":
            return True, "1"
        if command == "boardsize":
            self.size = int(args[0])
            self.state = B.new_game(self.size, self.komi)
            return True, ""
        if command == "clear_board":
            self.state = B.new_game(self.size, self.komi)
            return True, ""
        if command == "komi":
            self.komi = float(args[0])
            return True, ""
        if command == "play":
            color = self._color_of(args[0])
            move = vertex_to_move(args[1], self.size)
            self._with_to_move(color)
            if not move.is_pass and B.is_legal(self.state, move) is not B.Legality.LEGAL:
                return False, "illegal move"
            self.state = B.play(self.state, move)
            return True, ""
        if command == "genmove":
            color = self._color_of(args[0])
            self._with_to_move(color)
            moves = [m for m in B.legal_moves(self.state) if m.is_place]
            move = self.rng.choice(moves) if moves else B.PASS
            self.state = B.play(self.state, move)
            return True, move_to_vertex(move, self.size)
        if command == "kata-analyze":
            color = self._color_of(args[0]) if args else self.state.to_move
            self._with_to_move(color)
            moves = [m for m in B.legal_moves(self.state) if m.is_place]
            if not moves:
                moves = [B.PASS]
            # Deterministic pseudo-values: seeded by position hash so
            # annotation is reproducible and order 0 has the best winrate.
            rng = random.Random(self.state.hash ^ 0xFEED)
            scored = sorted(
                ((rng.random(), m) for m in moves), key=lambda t: -t[0]
            )[:5]
            blocks = []
            for order, (wr, m) in enumerate(scored):
                blocks.append(
                    f"info move {move_to_vertex(m, self.size)} visits {100 - order * 10} "
                    f"winrate {wr:.4f} scoreLead {wr * 4 - 2:.2f} order {order}"
                )
            return True, " ".join(blocks)
        if command == "quit":
            return True, ""
        return False, "unknown command"


class RulesEngineTransport:
    """In-process transport backed by FakeEngine."""

    def __init__(self, seed: int = 0):
        self.engine = FakeEngine(seed)
        self._pending = b""

    def send_bytes(self, data: bytes) -> None:
        text = data.decode().strip()
        parts = text.split()
        req_id, command, args = parts[0], parts[1], parts[2:]
        try:
            ok, reply = self.engine.handle(command, args)
        except Exception as exc:  # engine-side failure -> GTP error reply
            ok, reply = False, str(exc)
        marker = "=" if ok else "?"
        body = f"{marker}{req_id} {reply}\n\n" if reply else f"{marker}{req_id}\n\n"
        self._pending += body.encode()

    def read_line(self, timeout: Optional[float]) -> bytes:
        if b"\n" not in self._pending:
            raise FramingError("no pending reply")
        line, _, self._pending = self._pending.partition(b"\n")
        return line + b"\n"

    def close(self) -> None:
        pass


def main(argv: Optional[list[str]] = None) -> int:
    """Stdio GTP loop for subprocess use."""
    args = argv if argv is not None else sys.argv[1:]
    seed = int(args[0]) if args else 0
    engine = FakeEngine(seed)
    for raw in sys.stdin:
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].isdigit():
            req_id, command, rest = parts[0], parts[1], parts[2:]
        else:
            req_id, command, rest = "", parts[0], parts[1:]
        try:
            ok, reply = engine.handle(command, rest)
        except Exception as exc:
            ok, reply = False, str(exc)
        marker = "=" if ok else "?"
        head = f"{marker}{req_id}".rstrip()
        sys.stdout.write(f"{head} {reply}\n\n" if reply else f"{head}\n\n")
        sys.stdout.flush()
        if command == "quit":
            break
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
