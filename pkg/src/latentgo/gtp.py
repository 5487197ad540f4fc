"""Go Text Protocol client: engine sessions, vertex conversion, and parsing
of kata-analyze style analysis output.

Requests are framed as ``<id> <command> <args>\\n``; replies are ``=<id> text``
or ``?<id> message`` terminated by a blank line.  One session issues one
command at a time with strictly increasing ids.
"""

from __future__ import annotations

import selectors
import socket
import subprocess
import warnings
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence, Union

from .board import BLACK, WHITE, BoardState, GameRecord, Move

GTP_COLUMNS = "ABCDEFGHJKLMNOPQRST"  # no I, per protocol convention


class GtpError(Exception):
    pass


class ConnectError(GtpError):
    pass


class FramingError(GtpError):
    pass


class EngineError(GtpError):
    """The engine answered with a failure reply (? id message)."""


class GtpTimeout(GtpError):
    pass


def move_to_vertex(move: Move, size: int) -> str:
    if move.is_pass:
        return "pass"
    if move.is_resign:
        return "resign"
    return f"{GTP_COLUMNS[move.col]}{size - move.row}"


def vertex_to_move(text: str, size: int) -> Move:
    t = text.strip().lower()
    if t == "pass":
        return Move.pass_move()
    if t == "resign":
        return Move.resign()
    col = GTP_COLUMNS.lower().find(t[0]) if t else -1
    try:
        row_num = int(t[1:])
    except ValueError:
        row_num = -1
    if col < 0 or col >= size or not 1 <= row_num <= size:
        raise ValueError(f"unparsable GTP vertex {text!r} for size {size}")
    return Move.place(col, size - row_num)


def color_name(color: int) -> str:
    return "B" if color == BLACK else "W"


# ---------------------------------------------------------------------------
# Transports
# ---------------------------------------------------------------------------


class Transport(Protocol):
    def send_bytes(self, data: bytes) -> None: ...

    def read_line(self, timeout: Optional[float]) -> bytes: ...

    def close(self) -> None: ...


class ProcessTransport:
    """Child process speaking GTP on its standard streams."""

    def __init__(self, argv: Sequence[str]):
        try:
            self.proc = subprocess.Popen(
                list(argv),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
            )
        except OSError as exc:
            raise ConnectError(f"failed to spawn {argv!r}: {exc}") from exc
        self._selector = selectors.DefaultSelector()
        self._selector.register(self.proc.stdout, selectors.EVENT_READ)
        self._buf = b""

    def send_bytes(self, data: bytes) -> None:
        assert self.proc.stdin is not None
        self.proc.stdin.write(data)
        self.proc.stdin.flush()

    def read_line(self, timeout: Optional[float]) -> bytes:
        while b"\n" not in self._buf:
            if not self._selector.select(timeout):
                raise GtpTimeout("engine did not reply in time")
            chunk = self.proc.stdout.read1(65536)
            if not chunk:
                raise FramingError("engine closed its output stream")
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line + b"\n"

    def close(self) -> None:
        self._selector.close()
        if self.proc.poll() is None:
            self.proc.kill()
        self.proc.wait()


class TcpTransport:
    def __init__(self, host: str, port: int):
        try:
            self.sock = socket.create_connection((host, port), timeout=10)
        except OSError as exc:
            raise ConnectError(f"failed to connect to {host}:{port}: {exc}") from exc
        self._buf = b""

    def send_bytes(self, data: bytes) -> None:
        self.sock.sendall(data)

    def read_line(self, timeout: Optional[float]) -> bytes:
        self.sock.settimeout(timeout)
        while b"\n" not in self._buf:
            try:
                chunk = self.sock.recv(65536)
            except socket.timeout as exc:
                raise GtpTimeout("engine did not reply in time") from exc
            if not chunk:
                raise FramingError("connection closed")
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line + b"\n"

    def close(self) -> None:
        self.sock.close()


# ---------------------------------------------------------------------------
# Session
# ---------------------------------------------------------------------------


@dataclass
class AnalysisLine:
    move: Move
    visits: int
    winrate: float  # perspective of the player to move
    score_lead: float
    order: int


class GtpSession:
    def __init__(
        self,
        transport: Transport,
        timeout: float = 30.0,
        analyze_command: str = "kata-analyze",
    ):
        self.transport = transport
        self.timeout = timeout
        self.analyze_command = analyze_command
        self.next_id = 1
        self.name = ""
        self.version = ""
        self.protocol_version = ""
        self.board_size = 9

    # -- core framing ---------------------------------------------------------
    def send(self, command: str, *args: str) -> str:
        req_id = self.next_id
        self.next_id += 1
        parts = [str(req_id), command, *args]
        self.transport.send_bytes((" ".join(parts) + "\n").encode())

        first = self.transport.read_line(self.timeout).decode()
        while first.strip() == "":  # tolerate leading blank lines
            first = self.transport.read_line(self.timeout).decode()
        status = first[0]
        if status not in "=?":
            raise FramingError(f"reply does not start with = or ?: {first!r}")
        rest = first[1:].rstrip("\n")
        head, _, text = rest.partition(" ")
        if head.strip() != str(req_id):
            raise FramingError(
                f"reply id {head.strip()!r} does not match request id {req_id}"
            )
        lines = [text]
        while True:
            line = self.transport.read_line(self.timeout).decode()
            if line.strip("\r\n") == "":
                break
            lines.append(line.rstrip("\n"))
        payload = "\n".join(lines).strip()
        if status == "?":
            raise EngineError(payload or "engine error")
        return payload

    def close(self) -> None:
        try:
            self.send("quit")
        except GtpError:
            pass
        self.transport.close()

    # -- high-level operations --------------------------------------------------
    def setup_position(
        self, target: Union[BoardState, GameRecord], komi: float = 7.0
    ) -> None:
        """Reproduce a position on the engine via clear/boardsize/komi/play.

        A GameRecord replays its moves with alternating colors.  A bare
        BoardState is laid out stone by stone (black first, scan order), which
        is capture-free because every subset of a legal position keeps all its
        groups alive.
        """
        self.send("clear_board")
        if isinstance(target, GameRecord):
            size = target.size
            self.send("boardsize", str(size))
            self.send("komi", f"{target.komi:g}")
            self.board_size = size
            color = BLACK
            for move in target.moves:
                self.send("play", color_name(color), move_to_vertex(move, size))
                color = WHITE if color == BLACK else BLACK
        else:
            size = target.size
            self.send("boardsize", str(size))
            self.send("komi", f"{komi:g}")
            self.board_size = size
            for want in (BLACK, WHITE):
                for idx, v in enumerate(target.grid):
                    if v == want:
                        mv = Move.place(idx % size, idx // size)
                        self.send("play", color_name(want), move_to_vertex(mv, size))

    def genmove(self, color: int) -> Move:
        reply = self.send("genmove", color_name(color).lower())
        return vertex_to_move(reply, self.board_size)

    def analyze(self, color: int, visits: int) -> list[AnalysisLine]:
        reply = self.send(self.analyze_command, color_name(color).lower(), str(visits))
        lines = parse_analysis(reply, self.board_size)
        if not lines:
            raise EngineError("analysis returned no info blocks")
        best = min(lines, key=lambda ln: ln.order)
        if best.winrate < max(ln.winrate for ln in lines) - 1e-12:
            warnings.warn(
                "analysis order-0 move does not have the maximum winrate",
                stacklevel=2,
            )
        return lines


def parse_analysis(text: str, size: int) -> list[AnalysisLine]:
    """Parse whitespace-separated ``info`` blocks; unknown keys are skipped."""
    out: list[AnalysisLine] = []
    blocks = text.split("info ")[1:]
    for block in blocks:
        tokens = block.split()
        fields: dict[str, str] = {}
        i = 0
        while i < len(tokens):
            key = tokens[i]
            if key in ("move", "visits", "winrate", "scoreLead", "order") and i + 1 < len(
                tokens
            ):
                fields[key] = tokens[i + 1]
                i += 2
            else:
                i += 1
        if "move" not in fields:
            continue
        try:
            out.append(
                AnalysisLine(
                    move=vertex_to_move(fields["move"], size),
                    visits=int(fields.get("visits", "0")),
                    winrate=float(fields["winrate"]),
                    score_lead=float(fields.get("scoreLead", "0")),
                    order=int(fields.get("order", str(len(out)))),
                )
            )
        except (KeyError, ValueError) as exc:
            raise EngineError(f"malformed analysis block: {block[:60]!r}") from exc
    orders = [ln.order for ln in out]
    if len(set(orders)) != len(orders):
        raise EngineError("analysis orders are not distinct")
    return out


def open_session(
    transport_spec: Union[str, Sequence[str], Transport],
    timeout: float = 30.0,
    analyze_command: str = "kata-analyze",
) -> GtpSession:
    """Open and handshake a session.

    ``transport_spec`` is a Transport, an argv list for a child process, or a
    string: ``tcp:host:port`` or a shell-ish command split on spaces.
    """
    if isinstance(transport_spec, str):
        if transport_spec.startswith("tcp:"):
            _, host, port = transport_spec.split(":")
            transport: Transport = TcpTransport(host, int(port))
        else:
            transport = ProcessTransport(transport_spec.split())
    elif isinstance(transport_spec, (list, tuple)):
        transport = ProcessTransport(transport_spec)
    else:
        transport = transport_spec
    session = GtpSession(transport, timeout=timeout, analyze_command=analyze_command)
    try:
        session.protocol_version = session.send("protocol_version")
        session.name = session.send("name")
        session.version = session.send("version")
    except GtpError:
        transport.close()
        raise
    return session
