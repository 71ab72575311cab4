"""Adapter for objectives served by an external process.

Wire protocol: line-delimited JSON over the peer's standard streams or a TCP
socket. One request per line, one response line per request:

    request   {"id": <int>, "thetas": [[<float>, ...], ...]}
    response  {"id": <int>, "losses": [<float>, ...]}
    error     {"id": <int>, "error": "<message>"}

Losses are ordered like the request's thetas, so a whole batch of estimator
probes costs a single round trip. JSON's shortest float representation
round-trips float64 exactly; a local peer therefore reproduces builtin
arithmetic bit-for-bit.
"""

from __future__ import annotations

import json
import os
import select
import socket
import subprocess
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from .core import Array, Objective

__all__ = ["ExternalObjective", "ProtocolError"]


class ProtocolError(RuntimeError):
    """Timeout, malformed response, or peer-reported failure."""


class _LineTransport:
    """Shared line framing with read timeouts over a byte stream."""

    def __init__(self) -> None:
        self._buffer = b""

    def _read_chunk(self, timeout_s: float) -> bytes:
        raise NotImplementedError

    def _write(self, data: bytes) -> None:
        raise NotImplementedError

    def send_line(self, text: str) -> None:
        self._write(text.encode("utf-8") + b"\n")

    def recv_line(self, timeout_s: float) -> str:
        while b"\n" not in self._buffer:
            chunk = self._read_chunk(timeout_s)
            if not chunk:
                raise ProtocolError("peer closed the connection mid-request")
            self._buffer += chunk
        line, self._buffer = self._buffer.split(b"\n", 1)
        return line.decode("utf-8")

    def close(self) -> None:
        raise NotImplementedError


class _StdioTransport(_LineTransport):
    def __init__(self, command: Sequence[str]):
        super().__init__()
        self._proc = subprocess.Popen(
            list(command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            bufsize=0,
        )
        self._describe = " ".join(command)

    def _write(self, data: bytes) -> None:
        if self._proc.poll() is not None:
            raise ProtocolError(f"peer exited with code {self._proc.returncode}")
        try:
            self._proc.stdin.write(data)
            self._proc.stdin.flush()
        except BrokenPipeError:
            raise ProtocolError(f"peer closed stdin ({self._describe})") from None

    def _read_chunk(self, timeout_s: float) -> bytes:
        fd = self._proc.stdout.fileno()
        ready, _, _ = select.select([fd], [], [], timeout_s)
        if not ready:
            raise ProtocolError(
                f"peer response timed out after {timeout_s:g}s ({self._describe})"
            )
        return os.read(fd, 65536)

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=2.0)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
        if self._proc.stdout is not None:
            self._proc.stdout.close()


class _TcpTransport(_LineTransport):
    def __init__(self, address: str):
        super().__init__()
        host, _, port = address.rpartition(":")
        if not host or not port.isdigit():
            raise ProtocolError(f"tcp address must look like host:port, got {address!r}")
        self._sock = socket.create_connection((host, int(port)), timeout=10.0)
        self._describe = address

    def _write(self, data: bytes) -> None:
        try:
            self._sock.sendall(data)
        except OSError as exc:
            raise ProtocolError(f"send failed ({self._describe}): {exc}") from None

    def _read_chunk(self, timeout_s: float) -> bytes:
        self._sock.settimeout(timeout_s)
        try:
            return self._sock.recv(65536)
        except socket.timeout:
            raise ProtocolError(
                f"peer response timed out after {timeout_s:g}s ({self._describe})"
            ) from None

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


class ExternalObjective:
    """A black-box loss evaluated by a peer speaking the line protocol.

    The adapter deliberately knows nothing about what the peer computes; any
    input projection or model invocation happens on the peer's side.
    """

    def __init__(
        self,
        dimension: int,
        *,
        command: Optional[Sequence[str]] = None,
        tcp: Optional[str] = None,
        timeout_s: float = 30.0,
        optimum_value: Optional[float] = None,
        name: str = "",
    ):
        if (command is None) == (tcp is None):
            raise ValueError("provide exactly one of command= or tcp=")
        self.dimension = dimension
        self.timeout_s = timeout_s
        self.optimum_value = optimum_value
        self.name = name or ("external:" + (tcp if tcp else " ".join(command)))
        self._next_id = 0
        self._transport: _LineTransport = (
            _StdioTransport(command) if command is not None else _TcpTransport(tcp)
        )

    def eval_batch(self, thetas: npt.ArrayLike) -> Array:
        thetas = np.asarray(thetas, dtype=np.float64)
        request_id = self._next_id
        self._next_id += 1
        payload = {
            "id": request_id,
            "thetas": [[float(v) for v in row] for row in thetas],
        }
        self._transport.send_line(json.dumps(payload))
        line = self._transport.recv_line(self.timeout_s)
        try:
            response = json.loads(line)
        except json.JSONDecodeError:
            raise ProtocolError(f"malformed response line: {line[:200]!r}") from None
        if not isinstance(response, dict):
            raise ProtocolError(f"response must be a JSON object, got {line[:200]!r}")
        if response.get("id") != request_id:
            raise ProtocolError(
                f"response id {response.get('id')!r} does not match request {request_id}"
            )
        if "error" in response:
            raise ProtocolError(f"peer reported failure: {response['error']}")
        losses = response.get("losses")
        if not isinstance(losses, list) or len(losses) != thetas.shape[0]:
            raise ProtocolError(
                f"expected {thetas.shape[0]} losses, got {losses!r}"
            )
        # Non-finite losses pass through here; the evaluation layer turns
        # them into structured errors with the offending point's digest.
        return np.asarray(losses, dtype=np.float64)

    def eval(self, theta: npt.ArrayLike) -> float:
        return float(self.eval_batch(np.asarray(theta, dtype=np.float64)[None, :])[0])

    def as_objective(self) -> Objective:
        return Objective(
            fn=self.eval,
            dimension=self.dimension,
            batch_fn=self.eval_batch,
            optimum_value=self.optimum_value,
            name=self.name,
        )

    def close(self) -> None:
        self._transport.close()

    def __enter__(self) -> "ExternalObjective":
        return self

    def __exit__(self, *_exc) -> None:
        self.close()
