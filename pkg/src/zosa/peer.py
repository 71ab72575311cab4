"""Reference evaluation peer: serves a builtin benchmark over the JSON-lines
protocol, on stdio by default or a TCP port with --tcp.

Run as a module:

    python -m zosa.peer --function quadratic --dimension 100

Useful both as the counterpart for external-objective tests and as a
template for wiring in a real remote loss.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from typing import IO, Optional

import numpy as np

from .benchmarks import FUNCTION_KINDS, SyntheticFunction

__all__ = ["main", "serve_stream", "serve_tcp"]


def _handle_line(line: str, fn: SyntheticFunction, log: Optional[IO[str]]) -> str:
    try:
        request = json.loads(line)
        request_id = request.get("id", -1)
        thetas = np.asarray(request["thetas"], dtype=np.float64)
        if thetas.ndim != 2 or thetas.shape[1] != fn.dimension:
            raise ValueError(
                f"expected thetas of shape (k, {fn.dimension}), got {thetas.shape}"
            )
    except Exception as exc:  # malformed request: report, keep serving
        return json.dumps({"id": -1, "error": f"bad request: {exc}"})
    if log is not None:
        log.write(f"{thetas.shape[0]}\n")
        log.flush()
    losses = fn.value_batch(thetas)
    return json.dumps({"id": request_id, "losses": [float(v) for v in losses]})


def serve_stream(
    fn: SyntheticFunction,
    lines: IO[str],
    out: IO[str],
    log: Optional[IO[str]] = None,
) -> None:
    for line in lines:
        line = line.strip()
        if not line:
            continue
        out.write(_handle_line(line, fn, log) + "\n")
        out.flush()


def serve_tcp(fn: SyntheticFunction, port: int, ready: Optional[IO[str]] = None) -> None:
    """Serve a single connection on the given port (0 picks a free one)."""
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as server:
        server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        server.bind(("127.0.0.1", port))
        server.listen(1)
        if ready is not None:
            ready.write(f"{server.getsockname()[1]}\n")
            ready.flush()
        conn, _ = server.accept()
        with conn, conn.makefile("r") as rx, conn.makefile("w") as tx:
            serve_stream(fn, rx, tx)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--function", choices=FUNCTION_KINDS, required=True)
    parser.add_argument("--dimension", type=int, required=True)
    parser.add_argument("--tcp", type=int, default=None, metavar="PORT")
    parser.add_argument(
        "--log-requests",
        default=None,
        metavar="PATH",
        help="append the batch size of every request to PATH (test hook)",
    )
    args = parser.parse_args(argv)
    fn = SyntheticFunction(kind=args.function, dimension=args.dimension)
    log = open(args.log_requests, "a") if args.log_requests else None
    try:
        if args.tcp is not None:
            serve_tcp(fn, args.tcp, ready=sys.stdout)
        else:
            serve_stream(fn, sys.stdin, sys.stdout, log)
    finally:
        if log is not None:
            log.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
