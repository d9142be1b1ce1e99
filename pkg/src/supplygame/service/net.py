"""Pluggable transports over the session message catalog.

The catalog itself (message and reply documents) is transport-neutral;
this module provides two carriers for the same JSON bodies:

* a TCP line protocol: one JSON document per newline-terminated line,
  one reply line per request, many requests per connection;
* an HTTP bridge: POST ``/api`` with a JSON body returns the reply JSON
  (used by browser clients), with optional static file serving for the
  game UI.
"""

from __future__ import annotations

import json
import socket
import socketserver
import threading
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from supplygame.service.service import SessionService


class _LineHandler(socketserver.StreamRequestHandler):
    def handle(self):
        while True:
            line = self.rfile.readline()
            if not line:
                return
            line = line.strip()
            if not line:
                continue
            try:
                message = json.loads(line.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                reply = {"ok": False, "session": None,
                         "error": {"message": f"bad request: {exc}", "expected_phase": None}}
            else:
                reply = self.server.service.handle_message(message)
            self.wfile.write(json.dumps(reply).encode("utf-8") + b"\n")
            self.wfile.flush()


class TcpServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], service: SessionService):
        super().__init__(address, _LineHandler)
        self.service = service


def serve_tcp(service: SessionService, host: str = "127.0.0.1", port: int = 0,
              background: bool = False) -> TcpServer:
    """Serve the line protocol; returns the server (bound port on it)."""
    server = TcpServer((host, port), service)
    if background:
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
    else:
        server.serve_forever()
    return server


class TcpClient:
    """Blocking line-protocol client, one reply per request."""

    def __init__(self, host: str, port: int, timeout: float = 30.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._file = self._sock.makefile("rwb")

    def request(self, message: dict) -> dict:
        self._file.write(json.dumps(message).encode("utf-8") + b"\n")
        self._file.flush()
        line = self._file.readline()
        if not line:
            raise ConnectionError("server closed the connection")
        return json.loads(line.decode("utf-8"))

    def close(self) -> None:
        self._file.close()
        self._sock.close()


def _http_handler(service: SessionService, static_dir: Path | None):
    class Handler(SimpleHTTPRequestHandler):
        def __init__(self, *args, **kwargs):
            if static_dir is not None:
                super().__init__(*args, directory=str(static_dir), **kwargs)
            else:
                super().__init__(*args, **kwargs)

        def log_message(self, *args):  # quiet by default
            pass

        def do_POST(self):
            if self.path not in ("/api", "/api/"):
                self.send_error(404, "unknown endpoint")
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                body = self.rfile.read(length)
                message = json.loads(body.decode("utf-8"))
                reply = service.handle_message(message)
            except Exception as exc:
                reply = {"ok": False, "session": None,
                         "error": {"message": f"bad request: {exc}", "expected_phase": None}}
            blob = json.dumps(reply).encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(blob)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(blob)

        def do_GET(self):
            if static_dir is None:
                self.send_error(404, "static serving disabled")
                return
            super().do_GET()

    return Handler


def serve_http(service: SessionService, host: str = "127.0.0.1", port: int = 0,
               static_dir: str | Path | None = None,
               background: bool = False) -> ThreadingHTTPServer:
    """Serve the HTTP bridge (POST /api) plus optional static UI files."""
    handler = _http_handler(service, Path(static_dir) if static_dir else None)
    server = ThreadingHTTPServer((host, port), handler)
    if background:
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
    else:
        server.serve_forever()
    return server
