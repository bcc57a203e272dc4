"""Read-only static file service for a built output directory."""

from __future__ import annotations

import functools
import http.server
import os


class _Handler(http.server.SimpleHTTPRequestHandler):
    extensions_map = {
        **http.server.SimpleHTTPRequestHandler.extensions_map,
        ".json": "application/json",
        ".svg": "image/svg+xml",
        ".js": "text/javascript",
        ".mjs": "text/javascript",
    }

    def log_message(self, fmt, *args):  # quiet by default
        pass


def serve(directory: str, port: int) -> None:
    if not os.path.isdir(directory):
        raise NotADirectoryError(directory)
    if not os.path.exists(os.path.join(directory, "manifest.json")):
        raise FileNotFoundError(
            f"no manifest.json in {directory}; run build first")
    handler = functools.partial(_Handler, directory=directory)
    with http.server.ThreadingHTTPServer(("", port), handler) as httpd:
        print(f"serving {directory} at http://localhost:{port}/")
        httpd.serve_forever()


def make_server(directory: str, port: int = 0):
    """Server instance for tests; caller drives it and reads .server_port."""
    handler = functools.partial(_Handler, directory=directory)
    return http.server.ThreadingHTTPServer(("127.0.0.1", port), handler)
