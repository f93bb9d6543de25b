"""Protocol transports: stdio, TCP, and HTTP(WebSocket + static assets).

Each connection owns one SessionState and processes its requests in arrival
order; separate connections run concurrently (handlers execute on worker
threads so a long solve in one session does not stall the others).
"""

from __future__ import annotations

import asyncio
import json
import sys
from pathlib import Path

from aiohttp import WSMsgType, web

from .protocol import SessionState, handle_line, handle_message

SEED_KEY = web.AppKey("default_seed", int)

DEFAULT_TCP_PORT = 7411
DEFAULT_HTTP_PORT = 7412
WS_PATH = "/ws"
# Inline map payloads can run to a few MB per line.
STREAM_LIMIT = 2**24


def run_stdio(default_seed: int = 0) -> None:
    """Serve one session over stdin/stdout; blocks until EOF."""
    session = SessionState(default_seed=default_seed)
    out = sys.stdout
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        def emit(event: dict) -> None:
            out.write(json.dumps(event) + "\n")
        response = handle_line(session, line, emit=emit)
        out.write(response + "\n")
        out.flush()


def make_tcp_handler(default_seed: int = 0):
    async def handler(reader, writer):
        await _handle_tcp(reader, writer, default_seed)
    return handler


async def _handle_tcp(reader: asyncio.StreamReader, writer: asyncio.StreamWriter,
                      default_seed: int = 0) -> None:
    session = SessionState(default_seed=default_seed)
    loop = asyncio.get_running_loop()
    write_lock = asyncio.Lock()

    async def send(text: str) -> None:
        async with write_lock:
            writer.write(text.encode() + b"\n")
            await writer.drain()

    try:
        while True:
            raw = await reader.readline()
            if not raw:
                break
            line = raw.decode().strip()
            if not line:
                continue

            def emit(event: dict) -> None:
                asyncio.run_coroutine_threadsafe(send(json.dumps(event)), loop)

            response = await loop.run_in_executor(None, handle_line, session, line, emit)
            await send(response)
    finally:
        writer.close()


async def _ws_handler(request: web.Request) -> web.WebSocketResponse:
    ws = web.WebSocketResponse()
    await ws.prepare(request)
    session = SessionState(default_seed=request.app.get(SEED_KEY, 0))
    loop = asyncio.get_running_loop()
    send_lock = asyncio.Lock()

    async def send(obj: dict) -> None:
        async with send_lock:
            await ws.send_json(obj)

    async for msg in ws:
        if msg.type != WSMsgType.TEXT:
            continue
        try:
            req = json.loads(msg.data)
            if not isinstance(req, dict):
                raise ValueError("request must be an object")
        except ValueError as exc:
            await send({"id": None, "ok": False,
                        "error": {"code": "invalid-input", "message": str(exc)}})
            continue

        def emit(event: dict) -> None:
            asyncio.run_coroutine_threadsafe(send(event), loop)

        response = await loop.run_in_executor(None, handle_message, session, req, emit)
        await send(response)
    return ws


def build_http_app(static_dir: str | None = None, default_seed: int = 0) -> web.Application:
    app = web.Application()
    app[SEED_KEY] = default_seed
    app.router.add_get(WS_PATH, _ws_handler)
    if static_dir and Path(static_dir).is_dir():
        async def index(_request):
            return web.FileResponse(Path(static_dir) / "index.html")
        app.router.add_get("/", index)
        app.router.add_static("/", static_dir)
    return app


async def serve_async(tcp_port: int | None = DEFAULT_TCP_PORT,
                      http_port: int | None = DEFAULT_HTTP_PORT,
                      static_dir: str | None = None,
                      host: str = "127.0.0.1",
                      ready: asyncio.Event | None = None,
                      default_seed: int = 0) -> None:
    """Run the requested listeners until cancelled."""
    servers = []
    if tcp_port is not None:
        servers.append(await asyncio.start_server(
            make_tcp_handler(default_seed), host, tcp_port, limit=STREAM_LIMIT))
    runner = None
    if http_port is not None:
        app = build_http_app(static_dir, default_seed=default_seed)
        runner = web.AppRunner(app)
        await runner.setup()
        site = web.TCPSite(runner, host, http_port)
        await site.start()
    if ready is not None:
        ready.set()
    try:
        await asyncio.Event().wait()  # run forever
    finally:
        for s in servers:
            s.close()
            await s.wait_closed()
        if runner is not None:
            await runner.cleanup()


def run_server(transport: str = "both", tcp_port: int = DEFAULT_TCP_PORT,
               http_port: int = DEFAULT_HTTP_PORT,
               static_dir: str | None = None, host: str = "127.0.0.1",
               default_seed: int = 0) -> None:
    if transport == "stdio":
        run_stdio(default_seed)
        return
    tcp = tcp_port if transport in ("both", "tcp") else None
    http = http_port if transport in ("both", "ws") else None
    try:
        asyncio.run(serve_async(tcp, http, static_dir, host,
                                default_seed=default_seed))
    except KeyboardInterrupt:
        pass
