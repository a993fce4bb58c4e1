"""Interactive session server: newline-delimited JSON messages over a
WebSocket. Each connection owns one simulation; sessions are fully isolated.

Client -> server messages:
    {"type": "init", "params": {...}}
    {"type": "step", "n": int}
    {"type": "set_params", "params": {...}}   (epsilon/mu/p/q/l/strategy)
    {"type": "reset", "seed": int}
    {"type": "snapshot"}
Server -> client:
    {"type": "state", "t", "opinions", "edges_added", "edges_removed",
     "metrics": {...}}
    {"type": "error", "msg": str}

The first state after init/reset, and every snapshot reply, carry the full
edge list in edges_added; step replies carry net edge deltas since the last
state message.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import fields

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .engine import ParameterError, Params, init_simulation, step
from .graph import weakly_connected_components
from .metrics import (MetricError, count_opinion_peaks, opinion_partition,
                      screen_entropy, segregation_index)

MUTABLE_PARAMS = ("epsilon", "mu", "p", "q", "l", "strategy")
_PARAM_NAMES = {f.name for f in fields(Params)}
MAX_STEP_BATCH = 1_000_000


class ProtocolError(Exception):
    pass


class Session:
    """One client's simulation. handle() maps a request dict to a reply dict;
    the transport layer only does JSON framing."""

    def __init__(self):
        self.state = None
        self._known_edges = set()

    # -- message handling ---------------------------------------------------

    def handle(self, msg: dict) -> dict:
        try:
            if not isinstance(msg, dict) or "type" not in msg:
                raise ProtocolError("message must be an object with a 'type'")
            kind = msg["type"]
            if kind == "init":
                return self._init(msg.get("params") or {})
            if self.state is None:
                raise ProtocolError("session not initialized; send 'init' first")
            if kind == "step":
                return self._step(msg.get("n", 1))
            if kind == "set_params":
                return self._set_params(msg.get("params") or {})
            if kind == "reset":
                return self._reset(msg.get("seed"))
            if kind == "snapshot":
                return self._state_message(full=True)
            raise ProtocolError(f"unknown message type {kind!r}")
        except (ProtocolError, ParameterError, MetricError) as exc:
            return {"type": "error", "msg": str(exc)}

    def handle_text(self, text: str) -> str:
        try:
            msg = json.loads(text)
        except json.JSONDecodeError as exc:
            return json.dumps({"type": "error", "msg": f"bad JSON: {exc}"})
        return json.dumps(self.handle(msg))

    # -- commands -----------------------------------------------------------

    def _init(self, table: dict) -> dict:
        unknown = set(table) - _PARAM_NAMES
        if unknown:
            raise ProtocolError(f"unknown params: {sorted(unknown)}")
        params = Params().with_overrides(**table)
        self.state = init_simulation(params, record_events=False)
        return self._state_message(full=True)

    def _reset(self, seed) -> dict:
        if not isinstance(seed, int):
            raise ProtocolError("reset requires an integer 'seed'")
        params = self.state.params.with_overrides(seed=seed)
        self.state = init_simulation(params, record_events=False)
        return self._state_message(full=True)

    def _step(self, n) -> dict:
        if not isinstance(n, int) or n < 1 or n > MAX_STEP_BATCH:
            raise ProtocolError(f"'n' must be an integer in [1, {MAX_STEP_BATCH}]")
        for _ in range(n):
            step(self.state)
        return self._state_message(full=False)

    def _set_params(self, table: dict) -> dict:
        bad = set(table) - set(MUTABLE_PARAMS)
        if bad:
            raise ProtocolError(
                f"only {MUTABLE_PARAMS} may change mid-session, got {sorted(bad)}")
        old_l = self.state.params.l
        self.state.params = self.state.params.with_overrides(**table)
        new_l = self.state.params.l
        if new_l != old_l:
            # keep the newest entries when the screen shrinks
            self.state.screens = [deque(s, maxlen=new_l) for s in self.state.screens]
        return self._state_message(full=False)

    # -- state serialization --------------------------------------------------

    def _current_edges(self) -> set:
        g = self.state.graph
        return {(u, v) for u in range(g.n) for v in g.out[u]}

    def _metrics(self) -> dict:
        state = self.state
        part = opinion_partition(state.opinions)
        try:
            seg = segregation_index(state.graph, part)
        except MetricError:
            seg = None
        return {
            "entropy": screen_entropy(state),
            "peaks": count_opinion_peaks(state.opinions),
            "segregation": seg,
            "components": len(weakly_connected_components(state.graph)),
        }

    def _state_message(self, full: bool) -> dict:
        edges = self._current_edges()
        if full:
            added = sorted(edges)
            removed = []
        else:
            added = sorted(edges - self._known_edges)
            removed = sorted(self._known_edges - edges)
        self._known_edges = edges
        return {
            "type": "state",
            "t": self.state.t,
            "opinions": list(self.state.opinions),
            "edges_added": [list(e) for e in added],
            "edges_removed": [list(e) for e in removed],
            "metrics": self._metrics(),
        }


def create_app(static_dir=None):
    """FastAPI app exposing the session protocol at /ws and, when given,
    static UI files at /."""
    app = FastAPI(title="echo-chamber simulation server")

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        session = Session()
        try:
            while True:
                text = await websocket.receive_text()
                await websocket.send_text(session.handle_text(text))
        except WebSocketDisconnect:
            pass

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def serve(host: str = "127.0.0.1", port: int = 8765, static_dir=None):
    import uvicorn

    uvicorn.run(create_app(static_dir=static_dir), host=host, port=port,
                log_level="warning")
