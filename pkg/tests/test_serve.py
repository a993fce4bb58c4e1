import json

import pytest
from fastapi.testclient import TestClient

from echosim.server import Session, create_app

INIT = {"type": "init", "params": {"n": 30, "e": 120, "seed": 3}}


def mirror_apply(edges, reply):
    edges.difference_update(tuple(e) for e in reply["edges_removed"])
    edges.update(tuple(e) for e in reply["edges_added"])


# -- Session unit tests -----------------------------------------------------------

def test_init_returns_full_state():
    reply = Session().handle(INIT)
    assert reply["type"] == "state"
    assert reply["t"] == 0
    assert len(reply["opinions"]) == 30
    assert len(reply["edges_added"]) == 120
    assert reply["edges_removed"] == []
    m = reply["metrics"]
    assert m["components"] >= 1 and m["peaks"] >= 1 and m["entropy"] >= 0.0


def test_step_before_init_is_error():
    reply = Session().handle({"type": "step", "n": 1})
    assert reply["type"] == "error"
    assert "init" in reply["msg"]


def test_step_returns_net_deltas_tracked_by_mirror():
    session = Session()
    edges = set()
    mirror_apply(edges, session.handle(INIT))
    for _ in range(5):
        reply = session.handle({"type": "step", "n": 100})
        assert reply["type"] == "state"
        mirror_apply(edges, reply)
    snap = session.handle({"type": "snapshot"})
    assert snap["edges_removed"] == []
    assert {tuple(e) for e in snap["edges_added"]} == edges
    assert len(edges) == 120  # rewiring preserves the edge count


def test_step_validates_n():
    session = Session()
    session.handle(INIT)
    for bad in (0, -1, "five", 10 ** 9):
        reply = session.handle({"type": "step", "n": bad})
        assert reply["type"] == "error", bad


def test_set_params_only_mutable_fields():
    session = Session()
    session.handle(INIT)
    reply = session.handle({"type": "set_params", "params": {"q": 0.0}})
    assert reply["type"] == "state"
    reply = session.handle({"type": "set_params", "params": {"n": 50}})
    assert reply["type"] == "error"
    reply = session.handle({"type": "set_params", "params": {"q": 2.0}})
    assert reply["type"] == "error"  # out-of-range value rejected


def test_set_params_q_zero_freezes_edges():
    session = Session()
    session.handle(INIT)
    session.handle({"type": "step", "n": 500})
    session.handle({"type": "set_params", "params": {"q": 0.0}})
    session.handle({"type": "snapshot"})  # sync the known-edge baseline
    reply = session.handle({"type": "step", "n": 1000})
    assert reply["edges_added"] == []
    assert reply["edges_removed"] == []


def test_set_params_shrinking_screen_drops_oldest():
    session = Session()
    session.handle(INIT)
    session.handle({"type": "step", "n": 2000})
    state = session.state
    before = [list(s) for s in state.screens]
    session.handle({"type": "set_params", "params": {"l": 3}})
    for old, new in zip(before, state.screens):
        assert list(new) == old[-3:]
        assert new.maxlen == 3


def test_reset_requires_integer_seed_and_restores_t_zero():
    session = Session()
    session.handle(INIT)
    session.handle({"type": "step", "n": 50})
    assert session.handle({"type": "reset"})["type"] == "error"
    reply = session.handle({"type": "reset", "seed": 3})
    assert reply["t"] == 0
    assert len(reply["edges_added"]) == 120
    again = Session().handle(INIT)
    assert reply["opinions"] == again["opinions"]
    assert reply["edges_added"] == again["edges_added"]


def test_unknown_type_and_bad_json_are_errors():
    session = Session()
    assert session.handle({"type": "warp"})["type"] == "error"
    assert session.handle({"no_type": 1})["type"] == "error"
    reply = json.loads(session.handle_text("{not json"))
    assert reply["type"] == "error"
    assert "JSON" in reply["msg"]


def test_init_rejects_unknown_and_invalid_params():
    assert Session().handle({"type": "init", "params": {"bogus": 1}})["type"] == "error"
    assert Session().handle({"type": "init", "params": {"n": -5}})["type"] == "error"


def test_sessions_are_isolated():
    a, b = Session(), Session()
    a.handle(INIT)
    b.handle({"type": "init", "params": {"n": 10, "e": 20, "seed": 1}})
    a.handle({"type": "step", "n": 100})
    assert b.state.t == 0
    assert len(b.state.opinions) == 10


# -- WebSocket transport ------------------------------------------------------------

@pytest.fixture()
def ws_client():
    app = create_app()
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            yield ws


def send(ws, msg):
    ws.send_text(json.dumps(msg))
    return json.loads(ws.receive_text())


def test_websocket_roundtrip_matches_session(ws_client):
    reply = send(ws_client, INIT)
    assert reply == Session().handle(INIT)
    stepped = send(ws_client, {"type": "step", "n": 10})
    assert stepped["type"] == "state"
    assert stepped["t"] == 10


def test_websocket_error_frames(ws_client):
    ws_client.send_text("{broken")
    assert json.loads(ws_client.receive_text())["type"] == "error"
    reply = send(ws_client, {"type": "step", "n": 1})
    assert reply["type"] == "error"
