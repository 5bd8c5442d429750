"""HTTP service tests against a real threaded server on a loopback port."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from adviserkit import fixture, serialize_arena
from adviserkit.cli import main as cli_main
from adviserkit.service import make_server

NON_ALTERNATING = (
    "arena v1\n"
    "state s1 p safe init\n"
    "state s2 p safe\n"
    "trans s1 x s2\n"
    "trans s2 y s1\n"
)

DOOMED = (
    "arena v1\n"
    "state s1 p unsafe init\n"
    "state s2 a safe\n"
    "trans s1 x s2\n"
    "trans s2 y s1\n"
)


@pytest.fixture(scope="module")
def base_url():
    server = make_server("127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def call(base_url, method, path, body=None):
    data = None if body is None else json.dumps(body).encode("utf-8")
    request = urllib.request.Request(
        base_url + path, data=data, method=method,
        headers={"Content-Type": "application/json"} if data else {})
    try:
        with urllib.request.urlopen(request) as response:
            raw = response.read().decode("utf-8")
            kind = response.headers.get("Content-Type", "")
            status = response.status
    except urllib.error.HTTPError as error:
        raw = error.read().decode("utf-8")
        kind = error.headers.get("Content-Type", "")
        status = error.code
    if kind.startswith("application/json") and raw:
        return status, json.loads(raw)
    return status, raw


def new_session(base_url, **body):
    status, payload = call(base_url, "POST", "/sessions", body or {"fixture": "fig1"})
    assert status == 201, payload
    return payload


def test_fixture_listing(base_url):
    status, payload = call(base_url, "GET", "/fixtures")
    assert status == 200
    assert payload == {"fixtures": ["fig1", "fig2", "fig3"]}


def test_create_session_summary(base_url):
    payload = new_session(base_url, fixture="fig1")
    assert len(payload["session_id"]) == 32
    summary = payload["summary"]
    assert summary["generated"] == 4
    assert summary["good"] == 3
    assert summary["truncated"] is False
    assert summary["best_index"] == 0
    assert summary["best_lambda"] == {"num": 1, "den": 1}
    assert summary["lambdas"] == [
        {"num": 1, "den": 1}, {"num": 2, "den": 1}, {"num": 2, "den": 1}, None]


def test_initial_snapshot(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    status, snap = call(base_url, "GET", f"/sessions/{sid}")
    assert status == 200
    assert snap["state"] == "s1"
    assert snap["owner"] == "protagonist"
    assert snap["halted"] == "no"
    assert snap["advice"] is None
    assert snap["adviser"] == {"index": 0, "lambda": {"num": 1, "den": 1},
                               "nominal": True}
    assert snap["forbidden"]["s2"] == ["u_a3"]
    assert snap["average"] is None
    assert snap["rounds"] == 0
    assert snap["history"] == []


def test_snapshot_is_idempotent(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    first = call(base_url, "GET", f"/sessions/{sid}")
    second = call(base_url, "GET", f"/sessions/{sid}")
    assert first == second


def test_step_and_move_cycle(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    status, payload = call(base_url, "POST", f"/sessions/{sid}/auto-step")
    assert status == 200
    assert payload["event"] == {
        "actor": "protagonist", "input": "u_p1", "from": "s1", "to": "s2",
        "outcome": "normal", "new_adviser_index": None}
    advice = payload["session"]["advice"]
    assert advice == {"state": "s2", "hard": ["u_a3"], "soft": [],
                      "allowed": ["u_a1", "u_a2"]}
    status, payload = call(base_url, "POST", f"/sessions/{sid}/moves",
                           {"input": "u_a1"})
    assert status == 200
    assert payload["event"]["outcome"] == "normal"
    snap = payload["session"]
    assert snap["state"] == "s1"
    assert snap["rounds"] == 1
    assert snap["running_sum"] == 1
    assert snap["average"] == {"num": 1, "den": 1}
    assert [e["input"] for e in snap["history"]] == ["u_p1", "u_a1"]


def test_move_on_protagonist_turn_is_conflict(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    status, payload = call(base_url, "POST", f"/sessions/{sid}/moves",
                           {"input": "u_a1"})
    assert status == 409
    assert payload["code"] == "bad_move"


def test_disabled_move_reports_enabled_inputs(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    call(base_url, "POST", f"/sessions/{sid}/auto-step")
    status, payload = call(base_url, "POST", f"/sessions/{sid}/moves",
                           {"input": "u_a9"})
    assert status == 409
    assert payload["code"] == "bad_move"
    assert payload["detail"] == {"enabled": ["u_a1", "u_a2", "u_a3"]}


def test_move_body_must_carry_input(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    status, payload = call(base_url, "POST", f"/sessions/{sid}/moves", {})
    assert status == 400
    assert payload["code"] == "bad_request"


def test_auto_step_on_adversary_turn_is_conflict(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    call(base_url, "POST", f"/sessions/{sid}/auto-step")
    status, payload = call(base_url, "POST", f"/sessions/{sid}/auto-step")
    assert status == 409
    assert payload["code"] == "wrong_turn"


def test_unknown_session_everywhere(base_url):
    for method, path in [
        ("GET", "/sessions/deadbeef"),
        ("GET", "/sessions/deadbeef/graph"),
        ("POST", "/sessions/deadbeef/moves"),
        ("POST", "/sessions/deadbeef/auto-step"),
        ("POST", "/sessions/deadbeef/reset"),
    ]:
        status, payload = call(base_url, method, path,
                               {"input": "x"} if path.endswith("moves") else None)
        assert status == 404
        assert payload["code"] == "unknown_session"


def test_session_creation_requires_one_source(base_url):
    status, payload = call(base_url, "POST", "/sessions", {})
    assert status == 400
    assert payload["code"] == "bad_request"
    status, payload = call(base_url, "POST", "/sessions",
                           {"fixture": "fig1", "document": "arena v1\n"})
    assert status == 400


def test_unknown_fixture(base_url):
    status, payload = call(base_url, "POST", "/sessions", {"fixture": "fig9"})
    assert status == 404
    assert payload["code"] == "unknown_fixture"
    assert payload["detail"] == ["fig1", "fig2", "fig3"]


def test_bad_document(base_url):
    status, payload = call(base_url, "POST", "/sessions", {"document": "not an arena"})
    assert status == 400
    assert payload["code"] == "bad_document"


def test_invalid_arena_document(base_url):
    status, payload = call(base_url, "POST", "/sessions",
                           {"document": NON_ALTERNATING})
    assert status == 400
    assert payload["code"] == "invalid_arena"
    assert any("stays with the protagonist" in message for message in payload["detail"])


def test_hopeless_arena_is_conflict(base_url):
    status, payload = call(base_url, "POST", "/sessions", {"document": DOOMED})
    assert status == 409
    assert payload["code"] == "no_good_adviser"


def test_cap_is_forwarded_and_checked(base_url):
    payload = new_session(base_url, fixture="fig3", cap=2)
    assert payload["summary"]["generated"] == 2
    assert payload["summary"]["truncated"] is True
    status, payload = call(base_url, "POST", "/sessions",
                           {"fixture": "fig3", "cap": 0})
    assert status == 400
    assert payload["code"] == "bad_request"


def test_graph_overlay(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    status, text = call(base_url, "GET", f"/sessions/{sid}/graph")
    assert status == 200
    assert text.startswith("digraph arena {")
    assert "peripheries=2" in text
    assert 'color="#cc0000" style=dashed' in text


def test_sessions_are_isolated(base_url):
    first = new_session(base_url, fixture="fig1")["session_id"]
    second = new_session(base_url, fixture="fig1")["session_id"]
    call(base_url, "POST", f"/sessions/{first}/auto-step")
    _, snap = call(base_url, "GET", f"/sessions/{second}")
    assert snap["state"] == "s1"
    assert snap["history"] == []


def test_reset_restarts_the_session(base_url):
    sid = new_session(base_url, fixture="fig1")["session_id"]
    call(base_url, "POST", f"/sessions/{sid}/auto-step")
    call(base_url, "POST", f"/sessions/{sid}/moves", {"input": "u_a1"})
    status, payload = call(base_url, "POST", f"/sessions/{sid}/reset")
    assert status == 200
    snap = payload["session"]
    assert snap["state"] == "s1"
    assert snap["rounds"] == 0
    assert snap["history"] == []
    assert snap["adviser"]["index"] == 0


def test_soft_violation_switches_adviser(base_url):
    sid = new_session(base_url, fixture="fig3")["session_id"]
    _, snap = call(base_url, "GET", f"/sessions/{sid}")
    assert snap["adviser"] == {"index": 2, "lambda": {"num": 0, "den": 1},
                               "nominal": False}
    _, payload = call(base_url, "POST", f"/sessions/{sid}/auto-step")
    assert payload["session"]["advice"] == {
        "state": "s2", "hard": ["u_a2"], "soft": ["u_a3"], "allowed": ["u_a1"]}
    status, payload = call(base_url, "POST", f"/sessions/{sid}/moves",
                           {"input": "u_a3"})
    assert status == 200
    assert payload["event"]["outcome"] == "soft_violation"
    assert payload["event"]["new_adviser_index"] == 0
    snap = payload["session"]
    assert snap["adviser"] == {"index": 0, "lambda": {"num": 2, "den": 1},
                               "nominal": True}


def test_halted_session_refuses_more_moves(base_url):
    sid = new_session(base_url, fixture="fig3")["session_id"]
    call(base_url, "POST", f"/sessions/{sid}/auto-step")
    call(base_url, "POST", f"/sessions/{sid}/moves", {"input": "u_a2"})
    _, snap = call(base_url, "GET", f"/sessions/{sid}")
    assert snap["halted"] == "hard_violation"
    assert snap["advice"] is None
    status, payload = call(base_url, "POST", f"/sessions/{sid}/moves",
                           {"input": "u_a1"})
    assert status == 409
    assert payload["code"] == "bad_move"


def test_options_preflight(base_url):
    status, _ = call(base_url, "OPTIONS", "/sessions")
    assert status == 204


def test_unknown_route(base_url):
    status, payload = call(base_url, "GET", "/nope")
    assert status == 404
    assert payload["code"] == "not_found"


def test_history_replays_through_the_cli(base_url, tmp_path, capsys):
    """A session's move list, exported as a script, reproduces the session."""
    sid = new_session(base_url, fixture="fig3")["session_id"]
    call(base_url, "POST", f"/sessions/{sid}/auto-step")
    call(base_url, "POST", f"/sessions/{sid}/moves", {"input": "u_a3"})
    call(base_url, "POST", f"/sessions/{sid}/auto-step")
    call(base_url, "POST", f"/sessions/{sid}/moves", {"input": "u_a7"})
    _, snap = call(base_url, "GET", f"/sessions/{sid}")
    assert snap["halted"] == "hard_violation"
    moves = [event["input"] for event in snap["history"]]

    arena_file = tmp_path / "fig3.arena"
    arena_file.write_text(serialize_arena(fixture("fig3")), encoding="utf-8")
    script_file = tmp_path / "replay.script"
    assert cli_main(["script", *moves, "--out", str(script_file)]) == 0
    assert cli_main(["simulate", str(arena_file),
                     "--policy", f"script:{script_file}", "--steps", "50"]) == 0
    trace = capsys.readouterr().out.splitlines()

    for event, line in zip(snap["history"], trace):
        assert f"{event['actor']} {event['input']} {event['from']} -> {event['to']} " \
               f"{event['outcome']}" in line
    summary = trace[-1]
    average = snap["average"]
    assert f"average {average['num']}/{average['den']}" in summary
    assert f"halted {snap['halted']}" in summary
