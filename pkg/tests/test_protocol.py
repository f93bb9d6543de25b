import json

import numpy as np
import pytest

from plotmap.protocol import (
    ERROR_CODES,
    SessionState,
    handle_line,
    handle_message,
)
from plotmap.taskgen import TaskGenConfig, generate_task
from plotmap.worldgen import map_to_dict


def _req(session, cmd, payload=None, rid=1, emit=None):
    return handle_message(session, {"id": rid, "cmd": cmd, "payload": payload or {}},
                          emit=emit)


@pytest.fixture()
def loaded_session(small_map, small_index):
    task = generate_task(small_map, TaskGenConfig(facility_count=3, seed=14),
                         np.random.default_rng(14), index=small_index)
    session = SessionState()
    r = _req(session, "load_task",
             {"task_json": task.to_dict(), "map_json": map_to_dict(small_map)})
    assert r["ok"], r
    return session, task


class TestLifecycle:
    def test_load_reset_step_get_state(self, loaded_session):
        session, task = loaded_session
        r = _req(session, "reset", {"seed": 1}, rid=2)
        assert r["ok"] and r["id"] == 2
        assert set(r["payload"]["positions"]) == set(task.facility_ids)
        r = _req(session, "step", {"dx": 0.02, "dy": 0.0}, rid=3)
        assert r["ok"]
        assert r["payload"]["step_count"] == 1
        r = _req(session, "get_state", rid=4)
        assert r["ok"]
        assert len(r["payload"]["scores"]) == len(task.constraints)

    def test_reset_with_witness_is_satisfied(self, loaded_session):
        session, task = loaded_session
        r = _req(session, "reset",
                 {"positions": {k: list(v) for k, v in task.witness_layout.items()}})
        assert r["payload"]["all_satisfied"] is True

    def test_step_before_reset(self, small_map, small_index):
        session = SessionState()
        r = _req(session, "step", {"dx": 0, "dy": 0})
        assert not r["ok"] and r["error"]["code"] == "invalid-input"

    def test_step_after_done(self, loaded_session):
        session, task = loaded_session
        _req(session, "reset",
             {"positions": {k: list(v) for k, v in task.witness_layout.items()}})
        r = _req(session, "step", {"dx": 0, "dy": 0})
        assert r["ok"] and r["payload"]["done"]
        r = _req(session, "step", {"dx": 0, "dy": 0})
        assert not r["ok"] and r["error"]["code"] == "episode-finished"

    def test_set_pos_and_scores_update(self, loaded_session):
        session, task = loaded_session
        _req(session, "reset", {"seed": 5})
        fid = task.facility_ids[0]
        r = _req(session, "set_pos", {"facility": fid, "x": 0.25, "y": 0.75})
        assert r["ok"]
        assert r["payload"]["positions"][fid] == [0.25, 0.75]

    def test_set_pos_unknown_facility(self, loaded_session):
        session, _task = loaded_session
        _req(session, "reset", {"seed": 5})
        r = _req(session, "set_pos", {"facility": "ghost", "x": 0.5, "y": 0.5})
        assert not r["ok"] and r["error"]["code"] == "missing-reference"

    def test_render_writes_png(self, loaded_session, tmp_path):
        session, _task = loaded_session
        out = tmp_path / "map.png"
        r = _req(session, "render", {"path": str(out)})
        assert r["ok"] and out.exists()


class TestSolve:
    def test_solve_streams_and_succeeds(self, loaded_session):
        session, _task = loaded_session
        _req(session, "reset", {"seed": 2})
        events = []
        r = _req(session, "solve", {"budget": 8000, "seed": 3}, emit=events.append)
        assert r["ok"]
        assert r["payload"]["success"] is True
        assert r["payload"]["all_satisfied"] is True
        assert events and all(e["event"] == "position" for e in events)

    def test_solve_budget_zero_is_noop(self, loaded_session):
        session, _task = loaded_session
        _req(session, "reset", {"seed": 2})
        before = _req(session, "get_state")["payload"]["positions"]
        r = _req(session, "solve", {"budget": 0})
        assert r["ok"] and r["payload"]["iterations"] == 0
        assert r["payload"]["positions"] == before

    def test_solve_stream_suppressed(self, loaded_session):
        session, _task = loaded_session
        _req(session, "reset", {"seed": 2})
        events = []
        r = _req(session, "solve", {"budget": 2000, "seed": 3, "stream": False},
                 emit=events.append)
        assert r["ok"] and events == []

    def test_greedy_solve(self, loaded_session):
        session, _task = loaded_session
        _req(session, "reset", {"seed": 4})
        r = _req(session, "solve", {"budget": 400, "method": "greedy", "seed": 1})
        assert r["ok"]


class TestWireContract:
    def test_response_echoes_id(self, loaded_session):
        session, _task = loaded_session
        for rid in (0, 7, 12345):
            r = _req(session, "get_state", rid=rid)
            assert r["id"] == rid

    def test_malformed_json(self):
        session = SessionState()
        r = json.loads(handle_line(session, "{not json"))
        assert not r["ok"] and r["error"]["code"] == "invalid-input"

    def test_unknown_command(self):
        session = SessionState()
        r = _req(session, "frobnicate")
        assert not r["ok"] and r["error"]["code"] == "invalid-input"

    def test_error_codes_closed_set(self, loaded_session):
        session, task = loaded_session
        probes = [
            ("step", {}),                      # before reset in a fresh session
            ("set_pos", {"facility": "ghost"}),
            ("solve", {"method": "bogus"}),
            ("load_task", {}),
        ]
        fresh = SessionState()
        r = _req(fresh, "step", {})
        assert r["error"]["code"] in ERROR_CODES
        _req(session, "reset", {"seed": 0})
        for cmd, payload in probes[1:]:
            r = _req(session, cmd, payload)
            if not r["ok"]:
                assert r["error"]["code"] in ERROR_CODES

    def test_identical_sessions_identical_streams(self, small_map, small_index):
        task = generate_task(small_map, TaskGenConfig(facility_count=3, seed=14),
                             np.random.default_rng(14), index=small_index)
        script = [
            {"id": 1, "cmd": "load_task",
             "payload": {"task_json": task.to_dict(), "map_json": map_to_dict(small_map)}},
            {"id": 2, "cmd": "reset", "payload": {"seed": 11}},
            {"id": 3, "cmd": "step", "payload": {"dx": 0.03, "dy": -0.01}},
            {"id": 4, "cmd": "solve", "payload": {"budget": 500, "seed": 6}},
            {"id": 5, "cmd": "get_state", "payload": {}},
        ]
        streams = []
        for _ in range(2):
            session = SessionState()
            collected = []
            for req in script:
                collected.append(handle_line(session, json.dumps(req),
                                             emit=lambda e: collected.append(json.dumps(e))))
            streams.append("\n".join(collected))
        assert streams[0] == streams[1]

    def test_seedless_reset_deterministic_per_session(self, small_map, small_index):
        task = generate_task(small_map, TaskGenConfig(facility_count=3, seed=14),
                             np.random.default_rng(14), index=small_index)
        streams = []
        for _ in range(2):
            session = SessionState(default_seed=5)
            _req(session, "load_task",
                 {"task_json": task.to_dict(), "map_json": map_to_dict(small_map)})
            a = _req(session, "reset")["payload"]["positions"]
            b = _req(session, "reset")["payload"]["positions"]
            streams.append((a, b))
            assert a != b  # session rng advances between resets
        assert streams[0] == streams[1]  # sessions replay identically

    def test_demo_readaptation_flow(self):
        session = SessionState()
        r = _req(session, "load_task", {"demo": True})
        assert r["ok"]
        _req(session, "reset", {"seed": 42})
        r = _req(session, "solve", {"budget": 4000, "seed": 7})
        assert r["payload"]["success"]
        r = _req(session, "set_pos", {"facility": "Marketown", "x": 0.8, "y": 0.85})
        assert not all(r["payload"]["satisfied"])
        r = _req(session, "solve", {"budget": 4000, "seed": 8})
        assert r["payload"]["success"]
        assert _req(session, "get_state")["payload"]["all_satisfied"]
