"""Real payloads must validate against the published wire schemas."""

import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from plotmap.protocol import SessionState, handle_message
from plotmap.solvers import PolicySpec, evaluate_policy
from plotmap.taskgen import TaskGenConfig, generate_task
from plotmap.worldgen import map_to_dict

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def load_schema(name):
    return json.loads((SCHEMA_DIR / name).read_text())


@pytest.fixture(scope="module")
def task(small_map, small_index):
    return generate_task(small_map, TaskGenConfig(facility_count=4, seed=19),
                         np.random.default_rng(19), index=small_index)


def test_map_schema(small_map):
    jsonschema.validate(map_to_dict(small_map), load_schema("plotmap-map.schema.json"))


def test_task_schema(task):
    jsonschema.validate(task.to_dict(), load_schema("plotmap-task.schema.json"))


def test_eval_schema(small_map, task):
    report = evaluate_policy(PolicySpec(kind="random"), [task],
                             {task.map_ref: small_map}, rollouts=5, seed=0)
    jsonschema.validate(report.to_dict(), load_schema("plotmap-eval.schema.json"))


def test_protocol_schemas(small_map, task):
    proto = load_schema("plotmap-proto.schema.json")
    request_schema = {**proto["definitions"]["request"],
                      "definitions": proto["definitions"]}
    response_schema = {**proto["definitions"]["response"],
                       "definitions": proto["definitions"]}
    event_schema = {**proto["definitions"]["event"],
                    "definitions": proto["definitions"]}

    session = SessionState()
    events = []
    script = [
        {"id": 1, "cmd": "load_task",
         "payload": {"task_json": task.to_dict(), "map_json": map_to_dict(small_map)}},
        {"id": 2, "cmd": "reset", "payload": {"seed": 3}},
        {"id": 3, "cmd": "step", "payload": {"dx": 0.01, "dy": 0.02}},
        {"id": 4, "cmd": "set_pos",
         "payload": {"facility": task.facility_ids[0], "x": 0.5, "y": 0.5}},
        {"id": 5, "cmd": "solve", "payload": {"budget": 300, "seed": 1}},
        {"id": 6, "cmd": "get_state", "payload": {}},
        {"id": 7, "cmd": "bogus", "payload": {}},
        {"id": 8, "cmd": "step", "payload": {"dx": "NaN?"}},
    ]
    for request in script:
        if request["cmd"] in ("reset", "step", "step_joint", "set_pos", "solve",
                              "get_state", "load_task", "render"):
            jsonschema.validate(request, request_schema)
        response = handle_message(session, request, emit=events.append)
        jsonschema.validate(response, response_schema)
    for event in events:
        jsonschema.validate(event, event_schema)
    assert events, "solve should have streamed events"
