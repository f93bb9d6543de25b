import { describe, expect, it } from "vitest";

import {
  applyPositionEvent,
  applyState,
  applyTaskLoaded,
  beginRequest,
  beginSolve,
  finishSolve,
  initialViewModel,
  interruptSolve,
  setConnection,
} from "../src/viewmodel.js";
import type { LoadTaskPayload, StatePayload } from "../src/types.js";

const loadPayload: LoadTaskPayload = {
  task_id: "demo",
  map_id: "m1",
  facilities: [
    { id: "p1", name: "Marketown" },
    { id: "p2", name: "Veilstead Kingdom" },
  ],
  constraints: [
    { type: "CloseToFacility", direction: null, biome: null,
      facilities: ["p1", "p2"], utterance: "Marketown is close to Veilstead Kingdom" },
  ],
  palette: { PLAINS: [130, 180, 90] },
  cells: [{ id: 0, vertices: [[0, 0], [1, 0], [1, 1], [0, 1]], biome: "PLAINS", elevation: 0 }],
  rivers: [],
};

const statePayload: StatePayload = {
  positions: { p1: [0.2, 0.3], p2: [0.8, 0.9] },
  scores: [0.5],
  satisfied: [false],
  all_satisfied: false,
  step_count: 0,
  turn_index: 0,
  done: false,
  constraints: loadPayload.constraints,
};

describe("view model reducers", () => {
  it("loads a task", () => {
    const vm = applyTaskLoaded(initialViewModel(), loadPayload);
    expect(vm.taskId).toBe("demo");
    expect(vm.palette.PLAINS).toEqual([130, 180, 90]);
    expect(vm.constraints).toHaveLength(1);
  });

  it("mirrors the last state response exactly", () => {
    let vm = applyTaskLoaded(initialViewModel(), loadPayload);
    vm = applyState(vm, statePayload);
    expect(vm.facilities.find((f) => f.id === "p1")).toMatchObject({
      name: "Marketown", x: 0.2, y: 0.3,
    });
    expect(vm.constraints[0].score).toBe(0.5);
    expect(vm.constraints[0].satisfied).toBe(false);
    expect(vm.stale).toBe(false);
  });

  it("row flips when the server reports satisfaction", () => {
    let vm = applyTaskLoaded(initialViewModel(), loadPayload);
    vm = applyState(vm, statePayload);
    const satisfied: StatePayload = {
      ...statePayload,
      scores: [1.0],
      satisfied: [true],
      all_satisfied: true,
    };
    vm = applyState(vm, satisfied);
    expect(vm.constraints[0].satisfied).toBe(true);
    expect(vm.allSatisfied).toBe(true);
  });

  it("marks state stale while a request is in flight", () => {
    let vm = applyTaskLoaded(initialViewModel(), loadPayload);
    vm = beginRequest(vm);
    expect(vm.stale).toBe(true);
    vm = applyState(vm, statePayload);
    expect(vm.stale).toBe(false);
  });

  it("streams solver trails: k events give a k+1 point polyline", () => {
    let vm = applyTaskLoaded(initialViewModel(), loadPayload);
    vm = applyState(vm, statePayload);
    vm = beginSolve(vm);
    const k = 5;
    for (let i = 0; i < k; i++) {
      vm = applyPositionEvent(vm, {
        event: "position", facility: "p1", x: 0.2 + i * 0.01, y: 0.3, step: i,
      });
    }
    expect(vm.trails.p1).toHaveLength(k + 1);
    expect(vm.trails.p1[0]).toEqual([0.2, 0.3]); // pre-solve position
    expect(vm.facilities.find((f) => f.id === "p1")!.x).toBeCloseTo(0.24);
    vm = finishSolve(vm, true);
    expect(vm.solving).toBe(false);
    expect(vm.banner).toMatch(/satisfied/i);
  });

  it("keeps the last streamed event on interruption", () => {
    let vm = applyTaskLoaded(initialViewModel(), loadPayload);
    vm = applyState(vm, statePayload);
    vm = beginSolve(vm);
    vm = applyPositionEvent(vm, {
      event: "position", facility: "p2", x: 0.11, y: 0.22, step: 0,
    });
    vm = interruptSolve(vm);
    const p2 = vm.facilities.find((f) => f.id === "p2")!;
    expect(p2.x).toBe(0.11);
    expect(p2.y).toBe(0.22);
    expect(vm.banner).toMatch(/partial/i);
  });

  it("connection loss flags the view stale", () => {
    let vm = applyTaskLoaded(initialViewModel(), loadPayload);
    vm = applyState(vm, statePayload);
    vm = setConnection(vm, false);
    expect(vm.status).toBe("closed");
    expect(vm.stale).toBe(true);
    vm = setConnection(vm, true);
    expect(vm.status).toBe("open");
  });
});
