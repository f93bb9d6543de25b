// View-model reducers.
//
// The server is the single authority for scores and positions: every field
// shown in the UI originates in a protocol response or a streamed event.

import type {
  LoadTaskPayload,
  PositionEvent,
  StatePayload,
  ViewModel,
} from "./types.js";

export function initialViewModel(): ViewModel {
  return {
    status: "connecting",
    stale: false,
    taskId: null,
    palette: {},
    cells: [],
    rivers: [],
    facilities: [],
    constraints: [],
    allSatisfied: false,
    trails: {},
    solving: false,
    banner: null,
  };
}

export function applyTaskLoaded(vm: ViewModel, p: LoadTaskPayload): ViewModel {
  return {
    ...vm,
    taskId: p.task_id,
    palette: p.palette,
    cells: p.cells,
    rivers: p.rivers,
    facilities: p.facilities.map(({ id, name }) => ({ id, name, x: 0, y: 0 })),
    constraints: p.constraints.map((c) => ({
      utterance: c.utterance,
      score: 0,
      satisfied: false,
    })),
    allSatisfied: false,
    trails: {},
    banner: null,
  };
}

export function applyState(vm: ViewModel, p: StatePayload): ViewModel {
  const names = new Map(vm.facilities.map((f) => [f.id, f.name]));
  return {
    ...vm,
    stale: false,
    facilities: Object.entries(p.positions).map(([id, [x, y]]) => ({
      id,
      name: names.get(id) ?? id,
      x,
      y,
    })),
    constraints: p.constraints.map((c, i) => ({
      utterance: c.utterance,
      score: p.scores[i],
      satisfied: p.satisfied[i],
    })),
    allSatisfied: p.all_satisfied,
  };
}

export function applyPositionEvent(vm: ViewModel, ev: PositionEvent): ViewModel {
  const before = vm.facilities.find((f) => f.id === ev.facility);
  const facilities = vm.facilities.map((f) =>
    f.id === ev.facility ? { ...f, x: ev.x, y: ev.y } : f,
  );
  // A trail starts at the pre-solve position, so k events give k+1 points.
  const trail =
    vm.trails[ev.facility] ?? (before ? [[before.x, before.y] as [number, number]] : []);
  return {
    ...vm,
    facilities,
    trails: { ...vm.trails, [ev.facility]: [...trail, [ev.x, ev.y]] },
  };
}

export function beginRequest(vm: ViewModel): ViewModel {
  return { ...vm, stale: true };
}

export function beginSolve(vm: ViewModel): ViewModel {
  return { ...vm, solving: true, banner: null, trails: {} };
}

export function finishSolve(vm: ViewModel, success: boolean): ViewModel {
  return {
    ...vm,
    solving: false,
    banner: success ? "All constraints satisfied" : "Solver stopped short",
  };
}

export function interruptSolve(vm: ViewModel): ViewModel {
  // Keep whatever the last streamed event produced.
  return { ...vm, solving: false, banner: "Solve interrupted (partial progress)" };
}

export function setConnection(vm: ViewModel, open: boolean): ViewModel {
  return {
    ...vm,
    status: open ? "open" : "closed",
    stale: open ? vm.stale : true,
  };
}
