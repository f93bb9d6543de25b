// Designer app: connect, load the demo task, drag facilities, watch scores,
// and trigger solver re-adaptation from the current arrangement.

import { DragQueue } from "./dragqueue.js";
import { connect, PlotmapClient } from "./protocol.js";
import {
  hitTestFacility,
  renderBanner,
  renderConstraintPanel,
  renderScene,
  renderStatus,
} from "./render.js";
import { screenToMap } from "./transform.js";
import type { LoadTaskPayload, StatePayload, ViewModel } from "./types.js";
import {
  applyPositionEvent,
  applyState,
  applyTaskLoaded,
  beginRequest,
  beginSolve,
  finishSolve,
  initialViewModel,
  setConnection,
} from "./viewmodel.js";

const DRAG_SEND_INTERVAL_MS = 100; // at most 10 set_pos per second

let vm: ViewModel = initialViewModel();
let client: PlotmapClient;

const canvas = document.getElementById("map") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const panel = document.getElementById("constraints")!;
const banner = document.getElementById("banner")!;
const status = document.getElementById("status")!;
const solveButton = document.getElementById("solve") as HTMLButtonElement;
const resetButton = document.getElementById("reset") as HTMLButtonElement;
const notice = document.getElementById("notice")!;

function update(next: ViewModel): void {
  vm = next;
  renderScene(ctx, vm);
  renderConstraintPanel(panel, vm);
  renderBanner(banner, vm);
  renderStatus(status, vm);
  solveButton.disabled = vm.solving || vm.status !== "open";
}

async function loadDemo(): Promise<void> {
  update(beginRequest(vm));
  const loaded = await client.request<LoadTaskPayload>("load_task", { demo: true });
  if (loaded.ok && loaded.payload) update(applyTaskLoaded(vm, loaded.payload));
  const reset = await client.request<StatePayload>("reset", { seed: 7 });
  if (reset.ok && reset.payload) update(applyState(vm, reset.payload));
}

// -- facility dragging (server-authoritative, coalesced to 10 Hz) -----------

let dragging: string | null = null;

function canvasSize() {
  return { width: canvas.width, height: canvas.height };
}

// A drag that races a dropped connection is held by the queue and flushed on
// reconnect; the view keeps its stale flag until the server confirms.
async function sendPosition(fid: string, x: number, y: number): Promise<void> {
  update(beginRequest(vm));
  try {
    const r = await client.request<StatePayload>("set_pos", { facility: fid, x, y });
    if (r.ok && r.payload) update(applyState(vm, r.payload));
    else update({ ...vm, stale: false });
  } catch {
    dragQueue.setConnected(false);
    dragQueue.push(fid, x, y);
  }
}

const dragQueue = new DragQueue(
  (fid, x, y) => void sendPosition(fid, x, y),
  { intervalMs: DRAG_SEND_INTERVAL_MS },
);

canvas.addEventListener("pointerdown", (ev) => {
  if (vm.solving) {
    notice.textContent = "Solver running; edits are rejected until it finishes.";
    return;
  }
  const rect = canvas.getBoundingClientRect();
  const fid = hitTestFacility(vm, ev.clientX - rect.left, ev.clientY - rect.top,
    canvasSize());
  if (fid) {
    dragging = fid;
    canvas.setPointerCapture(ev.pointerId);
  }
});

canvas.addEventListener("pointermove", (ev) => {
  if (!dragging || vm.solving) return;
  const rect = canvas.getBoundingClientRect();
  // screenToMap clamps, so drags outside the canvas pin to the map edge
  const [x, y] = screenToMap(ev.clientX - rect.left, ev.clientY - rect.top,
    canvasSize());
  dragQueue.push(dragging, x, y);
});

canvas.addEventListener("pointerup", (ev) => {
  if (dragging) {
    const rect = canvas.getBoundingClientRect();
    const [x, y] = screenToMap(ev.clientX - rect.left, ev.clientY - rect.top,
      canvasSize());
    dragQueue.push(dragging, x, y);
    dragQueue.flush();
  }
  dragging = null;
});

// -- solving -----------------------------------------------------------------

solveButton.addEventListener("click", async () => {
  if (vm.solving) return;
  update(beginSolve(vm));
  notice.textContent = "";
  try {
    const r = await client.request<StatePayload>("solve",
      { budget: 4000, method: "anneal", seed: Date.now() % 100000 });
    if (r.ok && r.payload) {
      update(applyState(vm, r.payload));
      update(finishSolve(vm, r.payload.success ?? r.payload.all_satisfied));
    } else {
      update(finishSolve(vm, false));
    }
  } catch {
    update({ ...vm, solving: false, banner: "Solve interrupted (partial progress)" });
  }
});

resetButton.addEventListener("click", async () => {
  if (vm.solving) return;
  update(beginRequest(vm));
  const r = await client.request<StatePayload>("reset",
    { seed: Date.now() % 100000 });
  if (r.ok && r.payload) update({ ...applyState(vm, r.payload), trails: {} });
});

// -- bootstrap ---------------------------------------------------------------

function wsUrl(): string {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/ws`;
}

function start(): void {
  client = connect(wsUrl());
  client.onStatus((open) => {
    update(setConnection(vm, open));
    const hadOffline = dragQueue.hasOfflinePosition;
    dragQueue.setConnected(open);
    if (open && !hadOffline) void loadDemo();
  });
  client.onEvent((ev) => {
    if (ev.event === "position") update(applyPositionEvent(vm, ev));
  });
  update(vm);
}

start();
