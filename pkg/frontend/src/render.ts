// Canvas scene painting and the constraint panel DOM.

import { mapToScreen } from "./transform.js";
import type { CanvasSize, } from "./transform.js";
import type { ViewModel } from "./types.js";

const TRAIL_COLORS = ["#e5484d", "#3b82f6", "#eab308", "#d946ef", "#06b6d4",
  "#f97316", "#ffffff", "#111111", "#22c55e", "#a855f7"];
const MARKER_RADIUS = 7;

export function rgb(color: [number, number, number]): string {
  return `rgb(${color[0]},${color[1]},${color[2]})`;
}

export function renderScene(ctx: CanvasRenderingContext2D, vm: ViewModel): void {
  const size: CanvasSize = { width: ctx.canvas.width, height: ctx.canvas.height };
  ctx.clearRect(0, 0, size.width, size.height);

  for (const cell of vm.cells) {
    const color = vm.palette[cell.biome];
    ctx.fillStyle = color ? rgb(color) : "#888";
    ctx.beginPath();
    cell.vertices.forEach(([x, y], i) => {
      const [px, py] = mapToScreen(x, y, size);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.closePath();
    ctx.fill();
  }

  ctx.strokeStyle = "rgba(40,90,170,0.9)";
  ctx.lineWidth = 2;
  for (const river of vm.rivers) {
    if (river.length < 2) continue;
    ctx.beginPath();
    river.forEach(([x, y], i) => {
      const [px, py] = mapToScreen(x, y, size);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }

  vm.facilities.forEach((f, idx) => {
    const trail = vm.trails[f.id];
    if (trail && trail.length > 1) {
      ctx.strokeStyle = TRAIL_COLORS[idx % TRAIL_COLORS.length];
      ctx.lineWidth = 2;
      ctx.beginPath();
      trail.forEach(([x, y], i) => {
        const [px, py] = mapToScreen(x, y, size);
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      });
      ctx.stroke();
    }
  });

  vm.facilities.forEach((f, idx) => {
    const [px, py] = mapToScreen(f.x, f.y, size);
    ctx.fillStyle = TRAIL_COLORS[idx % TRAIL_COLORS.length];
    ctx.strokeStyle = "#000";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.arc(px, py, MARKER_RADIUS, 0, Math.PI * 2);
    ctx.fill();
    ctx.stroke();
    ctx.fillStyle = "#000";
    ctx.font = "12px sans-serif";
    ctx.fillText(f.name, px + MARKER_RADIUS + 2, py + 4);
  });

  if (vm.stale) {
    ctx.fillStyle = "rgba(255,255,255,0.25)";
    ctx.fillRect(0, 0, size.width, size.height);
  }
}

export function renderConstraintPanel(panel: HTMLElement, vm: ViewModel): void {
  panel.replaceChildren();
  for (const row of vm.constraints) {
    const div = document.createElement("div");
    div.className = `constraint ${row.satisfied ? "satisfied" : "unsatisfied"}`;
    const label = document.createElement("span");
    label.textContent = row.utterance;
    const score = document.createElement("span");
    score.className = "score";
    score.textContent = row.satisfied ? "OK" : row.score.toFixed(2);
    div.append(label, score);
    panel.append(div);
  }
}

export function renderBanner(el: HTMLElement, vm: ViewModel): void {
  el.textContent = vm.banner ?? "";
  el.className = vm.banner
    ? vm.allSatisfied ? "banner success" : "banner failure"
    : "banner hidden";
}

export function renderStatus(el: HTMLElement, vm: ViewModel): void {
  el.textContent = vm.status + (vm.stale ? " (stale)" : "");
  el.className = `status ${vm.status}`;
}

export function hitTestFacility(
  vm: ViewModel,
  px: number,
  py: number,
  size: CanvasSize,
): string | null {
  for (const f of vm.facilities) {
    const [fx, fy] = mapToScreen(f.x, f.y, size);
    const d = Math.hypot(px - fx, py - fy);
    if (d <= MARKER_RADIUS + 4) return f.id;
  }
  return null;
}
