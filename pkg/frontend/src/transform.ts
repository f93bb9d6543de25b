// Screen <-> map coordinate transforms.
//
// Map space is the unit square with y growing northward; canvas pixels grow
// southward, so the y axis flips. Round-tripping must stay within a pixel.

export interface CanvasSize {
  width: number;
  height: number;
}

export function mapToScreen(
  x: number,
  y: number,
  size: CanvasSize,
): [number, number] {
  return [x * size.width, (1 - y) * size.height];
}

export function screenToMap(
  px: number,
  py: number,
  size: CanvasSize,
): [number, number] {
  const x = px / size.width;
  const y = 1 - py / size.height;
  return [clamp01(x), clamp01(y)];
}

export function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}
