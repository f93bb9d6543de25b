// Wire types for plotmap-proto/1 and the designer's view state.

export type ErrorCode =
  | "invalid-config"
  | "invalid-layout"
  | "missing-reference"
  | "episode-finished"
  | "capacity"
  | "generation-failed"
  | "invalid-input";

export interface ProtocolError {
  code: ErrorCode;
  message: string;
}

export interface Response<T = any> {
  id: number;
  ok: boolean;
  payload?: T;
  error?: ProtocolError;
}

export interface PositionEvent {
  event: "position";
  facility: string;
  x: number;
  y: number;
  step: number;
}

export interface ConstraintWire {
  type: string;
  direction: string | null;
  biome: string | null;
  facilities: string[];
  utterance: string;
}

export interface CellWire {
  id: number;
  vertices: [number, number][];
  biome: string;
  elevation: number;
}

export interface LoadTaskPayload {
  task_id: string;
  map_id: string;
  facilities: { id: string; name: string }[];
  constraints: ConstraintWire[];
  palette: Record<string, [number, number, number]>;
  cells: CellWire[];
  rivers: [number, number][][];
}

export interface StatePayload {
  positions: Record<string, [number, number]>;
  scores: number[];
  satisfied: boolean[];
  all_satisfied: boolean;
  step_count: number;
  turn_index: number;
  done: boolean;
  constraints: ConstraintWire[];
  success?: boolean;
}

export interface ConstraintRow {
  utterance: string;
  score: number;
  satisfied: boolean;
}

export interface FacilityMarker {
  id: string;
  name: string;
  x: number; // map coordinates, y north
  y: number;
}

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface ViewModel {
  status: ConnectionStatus;
  stale: boolean; // a request is in flight or the connection dropped
  taskId: string | null;
  palette: Record<string, [number, number, number]>;
  cells: CellWire[];
  rivers: [number, number][][];
  facilities: FacilityMarker[];
  constraints: ConstraintRow[];
  allSatisfied: boolean;
  trails: Record<string, [number, number][]>;
  solving: boolean;
  banner: string | null;
}
