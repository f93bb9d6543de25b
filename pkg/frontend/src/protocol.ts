// WebSocket client for plotmap-proto/1: request/response correlation by id,
// streamed events fanned out to a listener.

import type { PositionEvent, Response } from "./types.js";

type EventListener = (ev: PositionEvent) => void;
type StatusListener = (open: boolean) => void;

interface Pending {
  resolve: (r: Response) => void;
  reject: (e: Error) => void;
}

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: string }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

export class PlotmapClient {
  private nextId = 1;
  private pending = new Map<number, Pending>();
  private eventListeners: EventListener[] = [];
  private statusListeners: StatusListener[] = [];
  private socket: SocketLike;
  open = false;

  constructor(socket: SocketLike) {
    this.socket = socket;
    socket.onopen = () => {
      this.open = true;
      this.statusListeners.forEach((fn) => fn(true));
    };
    socket.onclose = () => {
      this.open = false;
      this.statusListeners.forEach((fn) => fn(false));
      for (const [, p] of this.pending) {
        p.reject(new Error("connection closed"));
      }
      this.pending.clear();
    };
    socket.onmessage = (ev) => this.handleMessage(ev.data);
  }

  private handleMessage(raw: string): void {
    let msg: any;
    try {
      msg = JSON.parse(raw);
    } catch {
      return;
    }
    if (msg && msg.event === "position") {
      this.eventListeners.forEach((fn) => fn(msg as PositionEvent));
      return;
    }
    const pending = this.pending.get(msg.id);
    if (pending) {
      this.pending.delete(msg.id);
      pending.resolve(msg as Response);
    }
  }

  onEvent(fn: EventListener): () => void {
    this.eventListeners.push(fn);
    return () => {
      this.eventListeners = this.eventListeners.filter((f) => f !== fn);
    };
  }

  onStatus(fn: StatusListener): void {
    this.statusListeners.push(fn);
  }

  request<T = any>(cmd: string, payload: object = {}): Promise<Response<T>> {
    const id = this.nextId++;
    return new Promise((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
      try {
        this.socket.send(JSON.stringify({ id, cmd, payload }));
      } catch (err) {
        this.pending.delete(id);
        reject(err as Error);
      }
    });
  }

  close(): void {
    this.socket.close();
  }
}

export function connect(url: string): PlotmapClient {
  return new PlotmapClient(new WebSocket(url) as unknown as SocketLike);
}
