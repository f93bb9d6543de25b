// Coalesces drag updates so at most one set_pos goes out per interval, and
// holds the latest position while the connection is down, flushing it on
// reconnect.

export type SendFn = (fid: string, x: number, y: number) => void;

export interface DragQueueOptions {
  intervalMs?: number;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
}

export class DragQueue {
  private intervalMs: number;
  private now: () => number;
  private setTimer: (fn: () => void, ms: number) => unknown;
  private clearTimer: (handle: unknown) => void;
  private send: SendFn;
  private lastSent = -Infinity;
  private timer: unknown = null;
  private pending: [string, number, number] | null = null;
  private offline: [string, number, number] | null = null;
  connected = true;

  constructor(send: SendFn, opts: DragQueueOptions = {}) {
    this.send = send;
    this.intervalMs = opts.intervalMs ?? 100;
    this.now = opts.now ?? (() => Date.now());
    this.setTimer = opts.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = opts.clearTimer ?? ((h) => clearTimeout(h as any));
  }

  push(fid: string, x: number, y: number): void {
    if (!this.connected) {
      this.offline = [fid, x, y];
      return;
    }
    const now = this.now();
    if (now - this.lastSent >= this.intervalMs) {
      this.lastSent = now;
      this.send(fid, x, y);
      return;
    }
    this.pending = [fid, x, y];
    if (this.timer === null) {
      this.timer = this.setTimer(() => {
        this.timer = null;
        if (this.pending) {
          const [f, px, py] = this.pending;
          this.pending = null;
          this.lastSent = this.now();
          this.send(f, px, py);
        }
      }, this.intervalMs - (now - this.lastSent));
    }
  }

  /** Force out the latest position immediately (drag end). */
  flush(): void {
    if (this.timer !== null) {
      this.clearTimer(this.timer);
      this.timer = null;
    }
    if (this.pending && this.connected) {
      const [f, px, py] = this.pending;
      this.pending = null;
      this.lastSent = this.now();
      this.send(f, px, py);
    }
  }

  setConnected(connected: boolean): void {
    this.connected = connected;
    if (connected && this.offline) {
      const [f, px, py] = this.offline;
      this.offline = null;
      this.lastSent = this.now();
      this.send(f, px, py);
    }
  }

  get hasOfflinePosition(): boolean {
    return this.offline !== null;
  }
}
