/** Rolling frame-rate estimate from frame timestamps. */

export class FrameTimer {
  private stamps: number[] = [];

  constructor(private windowSize = 60) {}

  push(nowMs: number): void {
    this.stamps.push(nowMs);
    if (this.stamps.length > this.windowSize + 1) {
      this.stamps.shift();
    }
  }

  /** Frames per second over the retained window; 0 until two samples exist. */
  fps(): number {
    const n = this.stamps.length;
    if (n < 2) return 0;
    const span = this.stamps[n - 1] - this.stamps[0];
    if (span <= 0) return 0;
    return ((n - 1) * 1000) / span;
  }
}
