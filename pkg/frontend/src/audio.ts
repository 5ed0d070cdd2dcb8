/** Per-stream playback: the cursor is always re-read from the audio clock. */

import { playbackDrift } from "./logic.js";

export class PlaybackState {
  playing = false;
  currentTime = 0;
  duration = 0;

  /** Pull the cursor from the audio element clock (called every frame). */
  syncFromClock(clockSeconds: number): void {
    const upper = this.duration > 0 ? this.duration : Number.POSITIVE_INFINITY;
    this.currentTime = Math.min(Math.max(clockSeconds, 0), upper);
  }

  drift(clockSeconds: number): number {
    return playbackDrift(this.currentTime, clockSeconds);
  }
}

/** Wraps one HTMLAudioElement; no timers, the render loop polls sync(). */
export class AudioStream {
  readonly state = new PlaybackState();
  readonly element: HTMLAudioElement;

  constructor(url: string) {
    this.element = new Audio(url);
    this.element.preload = "auto";
    this.element.addEventListener("loadedmetadata", () => {
      this.state.duration = this.element.duration;
    });
    this.element.addEventListener("ended", () => {
      this.state.playing = false;
    });
  }

  async toggle(): Promise<boolean> {
    if (this.state.playing) {
      this.element.pause();
      this.state.playing = false;
    } else {
      await this.element.play();
      this.state.playing = true;
    }
    return this.state.playing;
  }

  sync(): void {
    this.state.syncFromClock(this.element.currentTime);
  }
}
