import { describe, expect, it } from "vitest";

import { PlaybackState } from "../src/audio.js";
import { FrameTimer } from "../src/fps.js";
import { glowIndices } from "../src/logic.js";
import { makeSyntheticTrajectory } from "../src/synthetic.js";

describe("PlaybackState", () => {
  it("tracks the audio clock exactly, far inside the 50 ms budget", () => {
    const state = new PlaybackState();
    state.duration = 10;
    for (const clock of [0, 0.016, 1.25, 9.999]) {
      state.syncFromClock(clock);
      expect(state.drift(clock)).toBeLessThanOrEqual(0.05);
      expect(state.drift(clock)).toBe(0);
    }
  });

  it("clamps the cursor into [0, duration]", () => {
    const state = new PlaybackState();
    state.duration = 5;
    state.syncFromClock(-1);
    expect(state.currentTime).toBe(0);
    state.syncFromClock(7.5);
    expect(state.currentTime).toBe(5);
  });

  it("drives the glow set from the clock each frame", () => {
    const state = new PlaybackState();
    state.duration = 2;
    const times = Array.from({ length: 21 }, (_, i) => i * 0.1);
    state.syncFromClock(0.5);
    expect(glowIndices(state.currentTime, times)).toEqual([2, 3, 4, 5, 6, 7, 8]);
    state.syncFromClock(0.0);
    expect(glowIndices(state.currentTime, times)).toEqual([0, 1, 2, 3]);
  });
});

describe("FrameTimer", () => {
  it("reports 60 fps for 16.666 ms frames", () => {
    const timer = new FrameTimer();
    for (let i = 0; i < 61; i++) timer.push(i * (1000 / 60));
    expect(timer.fps()).toBeCloseTo(60, 1);
  });

  it("needs at least two samples", () => {
    const timer = new FrameTimer();
    expect(timer.fps()).toBe(0);
    timer.push(0);
    expect(timer.fps()).toBe(0);
  });

  it("uses a rolling window", () => {
    const timer = new FrameTimer(10);
    for (let i = 0; i < 50; i++) timer.push(i * 100); // 10 fps
    for (let i = 0; i < 11; i++) timer.push(5000 + i * (1000 / 30));
    expect(timer.fps()).toBeCloseTo(30, 0);
  });
});

describe("makeSyntheticTrajectory", () => {
  it("builds the requested number of in-range points", () => {
    const data = makeSyntheticTrajectory(5000);
    expect(data.points).toHaveLength(5000);
    for (const p of data.points) {
      expect(p.x).toBeGreaterThanOrEqual(0);
      expect(p.x).toBeLessThanOrEqual(10);
      expect(p.y).toBeGreaterThanOrEqual(0);
      expect(p.y).toBeLessThanOrEqual(10);
      expect(p.z).toBeGreaterThanOrEqual(0);
      expect(p.z).toBeLessThanOrEqual(10);
      expect(p.energy).toBeGreaterThanOrEqual(0);
      expect(p.energy).toBeLessThanOrEqual(1);
    }
    const times = data.points.map((p) => p.t);
    for (let i = 1; i < times.length; i++) {
      expect(times[i]).toBeGreaterThan(times[i - 1]);
    }
  });

  it("is deterministic", () => {
    expect(makeSyntheticTrajectory(100)).toEqual(makeSyntheticTrajectory(100));
  });
});
