import { describe, expect, it } from "vitest";

import { loadSession, SessionLoadError } from "../src/loader.js";
import { parseMetadata, parseTrajectory, SchemaError } from "../src/types.js";

const goodTrajectory = {
  sample_rate: 22050,
  hop: 512,
  audio: "original.wav",
  points: [
    { t: 0.0, x: 1.0, y: 2.0, z: 3.0, pitch_hz: 440.0, energy: 0.5 },
    { t: 0.0232, x: 4.0, y: 5.0, z: 6.0, pitch_hz: null, energy: 0.7 },
  ],
};

const goodMetadata = {
  session_id: "a1b2c3d4",
  audio_name: "robin",
  created_at: "2026-08-10T00:00:00+00:00",
  parameters: { gl_iterations: 32 },
  metrics: { snr_db: -0.8, waveform_corr: -0.001, spectral_corr: 0.57, mel_corr: 0.93 },
  files: {
    original_wav: "original.wav",
    synthesized_wav: "synthesized.wav",
    metadata_json: "metadata.json",
  },
};

function fakeFetch(routes: Record<string, string | number>) {
  return async (url: string) => {
    for (const [suffix, body] of Object.entries(routes)) {
      if (url.endsWith(suffix)) {
        if (typeof body === "number") {
          return { ok: false, status: body, text: async () => "" };
        }
        return { ok: true, status: 200, text: async () => body };
      }
    }
    return { ok: false, status: 404, text: async () => "" };
  };
}

const completeRoutes = {
  "metadata.json": JSON.stringify(goodMetadata),
  "trajectory_original.json": JSON.stringify(goodTrajectory),
  "trajectory_synthesized.json": JSON.stringify({
    ...goodTrajectory,
    audio: "synthesized.wav",
  }),
};

describe("loadSession", () => {
  it("loads a complete session with both streams", async () => {
    const session = await loadSession("/sessions/", "robin_a1b2c3d4", fakeFetch(completeRoutes));
    expect(session.metadata.session_id).toBe("a1b2c3d4");
    expect(session.original.points).toHaveLength(2);
    expect(session.synthesized.points).toHaveLength(2);
    expect(session.originalAudioUrl).toBe("/sessions/robin_a1b2c3d4/original.wav");
    expect(session.synthesizedAudioUrl).toBe("/sessions/robin_a1b2c3d4/synthesized.wav");
  });

  it("names a missing trajectory file in the error", async () => {
    const routes = { ...completeRoutes, "trajectory_synthesized.json": 404 as const };
    await expect(
      loadSession("/sessions/", "robin_a1b2c3d4", fakeFetch(routes)),
    ).rejects.toThrowError(/missing file: trajectory_synthesized\.json/);
  });

  it("reports the parse position for malformed JSON", async () => {
    const routes = { ...completeRoutes, "trajectory_original.json": '{"sample_rate": 22050,,' };
    const err = await loadSession("/sessions/", "x", fakeFetch(routes)).catch((e) => e);
    expect(err).toBeInstanceOf(SessionLoadError);
    expect(err.message).toContain("malformed JSON in trajectory_original.json");
    expect(err.message).toMatch(/position|column/i);
  });

  it("rejects coordinates outside the display volume", async () => {
    const bad = {
      ...goodTrajectory,
      points: [{ t: 0, x: 11.0, y: 0, z: 0, pitch_hz: null, energy: 0 }],
    };
    const routes = { ...completeRoutes, "trajectory_original.json": JSON.stringify(bad) };
    await expect(
      loadSession("/sessions/", "x", fakeFetch(routes)),
    ).rejects.toThrowError(/coordinates outside \[0, 10\]/);
  });

  it("rejects an empty point list", async () => {
    const bad = { ...goodTrajectory, points: [] };
    const routes = { ...completeRoutes, "trajectory_synthesized.json": JSON.stringify(bad) };
    await expect(
      loadSession("/sessions/", "x", fakeFetch(routes)),
    ).rejects.toThrowError(/non-empty/);
  });
});

describe("schema validators", () => {
  it("accepts the canonical shapes", () => {
    expect(() => parseTrajectory(goodTrajectory, "t.json")).not.toThrow();
    expect(() => parseMetadata(goodMetadata, "m.json")).not.toThrow();
  });

  it("flags missing metric fields", () => {
    const bad = { ...goodMetadata, metrics: { snr_db: 1 } };
    expect(() => parseMetadata(bad, "m.json")).toThrowError(SchemaError);
  });

  it("flags a non-numeric point field with its index", () => {
    const bad = {
      ...goodTrajectory,
      points: [{ t: 0, x: "nope", y: 0, z: 0, pitch_hz: null, energy: 0 }],
    };
    expect(() => parseTrajectory(bad, "t.json")).toThrowError(/point 0/);
  });
});
