/** Deterministic synthetic trajectories for benchmarking the renderer. */

import { TrajectoryData, TrajectoryPoint } from "./types.js";

/** Helical sweep through the [0,10]^3 volume with modulated energy. */
export function makeSyntheticTrajectory(pointCount: number, hopS = 0.02): TrajectoryData {
  const points: TrajectoryPoint[] = [];
  for (let i = 0; i < pointCount; i++) {
    const u = pointCount > 1 ? i / (pointCount - 1) : 0.5;
    const angle = u * Math.PI * 14;
    points.push({
      t: i * hopS,
      x: 5 + 4.5 * Math.cos(angle) * (0.3 + 0.7 * u),
      y: 5 + 4.5 * Math.sin(angle) * (0.3 + 0.7 * u),
      z: 10 * u,
      pitch_hz: 65 * Math.pow(2, 5 * u),
      energy: 0.5 + 0.5 * Math.sin(u * Math.PI * 40),
    });
  }
  return {
    sample_rate: 22050,
    hop: Math.round(hopS * 22050),
    audio: "",
    points,
  };
}
