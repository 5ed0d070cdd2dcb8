/** Pure per-frame logic for the viewer, kept free of DOM and WebGL. */

export const GLOW_WINDOW_S = 0.3;

/** Tolerance for accumulated float error in frame timestamps. */
const TIME_EPS = 1e-9;

function lowerBound(times: ArrayLike<number>, value: number): number {
  let lo = 0;
  let hi = times.length;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (times[mid] < value) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

/**
 * Indices of all points whose frame time lies within the glow window of the
 * playback time. frameTimes must be sorted ascending.
 */
export function glowIndices(
  t: number,
  frameTimes: ArrayLike<number>,
  windowS: number = GLOW_WINDOW_S,
): number[] {
  const first = lowerBound(frameTimes, t - windowS - TIME_EPS);
  const out: number[] = [];
  for (let i = first; i < frameTimes.length; i++) {
    const dt = frameTimes[i] - t;
    if (dt > windowS + TIME_EPS) break;
    if (Math.abs(dt) <= windowS + TIME_EPS) out.push(i);
  }
  return out;
}

/**
 * Pitch-axis color: pure blue at z=0 through to pure red at z=10,
 * rounded half-up per channel.
 */
export function pitchColor(zNorm: number): [number, number, number] {
  const t = Math.min(Math.max(zNorm / 10, 0), 1);
  return [Math.round(255 * t), 0, Math.round(255 * (1 - t))];
}

/** Sphere radius scales affinely with frame energy so quiet frames stay visible. */
export function sphereRadius(energy: number, base: number = 1): number {
  return base * (0.3 + 0.7 * energy);
}

export interface DownloadEntry {
  label: string;
  href: string;
}

/** Download panel entries: exactly the files named in session metadata. */
export function downloadList(
  files: Record<string, string>,
  baseUrl: string,
): DownloadEntry[] {
  return Object.keys(files)
    .sort()
    .map((key) => ({ label: files[key], href: baseUrl + files[key] }));
}

/** Seconds between the rendered cursor and the audio element clock. */
export function playbackDrift(cursorTimeS: number, audioClockS: number): number {
  return Math.abs(cursorTimeS - audioClockS);
}
