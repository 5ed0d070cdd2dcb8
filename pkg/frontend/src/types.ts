/** Session artifact schemas and validation. */

export interface TrajectoryPoint {
  t: number;
  x: number;
  y: number;
  z: number;
  pitch_hz: number | null;
  energy: number;
}

export interface TrajectoryData {
  sample_rate: number;
  hop: number;
  audio: string;
  points: TrajectoryPoint[];
}

export interface SessionMetrics {
  snr_db: number;
  waveform_corr: number;
  spectral_corr: number;
  mel_corr: number;
}

export interface SessionMetadata {
  session_id: string;
  audio_name: string;
  created_at: string;
  parameters: Record<string, unknown>;
  metrics: SessionMetrics;
  files: Record<string, string>;
}

export class SchemaError extends Error {
  constructor(source: string, detail: string) {
    super(`${source}: ${detail}`);
    this.name = "SchemaError";
  }
}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

export function parseTrajectory(raw: unknown, source: string): TrajectoryData {
  if (typeof raw !== "object" || raw === null) {
    throw new SchemaError(source, "not a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  if (!isFiniteNumber(obj.sample_rate) || obj.sample_rate <= 0) {
    throw new SchemaError(source, "missing or invalid sample_rate");
  }
  if (!isFiniteNumber(obj.hop) || obj.hop <= 0) {
    throw new SchemaError(source, "missing or invalid hop");
  }
  if (typeof obj.audio !== "string" || obj.audio.length === 0) {
    throw new SchemaError(source, "missing audio path");
  }
  if (!Array.isArray(obj.points) || obj.points.length === 0) {
    throw new SchemaError(source, "points must be a non-empty array");
  }
  const points: TrajectoryPoint[] = obj.points.map((p, i) => {
    const q = p as Record<string, unknown>;
    for (const key of ["t", "x", "y", "z", "energy"]) {
      if (!isFiniteNumber(q[key])) {
        throw new SchemaError(source, `point ${i}: missing numeric ${key}`);
      }
    }
    const { t, x, y, z, energy } = q as { [k: string]: number };
    if (x < 0 || x > 10 || y < 0 || y > 10 || z < 0 || z > 10) {
      throw new SchemaError(source, `point ${i}: coordinates outside [0, 10]`);
    }
    const pitch = q.pitch_hz;
    if (pitch !== null && !isFiniteNumber(pitch)) {
      throw new SchemaError(source, `point ${i}: pitch_hz must be a number or null`);
    }
    return { t, x, y, z, energy, pitch_hz: pitch as number | null };
  });
  return {
    sample_rate: obj.sample_rate,
    hop: obj.hop,
    audio: obj.audio,
    points,
  };
}

export function parseMetadata(raw: unknown, source: string): SessionMetadata {
  if (typeof raw !== "object" || raw === null) {
    throw new SchemaError(source, "not a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  for (const key of ["session_id", "audio_name", "created_at"]) {
    if (typeof obj[key] !== "string") {
      throw new SchemaError(source, `missing string field ${key}`);
    }
  }
  const metrics = obj.metrics as Record<string, unknown> | undefined;
  if (!metrics || typeof metrics !== "object") {
    throw new SchemaError(source, "missing metrics object");
  }
  for (const key of ["snr_db", "waveform_corr", "spectral_corr", "mel_corr"]) {
    if (!isFiniteNumber(metrics[key])) {
      throw new SchemaError(source, `metrics: missing numeric ${key}`);
    }
  }
  const files = obj.files;
  if (!files || typeof files !== "object" || Array.isArray(files)) {
    throw new SchemaError(source, "missing files map");
  }
  return {
    session_id: obj.session_id as string,
    audio_name: obj.audio_name as string,
    created_at: obj.created_at as string,
    parameters: (obj.parameters as Record<string, unknown>) ?? {},
    metrics: metrics as unknown as SessionMetrics,
    files: files as Record<string, string>,
  };
}
