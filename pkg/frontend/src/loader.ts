/** Session loading: fetch + validate the three JSON artifacts. */

import {
  SchemaError,
  SessionMetadata,
  TrajectoryData,
  parseMetadata,
  parseTrajectory,
} from "./types.js";

export interface ViewerSession {
  folder: string;
  metadata: SessionMetadata;
  original: TrajectoryData;
  synthesized: TrajectoryData;
  originalAudioUrl: string;
  synthesizedAudioUrl: string;
}

export class SessionLoadError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SessionLoadError";
  }
}

type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  text(): Promise<string>;
}>;

async function fetchJson(fetchFn: FetchLike, url: string, name: string): Promise<unknown> {
  let resp;
  try {
    resp = await fetchFn(url);
  } catch (err) {
    throw new SessionLoadError(`failed to fetch ${name}: ${String(err)}`);
  }
  if (!resp.ok) {
    throw new SessionLoadError(`missing file: ${name} (HTTP ${resp.status} at ${url})`);
  }
  const body = await resp.text();
  try {
    return JSON.parse(body);
  } catch (err) {
    // SyntaxError messages carry the parse position
    throw new SessionLoadError(`malformed JSON in ${name}: ${(err as Error).message}`);
  }
}

/**
 * Load one session folder (base URL must end with '/'). Any failure raises
 * SessionLoadError with a message naming the offending file.
 */
export async function loadSession(
  baseUrl: string,
  folder: string,
  fetchFn: FetchLike = fetch,
): Promise<ViewerSession> {
  const root = `${baseUrl}${folder}/`;
  const metaRaw = await fetchJson(fetchFn, `${root}metadata.json`, "metadata.json");
  const origRaw = await fetchJson(
    fetchFn,
    `${root}trajectory_original.json`,
    "trajectory_original.json",
  );
  const synthRaw = await fetchJson(
    fetchFn,
    `${root}trajectory_synthesized.json`,
    "trajectory_synthesized.json",
  );
  try {
    const metadata = parseMetadata(metaRaw, "metadata.json");
    const original = parseTrajectory(origRaw, "trajectory_original.json");
    const synthesized = parseTrajectory(synthRaw, "trajectory_synthesized.json");
    return {
      folder,
      metadata,
      original,
      synthesized,
      originalAudioUrl: root + original.audio,
      synthesizedAudioUrl: root + synthesized.audio,
    };
  } catch (err) {
    if (err instanceof SchemaError) {
      throw new SessionLoadError(err.message);
    }
    throw err;
  }
}
