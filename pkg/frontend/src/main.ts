/** App bootstrap: session selection, playback wiring, render loop, banner. */

import { AudioStream, PlaybackState } from "./audio.js";
import { FrameTimer } from "./fps.js";
import { downloadList } from "./logic.js";
import { loadSession, SessionLoadError, ViewerSession } from "./loader.js";
import { makeSyntheticTrajectory } from "./synthetic.js";
import { TrajectoryData } from "./types.js";
import { DualViewer, StreamLike } from "./viewer.js";

const SESSIONS_BASE = "/sessions/";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showBanner(message: string): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message;
  banner.style.display = "block";
}

/** Clock for synthetic sessions: advances in real time while "playing". */
class SyntheticClock implements StreamLike {
  readonly state = new PlaybackState();
  private lastMs: number | null = null;

  constructor(durationS: number) {
    this.state.duration = durationS;
  }

  async toggle(): Promise<boolean> {
    this.state.playing = !this.state.playing;
    this.lastMs = null;
    return this.state.playing;
  }

  sync(): void {
    const now = performance.now();
    if (this.state.playing && this.lastMs !== null) {
      const next = this.state.currentTime + (now - this.lastMs) / 1000;
      this.state.syncFromClock(next % Math.max(this.state.duration, 0.001));
    }
    this.lastMs = now;
  }
}

interface StreamControl extends StreamLike {
  toggle(): Promise<boolean>;
}

function wirePlayButton(button: HTMLButtonElement, stream: StreamControl): void {
  button.addEventListener("click", async () => {
    try {
      const playing = await stream.toggle();
      button.classList.toggle("playing", playing);
      button.textContent = playing ? "pause" : "play";
    } catch (err) {
      showBanner(`playback failed: ${String(err)}`);
    }
  });
}

function fillDownloads(session: ViewerSession): void {
  const panel = el<HTMLUListElement>("downloads");
  panel.innerHTML = "";
  const base = `${SESSIONS_BASE}${session.folder}/`;
  for (const entry of downloadList(session.metadata.files, base)) {
    const li = document.createElement("li");
    const a = document.createElement("a");
    a.href = entry.href;
    a.textContent = entry.label;
    a.setAttribute("download", entry.label);
    li.appendChild(a);
    panel.appendChild(li);
  }
}

function metricsLine(session: ViewerSession): string {
  const m = session.metadata.metrics;
  return (
    `${session.metadata.audio_name} | snr ${m.snr_db.toFixed(2)} dB | ` +
    `wave ${m.waveform_corr.toFixed(3)} | spec ${m.spectral_corr.toFixed(3)} | ` +
    `mel ${m.mel_corr.toFixed(3)}`
  );
}

async function pickSessionFolder(): Promise<string | null> {
  const resp = await fetch("/api/sessions");
  if (!resp.ok) return null;
  const body = (await resp.json()) as { sessions: { folder: string }[] };
  return body.sessions.length ? body.sessions[0].folder : null;
}

function startLoop(
  viewer: DualViewer,
  left: StreamControl,
  right: StreamControl,
): void {
  const timer = new FrameTimer();
  const fpsLabel = el<HTMLSpanElement>("fps");
  const cursorLabel = el<HTMLSpanElement>("cursor");
  let lastHud = 0;
  const tick = (nowMs: number) => {
    timer.push(nowMs);
    viewer.renderFrame(left, right);
    if (nowMs - lastHud > 250) {
      lastHud = nowMs;
      fpsLabel.textContent = timer.fps().toFixed(0);
      cursorLabel.textContent =
        `${left.state.currentTime.toFixed(2)}s / ${right.state.currentTime.toFixed(2)}s`;
    }
    requestAnimationFrame(tick);
  };
  requestAnimationFrame(tick);
  window.addEventListener("resize", () => viewer.resize());
}

function buildViewer(leftData: TrajectoryData, rightData: TrajectoryData): DualViewer {
  return new DualViewer(
    el<HTMLCanvasElement>("stage"),
    el<HTMLDivElement>("surface-left"),
    el<HTMLDivElement>("surface-right"),
    leftData,
    rightData,
  );
}

async function bootstrap(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const synthetic = params.get("synthetic");

  if (synthetic) {
    const n = Math.max(2, parseInt(synthetic, 10) || 5000);
    const data = makeSyntheticTrajectory(n);
    const duration = data.points[data.points.length - 1].t;
    const left = new SyntheticClock(duration);
    const right = new SyntheticClock(duration);
    const viewer = buildViewer(data, makeSyntheticTrajectory(n, 0.017));
    wirePlayButton(el("play-left"), left);
    wirePlayButton(el("play-right"), right);
    el<HTMLSpanElement>("session-label").textContent = `synthetic benchmark (${n} points)`;
    startLoop(viewer, left, right);
    return;
  }

  let folder = params.get("session");
  if (!folder) {
    folder = await pickSessionFolder();
  }
  if (!folder) {
    showBanner(
      "no sessions found: run `soundplot analyze <input.wav>` first, " +
        "or open ?synthetic=5000 for a benchmark scene",
    );
    return;
  }

  const session = await loadSession(SESSIONS_BASE, folder);
  const left = new AudioStream(session.originalAudioUrl);
  const right = new AudioStream(session.synthesizedAudioUrl);
  const viewer = buildViewer(session.original, session.synthesized);
  wirePlayButton(el("play-left"), left);
  wirePlayButton(el("play-right"), right);
  fillDownloads(session);
  el<HTMLSpanElement>("session-label").textContent = metricsLine(session);
  startLoop(viewer, left, right);
}

bootstrap().catch((err) => {
  if (err instanceof SessionLoadError) {
    showBanner(err.message);
  } else {
    showBanner(`viewer failed to start: ${String(err)}`);
  }
});
