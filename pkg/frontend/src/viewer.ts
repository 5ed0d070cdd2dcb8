/** Dual-viewport WebGL rendering of trajectory point clouds. */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";

import { glowIndices, pitchColor, sphereRadius } from "./logic.js";
import { TrajectoryData } from "./types.js";

const BASE_RADIUS = 0.14;
const GLOW_SCALE = 1.7;
const GLOW_MIX = 0.65; // how far glowing points shift toward white
const TINT_MIX = 0.3;

export type StreamTint = "cyan" | "magenta";

const TINTS: Record<StreamTint, THREE.Color> = {
  cyan: new THREE.Color(0.2, 1.0, 1.0),
  magenta: new THREE.Color(1.0, 0.25, 1.0),
};

/** Data coordinates are (x, y, z) with z = pitch; pitch maps to scene "up". */
function toScene(p: { x: number; y: number; z: number }): THREE.Vector3 {
  return new THREE.Vector3(p.x, p.z, p.y);
}

export class TrajectoryViewport {
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  readonly controls: OrbitControls;
  readonly frameTimes: number[];
  private spheres: THREE.InstancedMesh;
  private baseColors: THREE.Color[];
  private scales: number[];
  private glowing = new Set<number>();

  constructor(
    trajectory: TrajectoryData,
    tint: StreamTint,
    controlSurface: HTMLElement,
    aspect: number,
  ) {
    this.frameTimes = trajectory.points.map((p) => p.t);
    this.scene.background = new THREE.Color(0x0b0e14);

    const bounds = new THREE.Box3(
      new THREE.Vector3(0, 0, 0),
      new THREE.Vector3(10, 10, 10),
    );
    this.scene.add(new THREE.Box3Helper(bounds, new THREE.Color(0x2a3350)));
    const grid = new THREE.GridHelper(10, 10, 0x222a40, 0x1a2135);
    grid.position.set(5, 0, 5);
    this.scene.add(grid);

    this.scene.add(new THREE.AmbientLight(0xffffff, 0.75));
    const key = new THREE.DirectionalLight(0xffffff, 1.4);
    key.position.set(12, 20, 8);
    this.scene.add(key);

    const n = trajectory.points.length;
    const tintColor = TINTS[tint];
    this.baseColors = trajectory.points.map((p) => {
      const [r, , b] = pitchColor(p.z);
      return new THREE.Color(r / 255, 0, b / 255).lerp(tintColor, TINT_MIX);
    });
    this.scales = trajectory.points.map((p) => sphereRadius(p.energy, BASE_RADIUS));

    const geometry = new THREE.SphereGeometry(1, 10, 8);
    const material = new THREE.MeshStandardMaterial({ roughness: 0.55 });
    this.spheres = new THREE.InstancedMesh(geometry, material, n);
    const matrix = new THREE.Matrix4();
    for (let i = 0; i < n; i++) {
      const pos = toScene(trajectory.points[i]);
      matrix.makeScale(this.scales[i], this.scales[i], this.scales[i]);
      matrix.setPosition(pos);
      this.spheres.setMatrixAt(i, matrix);
      this.spheres.setColorAt(i, this.baseColors[i]);
    }
    this.spheres.instanceMatrix.needsUpdate = true;
    this.scene.add(this.spheres);

    const lineGeometry = new THREE.BufferGeometry().setFromPoints(
      trajectory.points.map(toScene),
    );
    const line = new THREE.Line(
      lineGeometry,
      new THREE.LineBasicMaterial({ color: tintColor, transparent: true, opacity: 0.5 }),
    );
    this.scene.add(line);

    this.camera = new THREE.PerspectiveCamera(50, aspect, 0.1, 200);
    this.camera.position.set(17, 15, 17);
    this.controls = new OrbitControls(this.camera, controlSurface);
    this.controls.target.set(5, 5, 5);
    this.controls.enableDamping = true;
    this.controls.dampingFactor = 0.08;
  }

  private applyInstance(i: number, glow: boolean): void {
    const scale = glow ? this.scales[i] * GLOW_SCALE : this.scales[i];
    const matrix = new THREE.Matrix4();
    this.spheres.getMatrixAt(i, matrix);
    const pos = new THREE.Vector3().setFromMatrixPosition(matrix);
    matrix.makeScale(scale, scale, scale);
    matrix.setPosition(pos);
    this.spheres.setMatrixAt(i, matrix);
    const color = glow
      ? this.baseColors[i].clone().lerp(new THREE.Color(1, 1, 1), GLOW_MIX)
      : this.baseColors[i];
    this.spheres.setColorAt(i, color);
  }

  /** Brighten points near the playback cursor; restore the rest. */
  updateGlow(cursorTimeS: number): void {
    const next = new Set(glowIndices(cursorTimeS, this.frameTimes));
    let dirty = false;
    for (const i of this.glowing) {
      if (!next.has(i)) {
        this.applyInstance(i, false);
        dirty = true;
      }
    }
    for (const i of next) {
      if (!this.glowing.has(i)) {
        this.applyInstance(i, true);
        dirty = true;
      }
    }
    this.glowing = next;
    if (dirty) {
      this.spheres.instanceMatrix.needsUpdate = true;
      if (this.spheres.instanceColor) this.spheres.instanceColor.needsUpdate = true;
    }
  }
}

export interface StreamLike {
  state: { currentTime: number; playing: boolean };
  sync(): void;
}

export class DualViewer {
  readonly renderer: THREE.WebGLRenderer;
  readonly left: TrajectoryViewport;
  readonly right: TrajectoryViewport;

  constructor(
    canvas: HTMLCanvasElement,
    leftSurface: HTMLElement,
    rightSurface: HTMLElement,
    leftData: TrajectoryData,
    rightData: TrajectoryData,
  ) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    const aspect = canvas.clientWidth / 2 / Math.max(canvas.clientHeight, 1);
    this.left = new TrajectoryViewport(leftData, "cyan", leftSurface, aspect);
    this.right = new TrajectoryViewport(rightData, "magenta", rightSurface, aspect);
    this.resize();
  }

  resize(): void {
    const canvas = this.renderer.domElement;
    const w = canvas.clientWidth;
    const h = canvas.clientHeight;
    if (w === 0 || h === 0) return;
    this.renderer.setSize(w, h, false);
    const aspect = w / 2 / h;
    for (const vp of [this.left, this.right]) {
      vp.camera.aspect = aspect;
      vp.camera.updateProjectionMatrix();
    }
  }

  /** One frame: pull both audio clocks, refresh glow, draw both halves. */
  renderFrame(leftStream: StreamLike, rightStream: StreamLike): void {
    leftStream.sync();
    rightStream.sync();
    this.left.updateGlow(leftStream.state.currentTime);
    this.right.updateGlow(rightStream.state.currentTime);
    this.left.controls.update();
    this.right.controls.update();

    const canvas = this.renderer.domElement;
    const w = canvas.width;
    const h = canvas.height;
    const half = Math.floor(w / 2);
    this.renderer.setScissorTest(true);
    this.renderer.setViewport(0, 0, half, h);
    this.renderer.setScissor(0, 0, half, h);
    this.renderer.render(this.left.scene, this.left.camera);
    this.renderer.setViewport(half, 0, w - half, h);
    this.renderer.setScissor(half, 0, w - half, h);
    this.renderer.render(this.right.scene, this.right.camera);
    this.renderer.setScissorTest(false);
  }
}
