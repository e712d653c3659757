// Interpolation View: instanced voxel rendering of a grid document with
// orbit controls (left-drag rotate, right-drag pan, wheel zoom). The
// camera state lives outside the scene, so swapping method, grid size, or
// palette rebuilds the voxels while the camera and clip settings persist.

import * as THREE from "three";

import { GridDoc, VsupArrays } from "./api";
import { CameraState, cameraPosition, defaultCamera, dolly, pan, rotate } from "./camera";
import { RenderConfig, renderMask, voxelIndex } from "./clip";
import { Rgb, plainColor, suppress, vsupColorTable } from "./palettes";

export interface PickedColumn {
  ix: number;
  iy: number;
  lat: number;
  lon: number;
}

export class InterpolationView {
  camera: CameraState = defaultCamera(10);
  config: RenderConfig;

  private renderer: THREE.WebGLRenderer | null = null;
  private scene = new THREE.Scene();
  private threeCamera = new THREE.PerspectiveCamera(45, 1, 0.01, 1e7);
  private voxels: THREE.InstancedMesh | null = null;
  private instanceColumns: PickedColumn[] = [];
  private grid: GridDoc | null = null;
  private vsup: VsupArrays | null = null;
  private raycaster = new THREE.Raycaster();
  private container: HTMLElement;

  onPickColumn: (col: PickedColumn) => void = () => {};

  constructor(container: HTMLElement, config: RenderConfig) {
    this.container = container;
    this.config = config;
    try {
      this.renderer = new THREE.WebGLRenderer({ antialias: true });
      this.renderer.setClearColor(0x10141a);
      container.appendChild(this.renderer.domElement);
    } catch {
      this.renderer = null; // headless environments render nothing
    }
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.75));
    const sun = new THREE.DirectionalLight(0xffffff, 1.4);
    sun.position.set(1, 2, 1.2);
    this.scene.add(sun);
    this.bindEvents();
    new ResizeObserver(() => this.resize()).observe(container);
    this.resize();
    this.animate();
  }

  private resize() {
    if (!this.renderer) return;
    const w = this.container.clientWidth || 640;
    const h = this.container.clientHeight || 480;
    this.renderer.setSize(w, h);
    this.threeCamera.aspect = w / h;
    this.threeCamera.updateProjectionMatrix();
  }

  private bindEvents() {
    const el = this.renderer?.domElement;
    if (!el) return;
    el.addEventListener("contextmenu", (e) => e.preventDefault());
    let dragging: number | null = null;
    let last = { x: 0, y: 0 };
    el.addEventListener("pointerdown", (e) => {
      dragging = e.button;
      last = { x: e.clientX, y: e.clientY };
      el.setPointerCapture(e.pointerId);
    });
    el.addEventListener("pointerup", (e) => {
      if (dragging === 0 && Math.abs(e.clientX - last.x) < 3 && Math.abs(e.clientY - last.y) < 3) {
        this.pick(e);
      }
      dragging = null;
    });
    el.addEventListener("pointermove", (e) => {
      if (dragging === null) return;
      const dx = e.clientX - last.x;
      const dy = e.clientY - last.y;
      last = { x: e.clientX, y: e.clientY };
      if (dragging === 0) this.camera = rotate(this.camera, dx * 0.008, -dy * 0.008);
      else if (dragging === 2) this.camera = pan(this.camera, -dx, dy);
    });
    el.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.camera = dolly(this.camera, e.deltaY > 0 ? 1.12 : 1 / 1.12);
    });
  }

  setGrid(grid: GridDoc, vsup: VsupArrays, resetCamera: boolean) {
    this.grid = grid;
    this.vsup = vsup;
    if (resetCamera) {
      const radius = Math.max(grid.nx, grid.ny, grid.nz) * 0.9;
      this.camera = defaultCamera(radius);
    }
    this.rebuild();
  }

  setConfig(config: RenderConfig) {
    // visual reconfiguration never touches this.camera
    this.config = config;
    this.rebuild();
  }

  private colorFor(k: number): Rgb {
    const grid = this.grid!;
    const v = grid.values[k];
    if (v === null) return [40, 40, 40];
    if (this.config.vsupEnabled && this.vsup) {
      const layer = this.vsup.layer[k];
      const bin = this.vsup.bin[k];
      if (layer !== null && bin !== null) {
        return vsupColorTable(this.vsup.quantizer, this.config.paletteId)[layer][bin];
      }
    }
    const lo = grid.value_min ?? 0;
    const hi = grid.value_max ?? 1;
    const t = hi > lo ? (v - lo) / (hi - lo) : 0;
    const base = plainColor(this.config.paletteId, t);
    return this.config.vsupEnabled ? base : suppress(base, 1);
  }

  rebuild() {
    if (!this.grid) return;
    if (this.voxels) {
      this.scene.remove(this.voxels);
      this.voxels.geometry.dispose();
      (this.voxels.material as THREE.Material).dispose();
      this.voxels = null;
    }
    const grid = this.grid;
    const visible = renderMask(grid, this.config);
    const count = visible.reduce((n, v) => n + (v ? 1 : 0), 0);
    if (count === 0) return;

    // one unit = one xy cell; depth cells are 1 cm = 1/cell of a unit
    const zUnit = (grid.cell_z_cm / grid.cell_xy_cm) * this.config.voxelHeightExaggeration;
    const geometry =
      this.config.shape === "cylinder"
        ? new THREE.CylinderGeometry(0.5 * (7 / grid.cell_xy_cm), 0.5 * (7 / grid.cell_xy_cm), 1, 16)
        : new THREE.BoxGeometry(1, 1, 1);
    if (this.config.shape === "prism") geometry.scale(0.96, 1, 0.96);
    const material = new THREE.MeshLambertMaterial();
    const mesh = new THREE.InstancedMesh(geometry, material, count);
    this.instanceColumns = [];

    const m = new THREE.Matrix4();
    const color = new THREE.Color();
    const cx = grid.nx / 2;
    const cy = grid.ny / 2;
    let slot = 0;
    for (let iz = 0; iz < grid.nz; iz++) {
      for (let iy = 0; iy < grid.ny; iy++) {
        for (let ix = 0; ix < grid.nx; ix++) {
          const k = voxelIndex(grid, ix, iy, iz);
          if (!visible[k]) continue;
          m.makeScale(1, zUnit, 1);
          m.setPosition(ix + 0.5 - cx, -(iz + 0.5) * zUnit, -(iy + 0.5 - cy));
          mesh.setMatrixAt(slot, m);
          const [r, g, b] = this.colorFor(k);
          mesh.setColorAt(slot, color.setRGB(r / 255, g / 255, b / 255));
          this.instanceColumns.push(this.columnAt(ix, iy));
          slot++;
        }
      }
    }
    mesh.instanceMatrix.needsUpdate = true;
    if (mesh.instanceColor) mesh.instanceColor.needsUpdate = true;
    this.voxels = mesh;
    this.scene.add(mesh);
    this.addHullBorder(grid, zUnit);
  }

  private columnAt(ix: number, iy: number): PickedColumn {
    const grid = this.grid!;
    const cellDeg = grid.cell_xy_cm / 100 / 111_320;
    const lonScale = cellDeg / Math.cos((grid.origin.lat * Math.PI) / 180);
    return {
      ix,
      iy,
      lat: grid.origin.lat + (iy + 0.5) * cellDeg,
      lon: grid.origin.lon + (ix + 0.5) * lonScale,
    };
  }

  private hullLines: THREE.Object3D | null = null;

  // the white selection border drawn again here for orientation,
  // with the same north-pointing triangle as the map
  private addHullBorder(grid: GridDoc, zUnit: number) {
    if (this.hullLines) this.scene.remove(this.hullLines);
    const group = new THREE.Group();
    const w = grid.nx;
    const d = grid.ny;
    const mat = new THREE.LineBasicMaterial({ color: 0xffffff });
    const rect = new THREE.BufferGeometry().setFromPoints([
      new THREE.Vector3(-w / 2, 0.5, d / 2),
      new THREE.Vector3(w / 2, 0.5, d / 2),
      new THREE.Vector3(w / 2, 0.5, -d / 2),
      new THREE.Vector3(-w / 2, 0.5, -d / 2),
      new THREE.Vector3(-w / 2, 0.5, d / 2),
    ]);
    group.add(new THREE.Line(rect, mat));
    const tri = new THREE.BufferGeometry().setFromPoints([
      new THREE.Vector3(-w * 0.06, 0.5, -d / 2 - w * 0.02),
      new THREE.Vector3(w * 0.06, 0.5, -d / 2 - w * 0.02),
      new THREE.Vector3(0, 0.5, -d / 2 - w * 0.1),
      new THREE.Vector3(-w * 0.06, 0.5, -d / 2 - w * 0.02),
    ]);
    group.add(new THREE.Line(tri, mat));
    group.position.y = zUnit;
    this.hullLines = group;
    this.scene.add(group);
  }

  private pick(e: PointerEvent) {
    if (!this.renderer || !this.voxels) return;
    const rect = this.renderer.domElement.getBoundingClientRect();
    const ndc = new THREE.Vector2(
      ((e.clientX - rect.left) / rect.width) * 2 - 1,
      -((e.clientY - rect.top) / rect.height) * 2 + 1,
    );
    this.raycaster.setFromCamera(ndc, this.threeCamera);
    const hit = this.raycaster.intersectObject(this.voxels)[0];
    if (hit?.instanceId !== undefined) {
      this.onPickColumn(this.instanceColumns[hit.instanceId]);
    }
  }

  private animate = () => {
    requestAnimationFrame(this.animate);
    if (!this.renderer) return;
    const p = cameraPosition(this.camera);
    this.threeCamera.position.set(p.x, p.y, p.z);
    this.threeCamera.lookAt(this.camera.target.x, this.camera.target.y, this.camera.target.z);
    this.renderer.render(this.scene, this.threeCamera);
  };
}
