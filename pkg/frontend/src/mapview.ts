// Map View: a canvas showing the active seafloor layer with core markers,
// lat/lon grid lines, a live metric extent readout, drag-rectangle core
// selection (white hull with a north-pointing triangle), and the six-color
// drawing tool. Strokes live in geographic coordinates, so they stay put
// when the layer changes underneath them.

import { AnnotationLogDoc, ApiClient, CoreInfo, MapLayerInfo } from "./api";
import { boundingRect, GeoPoint, GeoRect, rectContains, rectExtentMeters } from "./geo";
import {
  ViewportState,
  fitRect,
  fromScreen,
  panByPixels,
  switchLayer,
  toScreen,
  visibleExtentMeters,
  visibleRect,
  zoomBy,
} from "./viewport";

export const STROKE_COLORS = ["#ff5c5c", "#ffb24d", "#ffe34d", "#5cd65c", "#4db8ff", "#c44dff"];

type Mode = "navigate" | "select" | "draw";

interface DragState {
  startPx: { x: number; y: number };
  lastPx: { x: number; y: number };
}

export class MapView {
  viewport: ViewportState;
  mode: Mode = "navigate";
  drawColor = 0;

  private canvas: HTMLCanvasElement;
  private ctx: CanvasRenderingContext2D;
  private layers: MapLayerInfo[] = [];
  private images = new Map<string, HTMLImageElement>();
  private cores: CoreInfo[] = [];
  private selection: CoreInfo[] = [];
  private annotations: AnnotationLogDoc = { applied: [], undone: [] };
  private hover: CoreInfo | null = null;
  private drag: DragState | null = null;
  private pendingStroke: GeoPoint[] = [];

  onSelection: (cores: CoreInfo[], hull: GeoRect | null) => void = () => {};
  onHover: (core: CoreInfo | null) => void = () => {};

  constructor(
    private api: ApiClient,
    container: HTMLElement,
  ) {
    this.canvas = document.createElement("canvas");
    this.canvas.className = "map-canvas";
    container.appendChild(this.canvas);
    const ctx = this.canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas unavailable");
    this.ctx = ctx;
    this.viewport = { center: { lat: 0, lon: 0 }, scale: 1, activeLayerId: "" };
    this.bindEvents();
    new ResizeObserver(() => this.resize(container)).observe(container);
    this.resize(container);
  }

  private resize(container: HTMLElement) {
    this.canvas.width = container.clientWidth;
    this.canvas.height = container.clientHeight || 480;
    this.render();
  }

  async load(layers: MapLayerInfo[], cores: CoreInfo[]) {
    this.layers = layers;
    this.cores = cores;
    for (const layer of layers) {
      const img = new Image();
      img.src = this.api.mapImageUrl(layer.id);
      img.onload = () => this.render();
      this.images.set(layer.id, img);
    }
    const first = layers[0];
    const rect = cores.length
      ? boundingRect(cores.map((c) => ({ lat: c.lat, lon: c.lon })))
      : first
        ? { west: first.west, east: first.east, south: first.south, north: first.north }
        : { west: -1, east: 1, south: -1, north: 1 };
    this.viewport = fitRect(rect, this.canvas.width, this.canvas.height, first?.id ?? "");
    this.annotations = await this.api.annotations();
    this.render();
  }

  setCores(cores: CoreInfo[]) {
    this.cores = cores;
    this.selection = this.selection.filter((s) => cores.some((c) => c.core_id === s.core_id));
    this.render();
  }

  setSelection(cores: CoreInfo[]) {
    this.selection = [...cores];
    this.emitSelection();
    this.render();
  }

  // the layer dropdown: viewport numbers must be untouched
  setActiveLayer(layerId: string) {
    this.viewport = switchLayer(this.viewport, layerId);
    this.render();
  }

  async refreshAnnotations() {
    this.annotations = await this.api.annotations();
    this.render();
  }

  async undo() {
    await this.api.undoStroke();
    await this.refreshAnnotations();
  }

  async redo() {
    await this.api.redoStroke();
    await this.refreshAnnotations();
  }

  private emitSelection() {
    const hull = this.selection.length
      ? boundingRect(this.selection.map((c) => ({ lat: c.lat, lon: c.lon })))
      : null;
    this.onSelection([...this.selection], hull);
  }

  private bindEvents() {
    this.canvas.addEventListener("contextmenu", (e) => e.preventDefault());
    this.canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.viewport = zoomBy(this.viewport, e.deltaY < 0 ? 1.15 : 1 / 1.15);
      this.render();
    });
    this.canvas.addEventListener("pointerdown", (e) => {
      this.canvas.setPointerCapture(e.pointerId);
      this.drag = { startPx: { x: e.offsetX, y: e.offsetY }, lastPx: { x: e.offsetX, y: e.offsetY } };
      if (this.mode === "draw") {
        this.pendingStroke = [this.geoAt(e.offsetX, e.offsetY)];
      }
    });
    this.canvas.addEventListener("pointermove", (e) => {
      if (!this.drag) {
        this.updateHover(e.offsetX, e.offsetY);
        return;
      }
      if (this.mode === "navigate") {
        this.viewport = panByPixels(
          this.viewport,
          e.offsetX - this.drag.lastPx.x,
          e.offsetY - this.drag.lastPx.y,
        );
      } else if (this.mode === "draw") {
        this.pendingStroke.push(this.geoAt(e.offsetX, e.offsetY));
      }
      this.drag.lastPx = { x: e.offsetX, y: e.offsetY };
      this.render();
      if (this.mode === "select" && this.drag) this.drawSelectionBox(this.drag);
    });
    this.canvas.addEventListener("pointerup", async (e) => {
      const drag = this.drag;
      this.drag = null;
      if (!drag) return;
      if (this.mode === "select") {
        const a = this.geoAt(drag.startPx.x, drag.startPx.y);
        const b = this.geoAt(e.offsetX, e.offsetY);
        const rect: GeoRect = {
          west: Math.min(a.lon, b.lon),
          east: Math.max(a.lon, b.lon),
          south: Math.min(a.lat, b.lat),
          north: Math.max(a.lat, b.lat),
        };
        this.selection = this.cores.filter((c) => rectContains(rect, { lat: c.lat, lon: c.lon }));
        this.emitSelection();
      } else if (this.mode === "draw" && this.pendingStroke.length >= 2) {
        const note = window.prompt("Note for this annotation (optional):") || null;
        await this.api.addStroke({
          color_index: this.drawColor,
          path: this.pendingStroke,
          note,
        });
        this.pendingStroke = [];
        await this.refreshAnnotations();
      }
      this.render();
    });
  }

  private geoAt(x: number, y: number): GeoPoint {
    return fromScreen(this.viewport, x, y, this.canvas.width, this.canvas.height);
  }

  private updateHover(x: number, y: number) {
    let best: CoreInfo | null = null;
    let bestD = 81; // 9 px pick radius
    for (const c of this.cores) {
      const p = toScreen(this.viewport, { lat: c.lat, lon: c.lon }, this.canvas.width, this.canvas.height);
      const d = (p.x - x) ** 2 + (p.y - y) ** 2;
      if (d < bestD) {
        bestD = d;
        best = c;
      }
    }
    if (best !== this.hover) {
      this.hover = best;
      this.onHover(best);
      this.render();
    }
  }

  render() {
    const { ctx, canvas } = this;
    const w = canvas.width;
    const h = canvas.height;
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, w, h);

    this.drawLayer(w, h);
    this.drawGridLines(w, h);
    this.drawAnnotations(w, h);
    this.drawHull(w, h);
    this.drawCores(w, h);
    this.drawReadout(w, h);
  }

  private drawLayer(w: number, h: number) {
    const layer = this.layers.find((l) => l.id === this.viewport.activeLayerId);
    if (!layer) return;
    const img = this.images.get(layer.id);
    if (!img || !img.complete || img.naturalWidth === 0) return;
    const nw = toScreen(this.viewport, { lat: layer.north, lon: layer.west }, w, h);
    const se = toScreen(this.viewport, { lat: layer.south, lon: layer.east }, w, h);
    this.ctx.imageSmoothingEnabled = false;
    this.ctx.drawImage(img, nw.x, nw.y, se.x - nw.x, se.y - nw.y);
  }

  private gridStepDeg(w: number): number {
    const view = visibleRect(this.viewport, w, this.canvas.height);
    const span = Math.max(view.east - view.west, 1e-9);
    const raw = span / 6;
    const mag = 10 ** Math.floor(Math.log10(raw));
    for (const m of [1, 2, 5, 10]) if (raw <= m * mag) return m * mag;
    return 10 * mag;
  }

  private drawGridLines(w: number, h: number) {
    const { ctx } = this;
    const view = visibleRect(this.viewport, w, h);
    const step = this.gridStepDeg(w);
    ctx.strokeStyle = "rgba(140, 160, 180, 0.25)";
    ctx.fillStyle = "rgba(170, 190, 210, 0.8)";
    ctx.font = "11px system-ui";
    ctx.lineWidth = 1;
    for (let lon = Math.ceil(view.west / step) * step; lon <= view.east; lon += step) {
      const p = toScreen(this.viewport, { lat: view.south, lon }, w, h);
      ctx.beginPath();
      ctx.moveTo(p.x, 0);
      ctx.lineTo(p.x, h);
      ctx.stroke();
      ctx.fillText(lon.toFixed(4), p.x + 3, h - 6);
    }
    for (let lat = Math.ceil(view.south / step) * step; lat <= view.north; lat += step) {
      const p = toScreen(this.viewport, { lat, lon: view.west }, w, h);
      ctx.beginPath();
      ctx.moveTo(0, p.y);
      ctx.lineTo(w, p.y);
      ctx.stroke();
      ctx.fillText(lat.toFixed(4), 4, p.y - 3);
    }
  }

  private drawCores(w: number, h: number) {
    const { ctx } = this;
    for (const c of this.cores) {
      const p = toScreen(this.viewport, { lat: c.lat, lon: c.lon }, w, h);
      const selected = this.selection.some((s) => s.core_id === c.core_id);
      // constant size at every zoom level
      ctx.beginPath();
      ctx.arc(p.x, p.y, selected ? 6 : 4.5, 0, Math.PI * 2);
      ctx.fillStyle = c.core_fate === "Geochem" ? "#e8eef4" : "#8fd1a8";
      ctx.fill();
      if (selected) {
        ctx.strokeStyle = "#ffd24d";
        ctx.lineWidth = 2;
        ctx.stroke();
      }
      if (this.hover === c) {
        ctx.strokeStyle = "#ffffff";
        ctx.lineWidth = 1.5;
        ctx.beginPath();
        ctx.arc(p.x, p.y, 9, 0, Math.PI * 2);
        ctx.stroke();
      }
    }
  }

  private drawHull(w: number, h: number) {
    if (this.selection.length === 0) return;
    const hull = boundingRect(this.selection.map((c) => ({ lat: c.lat, lon: c.lon })));
    const nw = toScreen(this.viewport, { lat: hull.north, lon: hull.west }, w, h);
    const se = toScreen(this.viewport, { lat: hull.south, lon: hull.east }, w, h);
    const { ctx } = this;
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1.5;
    ctx.strokeRect(nw.x, nw.y, se.x - nw.x, se.y - nw.y);
    // the triangle on the top edge always points north
    const cx = (nw.x + se.x) / 2;
    ctx.beginPath();
    ctx.moveTo(cx, nw.y - 12);
    ctx.lineTo(cx - 6, nw.y - 2);
    ctx.lineTo(cx + 6, nw.y - 2);
    ctx.closePath();
    ctx.fillStyle = "#ffffff";
    ctx.fill();
  }

  private drawAnnotations(w: number, h: number) {
    const { ctx } = this;
    ctx.lineWidth = 2.5;
    ctx.lineJoin = "round";
    const drawPath = (path: { lat: number; lon: number }[], color: string) => {
      ctx.strokeStyle = color;
      ctx.beginPath();
      path.forEach((p, i) => {
        const s = toScreen(this.viewport, p, w, h);
        if (i === 0) ctx.moveTo(s.x, s.y);
        else ctx.lineTo(s.x, s.y);
      });
      ctx.stroke();
    };
    for (const stroke of this.annotations.applied) {
      drawPath(stroke.path, STROKE_COLORS[stroke.color_index] ?? "#ffffff");
      if (stroke.note) {
        const anchor = toScreen(this.viewport, stroke.path[0], w, h);
        ctx.fillStyle = "#e8eef4";
        ctx.font = "12px system-ui";
        ctx.fillText(stroke.note, anchor.x + 6, anchor.y - 6);
      }
    }
    if (this.pendingStroke.length >= 2) {
      drawPath(this.pendingStroke, STROKE_COLORS[this.drawColor]);
    }
  }

  private drawSelectionBox(drag: DragState) {
    const { ctx } = this;
    ctx.strokeStyle = "rgba(255, 255, 255, 0.9)";
    ctx.setLineDash([5, 4]);
    ctx.strokeRect(
      drag.startPx.x,
      drag.startPx.y,
      drag.lastPx.x - drag.startPx.x,
      drag.lastPx.y - drag.startPx.y,
    );
    ctx.setLineDash([]);
  }

  private drawReadout(w: number, h: number) {
    const ext = visibleExtentMeters(this.viewport, w, h);
    const fmt = (m: number) => (m >= 1000 ? `${(m / 1000).toFixed(2)} km` : `${m.toFixed(1)} m`);
    const { ctx } = this;
    ctx.fillStyle = "rgba(16, 20, 26, 0.75)";
    ctx.fillRect(w - 190, 8, 182, 24);
    ctx.fillStyle = "#c7d0d9";
    ctx.font = "12px system-ui";
    ctx.fillText(`viewport ${fmt(ext.width)} x ${fmt(ext.height)}`, w - 182, 24);
  }

  hullExtentMeters(): { width: number; height: number } | null {
    if (this.selection.length === 0) return null;
    return rectExtentMeters(boundingRect(this.selection.map((c) => ({ lat: c.lat, lon: c.lon }))));
  }
}
