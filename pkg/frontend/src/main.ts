// Application shell: Map View on the left, Core View and Interpolation
// View on the right, all driven by the workspace service. The dark scheme
// is deliberate: the tool runs in ship control rooms where stray light
// matters.

import { ApiClient, CoreInfo, GridDoc, JobDoc, ParameterInfo, RequestFailed, VsupArrays } from "./api";
import { buildColumn, sharedDepthRange } from "./coreview";
import { defaultRenderConfig, RenderConfig } from "./clip";
import { InterpolationView } from "./interpview";
import { MapView, STROKE_COLORS } from "./mapview";
import { PALETTE_IDS, PaletteId, cssColor } from "./palettes";
import { buildRequest, describeError, gridSizeOptions, runJob } from "./launcher";

const api = new ApiClient("");

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    if (k === "class") node.className = v;
    else node.setAttribute(k, v);
  }
  node.append(...children);
  return node;
}

interface AppState {
  cores: CoreInfo[];
  selection: CoreInfo[];
  parameters: ParameterInfo[];
  coreViewParameter: string;
  lastJob: JobDoc | null;
  renderConfig: RenderConfig;
}

const state: AppState = {
  cores: [],
  selection: [],
  parameters: [],
  coreViewParameter: "",
  lastJob: null,
  renderConfig: defaultRenderConfig(),
};

async function boot() {
  const root = document.getElementById("app")!;
  root.innerHTML = "";

  const header = el("header", { class: "topbar" });
  const filters = el("div", { class: "filters" });
  const mapPanel = el("section", { class: "map-panel" });
  const mapTools = el("div", { class: "map-tools" });
  const mapCanvasHost = el("div", { class: "map-canvas-host" });
  const hoverCard = el("div", { class: "hover-card" }, "hover a core for details");
  mapPanel.append(mapTools, mapCanvasHost, hoverCard);

  const rightPanel = el("section", { class: "right-panel" });
  const tabs = el("div", { class: "tabs" });
  const coreTab = el("button", { class: "tab active" }, "Core View");
  const interpTab = el("button", { class: "tab" }, "Interpolation View");
  tabs.append(coreTab, interpTab);
  const corePane = el("div", { class: "pane core-pane" });
  const interpPane = el("div", { class: "pane interp-pane hidden" });
  rightPanel.append(tabs, corePane, interpPane);

  root.append(header, el("main", { class: "layout" }, mapPanel, rightPanel));

  const summary = await api.workspace();
  const maps = await api.maps();
  state.parameters = await api.parameters();
  state.cores = await api.cores();
  state.coreViewParameter = state.parameters[0]?.name ?? "";

  header.append(
    el("h1", {}, "seacore workspace"),
    el(
      "span",
      { class: "summary" },
      `${summary.cores} cores, ${summary.horizons} horizons, ` +
        `${summary.parameters} parameters, ${summary.date_range.from ?? "?"} to ${summary.date_range.to ?? "?"}`,
    ),
    filters,
  );

  const mapView = new MapView(api, mapCanvasHost);
  await mapView.load(maps, state.cores);

  // ---- filter bar ----
  const locationSel = el("select", {});
  locationSel.append(el("option", { value: "" }, "all locations"));
  for (const loc of summary.locations) locationSel.append(el("option", { value: loc }, loc));
  const fateSel = el("select", {});
  fateSel.append(el("option", { value: "" }, "all fates"));
  for (const fate of summary.core_fates) fateSel.append(el("option", { value: fate }, fate));
  const fromInput = el("input", { type: "date" });
  const toInput = el("input", { type: "date" });
  const applyBtn = el("button", {}, "filter");
  filters.append(locationSel, fateSel, fromInput, toInput, applyBtn);
  applyBtn.onclick = async () => {
    state.cores = await api.cores({
      location: locationSel.value || undefined,
      fate: fateSel.value || undefined,
      from: fromInput.value || undefined,
      to: toInput.value || undefined,
    });
    mapView.setCores(state.cores);
  };

  // ---- map tools ----
  const modeBtns: Record<string, HTMLButtonElement> = {};
  for (const mode of ["navigate", "select", "draw"] as const) {
    const b = el("button", { class: mode === "navigate" ? "active" : "" }, mode);
    b.onclick = () => {
      mapView.mode = mode;
      Object.values(modeBtns).forEach((x) => x.classList.remove("active"));
      b.classList.add("active");
    };
    modeBtns[mode] = b;
    mapTools.append(b);
  }
  const colorWrap = el("span", { class: "colors" });
  STROKE_COLORS.forEach((c, i) => {
    const b = el("button", { class: `swatch ${i === 0 ? "active" : ""}`, title: `color ${i}` });
    b.style.background = c;
    b.onclick = () => {
      mapView.drawColor = i;
      colorWrap.querySelectorAll(".swatch").forEach((x) => x.classList.remove("active"));
      b.classList.add("active");
    };
    colorWrap.append(b);
  });
  const undoBtn = el("button", {}, "undo");
  const redoBtn = el("button", {}, "redo");
  undoBtn.onclick = () => mapView.undo();
  redoBtn.onclick = () => mapView.redo();
  const layerSel = el("select", { title: "map layer" });
  for (const m of maps) layerSel.append(el("option", { value: m.id }, m.title));
  layerSel.onchange = () => mapView.setActiveLayer(layerSel.value);
  const shotBtn = el("button", {}, "screenshot");
  shotBtn.onclick = () => {
    const canvas = mapCanvasHost.querySelector("canvas")!;
    const a = el("a", { download: "map.png", href: canvas.toDataURL("image/png") });
    a.click();
  };
  mapTools.append(colorWrap, undoBtn, redoBtn, layerSel, shotBtn);

  mapView.onHover = (core) => {
    hoverCard.textContent = core
      ? `${core.core_id} | ${core.location} | ${core.core_fate} | ${core.date} | ` +
        `${core.lat.toFixed(6)}, ${core.lon.toFixed(6)}`
      : "hover a core for details";
  };
  mapView.onSelection = (cores) => {
    state.selection = cores;
    void renderCoreView();
  };

  // ---- core view ----
  const paramSel = el("select", {});
  for (const p of state.parameters) paramSel.append(el("option", { value: p.name }, `${p.name} (${p.kind})`));
  const paletteSel = el("select", {});
  for (const pid of PALETTE_IDS) paletteSel.append(el("option", { value: pid }, pid));
  const columnsHost = el("div", { class: "columns" });
  corePane.append(
    el("div", { class: "pane-tools" }, el("label", {}, "parameter "), paramSel, el("label", {}, " palette "), paletteSel),
    columnsHost,
  );
  paramSel.onchange = () => {
    state.coreViewParameter = paramSel.value;
    void renderCoreView();
  };
  paletteSel.onchange = () => void renderCoreView();

  async function renderCoreView() {
    columnsHost.innerHTML = "";
    if (state.selection.length === 0) {
      columnsHost.append(el("p", { class: "hint" }, "select cores on the map to compare horizons"));
      return;
    }
    const parameter = state.coreViewParameter;
    const info = state.parameters.find((p) => p.name === parameter)!;
    // shared smallest step across the whole selection
    const raws = await Promise.all(state.selection.map((c) => api.rawHorizons(c.core_id)));
    let step = Infinity;
    for (const raw of raws)
      for (const h of raw.horizons) step = Math.min(step, h.bottom_cm - h.top_cm);
    if (!Number.isFinite(step)) step = 1;
    const resampled = await Promise.all(
      state.selection.map((c) => api.resampled(c.core_id, parameter, step)),
    );
    const columns = resampled.map((r) =>
      buildColumn(r.core_id, r.step_cm, r.entries, info, paletteSel.value as PaletteId),
    );
    const range = sharedDepthRange(columns);

    for (const [i, col] of columns.entries()) {
      const core = state.selection[i];
      const host = el("div", { class: "core-column" });
      const head = el("div", { class: "core-head" }, `${col.coreId} | ${core.core_fate} | ${core.date}`);
      const dropBtn = el("button", { class: "drop", title: "deselect" }, "x");
      dropBtn.onclick = () => {
        mapView.setSelection(state.selection.filter((c) => c.core_id !== col.coreId));
      };
      head.append(dropBtn);
      host.append(head);
      const barsHost = el("div", { class: "bars" });
      // shared baseline: every column renders the full selection depth span
      for (let depth = range.minCm; depth < range.maxCm; depth += col.stepCm) {
        const row = col.rows.find((r) => r.depthCm === depth);
        const rowEl = el("div", { class: "bar-row" });
        const label = el(
          "span",
          { class: `bar-label ${row?.repeated ? "repeated" : ""}` },
          row?.label ?? `${depth} cm`,
        );
        const track = el("div", { class: "bar-track" });
        if (row && row.widthFrac !== null && row.color) {
          const bar = el("div", { class: "bar" });
          bar.style.width = `${Math.max(row.widthFrac * 100, 2)}%`;
          bar.style.background = cssColor(row.color);
          bar.title = `${row.label}: ${row.value}`;
          track.append(bar);
        } else {
          track.append(el("span", { class: "missing" }, "-"));
        }
        rowEl.append(label, track);
        barsHost.append(rowEl);
      }
      host.append(barsHost);
      columnsHost.append(host);
    }
  }

  // ---- interpolation view ----
  const methodSel = el("select", {});
  methodSel.append(el("option", { value: "sibson" }, "natural neighbor (sibson)"));
  methodSel.append(el("option", { value: "linear" }, "linear barycentric"));
  const gridSel = el("select", {});
  for (const cm of gridSizeOptions(20)) gridSel.append(el("option", { value: String(cm) }, `${cm} cm`));
  gridSel.value = "77";
  const iParamSel = el("select", {});
  for (const p of state.parameters) iParamSel.append(el("option", { value: p.name }, p.name));
  const vsupToggle = el("input", { type: "checkbox", checked: "" });
  const runBtn = el("button", { class: "run" }, "interpolate");
  const status = el("span", { class: "status" }, "idle");
  const launcher = el(
    "div",
    { class: "pane-tools" },
    iParamSel,
    methodSel,
    gridSel,
    el("label", {}, " VSUP "),
    vsupToggle,
    runBtn,
    status,
  );

  const configTools = el("div", { class: "pane-tools" });
  const exagBtn = el("button", {}, "height x10");
  const interpToggleBtn = el("button", {}, "hide interpolated");
  const shapeBtn = el("button", {}, "cylinders");
  const iPaletteSel = el("select", {});
  for (const pid of PALETTE_IDS) iPaletteSel.append(el("option", { value: pid }, pid));
  configTools.append(exagBtn, interpToggleBtn, shapeBtn, iPaletteSel);

  const clipTools = el("div", { class: "pane-tools clips" });
  const sliders: Record<"x" | "y" | "z", HTMLInputElement> = {} as never;
  const flips: Record<"x" | "y" | "z", HTMLButtonElement> = {} as never;
  for (const axis of ["x", "y", "z"] as const) {
    const slider = el("input", { type: "range", min: "-1", max: "100", value: "100" });
    const flip = el("button", {}, `flip ${axis}`);
    sliders[axis] = slider;
    flips[axis] = flip;
    clipTools.append(el("label", {}, `${axis} `), slider, flip);
  }
  const viewHost = el("div", { class: "view-host" });
  const vcDownload = el("div", { class: "hint" }, "click a voxel column to export its virtual core");
  interpPane.append(launcher, configTools, clipTools, viewHost, vcDownload);

  const interpView = new InterpolationView(viewHost, state.renderConfig);

  function applyConfig(mutate: (c: RenderConfig) => void) {
    mutate(state.renderConfig);
    interpView.setConfig(state.renderConfig);
  }

  exagBtn.onclick = () => {
    applyConfig((c) => (c.voxelHeightExaggeration = c.voxelHeightExaggeration === 1 ? 10 : 1));
    exagBtn.classList.toggle("active");
  };
  interpToggleBtn.onclick = () => {
    applyConfig((c) => (c.showInterpolated = !c.showInterpolated));
    interpToggleBtn.classList.toggle("active");
  };
  shapeBtn.onclick = () => {
    applyConfig((c) => (c.shape = c.shape === "prism" ? "cylinder" : "prism"));
    shapeBtn.classList.toggle("active");
  };
  iPaletteSel.onchange = () => applyConfig((c) => (c.paletteId = iPaletteSel.value as PaletteId));
  vsupToggle.onchange = () => applyConfig((c) => (c.vsupEnabled = vsupToggle.checked));

  function sliderCut(axis: "x" | "y" | "z", dim: number): void {
    const value = Number(sliders[axis].value);
    const bound = Math.round((value / 100) * (dim - 1));
    applyConfig((c) => {
      const flipped = c.clip[axis]?.flip ?? false;
      c.clip[axis] = value >= 100 && !flipped ? null : { bound, flip: flipped };
    });
  }
  for (const axis of ["x", "y", "z"] as const) {
    sliders[axis].oninput = () => {
      const grid = state.lastJob?.result?.grid;
      if (!grid) return;
      sliderCut(axis, axis === "x" ? grid.nx : axis === "y" ? grid.ny : grid.nz);
    };
    flips[axis].onclick = () => {
      applyConfig((c) => {
        const cut = c.clip[axis];
        if (cut) c.clip[axis] = { bound: cut.bound, flip: !cut.flip };
      });
      flips[axis].classList.toggle("active");
    };
  }

  runBtn.onclick = async () => {
    if (state.selection.length === 0) {
      status.textContent = "select cores on the map first";
      return;
    }
    let request;
    try {
      request = buildRequest(
        methodSel.value as "linear" | "sibson",
        iParamSel.value,
        Number(gridSel.value),
        state.selection.map((c) => c.core_id),
      );
    } catch (err) {
      status.textContent = String((err as Error).message);
      return;
    }
    runBtn.disabled = true;
    const outcome = await runJob(api, request, (s) => (status.textContent = s));
    runBtn.disabled = false;
    if (outcome.error) {
      status.textContent = describeError(outcome.error);
      return;
    }
    state.lastJob = outcome.job!;
    status.textContent = `done: ${outcome.job!.result!.grid.nx}x${outcome.job!.result!.grid.ny}x${outcome.job!.result!.grid.nz} voxels`;
    // camera and visual settings persist across reruns by design
    const grid: GridDoc = outcome.job!.result!.grid;
    const vsup: VsupArrays = outcome.job!.result!.vsup;
    interpView.setGrid(grid, vsup, interpViewFirstGrid);
    interpViewFirstGrid = false;
  };
  let interpViewFirstGrid = true;

  interpView.onPickColumn = async (col) => {
    if (!state.lastJob) return;
    try {
      const doc = await api.virtualCore(state.lastJob.job_id, col.lat, col.lon);
      const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
      const a = el("a", {
        download: `virtual-core_${doc.position.lat.toFixed(6)}_${doc.position.lon.toFixed(6)}.json`,
        href: URL.createObjectURL(blob),
      });
      a.click();
      vcDownload.textContent = `exported virtual core at ${doc.position.lat.toFixed(6)}, ${doc.position.lon.toFixed(6)} (${doc.horizons.length} horizons)`;
    } catch (err) {
      vcDownload.textContent = err instanceof RequestFailed ? describeError(err.detail) : String(err);
    }
  };

  // ---- tab switching ----
  coreTab.onclick = () => {
    coreTab.classList.add("active");
    interpTab.classList.remove("active");
    corePane.classList.remove("hidden");
    interpPane.classList.add("hidden");
  };
  interpTab.onclick = () => {
    interpTab.classList.add("active");
    coreTab.classList.remove("active");
    interpPane.classList.remove("hidden");
    corePane.classList.add("hidden");
  };

  await renderCoreView();
}

boot().catch((err) => {
  document.getElementById("app")!.textContent = `failed to start: ${err}`;
  console.error(err);
});
