// Typed client for the workspace service. Every view talks to the backend
// exclusively through this module, so the UI never re-derives numerics the
// server already computed.

export interface CoreInfo {
  core_id: string;
  location: string;
  date: string;
  core_fate: string;
  lat: number;
  lon: number;
  extra_measurements: Record<string, number>;
  horizon_count: number;
}

export interface ParameterInfo {
  name: string;
  kind: "physicochemical" | "geochemical" | "biological" | "unknown";
  observed_min: number | null;
  observed_max: number | null;
}

export interface MapLayerInfo {
  id: string;
  title: string;
  kind: string;
  west: number;
  east: number;
  south: number;
  north: number;
  native_resolution_cm: number;
}

export interface WorkspaceSummary {
  cores: number;
  horizons: number;
  parameters: number;
  maps: number;
  locations: string[];
  core_fates: string[];
  date_range: { from: string | null; to: string | null };
  annotations: number;
  version: string;
}

export interface HorizonEntry {
  depth_cm: number;
  value: number | null;
  horizon_label: string | null;
}

export interface ResampledHorizons {
  core_id: string;
  parameter: string;
  step_cm: number;
  entries: HorizonEntry[];
}

export interface RawHorizons {
  core_id: string;
  horizons: {
    top_cm: number;
    bottom_cm: number;
    label: string;
    params: Record<string, number>;
  }[];
}

export interface GridDoc {
  format: string;
  origin: { lat: number; lon: number };
  cell_xy_cm: number;
  cell_z_cm: number;
  nx: number;
  ny: number;
  nz: number;
  parameter: string;
  method: "linear" | "sibson";
  value_min: number | null;
  value_max: number | null;
  values: (number | null)[];
  uncertainty: number[];
  sample_mask: boolean[];
}

export interface VsupArrays {
  quantizer: { layers: number; branching: number };
  layer: (number | null)[];
  bin: (number | null)[];
}

export interface ApiError {
  code: string;
  message: string;
  hint?: string;
  voxel_count?: number;
}

export interface JobDoc {
  job_id: string;
  status: "queued" | "running" | "done" | "failed";
  request: InterpolationRequest;
  result?: { grid: GridDoc; vsup: VsupArrays };
  error?: ApiError;
}

export interface InterpolationRequest {
  method: "linear" | "sibson";
  parameter: string;
  cell_xy_cm: number;
  core_ids: string[];
  padding_cells: number;
  vsup: { layers: number; branching: number };
}

export interface VirtualCoreDoc {
  position: { lat: number; lon: number };
  parameter: string;
  horizons: {
    top_cm: number;
    bottom_cm: number;
    value: number | null;
    uncertainty: number;
    interpolated: boolean;
  }[];
}

export interface StrokeDoc {
  stroke_id: string;
  color_index: number;
  path: { lat: number; lon: number }[];
  note: string | null;
  created_at: string;
}

export interface AnnotationLogDoc {
  applied: StrokeDoc[];
  undone: StrokeDoc[];
}

export class RequestFailed extends Error {
  constructor(
    public status: number,
    public detail: ApiError,
  ) {
    super(`${detail.code}: ${detail.message}`);
  }
}

async function parseOrThrow<T>(resp: Response): Promise<T> {
  if (resp.ok) return (await resp.json()) as T;
  let detail: ApiError;
  try {
    detail = (await resp.json()) as ApiError;
  } catch {
    detail = { code: `http-${resp.status}`, message: resp.statusText };
  }
  throw new RequestFailed(resp.status, detail);
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    return parseOrThrow<T>(await fetch(this.base + path));
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    return parseOrThrow<T>(
      await fetch(this.base + path, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
  }

  workspace(): Promise<WorkspaceSummary> {
    return this.get("/api/workspace");
  }

  cores(filter: { location?: string; from?: string; to?: string; fate?: string } = {}): Promise<CoreInfo[]> {
    const q = new URLSearchParams();
    for (const [k, v] of Object.entries(filter)) if (v) q.set(k, v);
    const qs = q.toString();
    return this.get(`/api/cores${qs ? "?" + qs : ""}`);
  }

  parameters(): Promise<ParameterInfo[]> {
    return this.get("/api/parameters");
  }

  maps(): Promise<MapLayerInfo[]> {
    return this.get("/api/maps");
  }

  mapImageUrl(layerId: string): string {
    return `${this.base}/api/maps/${encodeURIComponent(layerId)}/image`;
  }

  rawHorizons(coreId: string): Promise<RawHorizons> {
    return this.get(`/api/cores/${encodeURIComponent(coreId)}/horizons`);
  }

  resampled(coreId: string, parameter: string, step?: number): Promise<ResampledHorizons> {
    const q = new URLSearchParams({ parameter });
    if (step !== undefined) q.set("step", String(step));
    return this.get(`/api/cores/${encodeURIComponent(coreId)}/horizons?${q}`);
  }

  submitInterpolation(req: InterpolationRequest): Promise<{ job_id: string }> {
    return this.post("/api/interpolations", req);
  }

  job(jobId: string): Promise<JobDoc> {
    return this.get(`/api/interpolations/${encodeURIComponent(jobId)}`);
  }

  virtualCore(jobId: string, lat: number, lon: number): Promise<VirtualCoreDoc> {
    return this.post("/api/virtual-core", { job_id: jobId, lat, lon });
  }

  annotations(): Promise<AnnotationLogDoc> {
    return this.get("/api/annotations");
  }

  addStroke(stroke: { color_index: number; path: { lat: number; lon: number }[]; note?: string | null }): Promise<{ stroke_id: string }> {
    return this.post("/api/annotations/strokes", stroke);
  }

  undoStroke(): Promise<{ applied: number; undone: number }> {
    return this.post("/api/annotations/undo", {});
  }

  redoStroke(): Promise<{ applied: number; undone: number }> {
    return this.post("/api/annotations/redo", {});
  }
}
