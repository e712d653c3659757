// Core View bar-chart construction. The server already resamples horizons
// onto the selection's smallest step and repeats labels for coarse
// horizons; this module turns those entries into renderable bar rows and
// keeps every selected core on one shared depth baseline.

import { HorizonEntry, ParameterInfo } from "./api";
import { PaletteId, Rgb, sampleRamp } from "./palettes";

export interface BarRow {
  depthCm: number;
  // 0..1 fraction of the column width; null renders as a gap
  widthFrac: number | null;
  value: number | null;
  label: string | null;
  // true when this row continues the previous row's horizon (repeated label)
  repeated: boolean;
  color: Rgb | null;
}

export interface CoreColumn {
  coreId: string;
  stepCm: number;
  rows: BarRow[];
}

export function normalize(value: number, info: Pick<ParameterInfo, "observed_min" | "observed_max">): number {
  const lo = info.observed_min;
  const hi = info.observed_max;
  if (lo === null || hi === null || hi <= lo) return 0;
  return Math.min(Math.max((value - lo) / (hi - lo), 0), 1);
}

export function buildColumn(
  coreId: string,
  stepCm: number,
  entries: HorizonEntry[],
  info: Pick<ParameterInfo, "observed_min" | "observed_max">,
  palette: PaletteId,
): CoreColumn {
  const rows: BarRow[] = entries.map((e, i) => {
    const prev = i > 0 ? entries[i - 1] : null;
    const frac = e.value === null ? null : normalize(e.value, info);
    return {
      depthCm: e.depth_cm,
      widthFrac: frac,
      value: e.value,
      label: e.horizon_label,
      repeated: prev !== null && prev.horizon_label !== null && prev.horizon_label === e.horizon_label,
      color: frac === null ? null : sampleRamp(palette, frac),
    };
  });
  return { coreId, stepCm, rows };
}

// depth span shared by a set of columns so bars align on one baseline
export function sharedDepthRange(columns: CoreColumn[]): { minCm: number; maxCm: number } {
  let minCm = Infinity;
  let maxCm = -Infinity;
  for (const col of columns) {
    for (const row of col.rows) {
      minCm = Math.min(minCm, row.depthCm);
      maxCm = Math.max(maxCm, row.depthCm + col.stepCm);
    }
  }
  if (!Number.isFinite(minCm)) return { minCm: 0, maxCm: 0 };
  return { minCm, maxCm };
}
