// Render configuration and client-side visibility. Clip semantics mirror
// the server's clip_mask contract exactly: an axis cut keeps indices <=
// bound, flipping keeps the complement, and all active cuts intersect.
// Rendering additionally hides empty voxels and, optionally, all
// interpolated ones.

import { GridDoc } from "./api";
import { PaletteId } from "./palettes";

export interface AxisCut {
  bound: number;
  flip: boolean;
}

export interface ClipState {
  valueRange: [number, number] | null;
  x: AxisCut | null;
  y: AxisCut | null;
  z: AxisCut | null;
}

export interface RenderConfig {
  voxelHeightExaggeration: 1 | 10;
  showInterpolated: boolean;
  shape: "prism" | "cylinder";
  paletteId: PaletteId;
  vsupEnabled: boolean;
  clip: ClipState;
}

export function defaultRenderConfig(): RenderConfig {
  return {
    voxelHeightExaggeration: 1,
    showInterpolated: true,
    shape: "prism",
    paletteId: "viridis",
    vsupEnabled: true,
    clip: { valueRange: null, x: null, y: null, z: null },
  };
}

export function voxelIndex(grid: Pick<GridDoc, "nx" | "ny">, ix: number, iy: number, iz: number): number {
  return (iz * grid.ny + iy) * grid.nx + ix;
}

// the pure clip mask: true where the voxel survives every active cut
export function clipMask(grid: GridDoc, clip: ClipState): boolean[] {
  const out = new Array<boolean>(grid.values.length);
  for (let iz = 0; iz < grid.nz; iz++) {
    for (let iy = 0; iy < grid.ny; iy++) {
      for (let ix = 0; ix < grid.nx; ix++) {
        const k = voxelIndex(grid, ix, iy, iz);
        let visible = true;
        if (clip.valueRange) {
          const v = grid.values[k];
          visible = v !== null && v >= clip.valueRange[0] && v <= clip.valueRange[1];
        }
        if (visible && clip.x) visible = clip.x.flip ? ix > clip.x.bound : ix <= clip.x.bound;
        if (visible && clip.y) visible = clip.y.flip ? iy > clip.y.bound : iy <= clip.y.bound;
        if (visible && clip.z) visible = clip.z.flip ? iz > clip.z.bound : iz <= clip.z.bound;
        out[k] = visible;
      }
    }
  }
  return out;
}

// what actually renders: clip mask minus empties, minus interpolated
// voxels when only sample data is requested
export function renderMask(grid: GridDoc, config: RenderConfig): boolean[] {
  const clipped = clipMask(grid, config.clip);
  return clipped.map(
    (vis, k) =>
      vis && grid.values[k] !== null && (config.showInterpolated || grid.sample_mask[k]),
  );
}

export function flipCut(cut: AxisCut): AxisCut {
  return { bound: cut.bound, flip: !cut.flip };
}
