// The six colorblind-friendly ramps offered across the views, plus
// value-suppressing palette construction. Ramps are 17-stop sRGB tables
// sampled from the standard definitions and interpolated linearly.

export type Rgb = [number, number, number];

export type PaletteId =
  | "viridis"
  | "cividis"
  | "greyscale"
  | "inferno"
  | "plasma"
  | "magma";

export const PALETTE_IDS: PaletteId[] = [
  "viridis",
  "cividis",
  "greyscale",
  "inferno",
  "plasma",
  "magma",
];

const STOPS: Record<PaletteId, Rgb[]> = {
  viridis: [[68, 1, 84], [72, 24, 106], [71, 45, 123], [66, 64, 134], [59, 82, 139], [51, 99, 141], [44, 114, 142], [38, 130, 142], [33, 145, 140], [31, 160, 136], [40, 174, 128], [63, 188, 115], [94, 201, 98], [132, 212, 75], [173, 220, 48], [216, 226, 25], [253, 231, 37]],
  cividis: [[0, 34, 78], [0, 46, 106], [26, 56, 111], [50, 67, 109], [67, 78, 108], [83, 90, 109], [97, 101, 111], [111, 112, 115], [125, 124, 120], [140, 136, 120], [155, 148, 118], [171, 160, 114], [188, 174, 108], [205, 187, 99], [222, 201, 88], [240, 216, 70], [254, 232, 56]],
  greyscale: [[12, 12, 12], [27, 27, 27], [42, 42, 42], [57, 57, 57], [72, 72, 72], [87, 87, 87], [102, 102, 102], [117, 117, 117], [133, 133, 133], [148, 148, 148], [163, 163, 163], [178, 178, 178], [193, 193, 193], [208, 208, 208], [223, 223, 223], [238, 238, 238], [250, 250, 250]],
  inferno: [[0, 0, 4], [11, 7, 36], [33, 12, 74], [61, 9, 101], [87, 16, 110], [113, 25, 110], [138, 34, 106], [163, 44, 97], [188, 55, 84], [210, 70, 68], [228, 90, 49], [241, 115, 29], [249, 142, 9], [252, 172, 17], [249, 203, 53], [242, 234, 105], [252, 255, 164]],
  plasma: [[13, 8, 135], [49, 5, 151], [76, 2, 161], [102, 0, 167], [126, 3, 168], [149, 17, 161], [170, 35, 149], [188, 53, 135], [204, 71, 120], [218, 90, 106], [230, 108, 92], [240, 128, 78], [248, 149, 64], [253, 172, 51], [253, 197, 39], [248, 223, 37], [240, 249, 33]],
  magma: [[0, 0, 4], [10, 8, 34], [29, 17, 71], [54, 16, 107], [81, 18, 124], [106, 28, 129], [131, 38, 129], [156, 46, 127], [183, 55, 121], [208, 65, 111], [231, 82, 99], [245, 107, 92], [252, 137, 97], [254, 167, 114], [254, 196, 136], [253, 226, 163], [252, 253, 191]],
};

const clamp01 = (t: number) => Math.min(Math.max(t, 0), 1);

export function sampleRamp(palette: PaletteId, t: number): Rgb {
  const stops = STOPS[palette];
  const x = clamp01(t) * (stops.length - 1);
  const i = Math.min(Math.floor(x), stops.length - 2);
  const f = x - i;
  const a = stops[i];
  const b = stops[i + 1];
  return [
    Math.round(a[0] + (b[0] - a[0]) * f),
    Math.round(a[1] + (b[1] - a[1]) * f),
    Math.round(a[2] + (b[2] - a[2]) * f),
  ];
}

export function cssColor([r, g, b]: Rgb): string {
  return `rgb(${r}, ${g}, ${b})`;
}

// Suppression pulls a color toward neutral grey as certainty drops:
// factor 1 keeps the ramp color, factor 0 is fully suppressed.
const NEUTRAL: Rgb = [142, 144, 146];

export function suppress(color: Rgb, factor: number): Rgb {
  const f = clamp01(factor);
  return [
    Math.round(NEUTRAL[0] + (color[0] - NEUTRAL[0]) * f),
    Math.round(NEUTRAL[1] + (color[1] - NEUTRAL[1]) * f),
    Math.round(NEUTRAL[2] + (color[2] - NEUTRAL[2]) * f),
  ];
}

export interface VsupQuantizerSpec {
  layers: number;
  branching: number;
}

// color table indexed [layer][bin]; layer 0 is the single suppressed root
export function vsupColorTable(q: VsupQuantizerSpec, palette: PaletteId): Rgb[][] {
  const table: Rgb[][] = [];
  for (let layer = 0; layer < q.layers; layer++) {
    const bins = q.branching ** layer;
    const factor = q.layers === 1 ? 1 : layer / (q.layers - 1);
    const row: Rgb[] = [];
    for (let b = 0; b < bins; b++) {
      row.push(suppress(sampleRamp(palette, (b + 0.5) / bins), factor));
    }
    table.push(row);
  }
  return table;
}

// plain (non-VSUP) coloring of a normalized value
export function plainColor(palette: PaletteId, valueNorm: number): Rgb {
  return sampleRamp(palette, valueNorm);
}
