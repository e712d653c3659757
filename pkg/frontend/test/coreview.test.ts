import { describe, expect, it } from "vitest";

import { HorizonEntry } from "../src/api";
import { buildColumn, normalize, sharedDepthRange } from "../src/coreview";

const INFO = { observed_min: 0, observed_max: 10 };

describe("normalize", () => {
  it("maps the observed range onto [0,1]", () => {
    expect(normalize(0, INFO)).toBe(0);
    expect(normalize(10, INFO)).toBe(1);
    expect(normalize(5, INFO)).toBe(0.5);
  });

  it("degenerate or missing ranges collapse to 0", () => {
    expect(normalize(5, { observed_min: 5, observed_max: 5 })).toBe(0);
    expect(normalize(5, { observed_min: null, observed_max: null })).toBe(0);
  });
});

describe("buildColumn", () => {
  // acceptance: a 3 cm horizon resampled at 1 cm renders three duplicated
  // bars carrying the same repeated label
  it("renders duplicated bars with repeated labels for coarse horizons", () => {
    const entries: HorizonEntry[] = [
      { depth_cm: 0, value: 25.3, horizon_label: "0-3 cm" },
      { depth_cm: 1, value: 25.3, horizon_label: "0-3 cm" },
      { depth_cm: 2, value: 25.3, horizon_label: "0-3 cm" },
      { depth_cm: 3, value: 20.1, horizon_label: "3-6 cm" },
    ];
    const col = buildColumn("NA091_021", 1, entries, { observed_min: 0, observed_max: 30 }, "viridis");
    const first3 = col.rows.slice(0, 3);
    expect(first3.map((r) => r.label)).toEqual(["0-3 cm", "0-3 cm", "0-3 cm"]);
    expect(first3.map((r) => r.repeated)).toEqual([false, true, true]);
    // duplicated bars are identical in width and color
    expect(new Set(first3.map((r) => r.widthFrac)).size).toBe(1);
    expect(new Set(first3.map((r) => JSON.stringify(r.color))).size).toBe(1);
    expect(col.rows[3].repeated).toBe(false);
  });

  it("missing values render as gaps, not zero-width bars", () => {
    const entries: HorizonEntry[] = [
      { depth_cm: 0, value: 3, horizon_label: "0-1 cm" },
      { depth_cm: 1, value: null, horizon_label: "1-2 cm" },
      { depth_cm: 2, value: null, horizon_label: null },
    ];
    const col = buildColumn("c", 1, entries, INFO, "viridis");
    expect(col.rows[1].widthFrac).toBeNull();
    expect(col.rows[1].label).toBe("1-2 cm");
    expect(col.rows[2].label).toBeNull();
  });

  it("bar width grows with value", () => {
    const entries: HorizonEntry[] = [
      { depth_cm: 0, value: 2, horizon_label: "0-1 cm" },
      { depth_cm: 1, value: 8, horizon_label: "1-2 cm" },
    ];
    const col = buildColumn("c", 1, entries, INFO, "plasma");
    expect(col.rows[0].widthFrac!).toBeLessThan(col.rows[1].widthFrac!);
  });
});

describe("sharedDepthRange", () => {
  it("spans all selected cores for one common baseline", () => {
    const a = buildColumn(
      "a",
      1,
      [
        { depth_cm: 0, value: 1, horizon_label: "0-1 cm" },
        { depth_cm: 1, value: 1, horizon_label: "1-2 cm" },
      ],
      INFO,
      "viridis",
    );
    const b = buildColumn(
      "b",
      1,
      [
        { depth_cm: 2, value: 1, horizon_label: "2-3 cm" },
        { depth_cm: 5, value: 1, horizon_label: "5-6 cm" },
      ],
      INFO,
      "viridis",
    );
    expect(sharedDepthRange([a, b])).toEqual({ minCm: 0, maxCm: 6 });
    expect(sharedDepthRange([])).toEqual({ minCm: 0, maxCm: 0 });
  });
});
