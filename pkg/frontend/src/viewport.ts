// Map viewport state and its screen transform. All operations are pure:
// they return a new state, which makes the "layer switch leaves the
// viewport untouched" guarantee trivial to uphold and to test.

import {
  GeoPoint,
  GeoRect,
  METERS_PER_DEG_LAT,
  metersPerDegLon,
  rectExtentMeters,
} from "./geo";

export interface ViewportState {
  center: GeoPoint;
  // screen pixels per meter on the ground
  scale: number;
  activeLayerId: string;
}

export function makeViewport(center: GeoPoint, scale: number, layerId: string): ViewportState {
  if (scale <= 0) throw new Error(`scale must be positive, got ${scale}`);
  return { center: { ...center }, scale, activeLayerId: layerId };
}

// Switching layers must preserve the numbers exactly; only the id changes.
export function switchLayer(state: ViewportState, layerId: string): ViewportState {
  return { center: state.center, scale: state.scale, activeLayerId: layerId };
}

export function panByPixels(state: ViewportState, dxPx: number, dyPx: number): ViewportState {
  const dxM = dxPx / state.scale;
  const dyM = dyPx / state.scale;
  return {
    ...state,
    center: {
      lat: state.center.lat + dyM / METERS_PER_DEG_LAT,
      lon: state.center.lon - dxM / metersPerDegLon(state.center.lat),
    },
  };
}

export function zoomBy(state: ViewportState, factor: number): ViewportState {
  if (factor <= 0) throw new Error("zoom factor must be positive");
  return { ...state, scale: state.scale * factor };
}

export function fitRect(rect: GeoRect, widthPx: number, heightPx: number, layerId: string): ViewportState {
  const { width, height } = rectExtentMeters(rect);
  const scale = Math.min(widthPx / Math.max(width, 1e-6), heightPx / Math.max(height, 1e-6)) * 0.9;
  return makeViewport(
    { lat: (rect.south + rect.north) / 2, lon: (rect.west + rect.east) / 2 },
    scale,
    layerId,
  );
}

// geographic point -> canvas pixel, y growing downward
export function toScreen(state: ViewportState, p: GeoPoint, widthPx: number, heightPx: number): { x: number; y: number } {
  const dxM = (p.lon - state.center.lon) * metersPerDegLon(state.center.lat);
  const dyM = (p.lat - state.center.lat) * METERS_PER_DEG_LAT;
  return { x: widthPx / 2 + dxM * state.scale, y: heightPx / 2 - dyM * state.scale };
}

export function fromScreen(state: ViewportState, x: number, y: number, widthPx: number, heightPx: number): GeoPoint {
  const dxM = (x - widthPx / 2) / state.scale;
  const dyM = (heightPx / 2 - y) / state.scale;
  return {
    lat: state.center.lat + dyM / METERS_PER_DEG_LAT,
    lon: state.center.lon + dxM / metersPerDegLon(state.center.lat),
  };
}

// what the current screen shows, in ground meters (the on-map readout)
export function visibleExtentMeters(state: ViewportState, widthPx: number, heightPx: number): { width: number; height: number } {
  return { width: widthPx / state.scale, height: heightPx / state.scale };
}

export function visibleRect(state: ViewportState, widthPx: number, heightPx: number): GeoRect {
  const sw = fromScreen(state, 0, heightPx, widthPx, heightPx);
  const ne = fromScreen(state, widthPx, 0, widthPx, heightPx);
  return { west: sw.lon, east: ne.lon, south: sw.lat, north: ne.lat };
}
