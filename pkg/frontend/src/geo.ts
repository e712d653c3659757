// Equirectangular frame math matching the backend: fixed meters per degree
// of latitude, cosine-scaled longitude. Only used for display (viewport
// extents, screen transforms); all data numerics come from the service.

export const METERS_PER_DEG_LAT = 111_320;

export interface GeoPoint {
  lat: number;
  lon: number;
}

export interface GeoRect {
  west: number;
  east: number;
  south: number;
  north: number;
}

export function metersPerDegLon(lat: number): number {
  return METERS_PER_DEG_LAT * Math.cos((lat * Math.PI) / 180);
}

export function boundingRect(points: GeoPoint[]): GeoRect {
  if (points.length === 0) throw new Error("boundingRect of no points");
  return {
    west: Math.min(...points.map((p) => p.lon)),
    east: Math.max(...points.map((p) => p.lon)),
    south: Math.min(...points.map((p) => p.lat)),
    north: Math.max(...points.map((p) => p.lat)),
  };
}

export function rectContains(rect: GeoRect, p: GeoPoint): boolean {
  return (
    p.lon >= rect.west && p.lon <= rect.east && p.lat >= rect.south && p.lat <= rect.north
  );
}

// width/height of a rectangle in meters, measured at its midpoint
export function rectExtentMeters(rect: GeoRect): { width: number; height: number } {
  const midLat = (rect.south + rect.north) / 2;
  return {
    width: (rect.east - rect.west) * metersPerDegLon(midLat),
    height: (rect.north - rect.south) * METERS_PER_DEG_LAT,
  };
}
