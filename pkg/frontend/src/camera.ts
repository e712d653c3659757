// Orbit camera state for the interpolation view. The state lives outside
// the three.js scene, so rebuilding the scene (new method, grid size, or
// palette) cannot disturb the camera; views read it every frame.

export interface CameraState {
  // spherical orbit around the target, radians
  theta: number;
  phi: number;
  distance: number;
  target: { x: number; y: number; z: number };
}

export function defaultCamera(sceneRadius: number): CameraState {
  return {
    theta: Math.PI / 4,
    phi: Math.PI / 3.2,
    distance: sceneRadius * 2.4,
    target: { x: 0, y: 0, z: 0 },
  };
}

const PHI_MIN = 0.05;
const PHI_MAX = Math.PI - 0.05;

export function rotate(cam: CameraState, dTheta: number, dPhi: number): CameraState {
  return {
    ...cam,
    theta: cam.theta + dTheta,
    phi: Math.min(Math.max(cam.phi + dPhi, PHI_MIN), PHI_MAX),
  };
}

// pan in the horizontal plane (the latitude/longitude plane of the grid)
export function pan(cam: CameraState, dx: number, dy: number): CameraState {
  const s = Math.sin(cam.theta);
  const c = Math.cos(cam.theta);
  return {
    ...cam,
    target: {
      x: cam.target.x + (dx * c - dy * s) * cam.distance * 0.002,
      y: cam.target.y,
      z: cam.target.z + (dx * s + dy * c) * cam.distance * 0.002,
    },
  };
}

export function dolly(cam: CameraState, factor: number): CameraState {
  return { ...cam, distance: Math.min(Math.max(cam.distance * factor, 0.05), 1e6) };
}

export function cameraPosition(cam: CameraState): { x: number; y: number; z: number } {
  const sp = Math.sin(cam.phi);
  return {
    x: cam.target.x + cam.distance * sp * Math.cos(cam.theta),
    y: cam.target.y + cam.distance * Math.cos(cam.phi),
    z: cam.target.z + cam.distance * sp * Math.sin(cam.theta),
  };
}
