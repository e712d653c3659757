// Interpolation launcher: request construction, job polling, and error
// surfacing. Grid sizes are offered strictly as multiples of 7 cm.

import { ApiClient, ApiError, InterpolationRequest, JobDoc, RequestFailed } from "./api";

export const CELL_INCREMENT_CM = 7;

export function gridSizeOptions(maxMultiple = 20): number[] {
  const out: number[] = [];
  for (let k = 1; k <= maxMultiple; k++) out.push(k * CELL_INCREMENT_CM);
  return out;
}

export function isValidCellSize(cm: number): boolean {
  return Number.isInteger(cm) && cm > 0 && cm % CELL_INCREMENT_CM === 0;
}

export function buildRequest(
  method: "linear" | "sibson",
  parameter: string,
  cellCm: number,
  coreIds: string[],
  paddingCells = 0,
  vsup = { layers: 4, branching: 2 },
): InterpolationRequest {
  if (!isValidCellSize(cellCm)) {
    throw new Error(`grid size must be a positive multiple of ${CELL_INCREMENT_CM} cm`);
  }
  if (coreIds.length === 0) throw new Error("select at least one core");
  return {
    method,
    parameter,
    cell_xy_cm: cellCm,
    core_ids: [...coreIds],
    padding_cells: paddingCells,
    vsup,
  };
}

export interface LaunchOutcome {
  job?: JobDoc;
  error?: ApiError;
}

// submit and poll until terminal; onUpdate fires on every status change
export async function runJob(
  client: ApiClient,
  request: InterpolationRequest,
  onUpdate?: (status: string) => void,
  pollMs = 150,
): Promise<LaunchOutcome> {
  let jobId: string;
  try {
    jobId = (await client.submitInterpolation(request)).job_id;
  } catch (err) {
    if (err instanceof RequestFailed) return { error: err.detail };
    throw err;
  }
  let last = "";
  for (;;) {
    const doc = await client.job(jobId);
    if (doc.status !== last) {
      last = doc.status;
      onUpdate?.(doc.status);
    }
    if (doc.status === "done") return { job: doc };
    if (doc.status === "failed") return { error: doc.error ?? { code: "failed", message: "job failed" } };
    await new Promise((r) => setTimeout(r, pollMs));
  }
}

// human-facing error line; degeneracy carries the method hint through
export function describeError(error: ApiError): string {
  let text = error.message;
  if (error.hint) text += ` (hint: ${error.hint})`;
  if (error.voxel_count) text += ` [${error.voxel_count} voxels]`;
  return text;
}
