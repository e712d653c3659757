"""3D interpolation of sparse core samples onto anisotropic voxel grids.

Two methods fill a grid whose cells are a multiple of 7 cm in the
horizontal and exactly 1 cm in depth:

* linear: barycentric interpolation over a Delaunay tetrahedralization of
  the sample points; voxel centers outside the convex hull stay empty.
* sibson: a discretized natural-neighbors scheme. Every voxel donates its
  nearest sample's value to all voxels within its nearest-sample distance,
  and each voxel averages what it received; the result is space-filling.

All distances (nearest-sample search, donation spheres) are measured in
voxel-index space, so one horizontal cell counts the same as one 1 cm
depth cell regardless of the physical cell size. Results therefore depend
on cell_xy_cm; this is deliberate and matches the render grid.

Determinism contract: identical inputs produce bit-identical grids. The
scatter accumulates donations in increasing donor flat-index order; grids
up to 32^3 voxels take a path whose floating-point rounding reproduces a
naive gather loop exactly, larger grids use an interval-prefix scheme that
is mathematically identical and exact for counts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .catalog import Catalog, Selection
from .errors import (
    DegeneracyError,
    GridTooLargeError,
    InvalidGridError,
    NoDataError,
    OutOfBoundsError,
)
from .geo import GeoPoint, LocalFrame, make_frame, project, unproject

log = logging.getLogger(__name__)

CELL_XY_INCREMENT_CM = 7
DEFAULT_VOXEL_CAP = 2_000_000

# Largest grid that uses the donor-by-donor scatter whose rounding matches
# a naive gather bit for bit; larger grids switch to the interval scheme.
DIRECT_SCATTER_MAX_VOXELS = 32 ** 3

METHODS = ("linear", "sibson")


@dataclass(frozen=True)
class SamplePoint:
    """One 1 cm slice of one core's horizon, in local-frame meters."""

    x: float
    y: float
    depth_cm: int
    value: float
    core_id: str
    top_cm: int
    bottom_cm: int


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a voxel grid; origin is the southwest corner."""

    origin: GeoPoint
    frame: LocalFrame
    cell_xy_cm: int
    nx: int
    ny: int
    nz: int
    cell_z_cm: int = 1

    @property
    def voxel_count(self) -> int:
        return self.nx * self.ny * self.nz

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.nx, self.ny, self.nz


@dataclass
class VoxelGrid:
    """Interpolated values plus aligned uncertainty and sample mask.

    Arrays are shaped (nz, ny, nx) so that C-order raveling yields the
    wire order ix fastest, then iy, then iz. NaN marks empty voxels.
    """

    spec: GridSpec
    parameter: str
    method: str
    values: np.ndarray
    uncertainty: np.ndarray
    sample_mask: np.ndarray


@dataclass(frozen=True)
class VirtualCoreSlice:
    top_cm: int
    bottom_cm: int
    value: float | None
    uncertainty: float
    interpolated: bool


@dataclass(frozen=True)
class VirtualCore:
    """A vertical voxel column formatted like a real core's horizon list."""

    position: GeoPoint
    parameter: str
    horizons: tuple[VirtualCoreSlice, ...]


# -- grid construction --------------------------------------------------------

def validate_cell_size(cell_xy_cm: int):
    if (
        not isinstance(cell_xy_cm, int)
        or cell_xy_cm <= 0
        or cell_xy_cm % CELL_XY_INCREMENT_CM != 0
    ):
        raise InvalidGridError(
            f"cell_xy_cm must be a positive multiple of "
            f"{CELL_XY_INCREMENT_CM}, got {cell_xy_cm!r}"
        )


def build_grid_spec(
    catalog: Catalog,
    selection: Selection,
    parameter: str,
    cell_xy_cm: int,
    padding_cells: int = 0,
    voxel_cap: int = DEFAULT_VOXEL_CAP,
) -> GridSpec:
    """Size a grid to the selection hull plus padding.

    Depth covers [0, max bottom_cm) of the horizons that carry the
    parameter, in 1 cm steps starting at the seafloor.
    """
    validate_cell_size(cell_xy_cm)
    if padding_cells < 0:
        raise ValueError("padding_cells must be >= 0")

    nz = 0
    for core_id in selection.core_ids:
        for h in catalog.horizons_of(core_id):
            if parameter in h.params:
                nz = max(nz, h.bottom_cm)
    if nz == 0:
        raise NoDataError(
            f"no selected horizon carries parameter {parameter!r}"
        )

    hull = selection.hull
    sw = make_frame(GeoPoint(hull.south, hull.west))
    width_m, height_m = project(sw, GeoPoint(hull.north, hull.east))
    cell_m = cell_xy_cm / 100.0
    nx = max(1, math.ceil(width_m / cell_m - 1e-9)) + 2 * padding_cells
    ny = max(1, math.ceil(height_m / cell_m - 1e-9)) + 2 * padding_cells
    origin = unproject(sw, -padding_cells * cell_m, -padding_cells * cell_m)

    count = nx * ny * nz
    if count > voxel_cap:
        raise GridTooLargeError(
            f"grid of {nx}x{ny}x{nz} = {count} voxels exceeds the cap of "
            f"{voxel_cap}; coarsen the grid or shrink the selection",
            voxel_count=count,
        )
    return GridSpec(
        origin=origin,
        frame=make_frame(origin),
        cell_xy_cm=cell_xy_cm,
        nx=nx,
        ny=ny,
        nz=nz,
    )


def gather_sample_points(
    catalog: Catalog,
    selection: Selection,
    parameter: str,
    frame: LocalFrame,
) -> list[SamplePoint]:
    """One point per (core, horizon, 1 cm sub-depth) carrying the parameter.

    A horizon of thickness k contributes k points with the same value, one
    per centimeter, so coarse horizons weigh like k thin ones. Points that
    coincide exactly in (x, y, depth), as paired cores do, are averaged
    into one point (values summed in sorted order, so the merge is
    order-invariant) and a warning is logged.
    """
    raw: list[SamplePoint] = []
    for core_id in selection.core_ids:
        core = catalog.core(core_id)
        x, y = project(frame, core.position)
        for h in catalog.horizons_of(core_id):
            if parameter not in h.params:
                continue
            value = h.params[parameter]
            for depth in range(h.top_cm, h.bottom_cm):
                raw.append(
                    SamplePoint(
                        x=x,
                        y=y,
                        depth_cm=depth,
                        value=value,
                        core_id=core_id,
                        top_cm=h.top_cm,
                        bottom_cm=h.bottom_cm,
                    )
                )
    if not raw:
        raise NoDataError(f"no sample point carries parameter {parameter!r}")

    grouped: dict[tuple[float, float, int], list[SamplePoint]] = {}
    for p in raw:
        grouped.setdefault((p.x, p.y, p.depth_cm), []).append(p)

    points: list[SamplePoint] = []
    for key, bucket in grouped.items():
        if len(bucket) == 1:
            points.append(bucket[0])
            continue
        mean = sum(sorted(p.value for p in bucket)) / len(bucket)
        first = bucket[0]
        log.warning(
            "averaged %d coincident samples at (%.3f, %.3f, %d cm) of %s",
            len(bucket),
            *key,
            ", ".join(p.core_id for p in bucket),
        )
        points.append(replace(first, value=mean))
    return points


# -- coordinate mapping --------------------------------------------------------

def _scaled_coords(points: list[SamplePoint], spec: GridSpec) -> np.ndarray:
    """Continuous voxel-index coordinates: one unit = one cell on each axis."""
    out = np.empty((len(points), 3), dtype=np.float64)
    for i, p in enumerate(points):
        out[i, 0] = p.x * 100.0 / spec.cell_xy_cm
        out[i, 1] = p.y * 100.0 / spec.cell_xy_cm
        out[i, 2] = p.depth_cm + 0.5
    return out


def _voxel_of(p: SamplePoint, spec: GridSpec) -> tuple[int, int, int]:
    ix = min(max(int(p.x * 100.0 // spec.cell_xy_cm), 0), spec.nx - 1)
    iy = min(max(int(p.y * 100.0 // spec.cell_xy_cm), 0), spec.ny - 1)
    iz = min(max(p.depth_cm, 0), spec.nz - 1)
    return ix, iy, iz


def _sample_sites(points: list[SamplePoint], spec: GridSpec):
    """Deduplicate points to voxels; the lowest point index owns a voxel.

    Returns (sites (S,3) int64 as (ix, iy, iz), owner point index (S,),
    site values (S,)), ordered by owner index ascending.
    """
    first: dict[tuple[int, int, int], int] = {}
    for i, p in enumerate(points):
        key = _voxel_of(p, spec)
        if key not in first:
            first[key] = i
    sites = np.array(list(first.keys()), dtype=np.int64)
    owners = np.array(list(first.values()), dtype=np.int64)
    values = np.array([points[i].value for i in owners], dtype=np.float64)
    return sites, owners, values


def _voxel_center_coords(spec: GridSpec) -> np.ndarray:
    """(V, 3) voxel centers in scaled index coordinates, flat wire order."""
    nx, ny, nz = spec.dims
    iz, iy, ix = np.meshgrid(
        np.arange(nz), np.arange(ny), np.arange(nx), indexing="ij"
    )
    q = np.empty((spec.voxel_count, 3), dtype=np.float64)
    q[:, 0] = ix.ravel() + 0.5
    q[:, 1] = iy.ravel() + 0.5
    q[:, 2] = iz.ravel() + 0.5
    return q


def _pin_samples(values: np.ndarray, sites: np.ndarray, site_values: np.ndarray):
    """Force exactness at data sites and return the sample mask."""
    mask = np.zeros(values.shape, dtype=bool)
    for (ix, iy, iz), v in zip(sites, site_values):
        values[iz, iy, ix] = v
        mask[iz, iy, ix] = True
    return mask


# -- linear barycentric --------------------------------------------------------

def barycentric_weights(points: list[SamplePoint], spec: GridSpec, queries: np.ndarray):
    """Raw simplex assignment and barycentric weights at scaled ``queries``.

    Returns (simplices (M,), vertex indices (M,4), weights (M,4)); entries
    with simplex -1 lie outside the convex hull. Weights are as computed,
    unclamped, so callers can check the partition of unity directly.
    """
    if len(points) < 4:
        raise DegeneracyError(
            f"linear interpolation needs at least 4 sample points, got "
            f"{len(points)}; use the sibson method instead"
        )
    coords = _scaled_coords(points, spec)
    try:
        tri = Delaunay(coords)
    except QhullError as e:
        raise DegeneracyError(
            "sample points are degenerate (collinear or coplanar) so no "
            "tetrahedralization exists; use the sibson method instead"
        ) from e

    simplex = tri.find_simplex(queries)
    inside = simplex >= 0
    weights = np.zeros((len(queries), 4), dtype=np.float64)
    verts = np.zeros((len(queries), 4), dtype=np.int64)
    if inside.any():
        s = simplex[inside]
        transform = tri.transform[s]
        b = np.einsum(
            "mij,mj->mi", transform[:, :3, :], queries[inside] - transform[:, 3, :]
        )
        weights[inside, :3] = b
        weights[inside, 3] = 1.0 - b.sum(axis=1)
        verts[inside] = tri.simplices[s]
    return simplex, verts, weights


def interpolate_linear(
    points: list[SamplePoint], spec: GridSpec, parameter: str = ""
) -> VoxelGrid:
    """Fill voxel centers inside the sample hull by barycentric weights.

    Negative sliver weights within -1e-12 are clamped to zero and the rest
    renormalized; centers outside the hull stay empty (NaN).
    """
    queries = _voxel_center_coords(spec)
    simplex, verts, weights = barycentric_weights(points, spec, queries)
    inside = simplex >= 0

    w = np.maximum(weights[inside], 0.0)
    w /= w.sum(axis=1, keepdims=True)
    point_values = np.array([p.value for p in points], dtype=np.float64)
    filled = np.sum(w * point_values[verts[inside]], axis=1)

    values = np.full(spec.voxel_count, np.nan, dtype=np.float64)
    values[inside] = filled
    values = values.reshape(spec.nz, spec.ny, spec.nx)

    sites, _, site_values = _sample_sites(points, spec)
    mask = _pin_samples(values, sites, site_values)
    return VoxelGrid(
        spec=spec,
        parameter=parameter,
        method="linear",
        values=values,
        uncertainty=np.zeros_like(values),
        sample_mask=mask,
    )


# -- nearest sample field ------------------------------------------------------

def _nearest_site_field(sites: np.ndarray, spec: GridSpec):
    """Exact per-voxel nearest site in integer index space.

    Sites must be ordered by owning point index ascending; ties keep the
    earliest site, so the lowest point index wins. Returns (site index
    (nz,ny,nx) int64, squared distance (nz,ny,nx) int64).
    """
    nx, ny, nz = spec.dims
    iz, iy, ix = np.meshgrid(
        np.arange(nz, dtype=np.int64),
        np.arange(ny, dtype=np.int64),
        np.arange(nx, dtype=np.int64),
        indexing="ij",
    )
    best_d2 = np.full((nz, ny, nx), np.iinfo(np.int64).max, dtype=np.int64)
    best_site = np.zeros((nz, ny, nx), dtype=np.int64)
    for s, (sx, sy, sz) in enumerate(sites):
        d2 = (ix - sx) ** 2 + (iy - sy) ** 2 + (iz - sz) ** 2
        closer = d2 < best_d2
        best_d2[closer] = d2[closer]
        best_site[closer] = s
    return best_site, best_d2


def nearest_sample_field(points: list[SamplePoint], spec: GridSpec):
    """Per-voxel (nearest point index, distance) in the voxel-index metric.

    Distance is measured between voxel centers after samples are snapped
    to their voxels; ties break to the lowest point index.
    """
    if not points:
        raise NoDataError("nearest_sample_field needs at least one point")
    sites, owners, _ = _sample_sites(points, spec)
    site_idx, d2 = _nearest_site_field(sites, spec)
    return owners[site_idx], np.sqrt(d2.astype(np.float64))


# -- discrete Sibson -----------------------------------------------------------

def _sorted_ball_offsets(d2max: int, dims: tuple[int, int, int]):
    """Integer offsets with squared norm <= d2max, sorted by squared norm.

    The ball for any smaller radius is a prefix of these arrays. Offsets
    are clipped per axis to the grid extent, since larger jumps can never
    land in bounds.
    """
    nx, ny, nz = dims
    r = math.isqrt(d2max)
    az = np.arange(-min(r, nz - 1), min(r, nz - 1) + 1, dtype=np.int64)
    ay = np.arange(-min(r, ny - 1), min(r, ny - 1) + 1, dtype=np.int64)
    ax = np.arange(-min(r, nx - 1), min(r, nx - 1) + 1, dtype=np.int64)
    dz, dy, dx = np.meshgrid(az, ay, ax, indexing="ij")
    dz, dy, dx = dz.ravel(), dy.ravel(), dx.ravel()
    n2 = dz * dz + dy * dy + dx * dx
    keep = n2 <= d2max
    dz, dy, dx, n2 = dz[keep], dy[keep], dx[keep], n2[keep]
    order = np.lexsort((dx, dy, dz, n2))
    return n2[order], dz[order], dy[order], dx[order]


def _scatter_direct(d2: np.ndarray, donor_values: np.ndarray, dims):
    """Donor-by-donor scatter in flat order; rounding matches a naive gather."""
    nx, ny, nz = dims
    volume = nx * ny * nz
    n2s, dzs, dys, dxs = _sorted_ball_offsets(int(d2.max()), dims)
    flat_offs = (dzs * ny + dys) * nx + dxs
    prefix = np.searchsorted(n2s, d2, side="right")
    radius = np.sqrt(d2.astype(np.float64)).astype(np.int64)

    iz, iy, ix = np.unravel_index(np.arange(volume), (nz, ny, nx))
    sums = np.zeros(volume, dtype=np.float64)
    counts = np.zeros(volume, dtype=np.int64)
    for f in range(volume):
        c = prefix[f]
        z, y, x = iz[f], iy[f], ix[f]
        r = radius[f]
        if (
            z - r >= 0
            and z + r < nz
            and y - r >= 0
            and y + r < ny
            and x - r >= 0
            and x + r < nx
        ):
            targets = flat_offs[:c] + f
        else:
            tz = dzs[:c] + z
            ty = dys[:c] + y
            tx = dxs[:c] + x
            ok = (tz >= 0) & (tz < nz) & (ty >= 0) & (ty < ny) & (tx >= 0) & (tx < nx)
            targets = (tz[ok] * ny + ty[ok]) * nx + tx[ok]
        sums[targets] += donor_values[f]
        counts[targets] += 1
    return sums, counts


def _ball_pair_table(d2: int, dims):
    """Per-(dz, dy) x-interval half-widths covering the ball of radius sqrt(d2).

    Rows whose |dz| or |dy| exceed the grid extent can never land in
    bounds and are dropped; x half-widths are capped at the grid width,
    which covers the same in-grid cells.
    """
    nx, ny, nz = dims
    r = math.isqrt(d2)
    az = np.arange(-min(r, nz - 1), min(r, nz - 1) + 1, dtype=np.int64)
    ry = np.sqrt((d2 - az * az).astype(np.float64)).astype(np.int64)
    ry = np.minimum(ry, ny - 1)
    reps = 2 * ry + 1
    dz_t = np.repeat(az, reps)
    step = np.arange(reps.sum(), dtype=np.int64)
    start = np.repeat(np.cumsum(reps) - reps, reps)
    dy_t = step - start - np.repeat(ry, reps)
    rx_t = np.sqrt((d2 - dz_t * dz_t - dy_t * dy_t).astype(np.float64)).astype(np.int64)
    return dz_t, dy_t, np.minimum(rx_t, nx - 1)


def _scatter_intervals(d2: np.ndarray, site_idx: np.ndarray, site_values: np.ndarray, dims, flush_cells=8_000_000):
    """Interval-prefix scatter: each donor stamps its ball as per-row
    x-intervals into difference arrays, resolved by one cumulative sum.

    Donors are processed one site at a time so all their donations share
    one value: interval endpoints accumulate through fast unweighted
    bincounts and are scaled by the site value on flush. The difference
    arrays are padded by the largest radius per axis, so no bounds
    masking is needed; padding is sliced away after the cumulative sum.
    Counts are exact integers; value sums agree with the direct scatter
    up to floating-point summation order.
    """
    nx, ny, nz = dims
    volume = nx * ny * nz
    rmax = math.isqrt(int(d2.max()))
    pz, py, px = min(rmax, nz - 1), min(rmax, ny - 1), min(rmax, nx - 1)
    npz, npy, row = nz + 2 * pz, ny + 2 * py, nx + 2 * px + 1
    width = npz * npy * row
    vdiff = np.zeros(width, dtype=np.float64)
    cdiff = np.zeros(width, dtype=np.int64)

    iz, iy, ix = np.unravel_index(np.arange(volume), (nz, ny, nx))
    izp, iyp, ixp = iz + pz, iy + py, ix + px

    for s, value in enumerate(site_values):
        in_site = np.flatnonzero(site_idx == s)
        d2_site = d2[in_site]
        lefts: list[np.ndarray] = []
        rights: list[np.ndarray] = []
        pending = 0

        def flush():
            nonlocal pending
            if not lefts:
                return
            delta = np.bincount(np.concatenate(lefts), minlength=width)
            delta -= np.bincount(np.concatenate(rights), minlength=width)
            cdiff[:] += delta
            vdiff[:] += value * delta
            lefts.clear()
            rights.clear()
            pending = 0

        for val in np.unique(d2_site):
            donors = in_site[d2_site == val]
            dz_t, dy_t, rx_t = _ball_pair_table(int(val), dims)
            per_chunk = max(1, flush_cells // max(len(dz_t), 1))
            for lo in range(0, len(donors), per_chunk):
                sel = donors[lo : lo + per_chunk]
                base = ((izp[sel][:, None] + dz_t) * npy + (iyp[sel][:, None] + dy_t)) * row
                left = base + (ixp[sel][:, None] - rx_t)
                lefts.append(left.ravel())
                rights.append((left + (2 * rx_t + 1)).ravel())
                pending += 2 * left.size
                if pending >= flush_cells:
                    flush()
        flush()

    sums = np.cumsum(vdiff.reshape(npz, npy, row), axis=2)
    counts = np.cumsum(cdiff.reshape(npz, npy, row), axis=2)
    sums = sums[pz : pz + nz, py : py + ny, px : px + nx].ravel()
    counts = counts[pz : pz + nz, py : py + ny, px : px + nx].ravel()
    return sums, counts


def interpolate_sibson(
    points: list[SamplePoint], spec: GridSpec, parameter: str = ""
) -> VoxelGrid:
    """Discrete Sibson natural neighbors; space-filling, no empty voxels.

    Each voxel x with nearest-sample distance d(x) donates its nearest
    sample's value to every voxel within d(x) of it (index metric, ties to
    the lowest point index); a voxel's value is the mean of its donations.
    Means are clamped to the input value range, and voxels holding a
    sample are pinned to that sample's value.
    """
    if not points:
        raise NoDataError("sibson interpolation needs at least one point")
    sites, _, site_values = _sample_sites(points, spec)
    site_idx, d2grid = _nearest_site_field(sites, spec)
    d2 = d2grid.ravel()

    if spec.voxel_count <= DIRECT_SCATTER_MAX_VOXELS:
        donor_values = site_values[site_idx].ravel()
        sums, counts = _scatter_direct(d2, donor_values, spec.dims)
    else:
        sums, counts = _scatter_intervals(d2, site_idx.ravel(), site_values, spec.dims)

    vmin = float(site_values.min())
    vmax = float(site_values.max())
    values = np.clip(sums / counts, vmin, vmax)
    values = values.reshape(spec.nz, spec.ny, spec.nx)
    mask = _pin_samples(values, sites, site_values)
    return VoxelGrid(
        spec=spec,
        parameter=parameter,
        method="sibson",
        values=values,
        uncertainty=np.zeros_like(values),
        sample_mask=mask,
    )


# -- uncertainty ---------------------------------------------------------------

def uncertainty_field(grid: VoxelGrid, distances: np.ndarray) -> VoxelGrid:
    """Normalize nearest-sample distances into [0, 1] uncertainty.

    Sample voxels get exactly 0; the farthest voxel gets exactly 1 unless
    the grid is fully sampled, in which case everything is 0.
    """
    d = np.asarray(distances, dtype=np.float64).reshape(grid.values.shape)
    dmax = d.max()
    uncertainty = np.zeros_like(d) if dmax == 0.0 else d / dmax
    return replace(grid, uncertainty=uncertainty)


# -- derived queries -----------------------------------------------------------

def extract_virtual_core(grid: VoxelGrid, p: GeoPoint) -> VirtualCore:
    """The vertical voxel column containing ``p``, one slice per cm."""
    spec = grid.spec
    x, y = project(spec.frame, p)
    ix = int(x * 100.0 // spec.cell_xy_cm)
    iy = int(y * 100.0 // spec.cell_xy_cm)
    if not (0 <= ix < spec.nx and 0 <= iy < spec.ny):
        raise OutOfBoundsError(
            f"({p.lat}, {p.lon}) lies outside the grid extent"
        )
    slices = []
    for iz in range(spec.nz):
        v = grid.values[iz, iy, ix]
        slices.append(
            VirtualCoreSlice(
                top_cm=iz,
                bottom_cm=iz + 1,
                value=None if math.isnan(v) else float(v),
                uncertainty=float(grid.uncertainty[iz, iy, ix]),
                interpolated=not bool(grid.sample_mask[iz, iy, ix]),
            )
        )
    return VirtualCore(position=p, parameter=grid.parameter, horizons=tuple(slices))


def clip_mask(
    grid: VoxelGrid,
    value_range: tuple[float, float] | None = None,
    x_cut: tuple[int, bool] | None = None,
    y_cut: tuple[int, bool] | None = None,
    z_cut: tuple[int, bool] | None = None,
) -> np.ndarray:
    """Per-voxel visibility under value-range and half-space clips.

    Axis cuts are (index bound, flip): unflipped keeps indices <= bound,
    flipped keeps the complement, so flipping partitions the grid. The
    grid itself is never modified.
    """
    nx, ny, nz = grid.spec.dims
    visible = np.ones((nz, ny, nx), dtype=bool)
    if value_range is not None:
        lo, hi = value_range
        with np.errstate(invalid="ignore"):
            visible &= (grid.values >= lo) & (grid.values <= hi)
    iz, iy, ix = np.meshgrid(
        np.arange(nz), np.arange(ny), np.arange(nx), indexing="ij"
    )
    for axis, cut in ((ix, x_cut), (iy, y_cut), (iz, z_cut)):
        if cut is None:
            continue
        bound, flip = cut
        keep = axis <= bound
        visible &= ~keep if flip else keep
    return visible


# -- pipeline and wire format --------------------------------------------------

def run_interpolation(
    catalog: Catalog,
    core_ids: list[str],
    parameter: str,
    method: str,
    cell_xy_cm: int,
    padding_cells: int = 0,
    voxel_cap: int = DEFAULT_VOXEL_CAP,
) -> VoxelGrid:
    """Full pipeline: selection -> grid spec -> points -> fill -> uncertainty.

    The CLI and the HTTP service both call this, so their outputs are
    bit-identical for the same request.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    catalog.parameter(parameter)
    selection = catalog.make_selection(core_ids)
    spec = build_grid_spec(
        catalog, selection, parameter, cell_xy_cm, padding_cells, voxel_cap
    )
    points = gather_sample_points(catalog, selection, parameter, spec.frame)
    if method == "linear":
        grid = interpolate_linear(points, spec, parameter)
    else:
        grid = interpolate_sibson(points, spec, parameter)
    _, distances = nearest_sample_field(points, spec)
    return uncertainty_field(grid, distances)


GRID_FORMAT = "voxel-grid/1"


def grid_to_doc(grid: VoxelGrid) -> dict:
    """Serialize to the JSON wire format: flat arrays, ix fastest, null=empty."""
    values = grid.values.ravel()
    finite = values[~np.isnan(values)]
    return {
        "format": GRID_FORMAT,
        "origin": {"lat": grid.spec.origin.lat, "lon": grid.spec.origin.lon},
        "cell_xy_cm": grid.spec.cell_xy_cm,
        "cell_z_cm": grid.spec.cell_z_cm,
        "nx": grid.spec.nx,
        "ny": grid.spec.ny,
        "nz": grid.spec.nz,
        "parameter": grid.parameter,
        "method": grid.method,
        "value_min": float(finite.min()) if finite.size else None,
        "value_max": float(finite.max()) if finite.size else None,
        "values": [None if math.isnan(v) else v for v in values.tolist()],
        "uncertainty": grid.uncertainty.ravel().tolist(),
        "sample_mask": [bool(b) for b in grid.sample_mask.ravel().tolist()],
    }


def grid_from_doc(doc: dict) -> VoxelGrid:
    """Rebuild a grid from its wire document."""
    if doc.get("format") != GRID_FORMAT:
        raise ValueError(f"unsupported grid format {doc.get('format')!r}")
    origin = GeoPoint(doc["origin"]["lat"], doc["origin"]["lon"])
    spec = GridSpec(
        origin=origin,
        frame=make_frame(origin),
        cell_xy_cm=int(doc["cell_xy_cm"]),
        nx=int(doc["nx"]),
        ny=int(doc["ny"]),
        nz=int(doc["nz"]),
        cell_z_cm=int(doc["cell_z_cm"]),
    )
    shape = (spec.nz, spec.ny, spec.nx)
    values = np.array(
        [np.nan if v is None else v for v in doc["values"]], dtype=np.float64
    ).reshape(shape)
    return VoxelGrid(
        spec=spec,
        parameter=doc["parameter"],
        method=doc["method"],
        values=values,
        uncertainty=np.array(doc["uncertainty"], dtype=np.float64).reshape(shape),
        sample_mask=np.array(doc["sample_mask"], dtype=bool).reshape(shape),
    )


def virtual_core_to_doc(core: VirtualCore) -> dict:
    return {
        "position": {"lat": core.position.lat, "lon": core.position.lon},
        "parameter": core.parameter,
        "horizons": [
            {
                "top_cm": s.top_cm,
                "bottom_cm": s.bottom_cm,
                "value": s.value,
                "uncertainty": s.uncertainty,
                "interpolated": s.interpolated,
            }
            for s in core.horizons
        ],
    }
