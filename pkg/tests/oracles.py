"""Independent reference implementations used to pin expected test values.

Nothing in here imports the interpolation internals it is checking; the
whole point is that these stay naive and obviously correct.
"""

from __future__ import annotations

import math

import numpy as np

EARTH_RADIUS_M = 6_371_000.0


def haversine_m(lat1, lon1, lat2, lon2):
    """Great-circle distance in meters on a spherical Earth."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(math.sqrt(a))


def nearest_site_brute(sites, dims):
    """Exact nearest sample voxel per grid voxel in index space.

    sites: (S, 3) int array of (ix, iy, iz) sample voxels, ordered by owning
    point index ascending. Ties go to the earliest site in that order.
    Returns (site_index, dist2) arrays of shape (nz, ny, nx).
    """
    nx, ny, nz = dims
    iz, iy, ix = np.indices((nz, ny, nx))
    best_d2 = np.full((nz, ny, nx), np.iinfo(np.int64).max, dtype=np.int64)
    best_site = np.zeros((nz, ny, nx), dtype=np.int64)
    for s, (sx, sy, sz) in enumerate(sites):
        d2 = (ix - sx) ** 2 + (iy - sy) ** 2 + (iz - sz) ** 2
        closer = d2 < best_d2
        best_d2[closer] = d2[closer]
        best_site[closer] = s
    return best_site, best_d2


def sibson_gather(site_voxels, site_values, dims, vmin, vmax):
    """Brute-force gather form of discrete Sibson natural neighbors.

    For each voxel q, averages v(s(x)) over every donor voxel x whose
    nearest-site distance d(x) satisfies ||x - q|| <= d(x). Donors are summed
    in increasing flat-index order with plain float64 adds so the result is
    bit-comparable with a scatter implementation that accumulates in the
    same order. Voxels holding a sample are pinned to that sample's value,
    and means are clamped to the input value range.
    """
    nx, ny, nz = dims
    sites = np.asarray(site_voxels, dtype=np.int64)
    site_idx, site_d2 = nearest_site_brute(sites, dims)
    donor_val = np.asarray(site_values, dtype=np.float64)[site_idx]

    out = np.zeros((nz, ny, nx), dtype=np.float64)
    for qz in range(nz):
        for qy in range(ny):
            for qx in range(nx):
                acc = 0.0
                n = 0
                # flat order: ix fastest, then iy, then iz
                for xz in range(nz):
                    for xy in range(ny):
                        for xx in range(nx):
                            dq = (xx - qx) ** 2 + (xy - qy) ** 2 + (xz - qz) ** 2
                            if dq <= site_d2[xz, xy, xx]:
                                acc = acc + float(donor_val[xz, xy, xx])
                                n += 1
                out[qz, qy, qx] = min(max(acc / n, vmin), vmax)

    for s, (sx, sy, sz) in enumerate(sites):
        out[sz, sy, sx] = site_values[s]
    return out


def sibson_continuous_mc(sites, values, query, n_rays, rng):
    """Monte-Carlo continuous Sibson estimate at one query point.

    Weights each site by the volume its Voronoi cell would lose to a new
    site inserted at ``query``. The stolen cell is convex (an intersection
    of half-spaces containing the query), so it is integrated in spherical
    coordinates: for a uniformly random direction u the cell boundary lies
    at r_max(u) = min over sites with dot(p_i - q, u) > 0 of
    |p_i - q|^2 / (2 dot(p_i - q, u)); radius is sampled uniformly in
    volume along the ray and each ray carries weight r_max(u)^3.
    """
    sites = np.asarray(sites, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    q = np.asarray(query, dtype=np.float64)

    u = rng.normal(size=(n_rays, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)

    d = sites - q  # (S, 3)
    dots = u @ d.T  # (n_rays, S)
    norms2 = np.sum(d * d, axis=1)  # (S,)
    with np.errstate(divide="ignore"):
        bound = np.where(dots > 0, norms2 / (2.0 * dots), np.inf)
    r_max = bound.min(axis=1)
    if not np.all(np.isfinite(r_max)):
        raise ValueError("query outside the convex hull: stolen cell unbounded")

    r = r_max * rng.random(n_rays) ** (1.0 / 3.0)
    y = q + u * r[:, None]
    owner = np.argmin(
        np.sum((y[:, None, :] - sites[None, :, :]) ** 2, axis=2), axis=1
    )
    w_ray = r_max**3
    total = w_ray.sum()
    weights = np.array(
        [w_ray[owner == s].sum() / total for s in range(len(sites))]
    )
    return float(weights @ values)
