import numpy as np
import pytest

from seacore.geo import GeoPoint, make_frame
from seacore.interp import (
    GridSpec,
    SamplePoint,
    interpolate_sibson,
    nearest_sample_field,
    _scatter_direct,
    _scatter_intervals,
)

from oracles import sibson_continuous_mc, sibson_gather

ORIGIN = GeoPoint(23.9540, -108.8630)
FRAME = make_frame(ORIGIN)


def manual_spec(nx, ny, nz, cell=70):
    return GridSpec(
        origin=ORIGIN, frame=FRAME, cell_xy_cm=cell, nx=nx, ny=ny, nz=nz
    )


def point_at(ix, iy, iz, value, spec, core_id="p"):
    cell_m = spec.cell_xy_cm / 100.0
    return SamplePoint(
        x=(ix + 0.5) * cell_m,
        y=(iy + 0.5) * cell_m,
        depth_cm=iz,
        value=value,
        core_id=core_id,
        top_cm=iz,
        bottom_cm=iz + 1,
    )


def random_instance(rng, max_dim=7, max_points=6):
    """Random (points, spec, site voxels, site values) with distinct voxels."""
    nx, ny, nz = (int(v) for v in rng.integers(2, max_dim + 1, size=3))
    spec = manual_spec(nx, ny, nz)
    n_points = int(rng.integers(1, max_points + 1))
    taken = set()
    voxels = []
    while len(voxels) < n_points:
        v = (int(rng.integers(nx)), int(rng.integers(ny)), int(rng.integers(nz)))
        if v not in taken:
            taken.add(v)
            voxels.append(v)
    values = rng.uniform(-50, 50, size=len(voxels))
    points = [
        point_at(ix, iy, iz, float(val), spec, f"c{k}")
        for k, ((ix, iy, iz), val) in enumerate(zip(voxels, values))
    ]
    return points, spec, voxels, values


class TestExactness:
    def test_single_point_fills_grid_with_its_value(self):
        spec = manual_spec(5, 4, 3)
        grid = interpolate_sibson([point_at(2, 1, 1, 3.7, spec)], spec)
        assert np.all(grid.values == 3.7)
        assert grid.sample_mask.sum() == 1

    def test_sample_voxels_keep_their_values(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            points, spec, voxels, values = random_instance(rng)
            grid = interpolate_sibson(points, spec)
            for (ix, iy, iz), v in zip(voxels, values):
                assert grid.values[iz, iy, ix] == v
                assert grid.sample_mask[iz, iy, ix]

    def test_space_filling(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            points, spec, _, _ = random_instance(rng)
            grid = interpolate_sibson(points, spec)
            assert not np.isnan(grid.values).any()


class TestScatterGatherEquivalence:
    def test_bitwise_equal_on_random_instances(self):
        rng = np.random.default_rng(20240917)
        for _ in range(25):
            points, spec, voxels, values = random_instance(rng)
            grid = interpolate_sibson(points, spec)
            expect = sibson_gather(
                voxels,
                values,
                spec.dims,
                float(values.min()),
                float(values.max()),
            )
            assert np.array_equal(grid.values, expect), (
                spec.dims,
                voxels,
                values,
            )

    def test_output_within_input_range(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            points, spec, _, values = random_instance(rng)
            grid = interpolate_sibson(points, spec)
            assert grid.values.min() >= values.min()
            assert grid.values.max() <= values.max()

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        points, spec, _, _ = random_instance(rng, max_dim=6)
        a = interpolate_sibson(points, spec)
        b = interpolate_sibson(points, spec)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.sample_mask, b.sample_mask)


class TestScatterPathsAgree:
    """The interval path must match the donor-by-donor path numerically."""

    def test_same_counts_and_close_sums(self):
        rng = np.random.default_rng(99)
        for _ in range(10):
            points, spec, voxels, values = random_instance(rng, max_dim=9)
            idx, dist = nearest_sample_field(points, spec)
            d2 = np.rint(dist.ravel() ** 2).astype(np.int64)
            donor = values[idx.ravel()]
            sums_a, counts_a = _scatter_direct(d2, donor, spec.dims)
            sums_b, counts_b = _scatter_intervals(
                d2, idx.ravel(), values, spec.dims
            )
            assert np.array_equal(counts_a, counts_b)
            assert np.allclose(sums_a, sums_b, rtol=1e-12, atol=1e-9)


class TestContinuousOracle:
    def test_tetra_probes_match_mc(self):
        # small version of the acceptance check: one tetrahedral
        # configuration, probes inside the hull, generous tolerance
        spec = manual_spec(24, 24, 24, cell=7)
        sites = [(4, 4, 4), (19, 4, 6), (11, 19, 4), (11, 11, 19)]
        values = [10.0, 20.0, 30.0, 40.0]
        points = [
            point_at(ix, iy, iz, v, spec, f"c{k}")
            for k, ((ix, iy, iz), v) in enumerate(zip(sites, values))
        ]
        grid = interpolate_sibson(points, spec)

        rng = np.random.default_rng(5)
        site_pos = np.array([(x + 0.5, y + 0.5, z + 0.5) for x, y, z in sites])
        probes = [(11, 10, 8), (10, 8, 9), (12, 12, 10)]
        for ix, iy, iz in probes:
            q = np.array([ix + 0.5, iy + 0.5, iz + 0.5])
            mc = sibson_continuous_mc(site_pos, values, q, 30_000, rng)
            disc = grid.values[iz, iy, ix]
            assert disc == pytest.approx(mc, rel=0.10), (ix, iy, iz)
