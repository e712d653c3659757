"""Geodesy between WGS84 latitude/longitude and a local metric frame.

Field sites span at most a few kilometers, so an equirectangular local
approximation is used everywhere: one degree of latitude is a fixed number
of meters and one degree of longitude shrinks with cos(latitude). Error
against a true great-circle distance stays below 0.5% for extents up to a
kilometer at moderate latitudes, which is invisible at site scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateFrameError

# Meters per degree of latitude in the local frame.
METERS_PER_DEG_LAT = 111_320.0

# Frames are rejected near the poles where cos(lat) collapses.
MAX_FRAME_LATITUDE = 89.0


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 latitude/longitude pair in degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"non-finite coordinates: ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class GeoRect:
    """Axis-aligned rectangle in degrees. Antimeridian crossings unsupported."""

    west: float
    east: float
    south: float
    north: float

    def __post_init__(self):
        # Reuse GeoPoint validation for the two corners.
        GeoPoint(self.south, self.west)
        GeoPoint(self.north, self.east)
        if self.west > self.east:
            raise ValueError(f"west {self.west} > east {self.east}")
        if self.south > self.north:
            raise ValueError(f"south {self.south} > north {self.north}")

    @property
    def midpoint(self) -> GeoPoint:
        return GeoPoint((self.south + self.north) / 2.0, (self.west + self.east) / 2.0)

    def contains(self, p: GeoPoint) -> bool:
        """Inclusive containment test."""
        return self.west <= p.lon <= self.east and self.south <= p.lat <= self.north


@dataclass(frozen=True)
class LocalFrame:
    """Equirectangular frame anchored at ``origin``; x east, y north, meters."""

    origin: GeoPoint
    meters_per_deg_lat: float
    meters_per_deg_lon: float


def make_frame(origin: GeoPoint) -> LocalFrame:
    """Build the local metric frame anchored at ``origin``.

    Raises DegenerateFrameError when |lat| >= 89 degrees, where the
    longitude scale factor degenerates.
    """
    if abs(origin.lat) >= MAX_FRAME_LATITUDE:
        raise DegenerateFrameError(
            f"cannot build a local frame at latitude {origin.lat}: "
            f"|lat| must be below {MAX_FRAME_LATITUDE} degrees"
        )
    mpd_lon = METERS_PER_DEG_LAT * math.cos(math.radians(origin.lat))
    return LocalFrame(origin, METERS_PER_DEG_LAT, mpd_lon)


def project(frame: LocalFrame, p: GeoPoint) -> tuple[float, float]:
    """Map a geographic point to (x east, y north) meters in ``frame``."""
    x = (p.lon - frame.origin.lon) * frame.meters_per_deg_lon
    y = (p.lat - frame.origin.lat) * frame.meters_per_deg_lat
    return x, y


def unproject(frame: LocalFrame, x: float, y: float) -> GeoPoint:
    """Inverse of :func:`project`; round-trips to <= 1e-9 degrees."""
    lon = frame.origin.lon + x / frame.meters_per_deg_lon
    lat = frame.origin.lat + y / frame.meters_per_deg_lat
    return GeoPoint(lat, lon)


def viewport_extent(rect: GeoRect) -> tuple[float, float]:
    """(width, height) of ``rect`` in meters, measured at its midpoint."""
    frame = make_frame(rect.midpoint)
    width = (rect.east - rect.west) * frame.meters_per_deg_lon
    height = (rect.north - rect.south) * frame.meters_per_deg_lat
    return width, height


def bounding_rect(points: list[GeoPoint]) -> GeoRect:
    """Smallest axis-aligned rectangle containing all ``points``."""
    if not points:
        raise ValueError("bounding_rect requires at least one point")
    return GeoRect(
        west=min(p.lon for p in points),
        east=max(p.lon for p in points),
        south=min(p.lat for p in points),
        north=max(p.lat for p in points),
    )
