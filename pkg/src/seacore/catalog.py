"""In-memory snapshot of cores, sample horizons, parameters, and map layers.

A catalog is immutable after construction: reloading data builds a fresh
snapshot, so concurrent readers never see partial state.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

from .errors import EmptySelectionError, NotFoundError
from .geo import GeoPoint, GeoRect, bounding_rect

PARAMETER_KINDS = ("physicochemical", "geochemical", "biological", "unknown")
MAP_KINDS = ("bathymetry", "photomosaic", "backscatter", "lidar", "other")


@dataclass(frozen=True)
class Core:
    """One sampled push core: identity, fate, date, geolocation."""

    core_id: str
    location_name: str
    date: dt.date
    core_fate: str
    position: GeoPoint
    extra_measurements: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.core_id:
            raise ValueError("core_id must be non-empty")


@dataclass(frozen=True)
class SampleHorizon:
    """One depth slice of a core with a sparse parameter map."""

    core_id: str
    top_cm: int
    bottom_cm: int
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.top_cm < 0:
            raise ValueError(f"top_cm {self.top_cm} must be >= 0")
        if self.bottom_cm <= self.top_cm:
            raise ValueError(
                f"bottom_cm {self.bottom_cm} must exceed top_cm {self.top_cm}"
            )

    @property
    def thickness_cm(self) -> int:
        return self.bottom_cm - self.top_cm

    @property
    def label(self) -> str:
        return f"{self.top_cm}-{self.bottom_cm} cm"


@dataclass(frozen=True)
class ParameterInfo:
    name: str
    kind: str = "unknown"
    observed_min: float | None = None
    observed_max: float | None = None

    def __post_init__(self):
        if self.kind not in PARAMETER_KINDS:
            raise ValueError(f"unknown parameter kind {self.kind!r}")
        if (
            self.observed_min is not None
            and self.observed_max is not None
            and self.observed_min > self.observed_max
        ):
            raise ValueError("observed_min exceeds observed_max")


@dataclass(frozen=True)
class MapLayer:
    """A georeferenced seafloor image."""

    layer_id: str
    title: str
    kind: str
    image_ref: str
    bounds: GeoRect
    native_resolution_cm: float

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.bounds.west == self.bounds.east or self.bounds.south == self.bounds.north:
            raise ValueError(f"layer {self.layer_id}: degenerate bounds")


@dataclass(frozen=True)
class CoreFilter:
    """Conjunction of optional criteria; None means 'no constraint'."""

    location_name: str | None = None
    date_from: dt.date | None = None
    date_to: dt.date | None = None
    core_fate: str | None = None

    def __post_init__(self):
        if (
            self.date_from is not None
            and self.date_to is not None
            and self.date_from > self.date_to
        ):
            raise ValueError("date_from exceeds date_to")

    def matches(self, core: Core) -> bool:
        if self.location_name is not None and core.location_name != self.location_name:
            return False
        if self.date_from is not None and core.date < self.date_from:
            return False
        if self.date_to is not None and core.date > self.date_to:
            return False
        if self.core_fate is not None and core.core_fate != self.core_fate:
            return False
        return True


@dataclass(frozen=True)
class Selection:
    """An ordered set of selected cores plus their rectangular hull."""

    core_ids: tuple[str, ...]
    hull: GeoRect

    def __post_init__(self):
        if not self.core_ids:
            raise ValueError("selection must contain at least one core")
        if len(set(self.core_ids)) != len(self.core_ids):
            raise ValueError("selection core_ids must be unique")


@dataclass(frozen=True)
class DepthSample:
    """One resampled step: value (if measured) and the owning horizon label.

    ``horizon_label`` is None where no horizon covers the depth at all;
    ``value`` alone is None where a horizon exists but lacks the parameter.
    """

    depth_cm: int
    value: float | None
    horizon_label: str | None


class Catalog:
    """Immutable queryable snapshot; populated by the ingest module."""

    def __init__(
        self,
        cores: list[Core],
        horizons: list[SampleHorizon],
        parameters: list[ParameterInfo],
        layers: list[MapLayer],
    ):
        self._cores: dict[str, Core] = {}
        for core in cores:
            if core.core_id in self._cores:
                raise ValueError(f"duplicate core_id {core.core_id!r}")
            self._cores[core.core_id] = core

        by_core: dict[str, list[SampleHorizon]] = {}
        for h in horizons:
            by_core.setdefault(h.core_id, []).append(h)
        self._horizons: dict[str, tuple[SampleHorizon, ...]] = {}
        for core_id, hs in by_core.items():
            hs.sort(key=lambda h: h.top_cm)
            for a, b in zip(hs, hs[1:]):
                if b.top_cm < a.bottom_cm:
                    raise ValueError(
                        f"core {core_id}: horizons {a.label} and {b.label} overlap"
                    )
            self._horizons[core_id] = tuple(hs)

        self._parameters = {p.name: p for p in parameters}
        self._layers = {m.layer_id: m for m in layers}

    # -- plain accessors ---------------------------------------------------

    @property
    def cores(self) -> list[Core]:
        return list(self._cores.values())

    @property
    def parameters(self) -> list[ParameterInfo]:
        return list(self._parameters.values())

    @property
    def layers(self) -> list[MapLayer]:
        return list(self._layers.values())

    def core(self, core_id: str) -> Core:
        try:
            return self._cores[core_id]
        except KeyError:
            raise NotFoundError(f"unknown core {core_id!r}") from None

    def layer(self, layer_id: str) -> MapLayer:
        try:
            return self._layers[layer_id]
        except KeyError:
            raise NotFoundError(f"unknown map layer {layer_id!r}") from None

    def parameter(self, name: str) -> ParameterInfo:
        try:
            return self._parameters[name]
        except KeyError:
            raise NotFoundError(f"unknown parameter {name!r}") from None

    def all_horizons(self) -> list[SampleHorizon]:
        """Every horizon, including ones referencing cores not in the catalog."""
        return [h for hs in self._horizons.values() for h in hs]

    # -- queries -----------------------------------------------------------

    def filter_cores(self, flt: CoreFilter | None = None) -> list[Core]:
        """Cores matching every present criterion, ordered by (date, core_id)."""
        flt = flt or CoreFilter()
        matched = [c for c in self._cores.values() if flt.matches(c)]
        matched.sort(key=lambda c: (c.date, c.core_id))
        return matched

    def select_in_rect(self, rect: GeoRect, flt: CoreFilter | None = None) -> Selection:
        """Select the filtered cores whose position lies inside ``rect``."""
        chosen = [c for c in self.filter_cores(flt) if rect.contains(c.position)]
        if not chosen:
            raise EmptySelectionError("no cores inside the selection rectangle")
        return self.make_selection([c.core_id for c in chosen])

    def make_selection(self, core_ids: list[str]) -> Selection:
        """Build a Selection from explicit core ids, preserving their order."""
        seen = set()
        ordered = []
        for cid in core_ids:
            if cid not in seen:
                seen.add(cid)
                ordered.append(cid)
        positions = [self.core(cid).position for cid in ordered]
        return Selection(core_ids=tuple(ordered), hull=bounding_rect(positions))

    def horizons_of(self, core_id: str) -> list[SampleHorizon]:
        """Horizons of one core, ordered by top_cm. Raises on unknown cores."""
        self.core(core_id)
        return list(self._horizons.get(core_id, ()))

    def resample_to_smallest_step(
        self, selection: Selection, parameter: str, step: int | None = None
    ) -> dict[str, list[DepthSample]]:
        """Resample each selected core's horizons onto a shared depth step.

        The step defaults to the smallest horizon thickness across the
        selection; a horizon spanning k steps contributes k consecutive
        entries carrying the same value and a repeated label, so coarse
        horizons stay visibly coarse.
        """
        self.parameter(parameter)
        per_core = {cid: self.horizons_of(cid) for cid in selection.core_ids}
        thicknesses = [h.thickness_cm for hs in per_core.values() for h in hs]
        if step is None:
            step = min(thicknesses) if thicknesses else 1
        if step <= 0:
            raise ValueError(f"step must be positive, got {step}")

        out: dict[str, list[DepthSample]] = {}
        for cid, hs in per_core.items():
            samples: list[DepthSample] = []
            if hs:
                lo = min(h.top_cm for h in hs)
                hi = max(h.bottom_cm for h in hs)
                for depth in range(lo, hi, step):
                    cover = next(
                        (h for h in hs if h.top_cm <= depth < h.bottom_cm), None
                    )
                    if cover is None:
                        samples.append(DepthSample(depth, None, None))
                    else:
                        samples.append(
                            DepthSample(depth, cover.params.get(parameter), cover.label)
                        )
            out[cid] = samples
        return out
