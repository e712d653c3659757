"""Map annotation strokes with linear undo/redo history and persistence.

Strokes live in geographic coordinates, so a drawing made over one map
layer lands in the same place on any other layer. The log is immutable:
every operation returns a new log, which lets the service hand out
snapshots without locking readers.
"""

from __future__ import annotations

import datetime as dt
import json
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .geo import GeoPoint

STROKE_COLORS = 6


@dataclass(frozen=True)
class AnnotationStroke:
    stroke_id: str
    color_index: int
    path: tuple[GeoPoint, ...]
    note: str | None = None
    created_at: str = ""

    def __post_init__(self):
        if not 0 <= self.color_index < STROKE_COLORS:
            raise ValueError(
                f"color_index must be in [0, {STROKE_COLORS - 1}], "
                f"got {self.color_index}"
            )
        if len(self.path) < 2:
            raise ValueError("stroke path needs at least 2 points")


def new_stroke(
    color_index: int,
    path: list[GeoPoint],
    note: str | None = None,
    created_at: str | None = None,
) -> AnnotationStroke:
    return AnnotationStroke(
        stroke_id=uuid.uuid4().hex,
        color_index=color_index,
        path=tuple(path),
        note=note,
        created_at=created_at
        or dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    )


@dataclass(frozen=True)
class AnnotationLog:
    """Applied strokes plus the redo stack (most recently undone last)."""

    applied: tuple[AnnotationStroke, ...] = ()
    undone: tuple[AnnotationStroke, ...] = ()

    def add(self, stroke: AnnotationStroke) -> "AnnotationLog":
        """Append a stroke; a new action discards the redo stack."""
        return AnnotationLog(applied=self.applied + (stroke,), undone=())

    def undo(self) -> "AnnotationLog":
        """Move the last applied stroke to the redo stack; no-op when empty."""
        if not self.applied:
            return self
        return AnnotationLog(
            applied=self.applied[:-1], undone=self.undone + (self.applied[-1],)
        )

    def redo(self) -> "AnnotationLog":
        """Reapply the most recently undone stroke; no-op when empty."""
        if not self.undone:
            return self
        return AnnotationLog(
            applied=self.applied + (self.undone[-1],), undone=self.undone[:-1]
        )


def _stroke_to_dict(s: AnnotationStroke) -> dict:
    return {
        "stroke_id": s.stroke_id,
        "color_index": s.color_index,
        "path": [{"lat": p.lat, "lon": p.lon} for p in s.path],
        "note": s.note,
        "created_at": s.created_at,
    }


def _stroke_from_dict(d: dict) -> AnnotationStroke:
    return AnnotationStroke(
        stroke_id=str(d["stroke_id"]),
        color_index=int(d["color_index"]),
        path=tuple(GeoPoint(p["lat"], p["lon"]) for p in d["path"]),
        note=d.get("note"),
        created_at=str(d.get("created_at", "")),
    )


def log_to_doc(log: AnnotationLog) -> dict:
    return {
        "applied": [_stroke_to_dict(s) for s in log.applied],
        "undone": [_stroke_to_dict(s) for s in log.undone],
    }


def log_from_doc(doc: dict) -> AnnotationLog:
    return AnnotationLog(
        applied=tuple(_stroke_from_dict(d) for d in doc.get("applied", [])),
        undone=tuple(_stroke_from_dict(d) for d in doc.get("undone", [])),
    )


def persist(log: AnnotationLog, path: Path | str):
    """Write the full log, redo stack included, as JSON."""
    Path(path).write_text(json.dumps(log_to_doc(log), indent=2))


def load(path: Path | str) -> AnnotationLog:
    """Load a log persisted by :func:`persist`; missing file means empty."""
    p = Path(path)
    if not p.exists():
        return AnnotationLog()
    return log_from_doc(json.loads(p.read_text()))
