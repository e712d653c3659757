"""Value-suppressing uncertainty palette quantization.

A quantizer is a tree of palette bins: the most uncertain layer collapses
to a single bin, and each step toward certainty multiplies the number of
value bins by the branching factor. The core stays color-agnostic: it
emits ramp positions in [0, 1] plus a per-layer suppression factor, and
the UI applies them to one of the named continuous color ramps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

PALETTES = ("viridis", "cividis", "greyscale", "inferno", "plasma", "magma")

DEFAULT_LAYERS = 4
DEFAULT_BRANCHING = 2


@dataclass(frozen=True)
class VsupQuantizer:
    layers: int = DEFAULT_LAYERS
    branching: int = DEFAULT_BRANCHING

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError(f"layers must be >= 1, got {self.layers}")
        if self.branching < 2:
            raise ValueError(f"branching must be >= 2, got {self.branching}")

    @property
    def leaf_bins(self) -> int:
        return self.branching ** (self.layers - 1)


@dataclass(frozen=True)
class BinRef:
    """layer 0 is the fully suppressed single bin; bin indexes within a layer."""

    layer: int
    bin: int


def _clamp01(v: float) -> float:
    if math.isnan(v):
        return 0.0
    return min(max(v, 0.0), 1.0)


def quantize(q: VsupQuantizer, value_norm: float, uncertainty: float) -> BinRef:
    """Map a normalized (value, uncertainty) pair to its palette bin.

    Inputs are clamped to [0, 1]. Full uncertainty lands in the single
    layer-0 bin regardless of value; zero uncertainty uses the finest
    layer with branching^(layers-1) value bins.
    """
    v = _clamp01(value_norm)
    u = _clamp01(uncertainty)
    layer = min(q.layers - 1, int((1.0 - u) * q.layers))
    bins = q.branching**layer
    return BinRef(layer=layer, bin=min(bins - 1, int(v * bins)))


def normalize_value(v: float, lo: float | None, hi: float | None) -> float:
    """(v - lo) / (hi - lo) into [0, 1]; degenerate ranges collapse to 0."""
    if lo is None or hi is None or hi <= lo:
        return 0.0
    return _clamp01((v - lo) / (hi - lo))


def suppression_factor(q: VsupQuantizer, layer: int) -> float:
    """1 at the most certain layer, 0 at the fully suppressed root.

    A single-layer quantizer has nothing to suppress, so its factor is 1.
    """
    if q.layers == 1:
        return 1.0
    return layer / (q.layers - 1)


def palette_table(q: VsupQuantizer, palette_id: str) -> list[dict]:
    """All bins of the quantizer with ramp positions and suppression.

    Each entry carries the bin's layer, index, the position on the named
    continuous ramp where its color is sampled (bin centers, evenly
    spaced), and the layer's suppression factor. Actual RGB values are a
    rendering concern and are left to the consumer.
    """
    pid = palette_id.lower()
    if pid not in PALETTES:
        raise ValueError(
            f"unknown palette {palette_id!r}; expected one of {', '.join(PALETTES)}"
        )
    table = []
    for layer in range(q.layers):
        bins = q.branching**layer
        for b in range(bins):
            table.append(
                {
                    "layer": layer,
                    "bin": b,
                    "ramp_position": (b + 0.5) / bins,
                    "suppression": suppression_factor(q, layer),
                    "palette": pid,
                }
            )
    return table
