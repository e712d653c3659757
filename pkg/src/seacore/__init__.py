"""seacore: offline workspace for seafloor sediment-core sampling analysis."""

__version__ = "0.1.0"
