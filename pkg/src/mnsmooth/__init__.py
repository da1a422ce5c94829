"""Joint edge-probability estimation for multi-layer networks by two-step
neighbourhood smoothing."""

__version__ = "0.1.0"
