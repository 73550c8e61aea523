"""fsmcheck: bounded model checking for synchronous finite-state models."""

__version__ = "0.1.0"
