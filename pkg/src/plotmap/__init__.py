"""plotmap: procedural polygon maps, spatial constraints over plot facilities,
task generation, a sequential layout environment, and baseline solvers."""

__version__ = "0.1.0"
