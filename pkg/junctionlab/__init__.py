"""Simulation and fitting of asymmetric-gap superconducting tunnel junctions."""
