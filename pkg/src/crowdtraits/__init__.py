"""Personality (OCEAN) and emotion (OCC) estimates from pedestrian trajectories."""

__version__ = "0.1.0"
