"""PT-symmetric superintegrable systems on spheres from complex reductions."""

__version__ = "0.1.0"
