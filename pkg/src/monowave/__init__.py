"""Random monochromatic waves and their nodal statistics."""

__version__ = "0.1.0"
