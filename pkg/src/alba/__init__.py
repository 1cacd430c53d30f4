"""A constructive ALBA workbench for lattice expansions."""

__version__ = "0.1.0"
