"""Exact construction and verification of Koszul-type complexes, their
duality maps and mapping cones over ZZ, QQ and GF(p)."""

__version__ = "0.1.0"
