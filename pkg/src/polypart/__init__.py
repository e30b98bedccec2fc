"""Disjoint polygon partitions of planar point sets."""
