"""Test package for mm-rank-bounds."""
