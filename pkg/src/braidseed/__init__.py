"""
braidseed: cluster seeds of braid varieties from Demazure weaves.

Given a simple Lie type and a positive braid word the package builds a
Demazure weave, extracts the associated cluster seed (quiver, symmetrizers,
Poisson data, and exact polynomial cluster variables), and exposes seed
operations: mutation, rotation, Donaldson-Thomas transformations, Langlands
duality, and quasi-cluster comparisons.  A command line interface and a
small HTTP API sit on top.
"""

__version__ = "0.1.0"
