"""Mechanical obstruction certificates for cyclic torsion of elliptic curves
over number fields of small degree, with finite-field enumeration as an
independent oracle."""

__version__ = "0.1.0"
