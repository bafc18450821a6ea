"""Exact-arithmetic workbench for Hochschild cochain DGLAs, Maurer-Cartan
deformation theory, and jet-algebra comparison maps.

Everything is computed over exact fields (rationals or prime fields) and
every verified identity holds with defect exactly zero; there are no
tolerance thresholds anywhere.
"""

__version__ = "0.1.0"
