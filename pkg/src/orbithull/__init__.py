"""
Antisymmetry, nilpotent cone and hull tools for compact group orbits.
"""

__version__ = "0.1.0"
