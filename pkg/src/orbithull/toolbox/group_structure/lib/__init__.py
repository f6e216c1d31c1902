"""
Normalizer and multiplicity computations used by the group structure tools.
"""
