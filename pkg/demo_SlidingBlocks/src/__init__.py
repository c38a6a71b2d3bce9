"""
__init__.py - Package src

Inférence Fréchet sur maxima par blocs glissants et disjoints
"""

__version__ = "1.0.0"
