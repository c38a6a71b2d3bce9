"""
Module UI - Interface Utilisateur

- Affichage console (Display)
- Émission JSON / CSV / table (Output)
"""

from .display import Display
from .output import Output

__all__ = [
    'Display',
    'Output'
]
