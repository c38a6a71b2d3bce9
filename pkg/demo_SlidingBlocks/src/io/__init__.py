"""
Module IO - Input/Output

Ce module contient la logique d'entrée/sortie :
- Lecture des séries CSV, JSON (DataLoader)
- Chargement et gestion configuration (ConfigLoader)
- Logging (Logger)
"""

from .logger import Logger
from .data_loader import DataLoader
from .config_loader import ConfigLoader

__all__ = [
    'DataLoader',
    'ConfigLoader',
    'Logger'
]
