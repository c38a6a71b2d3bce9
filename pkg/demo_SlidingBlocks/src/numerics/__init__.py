"""
Module Numerics - Outils numériques

- Fonctions spéciales et constantes (special)
- Quadrature adaptative (quadrature)
- Recherche de racine (rootfind)
"""
