"""
Module Core - Logique métier de l'application

Ce module contient la logique principale :
- Maxima par blocs (blocks)
- Ajustement Fréchet (frechet)
- Constantes asymptotiques (asymptotics, marshall_olkin)
- Niveaux de retour (returnlevel)
- Simulation et backtest (simulate, backtest_manager)
"""

from .errors import (
    DegenerateSampleError,
    ConvergenceError,
    EstimationError,
    InputError,
    QuadratureError,
    SlidingBlocksError,
)

__all__ = [
    'SlidingBlocksError',
    'InputError',
    'EstimationError',
    'DegenerateSampleError',
    'ConvergenceError',
    'QuadratureError'
]
