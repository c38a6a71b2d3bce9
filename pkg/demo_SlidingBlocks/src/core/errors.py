"""
Errors - Hiérarchie des exceptions

Deux familles :
- InputError : préconditions violées, fichiers illisibles (code sortie 2)
- EstimationError : échecs numériques (code sortie 3)
"""


class SlidingBlocksError(Exception):
    """Base de toutes les erreurs de l'application"""


class InputError(SlidingBlocksError, ValueError):
    """Entrée invalide (paramètre hors domaine, fichier mal formé...)"""


class EstimationError(SlidingBlocksError, RuntimeError):
    """Échec d'une estimation ou d'un calcul numérique"""


class DegenerateSampleError(EstimationError):
    """Échantillon dégénéré : moins de 2 valeurs ou toutes égales"""


class ConvergenceError(EstimationError):
    """Le solveur n'a pas convergé (intervalle épuisé, itérations max)"""


class QuadratureError(EstimationError):
    """
    La quadrature adaptative n'a pas atteint la tolérance

    Attributes:
        diagnostics (dict): ier, message, abserr, neval...
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_ESTIMATION_ERROR = 3


def exit_code_for(exc):
    """
    Code de sortie CLI pour une exception

    Args:
        exc (BaseException): Exception levée

    Returns:
        int: 2 (entrée), 3 (estimation/numérique)
    """
    if isinstance(exc, EstimationError):
        return EXIT_ESTIMATION_ERROR
    if isinstance(exc, (InputError, FileNotFoundError, ValueError)):
        return EXIT_INPUT_ERROR
    return EXIT_ESTIMATION_ERROR
