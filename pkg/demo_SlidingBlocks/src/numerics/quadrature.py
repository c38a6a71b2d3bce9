"""
Quadrature - Intégration numérique adaptative

Enveloppe autour de scipy.integrate.quad (QUADPACK, Gauss–Kronrod 21 points
avec subdivision adaptative et extrapolation) :
- Découpage aux points de non-dérivabilité (ex: w = 1/2 pour A_ξ)
- Diagnostics (erreur estimée, nombre d'évaluations)
- Échec explicite si la tolérance n'est pas atteinte
"""

import warnings
from dataclasses import dataclass

from scipy import integrate

from ..core.errors import QuadratureError
from ..io.logger import Logger

logger = Logger.get_logger("numerics.quadrature")


@dataclass(frozen=True)
class QuadratureResult:
    """Valeur de l'intégrale et diagnostics"""

    value: float
    abserr: float
    neval: int
    pieces: int


class AdaptiveQuadrature:
    """
    Intégrateur adaptatif avec tolérances centralisées

    Args:
        epsabs (float): Tolérance absolue demandée à QUADPACK
        epsrel (float): Tolérance relative demandée
        limit (int): Nombre max de sous-intervalles
        max_abserr (float): Erreur estimée au-delà de laquelle on échoue
    """

    def __init__(self, epsabs=1e-12, epsrel=1e-12, limit=200, max_abserr=1e-10):
        self.epsabs = epsabs
        self.epsrel = epsrel
        self.limit = limit
        self.max_abserr = max_abserr

    def integrate(self, func, a, b, breakpoints=()):
        """
        Intégrer func sur [a, b], en découpant aux points donnés

        Chaque morceau est intégré séparément : les singularités
        intégrables aux bornes sont traitées par l'extrapolation QAGS.

        Args:
            func (callable): Intégrande scalaire
            a (float): Borne inférieure
            b (float): Borne supérieure
            breakpoints (iterable): Points intérieurs de découpage

        Returns:
            QuadratureResult: Valeur + diagnostics

        Raises:
            QuadratureError: Si l'erreur estimée dépasse max_abserr

        Exemple:
            >>> quad = AdaptiveQuadrature()
            >>> quad.integrate(lambda w: w * w, 0.0, 1.0).value
            0.3333333333333333
        """
        edges = [a] + sorted(p for p in breakpoints if a < p < b) + [b]

        total = 0.0
        abserr = 0.0
        neval = 0

        for lo, hi in zip(edges[:-1], edges[1:]):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                value, err, info, *rest = integrate.quad(
                    func, lo, hi,
                    epsabs=self.epsabs,
                    epsrel=self.epsrel,
                    limit=self.limit,
                    full_output=1,
                )
            # QUADPACK ajoute un message uniquement en cas d'avertissement
            message = rest[0] if rest else ""
            neval += int(info.get("neval", 0))

            if message and err > self.max_abserr:
                diagnostics = {
                    "interval": [lo, hi],
                    "message": message,
                    "abserr": err,
                    "neval": neval,
                }
                raise QuadratureError(
                    f"Quadrature non convergée sur [{lo}, {hi}] : erreur estimée {err:.3e}",
                    diagnostics,
                )
            if message:
                logger.warning("quadrature_tolerance_relachee", interval=[lo, hi], abserr=err, message=message)

            total += value
            abserr += err

        if abserr > self.max_abserr:
            raise QuadratureError(
                f"Erreur de quadrature {abserr:.3e} > {self.max_abserr:.1e}",
                {"abserr": abserr, "neval": neval},
            )

        return QuadratureResult(value=total, abserr=abserr, neval=neval, pieces=len(edges) - 1)
