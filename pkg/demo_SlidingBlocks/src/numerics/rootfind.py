"""
RootFind - Recherche de racine 1-D sécurisée

Newton accéléré, protégé par un intervalle de bissection :
- Expansion géométrique de l'intervalle initial jusqu'à une limite
- Pas de Newton accepté seulement s'il reste dans l'intervalle
- Sinon bissection (géométrique pour une variable positive)
"""

import math
from dataclasses import dataclass

from ..core.errors import ConvergenceError


@dataclass(frozen=True)
class RootResult:
    """Racine et diagnostics du solveur"""

    root: float
    iterations: int
    residual: float
    bracket: tuple


def expand_bracket(func, lo, hi, lo_limit, hi_limit, factor=10.0):
    """
    Élargir [lo, hi] jusqu'à ce que func change de signe

    func doit être positive à gauche de la racine et négative à droite
    (fonction décroissante), ce qui est le cas du score profilé.

    Args:
        func (callable): Fonction scalaire
        lo (float): Borne gauche initiale > 0
        hi (float): Borne droite initiale
        lo_limit (float): Borne gauche minimale
        hi_limit (float): Borne droite maximale
        factor (float): Facteur d'expansion géométrique

    Returns:
        tuple: (lo, hi, f(lo), f(hi), expanded)

    Raises:
        ConvergenceError: Si aucun changement de signe dans [lo_limit, hi_limit]
    """
    f_lo = func(lo)
    f_hi = func(hi)
    expanded = False

    while f_lo <= 0.0 and lo > lo_limit:
        hi, f_hi = lo, f_lo
        lo = max(lo / factor, lo_limit)
        f_lo = func(lo)
        expanded = True

    while f_hi >= 0.0 and hi < hi_limit:
        lo, f_lo = hi, f_hi
        hi = min(hi * factor, hi_limit)
        f_hi = func(hi)
        expanded = True

    if not (f_lo > 0.0 > f_hi):
        raise ConvergenceError(
            f"Pas de changement de signe dans [{lo_limit:g}, {hi_limit:g}] "
            f"(f(lo)={f_lo:.3e}, f(hi)={f_hi:.3e})"
        )

    return lo, hi, f_lo, f_hi, expanded


def safeguarded_newton(func_and_derivative, lo, hi, x0=None, rtol=1e-12, max_iter=200):
    """
    Racine d'une fonction décroissante sur [lo, hi] (0 < lo < hi)

    Args:
        func_and_derivative (callable): x -> (f(x), f'(x))
        lo (float): Borne gauche, f(lo) > 0
        hi (float): Borne droite, f(hi) < 0
        x0 (float): Point de départ de Newton (défaut : moyenne géométrique)
        rtol (float): Tolérance relative sur x
        max_iter (int): Nombre max d'itérations

    Returns:
        RootResult: Racine, itérations, résidu |f|, intervalle final

    Raises:
        ConvergenceError: Si max_iter atteint

    Exemple:
        >>> res = safeguarded_newton(lambda x: (2.0 - x * x, -2.0 * x), 1.0, 2.0)
        >>> round(res.root, 12)
        1.414213562373
    """
    x = x0 if x0 is not None and lo < x0 < hi else math.sqrt(lo * hi)
    f, df = func_and_derivative(x)

    for iteration in range(1, max_iter + 1):
        if f == 0.0:
            return RootResult(root=x, iterations=iteration, residual=0.0, bracket=(lo, hi))

        # Resserrer l'intervalle (f décroissante)
        if f > 0.0:
            lo = x
        else:
            hi = x

        step_ok = df < 0.0 and math.isfinite(df)
        x_new = x - f / df if step_ok else None
        if x_new is None or not (lo < x_new < hi):
            x_new = math.sqrt(lo * hi)

        converged = abs(x_new - x) <= rtol * abs(x_new) or (hi - lo) <= rtol * hi
        x = x_new
        f, df = func_and_derivative(x)

        if converged:
            return RootResult(root=x, iterations=iteration, residual=abs(f), bracket=(lo, hi))

    raise ConvergenceError(f"Pas de convergence après {max_iter} itérations (x={x:.6g})")
