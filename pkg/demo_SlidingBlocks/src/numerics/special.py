"""
Special - Constantes et fonctions spéciales

Module pour :
- Constantes à haute précision (γ, ζ(3), π²/6, ψ(2), ψ'(2), Γ''(2))
- Digamma / trigamma / polygamma (scipy.special)
- Gamma et ses dérivées aux points utiles
"""

from scipy import special as sp


class SpecialConstants:
    """
    Constantes spéciales utilisées par les matrices asymptotiques

    Les valeurs décimales sont écrites avec plus de 20 chiffres significatifs ;
    elles sont arrondies au double le plus proche à l'import.
    """

    EULER_GAMMA = 0.57721566490153286060651209008
    APERY = 1.20205690315959428539973816151
    PI_SQ_OVER_6 = 1.64493406684822643647241516665
    LOG2 = 0.69314718055994530941723212146

    # ψ(2) = 1 - γ
    DIGAMMA_2 = 0.42278433509846713939348790992
    # ψ'(2) = π²/6 - 1
    TRIGAMMA_2 = 0.64493406684822643647241516665

    # Γ''(2) = ψ'(2) + ψ(2)², puisque Γ(2) = 1
    GAMMA_SECOND_DERIV_2 = TRIGAMMA_2 + DIGAMMA_2 ** 2

    @staticmethod
    def as_dict():
        """Constantes sous forme de dict (sortie JSON)"""
        return {
            "euler_gamma": SpecialConstants.EULER_GAMMA,
            "apery": SpecialConstants.APERY,
            "pi_sq_over_6": SpecialConstants.PI_SQ_OVER_6,
            "digamma_2": SpecialConstants.DIGAMMA_2,
            "trigamma_2": SpecialConstants.TRIGAMMA_2,
            "gamma_second_deriv_2": SpecialConstants.GAMMA_SECOND_DERIV_2,
        }


def digamma(x):
    """ψ(x) = Γ'(x)/Γ(x)"""
    return float(sp.psi(x))


def trigamma(x):
    """ψ'(x)"""
    return float(sp.polygamma(1, x))


def polygamma(order, x):
    """ψ^(order)(x)"""
    return float(sp.polygamma(order, x))


def gamma(x):
    """Γ(x)"""
    return float(sp.gamma(x))


def gamma_derivative(order, x):
    """
    Dérivée Γ^(k)(x) pour k ∈ {0, 1, 2}

    Args:
        order (int): Ordre de dérivation (0, 1 ou 2)
        x (float): Point d'évaluation > 0

    Returns:
        float: Γ(x), Γ(x)ψ(x) ou Γ(x)(ψ'(x) + ψ(x)²)

    Exemple:
        >>> gamma_derivative(2, 2.0)  # Γ''(2)
        0.8236806608528...
    """
    g = gamma(x)
    if order == 0:
        return g
    psi = digamma(x)
    if order == 1:
        return g * psi
    if order == 2:
        return g * (trigamma(x) + psi * psi)
    raise ValueError(f"Ordre de dérivée non supporté : {order}")
