"""
ReturnLevel - Niveaux de retour et intervalles de confiance asymptotiques

Module pour :
- b_T = -log(1 - 1/T)
- Estimation RL(T, r) = σ̂ b_T^{-1/α̂}
- Intervalles normaux sur l'échelle relative RL̂/RL - 1 (biais ignoré)
- Intervalles pour (α, σ)
- Grille des variances asymptotiques sliding / disjoint / rapport
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .asymptotics import fisher_inverse_disjoint, sigma_sliding
from .blocks import DISJOINT, SCHEMES, SLIDING
from .errors import InputError

# Périodes de retour de la grille de référence
TABLE1_PERIODS = (50, 100, 200, 500, 1000, 5000, 10000)


@dataclass(frozen=True)
class ReturnLevelEstimate:
    """
    Niveau de retour estimé et intervalle de confiance

    Attributes:
        T (float): Période de retour (en blocs)
        point (float): RL̂(T, r)
        variance_factor (float): βᵀΣβ (par unité de 1/m)
        ci_low (float): Borne basse
        ci_high (float): Borne haute
        m_effective (float): n / r
        scheme (str): "sliding" ou "disjoint"
        level (float): Niveau de confiance
        alpha0 (float): Forme utilisée dans β et Σ
    """

    T: float
    point: float
    variance_factor: float
    ci_low: float
    ci_high: float
    m_effective: float
    scheme: str
    level: float
    alpha0: float

    def to_dict(self):
        return {
            "T": self.T,
            "point": self.point,
            "variance_factor": self.variance_factor,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "m_effective": self.m_effective,
            "scheme": self.scheme,
            "level": self.level,
            "alpha0": self.alpha0,
        }


@dataclass(frozen=True)
class ParameterInterval:
    """Intervalles de confiance de α et σ"""

    alpha: float
    alpha_low: float
    alpha_high: float
    sigma: float
    sigma_low: float
    sigma_high: float
    level: float
    scheme: str

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "alpha_low": self.alpha_low,
            "alpha_high": self.alpha_high,
            "sigma": self.sigma,
            "sigma_low": self.sigma_low,
            "sigma_high": self.sigma_high,
            "level": self.level,
            "scheme": self.scheme,
        }


def b_T(T):
    """
    b_T = -log(1 - 1/T)

    Args:
        T (float): Période de retour > 1

    Returns:
        float: Valeur positive, décroissante en T

    Raises:
        InputError: Si T ≤ 1

    Exemple:
        >>> b_T(2.0)
        0.6931471805599453
    """
    if not (math.isfinite(T) and T > 1.0):
        raise InputError(f"Période de retour invalide : T={T} (T > 1 requis)")
    return -math.log1p(-1.0 / T)


def estimate(fit, T):
    """
    RL̂(T, r) = σ̂ b_T^{-1/α̂}

    Args:
        fit (FrechetFit): Ajustement
        T (float): Période de retour > 1

    Returns:
        float: Niveau de retour estimé
    """
    return fit.params.sigma * b_T(T) ** (-1.0 / fit.params.alpha)


def _covariance(alpha0, scheme):
    if scheme == SLIDING:
        return sigma_sliding(alpha0)
    if scheme == DISJOINT:
        return fisher_inverse_disjoint(alpha0)
    raise InputError(f"Schéma inconnu : {scheme} (attendu : {', '.join(SCHEMES)})")


def _z_value(level):
    if not (0.0 < level < 1.0):
        raise InputError(f"Niveau de confiance hors de (0, 1) : {level}")
    return float(stats.norm.ppf(0.5 + level / 2.0))


def _resolve(fit, scheme, alpha0_for_variance):
    scheme = scheme or fit.scheme or SLIDING
    alpha0 = fit.params.alpha if alpha0_for_variance is None else float(alpha0_for_variance)
    m = fit.m_effective
    if not m > 0:
        raise InputError(f"Taille effective invalide : m={m}")
    return scheme, alpha0, m


def variance_factor(alpha0, T, scheme):
    """
    βᵀΣβ avec β(T, α₀) = (α₀⁻² log b_T, 1)

    Σ = covariance sliding ou inverse de l'information de Fisher (disjoint).
    """
    beta = np.array([math.log(b_T(T)) / alpha0 ** 2, 1.0])
    return float(beta @ _covariance(alpha0, scheme) @ beta)


def ci(fit, T, alpha0_for_variance=None, level=0.95, scheme=None):
    """
    Intervalle de confiance asymptotique pour RL(T, r)

    Intervalle normal sur l'échelle relative : RL̂ (1 ± z √(βᵀΣβ / m)),
    termes de biais Λ(T) et M·B pris nuls.

    Args:
        fit (FrechetFit): Ajustement
        T (float): Période de retour > 1
        alpha0_for_variance (float|None): α₀ fixé dans β et Σ (défaut : α̂)
        level (float): Niveau de confiance dans (0, 1)
        scheme (str|None): Schéma pour Σ (défaut : celui de l'ajustement)

    Returns:
        ReturnLevelEstimate: Point, facteur de variance, bornes
    """
    z = _z_value(level)
    scheme, alpha0, m = _resolve(fit, scheme, alpha0_for_variance)
    point = estimate(fit, T)
    vf = variance_factor(alpha0, T, scheme)
    half_width = z * math.sqrt(vf / m)

    return ReturnLevelEstimate(
        T=float(T),
        point=point,
        variance_factor=vf,
        ci_low=point * (1.0 - half_width),
        ci_high=point * (1.0 + half_width),
        m_effective=m,
        scheme=scheme,
        level=level,
        alpha0=alpha0,
    )


def parameter_ci(fit, level=0.95, scheme=None, alpha0_for_variance=None):
    """
    Intervalles normaux α̂ ± z√(Σ₁₁/m) et σ̂(1 ± z√(Σ₂₂/m))

    Returns:
        ParameterInterval: Intervalles de α et σ
    """
    z = _z_value(level)
    scheme, alpha0, m = _resolve(fit, scheme, alpha0_for_variance)
    cov = _covariance(alpha0, scheme)
    alpha_hw = z * math.sqrt(cov[0, 0] / m)
    sigma_hw = z * math.sqrt(cov[1, 1] / m)
    alpha, sigma = fit.params.alpha, fit.params.sigma

    return ParameterInterval(
        alpha=alpha,
        alpha_low=alpha - alpha_hw,
        alpha_high=alpha + alpha_hw,
        sigma=sigma,
        sigma_low=sigma * (1.0 - sigma_hw),
        sigma_high=sigma * (1.0 + sigma_hw),
        level=level,
        scheme=scheme,
    )


def variance_table(alpha0=1.0, T_values=TABLE1_PERIODS):
    """
    Grille des variances asymptotiques du niveau de retour

    Args:
        alpha0 (float): Forme
        T_values (iterable): Périodes de retour

    Returns:
        list: dicts {T, sliding, disjoint, ratio}

    Exemple:
        >>> round(variance_table(1.0, [50])[0]["sliding"], 2)
        11.01
    """
    rows = []
    for T in T_values:
        sliding = variance_factor(alpha0, T, SLIDING)
        disjoint = variance_factor(alpha0, T, DISJOINT)
        rows.append({"T": T, "sliding": sliding, "disjoint": disjoint, "ratio": sliding / disjoint})
    return rows
