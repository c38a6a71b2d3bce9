"""
Asymptotics - Constantes et matrices asymptotiques

Module pour :
- Moments Pf₁, Pf₂, Pf₃ de la loi de Fréchet(α₀, 1)
- Matrice M(α₀), covariance Σ_Y(α₀) des fonctionnelles f₁, f₂, f₃
- Covariance limite des maxima glissants Σ(α₀) = M Σ_Y Mᵀ
- Inverse de l'information de Fisher (blocs disjoints)
- Bornes du rapport de variances (valeurs propres de Σ·I)
- Fonction de biais iid b₁, b₂ et vecteur B(α₀, ρ, λ)

Toutes les fonctions sont pures et déterministes.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import InputError
from ..numerics.special import SpecialConstants, digamma, gamma, polygamma

C = SpecialConstants

# Seuil sous lequel b₁, b₂ passent au développement limité en 0
BIAS_SERIES_THRESHOLD = 1e-4


def _check_alpha(alpha0):
    if not (math.isfinite(alpha0) and alpha0 > 0.0):
        raise InputError(f"α₀ invalide : {alpha0} (> 0 requis)")
    return float(alpha0)


@dataclass(frozen=True)
class BiasVector:
    """
    Biais asymptotique (forme, échelle) des estimateurs dans le cas iid

    Attributes:
        shape (float): Composante sur α
        scale (float): Composante sur σ
        rho (float): Indice du second ordre ≤ 0
        lam (float): Échelle de dérive λ
    """

    shape: float
    scale: float
    rho: float
    lam: float

    def as_array(self):
        return np.array([self.shape, self.scale])

    def to_dict(self):
        return {"shape": self.shape, "scale": self.scale, "rho": self.rho, "lambda": self.lam}


@dataclass(frozen=True)
class AsymptoticTables:
    """
    Matrices asymptotiques pour un α₀ donné

    Attributes:
        alpha0 (float): Forme
        M (np.ndarray): 2×3
        sigma_Y (np.ndarray): 3×3 symétrique définie positive
        sigma_sliding (np.ndarray): 2×2, M Σ_Y Mᵀ
        fisher_inv_disjoint (np.ndarray): 2×2
    """

    alpha0: float
    M: np.ndarray
    sigma_Y: np.ndarray
    sigma_sliding: np.ndarray
    fisher_inv_disjoint: np.ndarray

    def diagonal_ratios(self):
        """Rapports sliding/disjoint des variances de α̂ et σ̂"""
        return tuple(np.diag(self.sigma_sliding) / np.diag(self.fisher_inv_disjoint))

    def to_dict(self):
        return {
            "alpha0": self.alpha0,
            "M": self.M.tolist(),
            "sigma_Y": self.sigma_Y.tolist(),
            "sigma_sliding": self.sigma_sliding.tolist(),
            "fisher_inv_disjoint": self.fisher_inv_disjoint.tolist(),
            "diagonal_ratios": list(self.diagonal_ratios()),
            "ratio_bounds": list(ratio_bounds(self.alpha0)),
            "constants": C.as_dict(),
        }


# =====================================================================
# MATRICES
# =====================================================================

def frechet_log_moments(alpha0):
    """
    Pf₁ = E[Z^{-α₀} log Z], Pf₂ = E[Z^{-α₀}], Pf₃ = E[log Z], Z ~ Fréchet(α₀, 1)

    Args:
        alpha0 (float): Forme > 0

    Returns:
        tuple: ((γ-1)/α₀, 1, γ/α₀)

    Exemple:
        >>> frechet_log_moments(1.0)
        (-0.42278433509846713, 1.0, 0.5772156649015329)
    """
    alpha0 = _check_alpha(alpha0)
    return ((C.EULER_GAMMA - 1.0) / alpha0, 1.0, C.EULER_GAMMA / alpha0)


def m_matrix(alpha0):
    """
    M(α₀) = (6/π²) [[α₀², α₀(1-γ), -α₀²], [γ-1, -(Γ''(2)+1)/α₀, 1-γ]]

    Returns:
        np.ndarray: Matrice 2×3
    """
    a = _check_alpha(alpha0)
    g = C.EULER_GAMMA
    return np.array([
        [a * a, a * (1.0 - g), -a * a],
        [g - 1.0, -(C.GAMMA_SECOND_DERIV_2 + 1.0) / a, 1.0 - g],
    ]) / C.PI_SQ_OVER_6


def sigma_Y(alpha0):
    """
    Covariance Σ_Y(α₀) des fonctionnelles (f₁, f₂, f₃) sur maxima glissants

    Formes closes (ζ(3) = constante d'Apéry, ψ₂ = ψ(2) = 1 - γ) :
        σ₁₁ = α₀⁻² [4 log2 (ψ₂² + π²/6 - ψ₂ log2 + log²2/3) + ψ₂ π²/3 - (7/2)ζ(3) - 2ψ₂²]
        σ₂₂ = 4 log2 - 2
        σ₃₃ = α₀⁻² (8 log2 - 4)
        σ₁₂ = -α₀⁻¹ [π²/6 - 2 log²2 + 2ψ₂(2 log2 - 1)]
        σ₁₃ = α₀⁻² [(1+ψ₂)π²/6 + 2 log²2 - 4ψ₂ log2 + 2ψ₂ - (7/4)ζ(3)]
        σ₂₃ = -α₀⁻¹ [π²/6 + 2 - 4 log2]

    Args:
        alpha0 (float): Forme > 0

    Returns:
        np.ndarray: Matrice 3×3 symétrique

    Exemple:
        >>> np.round(sigma_Y(1.0), 4)[1, 1]
        0.7726
    """
    a = _check_alpha(alpha0)
    psi2 = C.DIGAMMA_2
    log2 = C.LOG2
    pi2_6 = C.PI_SQ_OVER_6
    zeta3 = C.APERY

    s11 = (4.0 * log2 * (psi2 ** 2 + pi2_6 - psi2 * log2 + log2 ** 2 / 3.0)
           + 2.0 * psi2 * pi2_6 - 3.5 * zeta3 - 2.0 * psi2 ** 2) / a ** 2
    s22 = 4.0 * log2 - 2.0
    s33 = (8.0 * log2 - 4.0) / a ** 2
    s12 = -(pi2_6 - 2.0 * log2 ** 2 + 2.0 * psi2 * (2.0 * log2 - 1.0)) / a
    s13 = ((1.0 + psi2) * pi2_6 + 2.0 * log2 ** 2 - 4.0 * psi2 * log2
           + 2.0 * psi2 - 1.75 * zeta3) / a ** 2
    s23 = -(pi2_6 + 2.0 - 4.0 * log2) / a

    return np.array([
        [s11, s12, s13],
        [s12, s22, s23],
        [s13, s23, s33],
    ])


def sigma_sliding(alpha0):
    """
    Σ(α₀) = M(α₀) Σ_Y(α₀) M(α₀)ᵀ, covariance limite de √m (α̂ - α₀, σ̂/σ_r - 1)

    Exemple:
        >>> np.round(sigma_sliding(1.0), 4)
        array([[ 0.4946, -0.3236],
               [-0.3236,  0.9578]])
    """
    m = m_matrix(alpha0)
    out = m @ sigma_Y(alpha0) @ m.T
    return (out + out.T) / 2.0


def fisher_inverse_disjoint(alpha0):
    """
    I⁻¹ = (6/π²) [[α₀², γ-1], [γ-1, α₀⁻² ((1-γ)² + π²/6)]]

    Covariance limite de l'estimateur sur blocs disjoints.
    """
    a = _check_alpha(alpha0)
    g = C.EULER_GAMMA
    return np.array([
        [a * a, g - 1.0],
        [g - 1.0, ((1.0 - g) ** 2 + C.PI_SQ_OVER_6) / (a * a)],
    ]) / C.PI_SQ_OVER_6


def ratio_bounds(alpha0):
    """
    Valeurs propres extrêmes de Σ(α₀)·I(α₀)

    Résout le problème généralisé Σ v = λ I⁻¹ v (symétrique défini),
    dont les valeurs propres bornent βᵀΣβ / βᵀI⁻¹β.

    Returns:
        tuple: (min, max), ≈ (0.6448, 0.9413) quel que soit α₀
    """
    eigenvalues = linalg.eigh(sigma_sliding(alpha0), fisher_inverse_disjoint(alpha0), eigvals_only=True)
    return float(eigenvalues[0]), float(eigenvalues[-1])


def variance_ratio(alpha0, beta):
    """
    βᵀΣβ / βᵀI⁻¹β pour un vecteur β ≠ 0

    Args:
        alpha0 (float): Forme > 0
        beta (array-like): Vecteur de dimension 2

    Returns:
        float: Rapport des variances asymptotiques sliding / disjoint
    """
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (2,) or not np.any(beta != 0.0):
        raise InputError(f"β doit être un vecteur non nul de dimension 2 : {beta}")
    return float(beta @ sigma_sliding(alpha0) @ beta) / float(beta @ fisher_inverse_disjoint(alpha0) @ beta)


def asymptotic_tables(alpha0):
    """Assembler toutes les matrices pour α₀"""
    alpha0 = _check_alpha(alpha0)
    return AsymptoticTables(
        alpha0=alpha0,
        M=m_matrix(alpha0),
        sigma_Y=sigma_Y(alpha0),
        sigma_sliding=sigma_sliding(alpha0),
        fisher_inv_disjoint=fisher_inverse_disjoint(alpha0),
    )


# =====================================================================
# BIAIS
# =====================================================================

def bias_functions(x):
    """
    Fonctions de biais (b₁(x), b₂(x)) pour x ≥ 0

        b₁(x) = Γ(2+x)(γ + ψ(1+x)) / x,                       b₁(0) = π²/6
        b₂(x) = [Γ(2+x)(Γ''(2) + γ + (γ-1)ψ(1+x)) - π²/6] / x, b₂(0) = 0

    Pour 0 < x < 1e-4, développement limité à l'ordre 1 (le numérateur
    de b₂ s'annule au second ordre en 0).

    Args:
        x (float): Argument |ρ|/α₀ ≥ 0

    Returns:
        tuple: (b₁(x), b₂(x))
    """
    if not (math.isfinite(x) and x >= 0.0):
        raise InputError(f"Argument de biais invalide : {x} (≥ 0 requis)")
    g = C.EULER_GAMMA
    if x == 0.0:
        return C.PI_SQ_OVER_6, 0.0

    if x < BIAS_SERIES_THRESHOLD:
        psi2_1 = polygamma(2, 1.0)
        b1 = gamma(2.0 + x) * (C.PI_SQ_OVER_6 + 0.5 * psi2_1 * x)
        b2 = 0.5 * x * (
            C.GAMMA_SECOND_DERIV_2 * C.PI_SQ_OVER_6
            - 2.0 * (1.0 - g) ** 2 * C.PI_SQ_OVER_6
            + (g - 1.0) * psi2_1
        )
        return b1, b2

    gx = gamma(2.0 + x)
    psi = digamma(1.0 + x)
    b1 = gx * (g + psi) / x
    b2 = (gx * (C.GAMMA_SECOND_DERIV_2 + g + (g - 1.0) * psi) - C.PI_SQ_OVER_6) / x
    return b1, b2


def bias_iid(alpha0, rho, lam):
    """
    B(α₀, ρ, λ) = λ (-6/π²) (b₁(|ρ|/α₀), b₂(|ρ|/α₀)/α₀²)

    Args:
        alpha0 (float): Forme > 0
        rho (float): Indice du second ordre ≤ 0
        lam (float): Limite de √m A(a_r)

    Returns:
        BiasVector: Biais (forme, échelle)

    Exemple:
        >>> bias_iid(2.0, 0.0, 1.0).as_array()
        array([-1.,  0.])
    """
    a = _check_alpha(alpha0)
    if not (math.isfinite(rho) and rho <= 0.0):
        raise InputError(f"ρ invalide : {rho} (≤ 0 requis)")
    b1, b2 = bias_functions(abs(rho) / a)
    shape = -lam * b1 / C.PI_SQ_OVER_6
    scale = -lam * b2 / (C.PI_SQ_OVER_6 * a * a)
    return BiasVector(shape=shape, scale=scale, rho=float(rho), lam=float(lam))
