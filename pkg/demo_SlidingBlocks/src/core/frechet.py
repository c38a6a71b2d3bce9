"""
Frechet - Loi de Fréchet et estimateur du maximum de quasi-vraisemblance

Module pour :
- cdf / quantile / log-vraisemblance de la loi de Fréchet(α, σ)
- Scores (bruts et profilés)
- Ajustement par réduction profilée σ̂(α)^α = k / Σ x^{-α}
  puis résolution 1-D du score profilé en α (Newton + bissection)
- Simulation par inversion
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .blocks import BlockMaximaSample
from .errors import DegenerateSampleError, InputError
from ..io.logger import Logger
from ..numerics.rootfind import expand_bracket, safeguarded_newton

logger = Logger.get_logger("core.frechet")

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITER = 200
DEFAULT_BRACKET = (1e-3, 1e3)
DEFAULT_BRACKET_LIMIT = (1e-6, 1e6)


@dataclass(frozen=True)
class FrechetParams:
    """
    Paramètres θ = (α, σ) de la loi de Fréchet

    Attributes:
        alpha (float): Forme > 0
        sigma (float): Échelle > 0
    """

    alpha: float
    sigma: float

    def __post_init__(self):
        for name in ("alpha", "sigma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InputError(f"Paramètre {name} invalide : {value} (> 0 requis)")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "sigma", float(self.sigma))


@dataclass(frozen=True)
class SolverInfo:
    """Diagnostics du solveur de score profilé"""

    iterations: int
    residual: float
    bracket: Tuple[float, float]
    expanded: bool = False


@dataclass(frozen=True)
class FrechetFit:
    """
    Résultat d'un ajustement Fréchet

    Attributes:
        params (FrechetParams): (α̂, σ̂)
        k (int): Nombre de maxima utilisés
        scheme (str|None): "sliding", "disjoint" ou None (échantillon brut)
        r (int|None): Taille de bloc
        n (int|None): Longueur de la série source
        truncation (float|None): Constante c utilisée
        solver (SolverInfo): Itérations, résidu, intervalle
    """

    params: FrechetParams
    k: int
    scheme: Optional[str]
    r: Optional[int]
    n: Optional[int]
    truncation: Optional[float]
    solver: SolverInfo

    @property
    def m_effective(self):
        """Taille effective n / r (k pour un échantillon brut)"""
        if self.n is None or self.r is None:
            return float(self.k)
        return self.n / self.r

    def to_dict(self):
        """Représentation JSON"""
        return {
            "alpha": self.params.alpha,
            "sigma": self.params.sigma,
            "k": self.k,
            "scheme": self.scheme,
            "r": self.r,
            "n": self.n,
            "m_effective": self.m_effective,
            "truncation": self.truncation,
            "solver": {
                "iterations": self.solver.iterations,
                "residual": self.solver.residual,
                "bracket": list(self.solver.bracket),
                "expanded": self.solver.expanded,
            },
        }


# =====================================================================
# DISTRIBUTION
# =====================================================================

def cdf(params, x):
    """
    P(X ≤ x) = exp(-(x/σ)^{-α}), 0 pour x ≤ 0

    Args:
        params (FrechetParams): Paramètres
        x (float|array): Point(s) d'évaluation

    Returns:
        float|np.ndarray: Probabilité(s)

    Exemple:
        >>> cdf(FrechetParams(1.0, 1.0), 1.0)
        0.36787944117144233
    """
    x_arr = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x_arr)
    positive = x_arr > 0.0
    out[positive] = np.exp(-(x_arr[positive] / params.sigma) ** (-params.alpha))
    return float(out) if out.ndim == 0 else out


def quantile(params, p):
    """
    G^{-1}(p) = σ(-log p)^{-1/α}

    Args:
        params (FrechetParams): Paramètres
        p (float|array): Probabilité(s) dans (0, 1)

    Returns:
        float|np.ndarray: Quantile(s)

    Raises:
        InputError: Si p hors de (0, 1)
    """
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any(~((p_arr > 0.0) & (p_arr < 1.0))):
        raise InputError(f"Probabilité hors de (0, 1) : {p}")
    out = params.sigma * (-np.log(p_arr)) ** (-1.0 / params.alpha)
    return float(out) if out.ndim == 0 else out


def sample(rng, params, count):
    """
    Tirages iid σ E^{-1/α}, E = -log U exponentielle standard

    Args:
        rng (np.random.Generator): Générateur (un par appelant)
        params (FrechetParams): Paramètres
        count (int): Nombre de tirages ≥ 0

    Returns:
        np.ndarray: count valeurs positives
    """
    if count < 0:
        raise InputError(f"Nombre de tirages négatif : {count}")
    return params.sigma * rng.standard_exponential(int(count)) ** (-1.0 / params.alpha)


# =====================================================================
# VRAISEMBLANCE
# =====================================================================

def _positive_values(data):
    """Extraire les valeurs (BlockMaximaSample ou séquence) et vérifier > 0"""
    values = data.maxima if isinstance(data, BlockMaximaSample) else np.asarray(data, dtype=np.float64)
    values = np.ravel(values)
    if values.size and not np.all(values > 0.0):
        bad = int(np.flatnonzero(~(values > 0.0))[0])
        raise InputError(
            f"Valeur non positive à la position {bad + 1} : {values[bad]} "
            "(appliquer une troncature à gauche)"
        )
    return values


def log_likelihood(data, params):
    """
    Σ [log α - log σ - (α+1) log(x/σ) - (x/σ)^{-α}]

    Args:
        data (array-like|BlockMaximaSample): Valeurs > 0
        params (FrechetParams): Paramètres

    Returns:
        float: Log-vraisemblance (quasi-vraisemblance pour des maxima glissants)
    """
    x = _positive_values(data)
    z = np.log(x) - math.log(params.sigma)
    alpha = params.alpha
    terms = math.log(alpha) - math.log(params.sigma) - (alpha + 1.0) * z - np.exp(-alpha * z)
    return float(np.sum(terms))


def score(data, params):
    """
    Score brut (∂ℓ/∂α, ∂ℓ/∂σ)

    Returns:
        tuple: (score_alpha, score_sigma)
    """
    x = _positive_values(data)
    z = np.log(x) - math.log(params.sigma)
    alpha = params.alpha
    w = np.exp(-alpha * z)
    score_alpha = x.size / alpha - np.sum(z) + np.sum(w * z)
    score_sigma = (alpha / params.sigma) * (x.size - np.sum(w))
    return float(score_alpha), float(score_sigma)


class _ProfileScore:
    """
    Score profilé en α, sur les log-valeurs décalées d = log x - min log x

    Ψ(α) = 1/α + Σ w d / Σ w - moyenne(d),  w = exp(-α d) ∈ (0, 1]
    Ψ est strictement décroissante dès que les valeurs ne sont pas toutes égales.

    Les valeurs sont d'abord ramenées par une puissance de 2 (exacte) sous
    max x ∈ [1/2, 1) : pour c = 2^j, α̂(cX) = α̂(X) et σ̂(cX) = c σ̂(X) bit à bit.
    Pour un facteur c quelconque, log(cx) n'est pas log c + log x exactement :
    l'équivariance ne vaut qu'à l'arrondi près (tolérance du solveur).
    """

    def __init__(self, x):
        _, exponent = np.frexp(np.max(x))
        self.exponent = int(exponent)
        logs = np.log(np.ldexp(x, -self.exponent))
        self.log_min = float(np.min(logs))
        self.d = logs - self.log_min
        self.mean_d = float(np.mean(self.d))
        self.k = x.size

    def _moments(self, alpha):
        w = np.exp(-alpha * self.d)
        sw = float(np.sum(w))
        m1 = float(np.sum(w * self.d)) / sw
        m2 = float(np.sum(w * self.d * self.d)) / sw
        return sw, m1, m2

    def value(self, alpha):
        _, m1, _ = self._moments(alpha)
        return 1.0 / alpha + m1 - self.mean_d

    def value_and_derivative(self, alpha):
        _, m1, m2 = self._moments(alpha)
        return 1.0 / alpha + m1 - self.mean_d, -1.0 / alpha ** 2 - max(m2 - m1 * m1, 0.0)

    def sigma(self, alpha):
        """σ̂(α) : log σ = min log x + (log k - log Σ w) / α, échelle 2^exponent rétablie"""
        sw, _, _ = self._moments(alpha)
        return math.ldexp(math.exp(self.log_min + (math.log(self.k) - math.log(sw)) / alpha), self.exponent)


def profile_score(data, alpha):
    """
    Score profilé Ψ(α) (σ remplacé par σ̂(α))

    Args:
        data (array-like|BlockMaximaSample): Valeurs > 0
        alpha (float): Forme > 0

    Returns:
        float: Ψ(α), nul à l'estimateur
    """
    return _ProfileScore(_positive_values(data)).value(alpha)


def profile_sigma(data, alpha):
    """σ̂(α) = (k / Σ x^{-α})^{1/α}"""
    return _ProfileScore(_positive_values(data)).sigma(alpha)


def _moment_guess(d):
    """Forme initiale par la méthode des moments : Var(log X) = π²/(6α²)"""
    sd = float(np.std(d))
    return math.pi / (math.sqrt(6.0) * sd)


def fit(data,
        tolerance=DEFAULT_TOLERANCE,
        max_iter=DEFAULT_MAX_ITER,
        bracket=DEFAULT_BRACKET,
        bracket_limit=DEFAULT_BRACKET_LIMIT):
    """
    Maximum de (quasi-)vraisemblance Fréchet

    Args:
        data (BlockMaximaSample|array-like): Maxima tronqués (> 0)
        tolerance (float): Tolérance relative sur α
        max_iter (int): Itérations max du solveur
        bracket (tuple): Intervalle initial pour α
        bracket_limit (tuple): Intervalle maximal après expansion

    Returns:
        FrechetFit: (α̂, σ̂), comptes, diagnostics

    Raises:
        InputError: Si une valeur est ≤ 0
        DegenerateSampleError: Si moins de 2 valeurs ou toutes égales
        ConvergenceError: Si l'intervalle maximal ne contient pas la racine

    Exemple:
        >>> fit([1.0, 2.0, 4.0]).params
        FrechetParams(alpha=2.00..., sigma=1.51...)
    """
    x = _positive_values(data)
    if x.size < 2:
        raise DegenerateSampleError(f"Au moins 2 maxima requis (k={x.size})")

    profile = _ProfileScore(x)
    if not np.any(profile.d > 0.0):
        raise DegenerateSampleError("Toutes les valeurs sont égales : maximiseur non unique")

    lo, hi, _, _, expanded = expand_bracket(
        profile.value, bracket[0], bracket[1], bracket_limit[0], bracket_limit[1]
    )
    if expanded:
        logger.warning("intervalle_elargi", lo=lo, hi=hi, k=x.size)

    result = safeguarded_newton(
        profile.value_and_derivative, lo, hi,
        x0=_moment_guess(profile.d), rtol=tolerance, max_iter=max_iter,
    )
    alpha_hat = result.root
    params = FrechetParams(alpha=alpha_hat, sigma=profile.sigma(alpha_hat))

    if isinstance(data, BlockMaximaSample):
        scheme, r, n, truncation = data.scheme, data.r, data.n, data.truncation
    else:
        scheme = r = n = truncation = None

    fitted = FrechetFit(
        params=params,
        k=int(x.size),
        scheme=scheme,
        r=r,
        n=n,
        truncation=truncation,
        solver=SolverInfo(
            iterations=result.iterations,
            residual=result.residual,
            bracket=(float(lo), float(hi)),
            expanded=expanded,
        ),
    )
    Logger.log_fit(fitted)
    return fitted
