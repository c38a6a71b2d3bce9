"""
MarshallOlkin - Loi limite bivariée de deux maxima glissants

Module pour :
- Fonction de dépendance de Pickands A_ξ(w) = 1 - (1-ξ) min(w, 1-w)
- Fonction de répartition jointe G_{α₀,ξ}(x, y)
- Tirage de couples Marshall–Olkin (marges exponentielles unité)
- Covariances H_{k,ℓ}(a, b; ξ) = Cov(S^a (log S)^k, T^b (log T)^ℓ) des six cas utiles,
  par quadrature en w, et leurs intégrales en ξ (formes closes / quadrature emboîtée)
- Oracle Monte Carlo de Σ_Y et assemblage Σ_Y à partir des six intégrales
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .asymptotics import frechet_log_moments, sigma_Y
from .errors import InputError
from ..io.logger import Logger
from ..numerics.quadrature import AdaptiveQuadrature
from ..numerics.special import SpecialConstants

logger = Logger.get_logger("core.marshall_olkin")

C = SpecialConstants

MIN_ORACLE_DRAWS = 10_000
ORACLE_CHUNK = 100_000

# Intégrale intérieure (en w) et extérieure (en ξ)
INNER_QUADRATURE = AdaptiveQuadrature(epsabs=1e-13, epsrel=1e-12, limit=200, max_abserr=1e-10)
OUTER_QUADRATURE = AdaptiveQuadrature(epsabs=1e-11, epsrel=1e-10, limit=100, max_abserr=1e-9)


class HCase(Enum):
    """Les six cas (k, ℓ, a, b) de H_{k,ℓ}(a, b)"""

    H00_11 = (0, 0, 1, 1)
    H01_11 = (0, 1, 1, 1)
    H11_11 = (1, 1, 1, 1)
    H01_10 = (0, 1, 1, 0)
    H11_10 = (1, 1, 1, 0)
    H11_00 = (1, 1, 0, 0)

    @property
    def label(self):
        k, l, a, b = self.value
        return f"({k},{l},{a},{b})"

    @staticmethod
    def from_label(text):
        """HCase depuis "0,0,1,1" ou "(0,0,1,1)" """
        try:
            key = tuple(int(part) for part in text.strip("() ").split(","))
            return HCase(key)
        except ValueError as e:
            raise InputError(f"Cas H inconnu : {text}") from e


def _check_xi(xi, upper=1.0):
    if not (math.isfinite(xi) and 0.0 <= xi <= upper):
        raise InputError(f"ξ hors de [0, {upper:g}] : {xi}")
    return float(xi)


# =====================================================================
# LOI BIVARIÉE
# =====================================================================

def pickands(xi, w):
    """
    A_ξ(w) = 1 - (1-ξ) min(w, 1-w) = ξ + (1-ξ) max(w, 1-w)

    Args:
        xi (float): Paramètre de recouvrement dans [0, 1]
        w (float): Point dans [0, 1]

    Returns:
        float: Valeur dans [max(w, 1-w), 1]

    Exemple:
        >>> pickands(0.0, 0.25)
        0.75
    """
    xi = _check_xi(xi)
    if not (0.0 <= w <= 1.0):
        raise InputError(f"w hors de [0, 1] : {w}")
    return 1.0 - (1.0 - xi) * min(w, 1.0 - w)


def joint_cdf(alpha0, xi, x, y):
    """
    G_{α₀,ξ}(x, y) = exp{-ξx^{-α₀} - (1-ξ)(x∧y)^{-α₀} - ξy^{-α₀}} pour ξ ∈ [0, 1],
    exp(-x^{-α₀} - y^{-α₀}) pour ξ ≥ 1

    Args:
        alpha0 (float): Forme > 0
        xi (float): ξ ≥ 0
        x (float): > 0
        y (float): > 0

    Returns:
        float: Probabilité
    """
    if not (math.isfinite(alpha0) and alpha0 > 0.0):
        raise InputError(f"α₀ invalide : {alpha0}")
    if not (math.isfinite(xi) and xi >= 0.0):
        raise InputError(f"ξ négatif : {xi}")
    if not (x > 0.0 and y > 0.0):
        raise InputError(f"Arguments non positifs : x={x}, y={y}")

    xa = x ** -alpha0
    ya = y ** -alpha0
    if xi >= 1.0:
        return math.exp(-xa - ya)
    return math.exp(-xi * xa - (1.0 - xi) * max(xa, ya) - xi * ya)


def sample_pair(rng, xi, size=None):
    """
    Couple (S, T) de survie exp(-ξs - ξt - (1-ξ) max(s, t))

    S = min(E₁/ξ, E₀/(1-ξ)), T = min(E₂/ξ, E₀/(1-ξ)), E₀, E₁, E₂ iid Exp(1).

    Args:
        rng (np.random.Generator): Générateur
        xi (float|np.ndarray): ξ dans [0, 1] (scalaire ou un par tirage)
        size (int|None): Nombre de couples (None : scalaires)

    Returns:
        tuple: (S, T)

    Exemple:
        >>> s, t = sample_pair(np.random.default_rng(0), 0.0, 5)
        >>> bool(np.all(s == t))
        True
    """
    xi_arr = np.asarray(xi, dtype=np.float64)
    if np.any(~((xi_arr >= 0.0) & (xi_arr <= 1.0))):
        raise InputError(f"ξ hors de [0, 1] : {xi}")

    shape = (3,) if size is None else (3, int(size))
    e0, e1, e2 = rng.standard_exponential(shape)

    with np.errstate(divide="ignore"):
        common = e0 / (1.0 - xi_arr)
        s = np.minimum(e1 / xi_arr, common)
        t = np.minimum(e2 / xi_arr, common)

    if size is None:
        return float(s), float(t)
    return s, t


# =====================================================================
# COVARIANCES H_{k,ℓ}(a, b; ξ)
# =====================================================================

def _integrand(case, xi):
    """
    Intégrande en w de H(case; ξ), limites finies aux bornes

    A = 1 - (1-ξ)u, u = min(w, 1-w) ; 1 - A et log A calculés sans annulation.
    """
    psi2 = C.DIGAMMA_2
    trigamma2 = C.TRIGAMMA_2
    one_minus_xi = 1.0 - xi

    def parts(w):
        one_minus_a = one_minus_xi * min(w, 1.0 - w)
        a = 1.0 - one_minus_a
        log_a = math.log1p(-one_minus_a)
        return one_minus_a, a, log_a

    if case is HCase.H00_11:
        def f(w):
            _, a, _ = parts(w)
            return 1.0 / (a * a) - 1.0

    elif case is HCase.H01_11:
        def f(w):
            if w >= 1.0:
                return 0.0
            _, a, log_a = parts(w)
            return (1.0 + math.log1p(-w) + psi2 - log_a) / (a * a) - psi2

    elif case is HCase.H11_11:
        const = psi2 * psi2 + 2.0 * psi2 + trigamma2 + 1.0

        def f(w):
            if w <= 0.0 or w >= 1.0:
                return 0.0
            _, a, log_a = parts(w)
            log_w = math.log(w)
            log_1mw = math.log1p(-w)
            bracket = (const
                       + (1.0 + psi2) * (log_w + log_1mw - 2.0 * log_a)
                       + (log_w - log_a) * (log_1mw - log_a))
            return bracket / (a * a) - psi2 * psi2

    elif case is HCase.H01_10:
        def f(w):
            if w >= 1.0:
                return one_minus_xi
            one_minus_a, a, _ = parts(w)
            return one_minus_a / ((1.0 - w) * a)

    elif case is HCase.H11_10:
        def f(w):
            if w <= 0.0:
                return 0.0
            if w >= 1.0:
                return one_minus_xi * (1.0 + psi2)
            one_minus_a, a, log_a = parts(w)
            return (one_minus_a * (math.log(w) + psi2) - log_a) / ((1.0 - w) * a)

    elif case is HCase.H11_00:
        def f(w):
            if w <= 0.0 or w >= 1.0:
                return one_minus_xi
            _, _, log_a = parts(w)
            return -log_a / (w * (1.0 - w))

    else:
        raise InputError(f"Cas H inconnu : {case}")

    return f


def cov_H(case, xi, quadrature=INNER_QUADRATURE):
    """
    H_{k,ℓ}(a, b; ξ) par quadrature adaptative en w, découpée en w = 1/2

    Args:
        case (HCase): Cas (k, ℓ, a, b)
        xi (float): ξ dans [0, 1]
        quadrature (AdaptiveQuadrature): Intégrateur (tolérance absolue 1e-10)

    Returns:
        float: Covariance

    Raises:
        QuadratureError: Si la tolérance n'est pas atteinte

    Exemple:
        >>> round(cov_H(HCase.H00_11, 0.5), 12)  # 2/(1+ξ) - 1
        0.333333333333
    """
    xi = _check_xi(xi)
    result = quadrature.integrate(_integrand(case, xi), 0.0, 1.0, breakpoints=(0.5,))
    return result.value


def cov_H_integral_closed(case):
    """
    ∫₀¹ H(case; ξ) dξ en forme close

    Args:
        case (HCase): Cas (k, ℓ, a, b)

    Returns:
        float: Valeur de l'intégrale
    """
    psi2 = C.DIGAMMA_2
    log2 = C.LOG2
    pi2_6 = C.PI_SQ_OVER_6
    zeta3 = C.APERY

    closed = {
        HCase.H00_11: 2.0 * log2 - 1.0,
        HCase.H01_11: pi2_6 / 2.0 - log2 ** 2 + psi2 * (2.0 * log2 - 1.0),
        HCase.H11_11: (2.0 * log2 * (psi2 ** 2 + pi2_6 - psi2 * log2 + log2 ** 2 / 3.0)
                       + psi2 * pi2_6 - 1.75 * zeta3 - psi2 ** 2),
        HCase.H01_10: pi2_6 / 2.0 + 1.0 - 2.0 * log2,
        HCase.H11_10: ((1.0 + psi2) * pi2_6 / 2.0 + log2 ** 2 - 2.0 * psi2 * log2
                       + psi2 - 0.875 * zeta3),
        HCase.H11_00: 4.0 * log2 - 2.0,
    }
    return closed[case]


def cov_H_integral_quadrature(case, inner=INNER_QUADRATURE, outer=OUTER_QUADRATURE):
    """
    ∫₀¹ H(case; ξ) dξ par quadrature emboîtée (vérification des formes closes)

    Returns:
        float: Valeur de l'intégrale (écart aux formes closes ≤ 1e-8)
    """
    result = outer.integrate(lambda xi: cov_H(case, xi, inner), 0.0, 1.0)
    logger.debug("integrale_xi", case=case.label, value=result.value, abserr=result.abserr, neval=result.neval)
    return result.value


# Préfacteurs (puissance de α₀, coefficient) de l'assemblage σᵢⱼ = coef · α₀^p · ∫H
_ASSEMBLY = {
    (0, 0): (HCase.H11_11, -2, 2.0),
    (1, 1): (HCase.H00_11, 0, 2.0),
    (2, 2): (HCase.H11_00, -2, 2.0),
    (0, 1): (HCase.H01_11, -1, -2.0),
    (0, 2): (HCase.H11_10, -2, 2.0),
    (1, 2): (HCase.H01_10, -1, -2.0),
}


def assemble_sigma_Y(alpha0, integrals):
    """
    Σ_Y(α₀) à partir des six intégrales en ξ

    Args:
        alpha0 (float): Forme > 0
        integrals (dict): HCase -> ∫₀¹ H dξ

    Returns:
        np.ndarray: Matrice 3×3 symétrique
    """
    if not (math.isfinite(alpha0) and alpha0 > 0.0):
        raise InputError(f"α₀ invalide : {alpha0}")
    out = np.empty((3, 3))
    for (i, j), (case, power, coef) in _ASSEMBLY.items():
        out[i, j] = out[j, i] = coef * alpha0 ** power * integrals[case]
    return out


# =====================================================================
# ORACLE MONTE CARLO
# =====================================================================

@dataclass(frozen=True)
class OracleEstimate:
    """Estimation Monte Carlo de Σ_Y et erreurs standard"""

    alpha0: float
    draws: int
    estimate: np.ndarray
    stderr: np.ndarray

    def to_dict(self):
        return {
            "alpha0": self.alpha0,
            "draws": self.draws,
            "estimate": self.estimate.tolist(),
            "stderr": self.stderr.tolist(),
        }


def _oracle_chunk(seed_seq, alpha0, count):
    """
    Sommes partielles Σp et Σp² des produits symétrisés (f_i(Z₁)f_j(Z₂) + f_j(Z₁)f_i(Z₂))/2

    Avec Z = S^{-1/α₀} : f₁(Z) = S log Z, f₂(Z) = S, f₃(Z) = log Z = -log(S)/α₀.
    """
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    xi = rng.random(count)
    s, t = sample_pair(rng, xi, count)

    log_z1 = -np.log(s) / alpha0
    log_z2 = -np.log(t) / alpha0
    f_z1 = np.stack([s * log_z1, s, log_z1])
    f_z2 = np.stack([t * log_z2, t, log_z2])

    sums = np.empty((3, 3))
    sums_sq = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            p = 0.5 * (f_z1[i] * f_z2[j] + f_z1[j] * f_z2[i])
            sums[i, j] = sums[j, i] = math.fsum(p)
            sums_sq[i, j] = sums_sq[j, i] = math.fsum(p * p)
    return sums, sums_sq


def mc_sigma_Y_oracle(seed, alpha0, draws, workers=1):
    """
    Oracle Monte Carlo de Σ_Y(α₀) : ξ ~ U(0,1), (S, T) ~ Marshall–Olkin(ξ)

    σᵢⱼ ≈ 2 (moyenne[fᵢ(Z₁) fⱼ(Z₂)] - Pfᵢ Pfⱼ), les marges de G_{α₀,ξ}
    ne dépendant pas de ξ.

    Les tirages sont découpés en paquets de taille fixe ; le paquet c utilise
    le flux SeedSequence(seed, spawn_key=(c,)). La réduction par paquet
    (somme compensée) rend le résultat indépendant du nombre de workers.

    Args:
        seed (int): Graine maître
        alpha0 (float): Forme > 0
        draws (int): Nombre de tirages ≥ 10⁴
        workers (int): Nombre de threads

    Returns:
        OracleEstimate: Estimation 3×3 + erreurs standard
    """
    if not (math.isfinite(alpha0) and alpha0 > 0.0):
        raise InputError(f"α₀ invalide : {alpha0}")
    if draws < MIN_ORACLE_DRAWS:
        raise InputError(f"Au moins {MIN_ORACLE_DRAWS} tirages requis (draws={draws})")

    start = time.perf_counter()
    n_chunks = math.ceil(draws / ORACLE_CHUNK)
    sizes = [ORACLE_CHUNK] * (n_chunks - 1) + [draws - ORACLE_CHUNK * (n_chunks - 1)]
    streams = [np.random.SeedSequence(seed, spawn_key=(c,)) for c in range(n_chunks)]

    with ThreadPoolExecutor(max_workers=max(1, int(workers))) as pool:
        parts = list(pool.map(lambda args: _oracle_chunk(args[0], alpha0, args[1]), zip(streams, sizes)))

    pf = np.array(frechet_log_moments(alpha0))
    estimate = np.empty((3, 3))
    stderr = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            total = math.fsum(part[0][i, j] for part in parts)
            total_sq = math.fsum(part[1][i, j] for part in parts)
            mean = total / draws
            var = max(total_sq / draws - mean * mean, 0.0) * draws / (draws - 1)
            estimate[i, j] = 2.0 * (mean - pf[i] * pf[j])
            stderr[i, j] = 2.0 * math.sqrt(var / draws)

    logger.info("oracle_sigma_y", alpha0=alpha0, draws=draws, chunks=n_chunks,
                duration=round(time.perf_counter() - start, 3))
    return OracleEstimate(alpha0=float(alpha0), draws=int(draws), estimate=estimate, stderr=stderr)


# =====================================================================
# TABLE DE VÉRIFICATION
# =====================================================================

@dataclass(frozen=True)
class VerificationReport:
    """
    Formes closes vs quadrature vs Monte Carlo

    Attributes:
        rows (list): dicts case / closed / quadrature / abs_diff
        sigma_Y_closed (np.ndarray): Σ_Y des formes closes
        sigma_Y_assembled (np.ndarray): Σ_Y assemblé depuis les intégrales par quadrature
        oracle (OracleEstimate|None): Estimation Monte Carlo
    """

    alpha0: float
    rows: list
    sigma_Y_closed: np.ndarray
    sigma_Y_assembled: np.ndarray
    oracle: object = None

    @property
    def max_deviation(self):
        return max(row["abs_diff"] for row in self.rows)

    def to_dict(self):
        return {
            "alpha0": self.alpha0,
            "rows": self.rows,
            "max_deviation": self.max_deviation,
            "sigma_Y_closed": self.sigma_Y_closed.tolist(),
            "sigma_Y_assembled": self.sigma_Y_assembled.tolist(),
            "oracle": self.oracle.to_dict() if self.oracle is not None else None,
        }


def verification_table(alpha0=1.0, draws=1_000_000, seed=0, workers=1, inner=INNER_QUADRATURE):
    """
    Comparer, pour les six cas, forme close et quadrature emboîtée,
    puis Σ_Y assemblé et l'oracle Monte Carlo

    Args:
        alpha0 (float): Forme pour Σ_Y
        draws (int): Tirages Monte Carlo (0 : pas d'oracle)
        seed (int): Graine maître de l'oracle
        workers (int): Threads de l'oracle
        inner (AdaptiveQuadrature): Quadrature en w

    Returns:
        VerificationReport: Lignes de comparaison
    """
    Logger.log_section("VÉRIFICATION DES INTÉGRALES", "core.marshall_olkin")
    rows = []
    quad_values = {}
    for case in HCase:
        closed = cov_H_integral_closed(case)
        quad = cov_H_integral_quadrature(case, inner=inner)
        quad_values[case] = quad
        rows.append({"case": case.label, "closed": closed, "quadrature": quad, "abs_diff": abs(quad - closed)})

    oracle = mc_sigma_Y_oracle(seed, alpha0, draws, workers) if draws else None

    return VerificationReport(
        alpha0=float(alpha0),
        rows=rows,
        sigma_Y_closed=sigma_Y(alpha0),
        sigma_Y_assembled=assemble_sigma_Y(alpha0, quad_values),
        oracle=oracle,
    )
