"""
Blocks - Extraction des maxima par blocs

Module pour :
- Représenter une série observée (TimeSeries)
- Maxima par blocs glissants (O(n), filtre de maximum courant)
- Maxima par blocs disjoints (dernier bloc incomplet ignoré)
- Troncature à gauche X ∨ c
- Log-rendements d'une série de prix
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
from scipy.ndimage import maximum_filter1d

from .errors import InputError

SLIDING = "sliding"
DISJOINT = "disjoint"
SCHEMES = (SLIDING, DISJOINT)

# Racine de la précision machine du float64 (~1.49e-8)
DEFAULT_TRUNCATION = float(np.sqrt(np.finfo(np.float64).eps))


@dataclass(frozen=True)
class TimeSeries:
    """
    Série observée X_1, ..., X_n (valeurs finies)

    Attributes:
        values (np.ndarray): Observations ordonnées (float64, lecture seule)
        labels (tuple): Étiquettes optionnelles (dates...), même longueur
    """

    values: np.ndarray
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if values.size < 1:
            raise InputError("Série vide : au moins une observation requise")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise InputError(f"Valeur non finie à la position {bad + 1}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if len(labels) != values.size:
                raise InputError(
                    f"{len(labels)} étiquettes pour {values.size} observations"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        """Longueur de la série"""
        return int(self.values.size)

    def window(self, start, stop):
        """Sous-série values[start:stop] (étiquettes incluses)"""
        labels = self.labels[start:stop] if self.labels is not None else None
        return TimeSeries(self.values[start:stop], labels)


@dataclass(frozen=True)
class BlockMaximaSample:
    """
    Échantillon de maxima par blocs

    Attributes:
        maxima (np.ndarray): Maxima (lecture seule)
        r (int): Taille de bloc
        scheme (str): "sliding" ou "disjoint"
        n (int): Longueur de la série source
        truncation (float|None): Constante c appliquée, None si non tronqué
    """

    maxima: np.ndarray
    r: int
    scheme: str
    n: int
    truncation: Optional[float] = field(default=None)

    def __post_init__(self):
        maxima = np.array(self.maxima, dtype=np.float64, copy=True)
        maxima.setflags(write=False)
        object.__setattr__(self, "maxima", maxima)
        if self.scheme not in SCHEMES:
            raise InputError(f"Schéma inconnu : {self.scheme} (attendu : {', '.join(SCHEMES)})")

    @property
    def k(self):
        """Nombre de maxima glissants n - r + 1"""
        return self.n - self.r + 1

    @property
    def m(self):
        """Nombre de blocs disjoints floor(n / r)"""
        return self.n // self.r

    @property
    def m_effective(self):
        """Taille effective n / r"""
        return self.n / self.r

    def to_dict(self):
        """Représentation JSON"""
        return {
            "scheme": self.scheme,
            "r": self.r,
            "n": self.n,
            "k": self.k,
            "m": self.m,
            "truncation": self.truncation,
            "maxima": self.maxima.tolist(),
        }


def _check_block_size(series, r):
    """Vérifier 1 ≤ r ≤ n"""
    if isinstance(r, bool) or int(r) != r:
        raise InputError(f"Taille de bloc non entière : {r}")
    r = int(r)
    if not 1 <= r <= series.n:
        raise InputError(f"Taille de bloc hors domaine : r={r}, n={series.n} (1 ≤ r ≤ n requis)")
    return r


def _as_series(series):
    """Accepter TimeSeries ou séquence de réels"""
    return series if isinstance(series, TimeSeries) else TimeSeries(series)


def sliding_maxima(series, r):
    """
    Maxima glissants M_{r,t} = max(X_t, ..., X_{t+r-1}), t = 1..n-r+1

    Filtre de maximum courant O(n) (van Herk / Gil–Werman), identique
    bit à bit au maximum naïf fenêtre par fenêtre.

    Args:
        series (TimeSeries|array-like): Série observée
        r (int): Taille de bloc, 1 ≤ r ≤ n

    Returns:
        BlockMaximaSample: n - r + 1 maxima, schéma "sliding"

    Raises:
        InputError: Si r hors domaine

    Exemple:
        >>> sliding_maxima([1, 3, 2, 5, 4], 2).maxima
        array([3., 3., 5., 5.])
    """
    series = _as_series(series)
    r = _check_block_size(series, r)
    n = series.n

    # Fenêtre centrée de maximum_filter1d : la sortie i couvre
    # [i - r//2, i - r//2 + r - 1], donc le bloc débutant en t est en t + r//2
    filtered = maximum_filter1d(series.values, size=r, mode="nearest")
    offset = r // 2
    maxima = filtered[offset:offset + n - r + 1]

    return BlockMaximaSample(maxima=maxima, r=r, scheme=SLIDING, n=n)


def disjoint_maxima(series, r):
    """
    Maxima de blocs disjoints, h = 1..floor(n/r)

    Args:
        series (TimeSeries|array-like): Série observée
        r (int): Taille de bloc, 1 ≤ r ≤ n

    Returns:
        BlockMaximaSample: floor(n/r) maxima, schéma "disjoint"

    Exemple:
        >>> disjoint_maxima([1, 3, 2, 5, 4], 2).maxima  # le 4 final est ignoré
        array([3., 5.])
    """
    series = _as_series(series)
    r = _check_block_size(series, r)
    m = series.n // r
    maxima = series.values[:m * r].reshape(m, r).max(axis=1)

    return BlockMaximaSample(maxima=maxima, r=r, scheme=DISJOINT, n=series.n)


def block_maxima(series, r, scheme):
    """
    Maxima par blocs selon le schéma demandé

    Args:
        series (TimeSeries|array-like): Série observée
        r (int): Taille de bloc
        scheme (str): "sliding" ou "disjoint"

    Returns:
        BlockMaximaSample: Échantillon de maxima
    """
    if scheme == SLIDING:
        return sliding_maxima(series, r)
    if scheme == DISJOINT:
        return disjoint_maxima(series, r)
    raise InputError(f"Schéma inconnu : {scheme} (attendu : {', '.join(SCHEMES)})")


def left_truncate(sample, c=DEFAULT_TRUNCATION):
    """
    Troncature à gauche X_{n,t} = M_{r,t} ∨ c

    Args:
        sample (BlockMaximaSample): Maxima
        c (float): Niveau de troncature > 0

    Returns:
        BlockMaximaSample: Mêmes comptes et schéma, valeurs max(x, c)

    Raises:
        InputError: Si c ≤ 0

    Exemple:
        >>> left_truncate(disjoint_maxima([-1, 2, 0.5], 1), 1.0).maxima
        array([1., 2., 1.])
    """
    if not (np.isfinite(c) and c > 0):
        raise InputError(f"Niveau de troncature invalide : c={c} (c > 0 requis)")
    return replace(sample, maxima=np.maximum(sample.maxima, c), truncation=float(c))


def log_returns(series, sign="positive"):
    """
    Log-rendements r_t = log(p_{t+1} / p_t)

    Args:
        series (TimeSeries|array-like): Prix strictement positifs, n ≥ 2
        sign (str): "positive" (gains) ou "negative" (pertes, -r_t)

    Returns:
        TimeSeries: n - 1 rendements, étiquetés par la date d'arrivée

    Raises:
        InputError: Si prix non positif, série trop courte ou signe inconnu

    Exemple:
        >>> log_returns([1.0, math.e]).values
        array([1.])
    """
    series = _as_series(series)
    if series.n < 2:
        raise InputError("Au moins deux prix requis pour des log-rendements")
    if sign not in ("positive", "negative"):
        raise InputError(f"Signe inconnu : {sign} (attendu : positive, negative)")
    if np.any(series.values <= 0.0):
        bad = int(np.flatnonzero(series.values <= 0.0)[0])
        raise InputError(f"Prix non positif à la position {bad + 1} : {series.values[bad]}")

    returns = np.diff(np.log(series.values))
    if sign == "negative":
        returns = -returns
    labels = series.labels[1:] if series.labels is not None else None

    return TimeSeries(returns, labels)
