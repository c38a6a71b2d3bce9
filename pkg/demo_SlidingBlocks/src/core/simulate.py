"""
Simulate - Générateurs, estimateur de Hill et étude Monte Carlo

Module pour :
- Générer des séries iid (Fréchet, Pareto, |t|) ou ARMAX
- Estimateur de Hill (comparateur)
- Étude Monte Carlo biais² / variance / MSE de α̂ (sliding, disjoint, Hill)
- Trajectoires α̂ en fonction de r sur une série donnée
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, validator

from . import frechet
from .blocks import DEFAULT_TRUNCATION, DISJOINT, SLIDING, TimeSeries, block_maxima, left_truncate
from .errors import DegenerateSampleError, EstimationError, InputError
from ..io.logger import Logger

logger = Logger.get_logger("core.simulate")

HILL = "hill"
ESTIMATORS = (SLIDING, DISJOINT, HILL)
FAMILIES = ("iid", "armax")
INNOVATIONS = ("frechet", "pareto", "abs_t")

# Réplications par tâche du pool de threads
REPS_PER_TASK = 50

RNG_DESCRIPTION = "numpy PCG64, SeedSequence(seed, spawn_key=(replication,))"


# =====================================================================
# CONFIGURATION
# =====================================================================

class GeneratorSpec(BaseModel):
    """
    Modèle générateur des séries simulées

    Attributes:
        family (str): "iid" ou "armax"
        innovation (str): "frechet", "pareto" ou "abs_t"
        alpha (float): Indice de queue > 0
        beta (float): Paramètre ARMAX dans [0, 1)
        burn_in (int): Valeurs initiales écartées (ARMAX)
    """

    family: str = "iid"
    innovation: str = "frechet"
    alpha: float = Field(1.0, gt=0)
    beta: float = Field(0.0, ge=0, lt=1)
    burn_in: int = Field(200, ge=0)

    @validator("family")
    def _known_family(cls, value):
        if value not in FAMILIES:
            raise ValueError(f"famille inconnue : {value} (attendu : {', '.join(FAMILIES)})")
        return value

    @validator("innovation")
    def _known_innovation(cls, value):
        if value not in INNOVATIONS:
            raise ValueError(f"innovation inconnue : {value} (attendu : {', '.join(INNOVATIONS)})")
        return value


class McConfig(BaseModel):
    """
    Plan d'expérience Monte Carlo

    Attributes:
        n (int): Longueur des séries
        estimators (list): Sous-ensemble de {sliding, disjoint, hill}
        grid (list): Tailles effectives m (blocs : r = n // m ; Hill : m plus grandes valeurs)
        reps (int): Nombre de réplications
        seed (int): Graine maître
        truncation (float|None): Constante c (défaut : √eps)
        failure_threshold (float): Part d'échecs invalidant une cellule
        workers (int): Threads
    """

    n: int = Field(1000, ge=2)
    estimators: List[str] = list(ESTIMATORS)
    grid: List[int] = [40]
    reps: int = Field(3000, ge=1)
    seed: int = Field(0, ge=0)
    truncation: Optional[float] = Field(None, gt=0)
    failure_threshold: float = Field(0.01, gt=0, lt=1)
    workers: int = Field(1, ge=1)

    @validator("estimators")
    def _known_estimators(cls, value):
        unknown = [e for e in value if e not in ESTIMATORS]
        if unknown or not value:
            raise ValueError(f"estimateurs inconnus : {unknown} (attendu : {', '.join(ESTIMATORS)})")
        return list(dict.fromkeys(value))

    @validator("grid")
    def _valid_grid(cls, value, values):
        if not value:
            raise ValueError("grille vide")
        n = values.get("n")
        for m in value:
            if m < 2:
                raise ValueError(f"m={m} < 2")
            if n is not None and m >= n:
                raise ValueError(f"m={m} ≥ n={n}")
        return value


# =====================================================================
# GÉNÉRATEURS
# =====================================================================

def _innovations(rng, spec, count):
    """Tirages iid de la loi d'innovation"""
    if spec.innovation == "frechet":
        return frechet.sample(rng, frechet.FrechetParams(spec.alpha, 1.0), count)
    if spec.innovation == "pareto":
        # 1 - U ∈ (0, 1] : valeurs ≥ 1
        return (1.0 - rng.random(count)) ** (-1.0 / spec.alpha)
    # |t_α| = |N| / √(χ²_α / α)
    normal = rng.standard_normal(count)
    chi2 = rng.chisquare(spec.alpha, count)
    return np.abs(normal) / np.sqrt(chi2 / spec.alpha)


def generate(rng, spec, n):
    """
    Générer une série de longueur n

    ARMAX : X_t = max(βX_{t-1}, (1-β)Z_t), démarrée à X = (1-β)Z sur la
    première valeur de préchauffage ; les burn_in premières valeurs sont
    écartées. Calcul vectorisé sur l'échelle log via la représentation
    causale X_t = max_{s ≤ t} β^{t-s}(1-β)Z_s.

    Args:
        rng (np.random.Generator): Générateur
        spec (GeneratorSpec): Modèle
        n (int): Longueur ≥ 1

    Returns:
        TimeSeries: Série simulée

    Exemple:
        >>> spec = GeneratorSpec(family="armax", innovation="frechet", alpha=1.0, beta=0.5)
        >>> generate(np.random.default_rng(1), spec, 1000).n
        1000
    """
    if n < 1:
        raise InputError(f"Longueur de série invalide : n={n}")

    if spec.family == "iid":
        return TimeSeries(_innovations(rng, spec, n))

    total = spec.burn_in + n
    z = _innovations(rng, spec, total)

    if spec.beta == 0.0:
        x = z
    else:
        log_beta = math.log(spec.beta)
        steps = np.arange(total, dtype=np.float64) * log_beta
        with np.errstate(divide="ignore"):
            shifted = np.log((1.0 - spec.beta) * z) - steps
        x = np.exp(steps + np.maximum.accumulate(shifted))

    return TimeSeries(x[spec.burn_in:])


# =====================================================================
# HILL
# =====================================================================

def hill(sample, m):
    """
    Estimateur de Hill α̂ = m / Σᵢ log(X₍n-i+1₎ / X₍n-m₎)

    Args:
        sample (array-like|TimeSeries): Observations
        m (int): Nombre de plus grandes valeurs, 2 ≤ m < n

    Returns:
        float: Estimation de l'indice de queue

    Raises:
        InputError: Si m hors domaine
        EstimationError: Seuil non positif ou somme des logs nulle

    Exemple:
        >>> hill([1.0, 2.0, 4.0, 8.0], 3)  # 1 / (2 log 2)
        0.7213475204444817
    """
    values = sample.values if isinstance(sample, TimeSeries) else np.asarray(sample, dtype=np.float64)
    x = np.sort(np.ravel(values))
    n = x.size
    if isinstance(m, bool) or int(m) != m or not 2 <= m < n:
        raise InputError(f"m hors domaine : m={m}, n={n} (2 ≤ m < n requis)")
    m = int(m)

    threshold = x[n - m - 1]
    if not threshold > 0.0:
        raise EstimationError(f"Seuil de Hill non positif : X(n-m)={threshold}")

    log_sum = float(np.sum(np.log(x[n - m:] / threshold)))
    if log_sum <= 0.0:
        raise DegenerateSampleError("Somme des log-excès nulle : les m+1 plus grandes valeurs sont égales")
    return m / log_sum


# =====================================================================
# ÉTUDE MONTE CARLO
# =====================================================================

@dataclass(frozen=True)
class McCell:
    """Agrégats d'une cellule (estimateur, m)"""

    estimator: str
    m: int
    r: Optional[int]
    mean: float
    bias2: float
    variance: float
    mse: float
    reps: int
    failures: int
    valid: bool

    def to_dict(self):
        return {
            "estimator": self.estimator,
            "m": self.m,
            "r": self.r,
            "mean": self.mean,
            "bias2": self.bias2,
            "variance": self.variance,
            "mse": self.mse,
            "reps": self.reps,
            "failures": self.failures,
            "valid": self.valid,
        }


@dataclass(frozen=True)
class McResult:
    """
    Résultat de l'étude Monte Carlo

    Attributes:
        cells (list): McCell, ordonnées par (estimateur, m)
        reps (int): Réplications
        seed (int): Graine maître
        metadata (dict): Générateur aléatoire, versions, conventions
    """

    cells: List[McCell]
    reps: int
    seed: int
    metadata: dict = field(default_factory=dict)

    COLUMNS = ("estimator", "m", "r", "mean", "bias2", "variance", "mse", "reps", "failures", "valid")

    def cell(self, estimator, m):
        for c in self.cells:
            if c.estimator == estimator and c.m == m:
                return c
        raise KeyError((estimator, m))

    def variance_ratio(self, m):
        """Var(α̂ sliding) / Var(α̂ disjoint) pour la taille effective m"""
        return self.cell(SLIDING, m).variance / self.cell(DISJOINT, m).variance

    def to_rows(self):
        return [c.to_dict() for c in self.cells]


def _estimate(series, estimator, m, truncation, solver):
    """α̂ d'un estimateur sur une série"""
    if estimator == HILL:
        return hill(series, m)
    r = series.n // m
    sample = left_truncate(block_maxima(series, r, estimator), truncation)
    return frechet.fit(sample, **solver).params.alpha


def _replication_block(config, spec, reps, truncation, solver):
    """Réplications [start, stop) : tableau (rep, estimateur × m), NaN si échec"""
    start, stop = reps
    keys = [(e, m) for e in config.estimators for m in config.grid]
    out = np.full((stop - start, len(keys)), np.nan)
    failures = []

    for i, rep in enumerate(range(start, stop)):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed, spawn_key=(rep,))))
        series = generate(rng, spec, config.n)
        for j, (estimator, m) in enumerate(keys):
            try:
                out[i, j] = _estimate(series, estimator, m, truncation, solver)
            except (InputError, EstimationError) as e:
                failures.append((rep, estimator, m, str(e)))
    return out, failures


def run_mc(config, spec, solver=None):
    """
    Étude Monte Carlo de α̂ pour chaque (estimateur, m)

    Chaque réplication est entièrement déterminée par (seed, indice) ;
    l'agrégation suit l'ordre des réplications, donc le résultat ne
    dépend pas du nombre de threads.

    Args:
        config (McConfig): Plan d'expérience
        spec (GeneratorSpec): Générateur
        solver (dict|None): Réglages de frechet.fit

    Returns:
        McResult: biais² / variance (dénominateur reps) / MSE par cellule
    """
    solver = solver or {}
    truncation = config.truncation or DEFAULT_TRUNCATION
    start_time = time.perf_counter()
    Logger.log_section("SIMULATION MONTE CARLO", "core.simulate")
    logger.info("plan", n=config.n, reps=config.reps, grid=config.grid,
                estimators=config.estimators, family=spec.family, innovation=spec.innovation)

    bounds = [(s, min(s + REPS_PER_TASK, config.reps)) for s in range(0, config.reps, REPS_PER_TASK)]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        blocks = list(pool.map(lambda b: _replication_block(config, spec, b, truncation, solver), bounds))

    estimates = np.vstack([b[0] for b in blocks])
    failures = [f for b in blocks for f in b[1]]
    for rep, estimator, m, reason in failures[:20]:
        logger.warning("echec_ajustement", rep=rep, estimator=estimator, m=m, reason=reason)

    keys = [(e, m) for e in config.estimators for m in config.grid]
    cells = []
    for j, (estimator, m) in enumerate(keys):
        column = estimates[:, j]
        ok = column[~np.isnan(column)]
        n_fail = config.reps - ok.size
        valid = n_fail < config.failure_threshold * config.reps and ok.size > 0
        if ok.size:
            mean = math.fsum(ok) / ok.size
            variance = math.fsum((ok - mean) ** 2) / ok.size
        else:
            mean = variance = math.nan
        bias2 = (mean - spec.alpha) ** 2
        cells.append(McCell(
            estimator=estimator,
            m=m,
            r=None if estimator == HILL else config.n // m,
            mean=mean,
            bias2=bias2,
            variance=variance,
            mse=bias2 + variance,
            reps=config.reps,
            failures=n_fail,
            valid=valid,
        ))
        logger.info("cellule_terminee", estimator=estimator, m=m, mse=cells[-1].mse, failures=n_fail)
        if not valid:
            logger.warning("cellule_invalide", estimator=estimator, m=m, failures=n_fail)

    metadata = {
        "rng": RNG_DESCRIPTION,
        "numpy_version": np.__version__,
        "variance_denominator": "reps",
        "truncation": truncation,
        "config": config.dict(),
        "generator": spec.dict(),
        "duration": round(time.perf_counter() - start_time, 3),
    }
    return McResult(cells=cells, reps=config.reps, seed=config.seed, metadata=metadata)


# =====================================================================
# TRAJECTOIRES
# =====================================================================

def unique_block_sizes(n, m_min, m_max):
    """
    Tailles de bloc distinctes r = n // m pour m ∈ [m_min, m_max], croissantes

    Exemple:
        >>> len(unique_block_sizes(1000, 16, 250))
        44
    """
    if not 1 <= m_min <= m_max <= n:
        raise InputError(f"Plage de m invalide : [{m_min}, {m_max}] pour n={n}")
    return sorted({n // m for m in range(m_min, m_max + 1)})


def trajectory(series, r_grid, truncation=None, solver=None):
    """
    α̂ en fonction de r pour les trois estimateurs (Hill avec m = n // r)

    Args:
        series (TimeSeries|array-like): Série observée
        r_grid (iterable): Tailles de bloc
        truncation (float|None): Constante c
        solver (dict|None): Réglages de frechet.fit

    Returns:
        list: Une ligne par r : {r, m, sliding, disjoint, hill, errors};
            une valeur vaut None si l'ajustement échoue (message dans errors)
    """
    series = series if isinstance(series, TimeSeries) else TimeSeries(series)
    truncation = truncation or DEFAULT_TRUNCATION
    solver = solver or {}
    rows = []
    for r in r_grid:
        m = series.n // r if r >= 1 else 0
        row = {"r": r, "m": m, "errors": {}}
        for estimator in ESTIMATORS:
            try:
                if estimator == HILL:
                    row[estimator] = hill(series, m)
                else:
                    sample = left_truncate(block_maxima(series, r, estimator), truncation)
                    row[estimator] = frechet.fit(sample, **solver).params.alpha
            except (InputError, EstimationError) as e:
                row[estimator] = None
                row["errors"][estimator] = str(e)
        rows.append(row)
    return rows
