"""
Backtest Manager - Backtest glissant des niveaux de retour

Module pour :
- Préparer la série (prix -> log-rendements, signe)
- Faire rouler une fenêtre d'apprentissage sur la série
- Ajuster Fréchet sur les maxima glissants de chaque fenêtre
- Comparer RL(T, r) au maximum du bloc suivant
- Agréger les dépassements et la bande binomiale exacte attendue
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, validator
from scipy import stats

from . import frechet, returnlevel
from .blocks import DEFAULT_TRUNCATION, TimeSeries, left_truncate, log_returns, sliding_maxima
from .errors import EstimationError, InputError
from ..io.logger import Logger

logger = Logger.get_logger("core.backtest")

# Niveau de la bande binomiale des dépassements
BAND_LEVEL = 0.99


class BacktestConfig(BaseModel):
    """
    Paramètres du backtest

    Attributes:
        window (int): Longueur de la fenêtre d'apprentissage
        r (int): Taille de bloc
        step (int|None): Pas de roulement (défaut : r)
        T_list (list): Périodes de retour (en blocs)
        sign (str): "positive" ou "negative" (log-rendements)
        level (float): Niveau des intervalles de confiance
        truncation (float|None): Constante c
    """

    window: int = Field(2500, ge=2)
    r: int = Field(62, ge=1)
    step: Optional[int] = Field(None, ge=1)
    T_list: List[float] = [20, 40, 80]
    sign: str = "negative"
    level: float = Field(0.95, gt=0, lt=1)
    truncation: Optional[float] = Field(None, gt=0)

    @validator("T_list")
    def _periods(cls, value):
        if not value or any(T <= 1 for T in value):
            raise ValueError("périodes de retour > 1 requises")
        return value

    @validator("sign")
    def _known_sign(cls, value):
        if value not in ("positive", "negative"):
            raise ValueError(f"signe inconnu : {value}")
        return value

    @property
    def effective_step(self):
        return self.step or self.r


@dataclass(frozen=True)
class RollResult:
    """
    Résultat d'un roulement

    Attributes:
        index (int): Numéro du roulement
        start (int): Début de la fenêtre (0-based)
        end_label (str): Étiquette de la dernière observation d'apprentissage
        realized (float): Maximum des r observations suivantes
        levels (dict): T -> RL̂(T, r)
        exceeded (dict): T -> realized > RL̂
        params (ParameterInterval|None): α̂, σ̂ et intervalles
        failed (bool): Ajustement échoué ?
        reason (str): Message d'échec
    """

    index: int
    start: int
    end_label: str
    realized: float
    levels: Dict[float, float] = field(default_factory=dict)
    exceeded: Dict[float, bool] = field(default_factory=dict)
    params: Optional[returnlevel.ParameterInterval] = None
    failed: bool = False
    reason: str = ""


@dataclass(frozen=True)
class BacktestReport:
    """
    Rapport du backtest

    Attributes:
        rolls (list): RollResult
        totals (dict): T -> {exceedances, rolls, expected, band_low, band_high, within_band}
        failed (int): Roulements échoués (exclus des totaux)
        config (BacktestConfig): Paramètres
    """

    rolls: List[RollResult]
    totals: Dict[float, dict]
    failed: int
    config: BacktestConfig

    def to_rows(self):
        """Une ligne par roulement, colonnes stables"""
        rows = []
        for roll in self.rolls:
            row = {
                "roll": roll.index,
                "start": roll.start,
                "end_label": roll.end_label,
                "failed": roll.failed,
                "alpha": roll.params.alpha if roll.params else None,
                "alpha_low": roll.params.alpha_low if roll.params else None,
                "alpha_high": roll.params.alpha_high if roll.params else None,
                "sigma": roll.params.sigma if roll.params else None,
                "sigma_low": roll.params.sigma_low if roll.params else None,
                "sigma_high": roll.params.sigma_high if roll.params else None,
                "realized": roll.realized,
            }
            for T in self.config.T_list:
                row[f"rl_T{T:g}"] = roll.levels.get(T)
                row[f"exceed_T{T:g}"] = roll.exceeded.get(T)
            rows.append(row)
        return rows

    def columns(self):
        base = ["roll", "start", "end_label", "failed", "alpha", "alpha_low", "alpha_high",
                "sigma", "sigma_low", "sigma_high", "realized"]
        for T in self.config.T_list:
            base += [f"rl_T{T:g}", f"exceed_T{T:g}"]
        return base

    def to_dict(self):
        return {
            "config": self.config.dict(),
            "rolls": len(self.rolls),
            "failed": self.failed,
            "totals": [dict(T=T, **total) for T, total in self.totals.items()],
            "per_roll": self.to_rows(),
        }


def prepare_series(series, series_type, sign):
    """
    Série analysée : log-rendements signés

    Args:
        series (TimeSeries): Prix ou rendements
        series_type (str): "prices" ou "returns"
        sign (str): "positive" ou "negative"

    Returns:
        TimeSeries: Rendements (pertes si sign="negative")
    """
    if series_type == "prices":
        return log_returns(series, sign)
    if series_type == "returns":
        if sign == "negative":
            return TimeSeries(-series.values, series.labels)
        return series
    raise InputError(f"Type de série inconnu : {series_type} (attendu : prices, returns)")


class BacktestManager:
    """
    Gère l'exécution complète du backtest
    Orchestre : fenêtre -> maxima glissants -> ajustement -> niveaux -> comparaison
    """

    def __init__(self, series, config, solver=None):
        """
        Initialiser le manager

        Args:
            series (TimeSeries): Série analysée (rendements signés)
            config (BacktestConfig): Paramètres
            solver (dict|None): Réglages de frechet.fit

        Raises:
            InputError: Si window + r > n
        """
        self.series = series if isinstance(series, TimeSeries) else TimeSeries(series)
        self.config = config
        self.solver = solver or {}
        self.truncation = config.truncation or DEFAULT_TRUNCATION

        if config.window + config.r > self.series.n:
            raise InputError(
                f"Série trop courte : window + r = {config.window + config.r} > n = {self.series.n}"
            )

        self.results = []

    def roll_starts(self):
        """Débuts des fenêtres : 0, step, ... tant que start + window + r ≤ n"""
        last = self.series.n - self.config.window - self.config.r
        return list(range(0, last + 1, self.config.effective_step))

    def run(self):
        """
        Exécuter tous les roulements

        Returns:
            BacktestReport: Résultats par roulement et totaux
        """
        Logger.log_section("BACKTEST DES NIVEAUX DE RETOUR", "core.backtest")
        starts = self.roll_starts()
        logger.info("plan", rolls=len(starts), window=self.config.window, r=self.config.r)

        self.results = [self._evaluate_roll(i, start) for i, start in enumerate(starts)]
        return self._summary()

    def _evaluate_roll(self, index, start):
        """Ajuster sur la fenêtre et comparer au bloc suivant"""
        cfg = self.config
        stop = start + cfg.window
        values = self.series.values
        realized = float(np.max(values[stop:stop + cfg.r]))
        end_label = self.series.labels[stop - 1] if self.series.labels is not None else str(stop - 1)

        try:
            sample = left_truncate(sliding_maxima(values[start:stop], cfg.r), self.truncation)
            fit = frechet.fit(sample, **self.solver)
            levels = {T: returnlevel.estimate(fit, T) for T in cfg.T_list}
            params = returnlevel.parameter_ci(fit, level=cfg.level)
        except (InputError, EstimationError) as e:
            logger.warning("roulement_echoue", roll=index, start=start, reason=str(e))
            return RollResult(index=index, start=start, end_label=end_label, realized=realized,
                              failed=True, reason=str(e))

        return RollResult(
            index=index,
            start=start,
            end_label=end_label,
            realized=realized,
            levels=levels,
            exceeded={T: realized > level for T, level in levels.items()},
            params=params,
        )

    def _summary(self):
        """Agréger les dépassements et la bande binomiale par période"""
        ok = [roll for roll in self.results if not roll.failed]
        totals = {}
        for T in self.config.T_list:
            count = sum(1 for roll in ok if roll.exceeded[T])
            band_low, band_high = stats.binom.interval(BAND_LEVEL, len(ok), 1.0 / T) if ok else (0.0, 0.0)
            totals[T] = {
                "exceedances": count,
                "rolls": len(ok),
                "expected": len(ok) / T,
                "band_low": int(band_low),
                "band_high": int(band_high),
                "within_band": bool(band_low <= count <= band_high),
            }
            logger.info("depassements", T=T, exceedances=count, expected=round(len(ok) / T, 2))

        return BacktestReport(
            rolls=self.results,
            totals=totals,
            failed=len(self.results) - len(ok),
            config=self.config,
        )


def backtest(series, config, solver=None):
    """
    Backtest glissant (raccourci pour BacktestManager(...).run())

    Exemple:
        >>> report = backtest(series, BacktestConfig(window=2500, r=62, T_list=[20]))
        >>> report.totals[20]["exceedances"]
    """
    return BacktestManager(series, config, solver).run()
