"""
ConfigLoader - Chargement et gestion de la configuration

Module pour gérer la configuration de l'application :
- Charger data/config/app_config.json (ou SLIDINGBLOCKS_CONFIG)
- Valider les sections (pydantic)
- Surcharges par variables d'environnement (.env via python-dotenv)
- Accéder aux valeurs de config avec valeurs par défaut
"""

import os
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, validator

from .data_loader import DataLoader
from ..core.errors import InputError


# =====================================================================
# MODÈLES DE CONFIGURATION
# =====================================================================

class AppSection(BaseModel):
    name: str = "Sliding Blocks"
    version: str = "1.0.0"
    description: str = ""


class EstimationSection(BaseModel):
    truncation: Optional[float] = Field(None, gt=0)
    tolerance: float = Field(1e-12, gt=0)
    max_iter: int = Field(200, ge=1)
    bracket: List[float] = [1e-3, 1e3]
    bracket_limit: List[float] = [1e-6, 1e6]
    confidence: float = Field(0.95, gt=0, lt=1)

    @validator("bracket", "bracket_limit")
    def _positive_interval(cls, value):
        if len(value) != 2 or not 0 < value[0] < value[1]:
            raise ValueError("intervalle [lo, hi] avec 0 < lo < hi attendu")
        return value


class QuadratureSection(BaseModel):
    epsabs: float = Field(1e-13, gt=0)
    epsrel: float = Field(1e-12, gt=0)
    limit: int = Field(200, ge=10)
    max_abserr: float = Field(1e-10, gt=0)


class SimulationSection(BaseModel):
    n: int = Field(1000, ge=2)
    reps: int = Field(3000, ge=1)
    seed: int = Field(20240101, ge=0)
    grid: List[int] = [40]
    burn_in: int = Field(200, ge=0)
    workers: int = Field(1, ge=1)
    failure_threshold: float = Field(0.01, gt=0, lt=1)
    oracle_draws: int = Field(1_000_000, ge=10_000)


class BacktestSection(BaseModel):
    window: int = Field(2500, ge=2)
    r: int = Field(62, ge=1)
    T_list: List[float] = [20, 40, 80]
    sign: str = "negative"
    level: float = Field(0.95, gt=0, lt=1)


class OutputSection(BaseModel):
    format: str = "table"
    json_indent: int = 2

    @validator("format")
    def _known_format(cls, value):
        if value not in ("table", "json", "csv"):
            raise ValueError(f"format inconnu : {value}")
        return value


class LoggingSection(BaseModel):
    level: str = "INFO"
    to_file: bool = False


class AppConfig(BaseModel):
    app: AppSection = AppSection()
    estimation: EstimationSection = EstimationSection()
    quadrature: QuadratureSection = QuadratureSection()
    simulation: SimulationSection = SimulationSection()
    backtest: BacktestSection = BacktestSection()
    output: OutputSection = OutputSection()
    logging: LoggingSection = LoggingSection()


def build_model(model_cls, **fields):
    """
    Instancier un modèle pydantic, erreurs converties en InputError

    Args:
        model_cls (type): Classe pydantic
        **fields: Valeurs des champs

    Returns:
        BaseModel: Instance validée

    Raises:
        InputError: Si un champ viole un invariant

    Exemple:
        >>> build_model(GeneratorSpec, family="iid", innovation="frechet", alpha=1.0)
    """
    try:
        return model_cls(**fields)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])} : {err['msg']}" for err in e.errors()
        )
        raise InputError(f"{model_cls.__name__} invalide : {details}") from e


class ConfigLoader:
    """
    Charge et gère la configuration de l'application
    Centralise accès à tous les paramètres de config
    """

    # Configuration en cache (singleton)
    _config = None
    _settings = None

    ENV_CONFIG = "SLIDINGBLOCKS_CONFIG"
    ENV_WORKERS = "SLIDINGBLOCKS_WORKERS"
    ENV_LOG_LEVEL = "SLIDINGBLOCKS_LOG_LEVEL"

    @staticmethod
    def load(path=None):
        """
        Charger et valider la configuration complète

        Args:
            path (str|None): Fichier JSON (défaut : SLIDINGBLOCKS_CONFIG ou data/config/app_config.json)

        Returns:
            AppConfig: Configuration validée

        Raises:
            InputError: Si fichier absent ou configuration invalide

        Exemple:
            >>> ConfigLoader.load()
            >>> ConfigLoader.get_truncation()
        """
        load_dotenv()
        path = path or os.environ.get(ConfigLoader.ENV_CONFIG) or DataLoader.DEFAULT_PATHS["config"]

        raw = DataLoader.load_json(path)
        ConfigLoader._settings = build_model(AppConfig, **raw)
        ConfigLoader._config = ConfigLoader._settings.dict()
        return ConfigLoader._settings

    @staticmethod
    def settings():
        """Configuration validée (valeurs par défaut si rien n'est chargé)"""
        if ConfigLoader._settings is None:
            ConfigLoader._settings = AppConfig()
            ConfigLoader._config = ConfigLoader._settings.dict()
        return ConfigLoader._settings

    @staticmethod
    def reset():
        """Vider le cache (tests)"""
        ConfigLoader._config = None
        ConfigLoader._settings = None

    # =====================================================================
    # APP INFO
    # =====================================================================

    @staticmethod
    def get_app_name() -> str:
        """Récupérer nom application"""
        return ConfigLoader._get_safe("app", "name", "Sliding Blocks")

    # =====================================================================
    # ESTIMATION
    # =====================================================================

    @staticmethod
    def get_truncation() -> Optional[float]:
        """Constante de troncature c (None : √eps du float64)"""
        return ConfigLoader._get_safe("estimation", "truncation", None)

    @staticmethod
    def get_solver_settings() -> Dict[str, Any]:
        """
        Réglages du solveur Fréchet

        Returns:
            dict: tolerance, max_iter, bracket, bracket_limit (arguments de frechet.fit)
        """
        return {
            "tolerance": ConfigLoader._get_safe("estimation", "tolerance", 1e-12),
            "max_iter": ConfigLoader._get_safe("estimation", "max_iter", 200),
            "bracket": tuple(ConfigLoader._get_safe("estimation", "bracket", [1e-3, 1e3])),
            "bracket_limit": tuple(ConfigLoader._get_safe("estimation", "bracket_limit", [1e-6, 1e6])),
        }

    @staticmethod
    def get_confidence() -> float:
        """Niveau de confiance par défaut"""
        return ConfigLoader._get_safe("estimation", "confidence", 0.95)

    @staticmethod
    def get_quadrature_settings() -> Dict[str, Any]:
        """Tolérances de la quadrature en w (arguments d'AdaptiveQuadrature)"""
        return dict(ConfigLoader._get_safe("quadrature", None, {}) or {})

    # =====================================================================
    # SIMULATION / BACKTEST
    # =====================================================================

    @staticmethod
    def get_simulation() -> Dict[str, Any]:
        """Section simulation"""
        return dict(ConfigLoader._get_safe("simulation", None, {}) or {})

    @staticmethod
    def get_backtest() -> Dict[str, Any]:
        """Section backtest"""
        return dict(ConfigLoader._get_safe("backtest", None, {}) or {})

    @staticmethod
    def get_workers() -> int:
        """
        Nombre de threads (SLIDINGBLOCKS_WORKERS prioritaire)

        Returns:
            int: ≥ 1
        """
        env = os.environ.get(ConfigLoader.ENV_WORKERS)
        if env:
            try:
                return max(1, int(env))
            except ValueError as e:
                raise InputError(f"{ConfigLoader.ENV_WORKERS} non entier : {env}") from e
        return ConfigLoader._get_safe("simulation", "workers", 1)

    # =====================================================================
    # OUTPUT / LOGGING
    # =====================================================================

    @staticmethod
    def get_output_format() -> str:
        """Format de sortie par défaut (table, json, csv)"""
        return ConfigLoader._get_safe("output", "format", "table")

    @staticmethod
    def get_json_indent() -> int:
        """Indentation JSON"""
        return ConfigLoader._get_safe("output", "json_indent", 2)

    @staticmethod
    def get_logging_level() -> str:
        """Niveau logging (SLIDINGBLOCKS_LOG_LEVEL prioritaire)"""
        return os.environ.get(ConfigLoader.ENV_LOG_LEVEL) or ConfigLoader._get_safe("logging", "level", "INFO")

    @staticmethod
    def is_file_logging() -> bool:
        """Écrire aussi les logs dans logs/ ?"""
        return ConfigLoader._get_safe("logging", "to_file", False)

    # =====================================================================
    # UTILITIES
    # =====================================================================

    @staticmethod
    def _get_safe(section: str, key: Optional[str], default: Any = None) -> Any:
        """
        Récupérer valeur config en toute sécurité

        Args:
            section (str): Section config
            key (str|None): Clé (None : section entière)
            default (Any): Valeur par défaut

        Returns:
            Any: Valeur ou défaut
        """
        if not ConfigLoader._config:
            ConfigLoader.settings()

        section_data = ConfigLoader._config.get(section, {})
        if key is None:
            return section_data or default
        value = section_data.get(key, default)
        return default if value is None else value
