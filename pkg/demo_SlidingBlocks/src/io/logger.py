"""
Logger - Logging de l'application

Module pour gérer les logs :
- Logging console colorisé (colorlog), sur stderr
- Événements structurés clé=valeur (structlog)
- Fichier optionnel sous logs/
- Helpers : sections, durée d'exécution, diagnostics d'ajustement
"""

import logging
import os
import sys
from pathlib import Path

import colorlog
import structlog


class Logger:
    """
    Gère le logging de l'application
    Console (stderr) + fichier optionnel, événements structurés
    """

    _configured = False
    _level = logging.INFO
    _to_file = False

    # Répertoire logs (relatif à la racine projet)
    LOGS_DIR = "logs"

    FORMAT = "%(log_color)s%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    DATEFMT = "%Y-%m-%d %H:%M:%S"

    @staticmethod
    def _ensure_logs_dir():
        """Créer dossier logs s'il n'existe pas"""
        logs_path = Path(__file__).parent.parent.parent / Logger.LOGS_DIR
        logs_path.mkdir(exist_ok=True)
        return logs_path

    @staticmethod
    def configure(level=None, to_file=None):
        """
        Configurer le logging (idempotent, reconfigurable)

        Args:
            level (str|int): Niveau (DEBUG, INFO, WARNING, ERROR) ;
                défaut : SLIDINGBLOCKS_LOG_LEVEL ou INFO
            to_file (bool): Écrire aussi dans logs/sliding_blocks.log ?

        Exemple:
            >>> Logger.configure("DEBUG")
            >>> Logger.get_logger("core.frechet").debug("fit", alpha=1.0)
        """
        if level is None:
            level = os.environ.get("SLIDINGBLOCKS_LOG_LEVEL", "INFO")
        if isinstance(level, str):
            level = logging.getLevelName(level.upper())
            if not isinstance(level, int):
                level = logging.INFO
        if to_file is not None:
            Logger._to_file = to_file

        Logger._level = level

        root = logging.getLogger("sliding_blocks")
        root.setLevel(level)
        root.propagate = False
        for handler in list(root.handlers):
            root.removeHandler(handler)

        # Handler console (stderr : stdout reste réservé aux résultats)
        console_handler = colorlog.StreamHandler(sys.stderr)
        console_handler.setFormatter(colorlog.ColoredFormatter(Logger.FORMAT, datefmt=Logger.DATEFMT))
        root.addHandler(console_handler)

        # Handler fichier (optionnel)
        if Logger._to_file:
            try:
                log_file = Logger._ensure_logs_dir() / "sliding_blocks.log"
                file_handler = logging.FileHandler(log_file, encoding="utf-8")
                file_handler.setFormatter(logging.Formatter(
                    "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                    datefmt=Logger.DATEFMT,
                ))
                root.addHandler(file_handler)
            except OSError as e:
                root.warning(f"Impossible créer log fichier : {e}")

        structlog.configure(
            processors=[
                structlog.stdlib.filter_by_level,
                structlog.processors.StackInfoRenderer(),
                structlog.processors.format_exc_info,
                structlog.processors.KeyValueRenderer(key_order=["event"], sort_keys=True),
            ],
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=False,
        )
        Logger._configured = True

    @staticmethod
    def get_logger(name):
        """
        Récupérer logger structuré

        Args:
            name (str): Nom du logger (ex: "core.frechet")

        Returns:
            structlog.stdlib.BoundLogger: Logger configuré

        Exemple:
            >>> logger = Logger.get_logger("core.simulate")
            >>> logger.info("cellule_terminee", estimator="sliding", m=40)
        """
        if not Logger._configured:
            Logger.configure()
        return structlog.get_logger(f"sliding_blocks.{name}")

    @staticmethod
    def log_section(title, logger_name="app"):
        """
        Log une section (titre avec séparation)

        Exemple:
            >>> Logger.log_section("SIMULATION MONTE CARLO")
        """
        logger = Logger.get_logger(logger_name)
        separator = "=" * (len(title) + 4)
        logger.info(separator)
        logger.info(f"  {title}")
        logger.info(separator)

    @staticmethod
    def log_execution(func_name, status, duration=None):
        """
        Log exécution d'une commande

        Args:
            func_name (str): Nom commande
            status (str): "start", "end", "error"
            duration (float): Durée exécution (optionnel)
        """
        logger = Logger.get_logger("app.execution")

        if status == "start":
            logger.info("demarrage", command=func_name)
        elif status == "end":
            logger.info("fin", command=func_name, duration=round(duration or 0.0, 3))
        elif status == "error":
            logger.error("erreur", command=func_name, duration=round(duration or 0.0, 3))

    @staticmethod
    def log_fit(fit, logger_name="core.frechet"):
        """
        Log diagnostics d'un ajustement Fréchet

        Args:
            fit (FrechetFit): Résultat de frechet.fit
        """
        logger = Logger.get_logger(logger_name)
        logger.debug(
            "ajustement_frechet",
            alpha=fit.params.alpha,
            sigma=fit.params.sigma,
            k=fit.k,
            iterations=fit.solver.iterations,
            residual=fit.solver.residual,
        )
