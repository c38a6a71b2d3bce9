"""
Output - Émission des résultats

Module pour écrire le résultat d'une commande :
- table : affichage lisible (Display)
- json  : enveloppe {meta, result} (schéma pydantic Envelope)
- csv   : lignes à colonnes stables, meta en fichier annexe <output>.meta.json
"""

import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from ..core.errors import InputError
from ..io.data_loader import DataLoader

FORMATS = ("table", "json", "csv")


class Meta(BaseModel):
    """Métadonnées de reproductibilité jointes à chaque artefact"""

    tool: str
    version: str
    command: str
    created: str
    seed: Optional[int] = None
    config: Dict[str, Any] = {}
    extra: Dict[str, Any] = {}


class Envelope(BaseModel):
    """Document JSON émis : {meta, result}"""

    meta: Meta
    result: Any


@dataclass
class CommandResult:
    """
    Résultat d'une commande, prêt pour les trois formats

    Attributes:
        payload (Any): Objet JSON (champ result)
        rows (list): Lignes CSV (dicts)
        columns (list): Ordre des colonnes CSV
        render (callable): render(stream) pour le format table
        seed (int|None): Graine utilisée (meta)
        extra_meta (dict): Métadonnées propres à la commande (meta.extra)
    """

    payload: Any
    rows: List[dict]
    columns: List[str]
    render: Callable
    seed: Optional[int] = None
    extra_meta: Dict[str, Any] = field(default_factory=dict)


class Output:
    """
    Écrit les résultats sur stdout ou dans --output
    """

    @staticmethod
    def sanitize(obj):
        """
        Convertir en types JSON natifs (tableaux numpy -> listes, NaN/inf -> null)

        Exemple:
            >>> Output.sanitize({"x": np.float64("nan"), "m": np.eye(2)})
            {'x': None, 'm': [[1.0, 0.0], [0.0, 1.0]]}
        """
        if isinstance(obj, dict):
            return {str(k): Output.sanitize(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [Output.sanitize(v) for v in obj]
        if isinstance(obj, np.ndarray):
            return Output.sanitize(obj.tolist())
        if isinstance(obj, (bool, np.bool_)):
            return bool(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, (float, np.floating)):
            value = float(obj)
            return value if math.isfinite(value) else None
        return obj

    @staticmethod
    def make_meta(tool, version, command, config=None, seed=None, extra=None):
        """Construire les métadonnées (horodatage UTC ISO 8601)"""
        return Meta(
            tool=tool,
            version=version,
            command=command,
            created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            seed=seed,
            config=Output.sanitize(config or {}),
            extra=Output.sanitize(extra or {}),
        )

    @staticmethod
    def schema():
        """Schéma JSON des documents émis"""
        return Envelope.schema()

    @staticmethod
    def write_json(envelope, output=None, indent=2):
        """
        Écrire l'enveloppe JSON

        Args:
            envelope (Envelope): Document
            output (str|None): Fichier (None : stdout)
            indent (int): Indentation
        """
        document = Output.sanitize(envelope.dict())
        if output:
            DataLoader.save_json(output, document, indent=indent)
            return
        sys.stdout.write(json.dumps(document, indent=indent, ensure_ascii=False) + "\n")

    @staticmethod
    def write_csv(rows, columns, meta, output=None, indent=2):
        """
        Écrire les lignes en CSV ; avec --output, meta dans <output>.meta.json

        Args:
            rows (list): Lignes (dicts)
            columns (list): Ordre des colonnes
            meta (Meta): Métadonnées
            output (str|None): Fichier (None : stdout)
        """
        clean = [{k: Output.sanitize(row.get(k)) for k in columns} for row in rows]
        if output:
            DataLoader.save_csv(output, clean, columns)
            DataLoader.save_json(f"{output}.meta.json", Output.sanitize(meta.dict()), indent=indent)
            return
        DataLoader.save_csv(sys.stdout, clean, columns)

    @staticmethod
    def emit(result, fmt, meta, output=None, indent=2):
        """
        Émettre un CommandResult dans le format demandé

        Args:
            result (CommandResult): Résultat de la commande
            fmt (str): "table", "json" ou "csv"
            meta (Meta): Métadonnées
            output (str|None): Fichier de sortie

        Raises:
            InputError: Format inconnu ou fichier non inscriptible
        """
        if fmt == "json":
            Output.write_json(Envelope(meta=meta, result=result.payload), output, indent)
        elif fmt == "csv":
            Output.write_csv(result.rows, result.columns, meta, output, indent)
        elif fmt == "table":
            if output:
                try:
                    with open(output, "w", encoding="utf-8") as stream:
                        result.render(stream)
                except OSError as e:
                    raise InputError(f"Erreur écriture {output} : {e}") from e
            else:
                result.render(sys.stdout)
        else:
            raise InputError(f"Format inconnu : {fmt} (attendu : {', '.join(FORMATS)})")
