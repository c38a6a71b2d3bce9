"""
DataLoader - Chargement et écriture des données

Module pour :
- Lire une série depuis un CSV (colonne par index ou par nom)
- Charger / sauvegarder des fichiers JSON
- Écrire des tableaux CSV (ordre des colonnes stable, flottants exacts)
"""

import json
import math
import os
from pathlib import Path

import pandas as pd
from rapidfuzz import fuzz, process

from ..core.blocks import TimeSeries
from ..core.errors import InputError


class DataLoader:
    """
    Charge les séries (CSV) et fichiers JSON
    Gère les chemins relatifs et erreurs
    """

    # Chemins par défaut (relatifs à racine projet)
    DEFAULT_PATHS = {
        "config": "data/config/app_config.json",
    }

    # Écriture CSV : 17 chiffres significatifs (relecture bit à bit)
    FLOAT_FORMAT = "%.17g"

    @staticmethod
    def _get_absolute_path(relative_path):
        """
        Convertir chemin relatif en absolu

        Args:
            relative_path (str): Chemin relatif depuis racine projet

        Returns:
            str: Chemin absolu
        """
        project_root = Path(__file__).parent.parent.parent
        return str(project_root / relative_path)

    # =====================================================================
    # JSON
    # =====================================================================

    @staticmethod
    def load_json(filepath):
        """
        Charger fichier JSON

        Args:
            filepath (str): Chemin fichier (relatif à la racine projet ou absolu)

        Returns:
            dict: Données JSON

        Raises:
            InputError: Si fichier absent ou JSON invalide

        Exemple:
            >>> data = DataLoader.load_json("data/config/app_config.json")
        """
        if not os.path.isabs(filepath):
            filepath = DataLoader._get_absolute_path(filepath)

        if not os.path.exists(filepath):
            raise InputError(f"Fichier non trouvé : {filepath}")

        try:
            with open(filepath, "r", encoding="utf-8") as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise InputError(f"Erreur JSON : {filepath} ligne {e.lineno} : {e.msg}") from e

    @staticmethod
    def save_json(filepath, data, indent=2):
        """
        Sauvegarder données en JSON (UTF-8, indenté)

        Args:
            filepath (str): Chemin fichier
            data (dict): Données sérialisables
            indent (int): Indentation

        Raises:
            InputError: Si erreur écriture
        """
        try:
            directory = os.path.dirname(os.path.abspath(filepath))
            os.makedirs(directory, exist_ok=True)
            with open(filepath, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=indent, ensure_ascii=False)
                f.write("\n")
        except OSError as e:
            raise InputError(f"Erreur écriture {filepath} : {e}") from e

    # =====================================================================
    # CSV
    # =====================================================================

    @staticmethod
    def _select_column(frame, column, has_header):
        """Résoudre le sélecteur de colonne (index 0-based ou nom d'en-tête)"""
        columns = [str(c) for c in frame.columns]

        if column is None:
            return frame.columns[0]

        if isinstance(column, int) or str(column).lstrip("-").isdigit():
            index = int(column)
            if not 0 <= index < len(columns):
                raise InputError(f"Colonne {index} hors limites ({len(columns)} colonne(s), index 0-based)")
            return frame.columns[index]

        if not has_header:
            raise InputError(f"Sélection par nom ({column}) impossible sans en-tête (--header)")

        if column in columns:
            return frame.columns[columns.index(column)]

        suggestions = process.extract(column, columns, scorer=fuzz.ratio, limit=3)
        hint = ", ".join(name for name, score, _ in suggestions if score >= 50)
        message = f"Colonne inconnue : {column}"
        if hint:
            message += f" (vouliez-vous dire : {hint} ?)"
        raise InputError(message)

    @staticmethod
    def ingest_csv(path, column=None, has_header=False, label_column=None):
        """
        Lire une série ordonnée depuis un CSV (virgule, point décimal, UTF-8)

        Args:
            path (str): Chemin du fichier
            column (int|str|None): Index 0-based ou nom de colonne (défaut : première)
            has_header (bool): Première ligne = en-tête ?
            label_column (int|str|None): Colonne d'étiquettes (dates...)

        Returns:
            TimeSeries: Série (longueur = nombre de lignes de données)

        Raises:
            InputError: Fichier illisible, cellule non numérique (ligne citée), série vide

        Exemple:
            >>> series = DataLoader.ingest_csv("prix.csv", column="close", has_header=True)
            >>> series.n
            15000
        """
        if not os.path.isfile(path):
            raise InputError(f"Fichier non trouvé : {path}")

        try:
            frame = pd.read_csv(
                path,
                header=0 if has_header else None,
                dtype=str,
                keep_default_na=False,
                skip_blank_lines=False,
                encoding="utf-8",
            )
        except pd.errors.EmptyDataError as e:
            raise InputError(f"Série vide : {path}") from e
        except (pd.errors.ParserError, UnicodeDecodeError, OSError) as e:
            raise InputError(f"Fichier illisible {path} : {e}") from e

        if frame.empty:
            raise InputError(f"Série vide : {path}")

        # Lignes vides conservées : offset + première ligne = ligne du fichier
        frame = frame.fillna("")
        blank = frame.apply(lambda row: all(not str(cell).strip() for cell in row), axis=1)
        if blank.all():
            raise InputError(f"Série vide : {path}")

        selected = DataLoader._select_column(frame, column, has_header)
        first_line = 2 if has_header else 1

        values = []
        for offset, cell in enumerate(frame[selected].tolist()):
            if blank.iloc[offset]:
                continue
            text = cell.strip()
            try:
                value = float(text)
            except ValueError:
                value = math.nan
            if not math.isfinite(value):
                raise InputError(
                    f"Valeur non numérique ligne {first_line + offset} : {cell!r} ({path})"
                )
            values.append(value)

        labels = None
        if label_column is not None:
            label_key = DataLoader._select_column(frame, label_column, has_header)
            labels = frame.loc[~blank.to_numpy(), label_key].tolist()

        return TimeSeries(values, labels)

    @staticmethod
    def save_csv(filepath, rows, columns):
        """
        Écrire des lignes en CSV, colonnes dans l'ordre donné

        Args:
            filepath (str|file): Chemin ou flux (sys.stdout)
            rows (list): Liste de dicts
            columns (list): Ordre des colonnes
        """
        frame = pd.DataFrame(rows, columns=columns)
        frame.to_csv(filepath, index=False, float_format=DataLoader.FLOAT_FORMAT, lineterminator="\n")
