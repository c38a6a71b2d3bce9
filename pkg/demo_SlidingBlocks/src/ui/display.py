"""
Display - Affichage console

Module pour afficher dans la console (format "table") :
- Bannières et sections
- Tableaux alignés
- Matrices
- Paires clé / valeur
- Messages succès / erreur
"""

import math
import sys
from typing import Iterable, List, Optional

import numpy as np


class Display:
    """
    Gère l'affichage lisible dans la console
    Format unifié ; les sorties machine passent par Output
    """

    # Caractères spéciaux
    CHARS = {
        'cross': '❌',
        'warning': '⚠️',
    }

    WIDTH = 72

    @staticmethod
    def _out(stream):
        return stream or sys.stdout

    @staticmethod
    def format_value(value, digits: int = 6) -> str:
        """
        Formater une cellule (flottants à `digits` chiffres significatifs)

        Exemple:
            >>> Display.format_value(0.494587123)
            '0.494587'
        """
        if value is None:
            return "-"
        if isinstance(value, (bool, np.bool_)):
            return "oui" if value else "non"
        if isinstance(value, (float, np.floating)):
            if math.isnan(value):
                return "nan"
            return f"{value:.{digits}g}"
        return str(value)

    @staticmethod
    def print_banner(title: str, subtitle: str = "", width: int = WIDTH, stream=None):
        """
        Afficher bannière avec titre

        Args:
            title (str): Titre principal
            subtitle (str): Sous-titre (optionnel)
            width (int): Largeur (caractères)
        """
        out = Display._out(stream)
        print("=" * width, file=out)
        print(f"  {title.center(width - 4)}", file=out)
        if subtitle:
            print(f"  {subtitle.center(width - 4)}", file=out)
        print("=" * width, file=out)

    @staticmethod
    def print_section(title: str, width: int = WIDTH, stream=None):
        """Afficher section de titre"""
        out = Display._out(stream)
        print("\n" + "-" * width, file=out)
        print(f"  {title}", file=out)
        print("-" * width, file=out)

    @staticmethod
    def print_table(headers: List[str], rows: Iterable[Iterable], digits: int = 6, stream=None):
        """
        Afficher tableau aligné (largeur de colonne ajustée au contenu)

        Args:
            headers (list): En-têtes colonnes
            rows (list): Lignes de données
            digits (int): Chiffres significatifs des flottants
        """
        out = Display._out(stream)
        cells = [[Display.format_value(v, digits) for v in row] for row in rows]
        widths = [len(h) for h in headers]
        for row in cells:
            widths = [max(w, len(c)) for w, c in zip(widths, row)]

        header_row = " | ".join(h.ljust(w) for h, w in zip(headers, widths))
        print(f"  {header_row}", file=out)
        print("  " + "-" * len(header_row), file=out)
        for row in cells:
            print("  " + " | ".join(c.rjust(w) for c, w in zip(row, widths)), file=out)

    @staticmethod
    def print_matrix(title: str, matrix, labels: Optional[List[str]] = None, digits: int = 4, stream=None):
        """
        Afficher une matrice avec titre

        Args:
            title (str): Nom de la matrice
            matrix (array-like): Matrice 2-D
            labels (list): Étiquettes des lignes (optionnel)
        """
        out = Display._out(stream)
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        print(f"\n  {title}", file=out)
        for i, row in enumerate(matrix):
            prefix = f"{labels[i]:>6} " if labels else ""
            print("    " + prefix + "  ".join(f"{v:>10.{digits}f}" for v in row), file=out)

    @staticmethod
    def print_key_values(pairs, digits: int = 6, stream=None):
        """Afficher des paires clé : valeur alignées"""
        out = Display._out(stream)
        pairs = list(pairs.items()) if isinstance(pairs, dict) else list(pairs)
        width = max((len(str(k)) for k, _ in pairs), default=0)
        for key, value in pairs:
            print(f"  {str(key).ljust(width)} : {Display.format_value(value, digits)}", file=out)

    @staticmethod
    def print_error(message: str, stream=None):
        """Afficher message erreur (stderr par défaut)"""
        print(f"  {Display.CHARS['cross']} {message}", file=stream or sys.stderr)

    @staticmethod
    def print_warning(message: str, stream=None):
        """Afficher message avertissement"""
        print(f"  {Display.CHARS['warning']} {message}", file=Display._out(stream))
