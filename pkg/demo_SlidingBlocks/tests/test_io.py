"""
test_io.py - Tests des entrées / sorties

Tests pour :
- Lecture CSV (sélection de colonne, erreurs localisées, étiquettes)
- Écriture CSV / JSON
- Configuration (fichier, validation, variables d'environnement)
- Conversion des résultats en JSON natif
"""

import math
import os
import tempfile
import unittest
from unittest import mock

import numpy as np

from src.core.errors import InputError
from src.core.simulate import GeneratorSpec
from src.io.config_loader import ConfigLoader, build_model
from src.io.data_loader import DataLoader
from src.ui.output import Output


class TempDirTestCase(unittest.TestCase):
    """Base : répertoire temporaire par test"""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, text):
        path = os.path.join(self.tmp, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path


class TestIngestCsv(TempDirTestCase):
    """Tests lecture des séries"""

    def test_single_column(self):
        """Test une colonne sans en-tête"""
        path = self.write("serie.csv", "1.5\n2\n-3e-2\n")
        series = DataLoader.ingest_csv(path)
        np.testing.assert_array_equal(series.values, [1.5, 2.0, -0.03])
        self.assertIsNone(series.labels)

    def test_column_by_index(self):
        """Test sélection par index 0-based"""
        path = self.write("serie.csv", "a,1\nb,2\n")
        np.testing.assert_array_equal(DataLoader.ingest_csv(path, column=1).values, [1.0, 2.0])
        np.testing.assert_array_equal(DataLoader.ingest_csv(path, column="1").values, [1.0, 2.0])

    def test_column_by_name_with_labels(self):
        """Test sélection par nom et étiquettes"""
        path = self.write("prix.csv", "date,close\n2020-01-02,100.5\n2020-01-03,101\n")
        series = DataLoader.ingest_csv(path, column="close", has_header=True, label_column="date")
        np.testing.assert_array_equal(series.values, [100.5, 101.0])
        self.assertEqual(series.labels, ("2020-01-02", "2020-01-03"))

    def test_non_numeric_cell_line(self):
        """Test cellule non numérique : ligne citée"""
        path = self.write("prix.csv", "close\n1.0\n2.0\nabc\n")
        with self.assertRaisesRegex(InputError, "ligne 4"):
            DataLoader.ingest_csv(path, column="close", has_header=True)

    def test_line_after_blank_lines(self):
        """Test lignes vides avant la cellule fautive : ligne du fichier citée"""
        path = self.write("prix.csv", "close\n1.0\n\n\n2.0\nabc\n")
        with self.assertRaisesRegex(InputError, "ligne 6 :"):
            DataLoader.ingest_csv(path, column="close", has_header=True)

    def test_blank_lines_skipped(self):
        """Test lignes vides ignorées, étiquettes alignées"""
        path = self.write("prix.csv", "date,close\nd1,1.0\n\nd2,2.5\n\n")
        series = DataLoader.ingest_csv(path, column="close", has_header=True, label_column="date")
        np.testing.assert_array_equal(series.values, [1.0, 2.5])
        self.assertEqual(series.labels, ("d1", "d2"))

    def test_empty_cell(self):
        """Test cellule vide"""
        path = self.write("serie.csv", "1,2\n3,\n")
        with self.assertRaisesRegex(InputError, "ligne 2"):
            DataLoader.ingest_csv(path, column=1)

    def test_unknown_column_suggestion(self):
        """Test nom inconnu : suggestion rapidfuzz"""
        path = self.write("prix.csv", "date,close\nx,1\n")
        with self.assertRaisesRegex(InputError, "close"):
            DataLoader.ingest_csv(path, column="clsoe", has_header=True)

    def test_name_without_header(self):
        """Test nom sans en-tête"""
        path = self.write("serie.csv", "1\n2\n")
        with self.assertRaises(InputError):
            DataLoader.ingest_csv(path, column="close")

    def test_index_out_of_range(self):
        """Test index hors limites"""
        path = self.write("serie.csv", "1\n2\n")
        with self.assertRaises(InputError):
            DataLoader.ingest_csv(path, column=3)

    def test_missing_file(self):
        """Test fichier absent"""
        with self.assertRaisesRegex(InputError, "non trouvé"):
            DataLoader.ingest_csv(os.path.join(self.tmp, "absent.csv"))

    def test_empty_file(self):
        """Test fichier vide"""
        path = self.write("vide.csv", "")
        with self.assertRaisesRegex(InputError, "vide"):
            DataLoader.ingest_csv(path)

    def test_header_only(self):
        """Test en-tête sans données"""
        path = self.write("entete.csv", "close\n")
        with self.assertRaises(InputError):
            DataLoader.ingest_csv(path, has_header=True)


class TestWriters(TempDirTestCase):
    """Tests écriture CSV / JSON"""

    def test_csv_round_trip_exact(self):
        """Test flottants relus bit à bit"""
        values = np.random.default_rng(0).standard_normal(50) * 1e3
        path = os.path.join(self.tmp, "out.csv")
        DataLoader.save_csv(path, [{"x": v} for v in values], ["x"])
        np.testing.assert_array_equal(DataLoader.ingest_csv(path, column="x", has_header=True).values, values)

    def test_csv_column_order(self):
        """Test ordre des colonnes stable"""
        path = os.path.join(self.tmp, "out.csv")
        DataLoader.save_csv(path, [{"b": 1, "a": 2}], ["a", "b"])
        with open(path, encoding="utf-8") as f:
            self.assertEqual(f.readline().strip(), "a,b")

    def test_json_round_trip(self):
        """Test JSON UTF-8 dans un sous-dossier créé"""
        path = os.path.join(self.tmp, "sous", "res.json")
        DataLoader.save_json(path, {"schéma": "sliding", "k": 3})
        self.assertEqual(DataLoader.load_json(path), {"schéma": "sliding", "k": 3})

    def test_invalid_json(self):
        """Test JSON mal formé : ligne citée"""
        path = self.write("bad.json", "{\n  \"a\": ,\n}")
        with self.assertRaisesRegex(InputError, "ligne 2"):
            DataLoader.load_json(path)


class TestConfigLoader(TempDirTestCase):
    """Tests configuration"""

    def setUp(self):
        super().setUp()
        ConfigLoader.reset()

    def tearDown(self):
        ConfigLoader.reset()
        super().tearDown()

    def test_default_file(self):
        """Test fichier de configuration du projet"""
        settings = ConfigLoader.load()
        self.assertEqual(settings.app.name, "Sliding Blocks")
        solver = ConfigLoader.get_solver_settings()
        self.assertEqual(solver["bracket"], (1e-3, 1e3))
        self.assertEqual(solver["tolerance"], 1e-12)
        self.assertIsNone(ConfigLoader.get_truncation())

    def test_defaults_without_file(self):
        """Test valeurs par défaut sans chargement"""
        self.assertEqual(ConfigLoader.get_confidence(), 0.95)
        self.assertEqual(ConfigLoader.get_quadrature_settings()["max_abserr"], 1e-10)

    def test_partial_file(self):
        """Test sections absentes complétées par défaut"""
        path = self.write("cfg.json", '{"estimation": {"truncation": 0.01}}')
        ConfigLoader.load(path)
        self.assertEqual(ConfigLoader.get_truncation(), 0.01)
        self.assertEqual(ConfigLoader.get_backtest()["r"], 62)

    def test_invalid_section(self):
        """Test valeur invalide rejetée"""
        path = self.write("cfg.json", '{"estimation": {"bracket": [10, 1]}}')
        with self.assertRaisesRegex(InputError, "bracket"):
            ConfigLoader.load(path)

    def test_env_config_path(self):
        """Test SLIDINGBLOCKS_CONFIG"""
        path = self.write("cfg.json", '{"output": {"format": "csv"}}')
        with mock.patch.dict(os.environ, {ConfigLoader.ENV_CONFIG: path}):
            ConfigLoader.load()
        self.assertEqual(ConfigLoader.get_output_format(), "csv")

    def test_env_workers(self):
        """Test SLIDINGBLOCKS_WORKERS prioritaire"""
        with mock.patch.dict(os.environ, {ConfigLoader.ENV_WORKERS: "4"}):
            self.assertEqual(ConfigLoader.get_workers(), 4)
        with mock.patch.dict(os.environ, {ConfigLoader.ENV_WORKERS: "beaucoup"}):
            with self.assertRaises(InputError):
                ConfigLoader.get_workers()

    def test_env_log_level(self):
        """Test SLIDINGBLOCKS_LOG_LEVEL prioritaire"""
        with mock.patch.dict(os.environ, {ConfigLoader.ENV_LOG_LEVEL: "DEBUG"}):
            self.assertEqual(ConfigLoader.get_logging_level(), "DEBUG")


class TestBuildModel(unittest.TestCase):
    """Tests validation pydantic"""

    def test_valid(self):
        """Test modèle valide"""
        spec = build_model(GeneratorSpec, family="armax", beta=0.25)
        self.assertEqual(spec.beta, 0.25)

    def test_error_lists_field(self):
        """Test message citant le champ"""
        with self.assertRaisesRegex(InputError, "beta"):
            build_model(GeneratorSpec, beta=2.0)


class TestSanitize(unittest.TestCase):
    """Tests conversion JSON native"""

    def test_numpy_types(self):
        """Test tableaux, entiers et booléens numpy"""
        data = Output.sanitize({"m": np.eye(2), "k": np.int64(3), "ok": np.bool_(True), 1: (1.5, 2)})
        self.assertEqual(data, {"m": [[1.0, 0.0], [0.0, 1.0]], "k": 3, "ok": True, "1": [1.5, 2]})
        self.assertIs(type(data["k"]), int)

    def test_non_finite(self):
        """Test NaN et inf -> None"""
        self.assertEqual(Output.sanitize([math.nan, np.float64("inf"), 2.0]), [None, None, 2.0])

    def test_schema(self):
        """Test schéma de l'enveloppe"""
        schema = Output.schema()
        self.assertIn("meta", schema["properties"])
        self.assertIn("result", schema["properties"])


if __name__ == "__main__":
    unittest.main()
