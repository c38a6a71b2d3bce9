"""
test_blocks.py - Tests unitaires de l'extraction des maxima

Tests pour :
- Maxima glissants (filtre O(n) vs maximum naïf)
- Maxima disjoints
- Troncature à gauche
- Log-rendements
"""

import math
import unittest

import numpy as np

from src.core.blocks import (
    DEFAULT_TRUNCATION,
    TimeSeries,
    block_maxima,
    disjoint_maxima,
    left_truncate,
    log_returns,
    sliding_maxima,
)
from src.core.errors import InputError


def naive_sliding(values, r):
    return np.array([max(values[t:t + r]) for t in range(len(values) - r + 1)])


class TestSlidingMaxima(unittest.TestCase):
    """Tests maxima glissants"""

    def test_small_example(self):
        """Test exemple simple r=2"""
        sample = sliding_maxima([1, 3, 2, 5, 4], 2)
        np.testing.assert_array_equal(sample.maxima, [3.0, 3.0, 5.0, 5.0])
        self.assertEqual(sample.k, 4)
        self.assertEqual(sample.scheme, "sliding")

    def test_matches_naive_bitwise(self):
        """Test identité bit à bit avec le maximum naïf (r pairs et impairs)"""
        rng = np.random.default_rng(7)
        values = rng.standard_normal(257)
        for r in (1, 2, 3, 8, 13, 64, 256, 257):
            with self.subTest(r=r):
                np.testing.assert_array_equal(sliding_maxima(values, r).maxima, naive_sliding(values, r))

    def test_r_equals_one_is_identity(self):
        """Test r=1 : la série elle-même"""
        values = [0.5, -2.0, 3.25]
        np.testing.assert_array_equal(sliding_maxima(values, 1).maxima, values)

    def test_r_equals_n(self):
        """Test r=n : un seul maximum"""
        sample = sliding_maxima([4.0, 9.0, 1.0], 3)
        np.testing.assert_array_equal(sample.maxima, [9.0])

    def test_block_size_out_of_range(self):
        """Test r hors domaine"""
        for r in (0, 6, -1):
            with self.subTest(r=r):
                with self.assertRaises(InputError):
                    sliding_maxima([1, 2, 3, 4, 5], r)

    def test_nesting_in_block_size(self):
        """Test r₁ ≤ r₂ : maximum glissant croissant en r à début fixé"""
        values = np.random.default_rng(11).standard_normal(120)
        for r1, r2 in ((1, 2), (3, 7), (10, 60), (59, 120)):
            with self.subTest(r1=r1, r2=r2):
                small = sliding_maxima(values, r1).maxima
                large = sliding_maxima(values, r2).maxima
                self.assertTrue(np.all(large >= small[:large.size]))

    def test_non_integer_block_size(self):
        """Test r non entier"""
        with self.assertRaises(InputError):
            sliding_maxima([1, 2, 3], 1.5)


class TestDisjointMaxima(unittest.TestCase):
    """Tests maxima disjoints"""

    def test_incomplete_block_ignored(self):
        """Test dernier bloc incomplet ignoré"""
        sample = disjoint_maxima([1, 3, 2, 5, 4], 2)
        np.testing.assert_array_equal(sample.maxima, [3.0, 5.0])
        self.assertEqual(sample.m, 2)

    def test_counts(self):
        """Test k = n - r + 1 et m = n // r"""
        sample = block_maxima(np.arange(100.0), 7, "disjoint")
        self.assertEqual(sample.maxima.size, 14)
        self.assertEqual(sample.k, 94)
        self.assertAlmostEqual(sample.m_effective, 100 / 7)

    def test_every_r_th_sliding_maximum(self):
        """Test maxima disjoints = un maximum glissant sur r"""
        values = np.random.default_rng(12).standard_normal(103)
        for r in (1, 4, 7, 10, 103):
            with self.subTest(r=r):
                sliding = sliding_maxima(values, r).maxima
                np.testing.assert_array_equal(disjoint_maxima(values, r).maxima, sliding[::r][:103 // r])

    def test_unknown_scheme(self):
        """Test schéma inconnu"""
        with self.assertRaises(InputError):
            block_maxima([1.0, 2.0], 1, "overlapping")


class TestTruncation(unittest.TestCase):
    """Tests troncature à gauche"""

    def test_truncation_values(self):
        """Test max(x, c)"""
        sample = left_truncate(disjoint_maxima([-1.0, 2.0, 0.5], 1), 1.0)
        np.testing.assert_array_equal(sample.maxima, [1.0, 2.0, 1.0])
        self.assertEqual(sample.truncation, 1.0)

    def test_default_truncation(self):
        """Test constante par défaut √eps"""
        self.assertAlmostEqual(DEFAULT_TRUNCATION, math.sqrt(np.finfo(float).eps))
        sample = left_truncate(sliding_maxima([-3.0, -2.0, -1.0], 2))
        self.assertTrue(np.all(sample.maxima == DEFAULT_TRUNCATION))

    def test_invalid_truncation(self):
        """Test c ≤ 0"""
        sample = sliding_maxima([1.0, 2.0], 1)
        for c in (0.0, -1.0, float("nan")):
            with self.subTest(c=c):
                with self.assertRaises(InputError):
                    left_truncate(sample, c)


class TestTimeSeries(unittest.TestCase):
    """Tests série observée"""

    def test_empty_series(self):
        """Test série vide"""
        with self.assertRaises(InputError):
            TimeSeries([])

    def test_non_finite_value(self):
        """Test valeur non finie (position citée)"""
        with self.assertRaisesRegex(InputError, "position 2"):
            TimeSeries([1.0, float("inf"), 2.0])

    def test_labels_length(self):
        """Test longueur des étiquettes"""
        with self.assertRaises(InputError):
            TimeSeries([1.0, 2.0], labels=["a"])

    def test_window(self):
        """Test sous-série avec étiquettes"""
        series = TimeSeries([1.0, 2.0, 3.0], labels=["d1", "d2", "d3"])
        window = series.window(1, 3)
        self.assertEqual(window.labels, ("d2", "d3"))
        self.assertEqual(window.n, 2)


class TestLogReturns(unittest.TestCase):
    """Tests log-rendements"""

    def test_simple_return(self):
        """Test prix {1, e} -> {1}"""
        np.testing.assert_allclose(log_returns([1.0, math.e]).values, [1.0], rtol=1e-15)

    def test_negative_sign(self):
        """Test signe négatif : opposé exact"""
        prices = [100.0, 101.5, 99.0, 99.5]
        positive = log_returns(prices, "positive").values
        negative = log_returns(prices, "negative").values
        np.testing.assert_array_equal(negative, -positive)

    def test_constant_prices(self):
        """Test prix constants -> rendements nuls"""
        np.testing.assert_array_equal(log_returns([5.0, 5.0, 5.0]).values, [0.0, 0.0])

    def test_nonpositive_price(self):
        """Test prix non positif"""
        with self.assertRaisesRegex(InputError, "position 2"):
            log_returns([1.0, 0.0, 2.0])

    def test_too_short(self):
        """Test un seul prix"""
        with self.assertRaises(InputError):
            log_returns([1.0])

    def test_labels_follow_arrival(self):
        """Test étiquettes = date d'arrivée"""
        series = TimeSeries([1.0, 2.0, 4.0], labels=["lun", "mar", "mer"])
        self.assertEqual(log_returns(series).labels, ("mar", "mer"))


if __name__ == "__main__":
    unittest.main()
