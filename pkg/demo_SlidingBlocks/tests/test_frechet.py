"""
test_frechet.py - Tests de la loi de Fréchet et de l'ajustement

Tests pour :
- cdf / quantile / simulation
- Ajustement vs oracle indépendant (recherche sur grille)
- Équivariances d'échelle et de puissance
- Convergence sur grand échantillon
- Échantillons dégénérés et erreurs
"""

import math
import unittest

import numpy as np
from scipy import optimize

from src.core import frechet
from src.core.blocks import left_truncate, sliding_maxima
from src.core.errors import ConvergenceError, DegenerateSampleError, InputError
from src.core.frechet import FrechetParams


def neg_profile_loglik(x, alpha):
    """-ℓ(α, σ̂(α)) écrite indépendamment du module"""
    k = len(x)
    sigma_alpha = k / np.sum(x ** (-alpha))
    return -(k * math.log(alpha) + k * math.log(sigma_alpha)
             - (alpha + 1.0) * np.sum(np.log(x)) - k)


def grid_oracle(x):
    """Maximum de vraisemblance par grille puis raffinement borné"""
    x = np.asarray(x, dtype=float)
    grid = np.linspace(0.05, 20.0, 4000)
    values = [neg_profile_loglik(x, a) for a in grid]
    best = grid[int(np.argmin(values))]
    res = optimize.minimize_scalar(
        lambda a: neg_profile_loglik(x, a),
        bounds=(best - 0.01, best + 0.01),
        method="bounded",
        options={"xatol": 1e-12},
    )
    alpha = res.x
    sigma = (len(x) / np.sum(x ** (-alpha))) ** (1.0 / alpha)
    return alpha, sigma


class TestDistribution(unittest.TestCase):
    """Tests loi de Fréchet"""

    def test_cdf_at_scale(self):
        """Test G(σ) = e^{-1}"""
        self.assertAlmostEqual(frechet.cdf(FrechetParams(1.0, 1.0), 1.0), math.exp(-1.0), places=15)
        self.assertAlmostEqual(frechet.cdf(FrechetParams(3.0, 2.0), 2.0), math.exp(-1.0), places=15)

    def test_cdf_nonpositive(self):
        """Test G(x) = 0 pour x ≤ 0"""
        values = frechet.cdf(FrechetParams(2.0, 1.0), np.array([-1.0, 0.0, 1.0]))
        np.testing.assert_array_equal(values[:2], [0.0, 0.0])

    def test_quantile_inverts_cdf(self):
        """Test G⁻¹(G(x)) = x"""
        params = FrechetParams(1.7, 2.5)
        x = np.array([0.5, 1.0, 3.0, 40.0])
        np.testing.assert_allclose(frechet.quantile(params, frechet.cdf(params, x)), x, rtol=1e-12)

    def test_quantile_out_of_range(self):
        """Test p hors de (0, 1)"""
        for p in (0.0, 1.0, 1.5, -0.1):
            with self.subTest(p=p):
                with self.assertRaises(InputError):
                    frechet.quantile(FrechetParams(1.0, 1.0), p)

    def test_invalid_params(self):
        """Test paramètres non positifs"""
        with self.assertRaises(InputError):
            FrechetParams(0.0, 1.0)
        with self.assertRaises(InputError):
            FrechetParams(1.0, float("nan"))

    def test_sample_median(self):
        """Test médiane empirique ≈ σ (log 2)^{-1/α}"""
        params = FrechetParams(2.0, 3.0)
        draws = frechet.sample(np.random.default_rng(3), params, 200_000)
        self.assertTrue(np.all(draws > 0))
        expected = 3.0 * math.log(2.0) ** (-0.5)
        self.assertAlmostEqual(float(np.median(draws)) / expected, 1.0, delta=0.01)


class TestFit(unittest.TestCase):
    """Tests ajustement par maximum de vraisemblance"""

    def test_three_points_vs_grid_oracle(self):
        """Test {1, 2, 4} vs oracle indépendant (1e-4)"""
        fit = frechet.fit([1.0, 2.0, 4.0])
        alpha, sigma = grid_oracle([1.0, 2.0, 4.0])
        self.assertAlmostEqual(fit.params.alpha, alpha, delta=1e-4)
        self.assertAlmostEqual(fit.params.sigma, sigma, delta=1e-4)
        self.assertEqual(fit.k, 3)
        self.assertIsNone(fit.scheme)

    def test_score_vanishes_at_fit(self):
        """Test score brut nul à l'estimateur"""
        x = frechet.sample(np.random.default_rng(11), FrechetParams(1.3, 0.7), 500)
        fit = frechet.fit(x)
        score_alpha, score_sigma = frechet.score(x, fit.params)
        self.assertAlmostEqual(score_alpha, 0.0, delta=1e-7)
        self.assertAlmostEqual(score_sigma, 0.0, delta=1e-7)
        self.assertAlmostEqual(frechet.profile_score(x, fit.params.alpha), 0.0, delta=1e-9)
        self.assertAlmostEqual(frechet.profile_sigma(x, fit.params.alpha), fit.params.sigma, places=12)

    def test_fit_maximizes_likelihood(self):
        """Test ℓ(θ̂) ≥ ℓ(θ) au voisinage"""
        x = frechet.sample(np.random.default_rng(5), FrechetParams(2.0, 1.0), 300)
        fit = frechet.fit(x)
        best = frechet.log_likelihood(x, fit.params)
        for da, ds in ((0.01, 0.0), (-0.01, 0.0), (0.0, 0.01), (0.0, -0.01)):
            other = FrechetParams(fit.params.alpha + da, fit.params.sigma + ds)
            self.assertGreater(best, frechet.log_likelihood(x, other))

    def test_scale_and_power_equivariance(self):
        """Test fit(cX) = (α, cσ) et fit(X^p) = (α/p, σ^p) sur 100 échantillons"""
        rng = np.random.default_rng(2024)
        for i in range(100):
            x = frechet.sample(rng, FrechetParams(rng.uniform(0.5, 4.0), rng.uniform(0.2, 5.0)), 60)
            c = rng.uniform(0.1, 10.0)
            p = rng.uniform(0.5, 2.0)
            base = frechet.fit(x).params
            scaled = frechet.fit(c * x).params
            powered = frechet.fit(x ** p).params
            with self.subTest(sample=i):
                self.assertAlmostEqual(scaled.alpha / base.alpha, 1.0, delta=1e-9)
                self.assertAlmostEqual(scaled.sigma / (c * base.sigma), 1.0, delta=1e-9)
                self.assertAlmostEqual(powered.alpha / (base.alpha / p), 1.0, delta=1e-9)
                self.assertAlmostEqual(powered.sigma / base.sigma ** p, 1.0, delta=1e-9)

    def test_power_of_two_scaling_exact(self):
        """Test fit(2^j X) = (α, 2^j σ) bit à bit"""
        x = frechet.sample(np.random.default_rng(17), FrechetParams(1.5, 2.0), 200)
        base = frechet.fit(x).params
        for j in (-3, 1, 2, 10):
            with self.subTest(j=j):
                scaled = frechet.fit(np.ldexp(x, j)).params
                self.assertEqual(scaled.alpha, base.alpha)
                self.assertEqual(scaled.sigma, math.ldexp(base.sigma, j))

    def test_large_sample_consistency(self):
        """Test n = 1e5 : α̂ et σ̂ proches des vraies valeurs"""
        x = frechet.sample(np.random.default_rng(99), FrechetParams(2.0, 3.0), 100_000)
        fit = frechet.fit(x)
        self.assertAlmostEqual(fit.params.alpha, 2.0, delta=0.03)
        self.assertAlmostEqual(fit.params.sigma / 3.0, 1.0, delta=0.02)

    def test_block_maxima_metadata(self):
        """Test comptes propagés depuis l'échantillon de maxima"""
        series = frechet.sample(np.random.default_rng(1), FrechetParams(1.0, 1.0), 1000)
        fit = frechet.fit(left_truncate(sliding_maxima(series, 25)))
        self.assertEqual(fit.k, 976)
        self.assertEqual(fit.scheme, "sliding")
        self.assertAlmostEqual(fit.m_effective, 40.0)
        self.assertIsNotNone(fit.truncation)
        self.assertEqual(fit.to_dict()["r"], 25)

    def test_large_alpha_expands_bracket(self):
        """Test valeurs très proches : intervalle élargi au-delà de 1e3"""
        fit = frechet.fit([1.0, 1.0001, 1.0002, 1.00005])
        self.assertGreater(fit.params.alpha, 1e3)
        self.assertTrue(fit.solver.expanded)


class TestFitErrors(unittest.TestCase):
    """Tests erreurs d'ajustement"""

    def test_all_equal(self):
        """Test valeurs toutes égales"""
        with self.assertRaises(DegenerateSampleError):
            frechet.fit([2.0, 2.0, 2.0])

    def test_too_few_values(self):
        """Test moins de deux valeurs"""
        with self.assertRaises(DegenerateSampleError):
            frechet.fit([1.0])

    def test_nonpositive_value(self):
        """Test valeur non positive (position citée)"""
        with self.assertRaisesRegex(InputError, "position 2"):
            frechet.fit([1.0, -1.0, 3.0])

    def test_bracket_limit_exhausted(self):
        """Test racine hors de l'intervalle maximal"""
        with self.assertRaises(ConvergenceError):
            frechet.fit([1.0, 1.001, 1.002], bracket=(0.5, 1.0), bracket_limit=(0.5, 10.0))


if __name__ == "__main__":
    unittest.main()
