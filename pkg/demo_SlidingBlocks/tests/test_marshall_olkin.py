"""
test_marshall_olkin.py - Tests de la loi bivariée et des covariances H

Tests pour :
- Fonction de Pickands et fonction de répartition jointe
- Tirage des couples (S, T)
- Covariances H par quadrature, formes closes des intégrales en ξ
- Oracle Monte Carlo de Σ_Y
"""

import math
import unittest

import numpy as np
from scipy import integrate

from src.core import marshall_olkin as mo
from src.core.asymptotics import sigma_Y
from src.core.errors import InputError
from src.core.marshall_olkin import HCase


class TestPickands(unittest.TestCase):
    """Tests fonction de dépendance"""

    def test_endpoints(self):
        """Test A(0) = A(1) = 1"""
        for xi in (0.0, 0.3, 1.0):
            self.assertEqual(mo.pickands(xi, 0.0), 1.0)
            self.assertEqual(mo.pickands(xi, 1.0), 1.0)

    def test_bounds(self):
        """Test max(w, 1-w) ≤ A(w) ≤ 1"""
        for xi in (0.0, 0.25, 0.8):
            for w in np.linspace(0.0, 1.0, 41):
                value = mo.pickands(xi, float(w))
                self.assertLessEqual(max(w, 1.0 - w), value + 1e-15)
                self.assertLessEqual(value, 1.0)

    def test_independence(self):
        """Test ξ = 1 : A ≡ 1"""
        self.assertEqual(mo.pickands(1.0, 0.5), 1.0)

    def test_complete_dependence(self):
        """Test ξ = 0 : A(w) = max(w, 1-w)"""
        self.assertEqual(mo.pickands(0.0, 0.25), 0.75)

    def test_out_of_range(self):
        """Test ξ ou w hors de [0, 1]"""
        with self.assertRaises(InputError):
            mo.pickands(1.5, 0.5)
        with self.assertRaises(InputError):
            mo.pickands(0.5, -0.1)


class TestJointCdf(unittest.TestCase):
    """Tests fonction de répartition jointe"""

    def test_margins(self):
        """Test marges Fréchet(α₀, 1)"""
        for xi in (0.0, 0.4, 1.0):
            value = mo.joint_cdf(2.0, xi, 1.5, 1e12)
            self.assertAlmostEqual(value, math.exp(-1.5 ** -2.0), places=12)

    def test_independence_beyond_one(self):
        """Test ξ ≥ 1 : produit des marges"""
        expected = math.exp(-2.0 ** -1.0) * math.exp(-3.0 ** -1.0)
        self.assertAlmostEqual(mo.joint_cdf(1.0, 2.5, 2.0, 3.0), expected, places=15)

    def test_complete_dependence(self):
        """Test ξ = 0 : G(min(x, y))"""
        self.assertAlmostEqual(mo.joint_cdf(1.0, 0.0, 2.0, 3.0), math.exp(-0.5), places=15)

    def test_rectangle_inequality(self):
        """Test masse positive des rectangles"""
        rng = np.random.default_rng(4)
        for _ in range(300):
            alpha0 = rng.uniform(0.5, 3.0)
            xi = rng.uniform(0.0, 1.2)
            x1, x2 = np.sort(rng.uniform(0.2, 5.0, 2))
            y1, y2 = np.sort(rng.uniform(0.2, 5.0, 2))
            mass = (mo.joint_cdf(alpha0, xi, x2, y2) - mo.joint_cdf(alpha0, xi, x1, y2)
                    - mo.joint_cdf(alpha0, xi, x2, y1) + mo.joint_cdf(alpha0, xi, x1, y1))
            self.assertGreaterEqual(mass, -1e-14)

    def test_invalid_arguments(self):
        """Test arguments invalides"""
        with self.assertRaises(InputError):
            mo.joint_cdf(1.0, -0.1, 1.0, 1.0)
        with self.assertRaises(InputError):
            mo.joint_cdf(1.0, 0.5, 0.0, 1.0)
        with self.assertRaises(InputError):
            mo.joint_cdf(0.0, 0.5, 1.0, 1.0)


class TestSamplePair(unittest.TestCase):
    """Tests tirage (S, T)"""

    def test_complete_dependence(self):
        """Test ξ = 0 : S = T"""
        s, t = mo.sample_pair(np.random.default_rng(0), 0.0, 1000)
        np.testing.assert_array_equal(s, t)

    def test_exponential_margins(self):
        """Test moyennes unité"""
        n = 200_000
        s, t = mo.sample_pair(np.random.default_rng(1), 0.5, n)
        self.assertAlmostEqual(float(np.mean(s)), 1.0, delta=4.0 / math.sqrt(n))
        self.assertAlmostEqual(float(np.mean(t)), 1.0, delta=4.0 / math.sqrt(n))

    def test_covariance(self):
        """Test Cov(S, T) ≈ 2/(1+ξ) - 1 = 1/3 pour ξ = 1/2"""
        s, t = mo.sample_pair(np.random.default_rng(2), 0.5, 400_000)
        self.assertAlmostEqual(float(np.cov(s, t)[0, 1]), 1.0 / 3.0, delta=0.02)

    def test_scalar_draw(self):
        """Test tirage scalaire"""
        s, t = mo.sample_pair(np.random.default_rng(3), 0.2)
        self.assertIsInstance(s, float)
        self.assertGreater(t, 0.0)

    def test_invalid_xi(self):
        """Test ξ hors de [0, 1]"""
        with self.assertRaises(InputError):
            mo.sample_pair(np.random.default_rng(0), np.array([0.5, 1.5]), 2)


class TestCovH(unittest.TestCase):
    """Tests covariances H(ξ)"""

    def test_h00_11_closed_form(self):
        """Test H(0,0,1,1; ξ) = 2/(1+ξ) - 1"""
        for xi in np.linspace(0.0, 1.0, 11):
            self.assertAlmostEqual(mo.cov_H(HCase.H00_11, float(xi)), 2.0 / (1.0 + xi) - 1.0, delta=1e-10)

    def test_h00_11_decreasing(self):
        """Test H(0,0,1,1; ξ) décroissant de 1 (ξ=0) à 0 (ξ=1)"""
        values = [mo.cov_H(HCase.H00_11, float(xi)) for xi in np.linspace(0.0, 1.0, 21)]
        self.assertAlmostEqual(values[0], 1.0, delta=1e-10)
        self.assertAlmostEqual(values[-1], 0.0, delta=1e-10)
        self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_h11_00_log_covariance_integral(self):
        """Test H(1,1,0,0; ξ) = ∫ -log A_ξ(w) / (w(1-w)) dw, intégré directement"""
        for xi in (0.0, 0.25, 0.5, 0.9):
            with self.subTest(xi=xi):
                expected, _ = integrate.quad(
                    lambda w: -math.log(mo.pickands(xi, w)) / (w * (1.0 - w)),
                    0.0, 1.0, points=[0.5], epsabs=1e-13, epsrel=1e-12, limit=200,
                )
                self.assertAlmostEqual(mo.cov_H(HCase.H11_00, xi), expected, delta=1e-9)

    def test_h11_00_matches_sampled_log_covariance(self):
        """Test H(1,1,0,0; 1/2) ≈ Cov(log S, log T) sur 400 000 couples"""
        s, t = mo.sample_pair(np.random.default_rng(5), 0.5, 400_000)
        empirical = float(np.cov(np.log(s), np.log(t))[0, 1])
        self.assertAlmostEqual(mo.cov_H(HCase.H11_00, 0.5), empirical, delta=0.02)

    def test_all_cases_vanish_at_independence(self):
        """Test H(ξ = 1) = 0 pour les six cas"""
        for case in HCase:
            with self.subTest(case=case.label):
                self.assertAlmostEqual(mo.cov_H(case, 1.0), 0.0, delta=1e-9)

    def test_h11_00_complete_dependence(self):
        """Test H(1,1,0,0; 0) = Var(log E) = π²/6"""
        self.assertAlmostEqual(mo.cov_H(HCase.H11_00, 0.0), math.pi ** 2 / 6.0, delta=1e-9)

    def test_invalid_xi(self):
        """Test ξ > 1"""
        with self.assertRaises(InputError):
            mo.cov_H(HCase.H00_11, 1.01)

    def test_from_label(self):
        """Test lecture des libellés"""
        self.assertIs(HCase.from_label("0,0,1,1"), HCase.H00_11)
        self.assertIs(HCase.from_label("(1,1,0,0)"), HCase.H11_00)
        self.assertEqual(HCase.H01_10.label, "(0,1,1,0)")
        for text in ("9,9,9,9", "a,b"):
            with self.assertRaises(InputError):
                HCase.from_label(text)


class TestIntegrals(unittest.TestCase):
    """Tests intégrales en ξ et assemblage de Σ_Y"""

    @classmethod
    def setUpClass(cls):
        cls.report = mo.verification_table(alpha0=1.0, draws=0)

    def test_quadrature_matches_closed_forms(self):
        """Test écart quadrature / forme close ≤ 1e-8"""
        self.assertEqual(len(self.report.rows), 6)
        for row in self.report.rows:
            with self.subTest(case=row["case"]):
                self.assertLessEqual(row["abs_diff"], 1e-8)
        self.assertLessEqual(self.report.max_deviation, 1e-8)

    def test_assembled_sigma_Y(self):
        """Test Σ_Y assemblé depuis la quadrature"""
        np.testing.assert_allclose(self.report.sigma_Y_assembled, self.report.sigma_Y_closed, atol=1e-7)
        self.assertIsNone(self.report.oracle)
        self.assertIsNone(self.report.to_dict()["oracle"])

    def test_closed_assembly_equals_sigma_Y(self):
        """Test assemblage des formes closes = sigma_Y"""
        integrals = {case: mo.cov_H_integral_closed(case) for case in HCase}
        for alpha0 in (0.5, 1.0, 2.5):
            np.testing.assert_allclose(mo.assemble_sigma_Y(alpha0, integrals), sigma_Y(alpha0), rtol=1e-13)


class TestOracle(unittest.TestCase):
    """Tests oracle Monte Carlo de Σ_Y"""

    def test_matches_closed_form(self):
        """Test 10⁶ tirages : écart ≤ 4 erreurs standard"""
        oracle = mo.mc_sigma_Y_oracle(2024, 1.0, 1_000_000)
        deviation = np.abs(oracle.estimate - sigma_Y(1.0))
        self.assertTrue(np.all(deviation <= 4.0 * oracle.stderr), msg=f"{deviation} vs {oracle.stderr}")
        np.testing.assert_array_equal(oracle.estimate, oracle.estimate.T)

    def test_reproducible(self):
        """Test même graine -> même estimation"""
        first = mo.mc_sigma_Y_oracle(7, 2.0, 20_000)
        second = mo.mc_sigma_Y_oracle(7, 2.0, 20_000)
        np.testing.assert_array_equal(first.estimate, second.estimate)

    def test_worker_invariance(self):
        """Test résultat identique pour 1 et 2 threads"""
        single = mo.mc_sigma_Y_oracle(11, 1.0, 250_000, workers=1)
        double = mo.mc_sigma_Y_oracle(11, 1.0, 250_000, workers=2)
        np.testing.assert_array_equal(single.estimate, double.estimate)
        np.testing.assert_array_equal(single.stderr, double.stderr)

    def test_too_few_draws(self):
        """Test moins de 10⁴ tirages"""
        with self.assertRaises(InputError):
            mo.mc_sigma_Y_oracle(0, 1.0, 9_999)


if __name__ == "__main__":
    unittest.main()
