import math
import os
import unittest
from fractions import Fraction

import numpy as np
import pytest

from trispec.core import DomainError, GeometryError, VerificationError
from trispec.euclidean import (HEXAGONAL, SQUARE, TRIANGULAR, AffineIsometry,
                               check_periodicity, counting_euclidean, dual_rotation_map,
                               evaluate_word, invert_word, lattice_model,
                               leading_weyl_coefficient, orbifold_multiplicities,
                               orbifold_multiplicity, realize_generators_affine, render_word,
                               torus_multiplicities, torus_multiplicity,
                               verify_fixed_point_free, wavevector, wavevector_norm_exact)
from trispec.numtheory import representation_counts

FULL = bool(os.environ.get('TRISPEC_FULL'))
GROUPS = (HEXAGONAL, SQUARE, TRIANGULAR)


class TestLatticeModels(unittest.TestCase):
    def test_models(self):
        hexagonal = lattice_model((6, 3, 2))
        self.assertEqual(hexagonal.kind, 'hexagonal')
        self.assertEqual(hexagonal.quotient_order, 6)
        self.assertEqual(hexagonal.dual_form.coefficients, (1, 1, 1))
        np.testing.assert_allclose(hexagonal.tau, [4 * math.pi / math.sqrt(3), 0.0])
        np.testing.assert_allclose(hexagonal.sigma, [2 * math.pi / math.sqrt(3), 2 * math.pi])
        self.assertEqual(lattice_model(TRIANGULAR).quotient_order, 3)
        square = lattice_model(SQUARE)
        self.assertEqual(square.quotient_order, 4)
        self.assertEqual(square.dual_form.coefficients, (1, 0, 1))

    def test_rejects_other_geometries(self):
        with self.assertRaises(GeometryError):
            lattice_model((2, 3, 5))
        with self.assertRaises(GeometryError):
            lattice_model((2, 3, 7))

    def test_wavevectors(self):
        model = lattice_model(HEXAGONAL)
        np.testing.assert_allclose(wavevector(model, 2, 1), [math.sqrt(3), 2.0])
        np.testing.assert_allclose(wavevector(lattice_model(SQUARE), 3, -4), [3.0, -4.0])

    def test_exact_eigenvalue_identity(self):
        for model in (lattice_model(HEXAGONAL), lattice_model(SQUARE)):
            for m in range(-12, 13):
                for n in range(-12, 13):
                    exact = wavevector_norm_exact(model, m, n)
                    self.assertIsInstance(exact, Fraction)
                    self.assertEqual(exact, model.dual_form(m, n))
                    k = wavevector(model, m, n)
                    self.assertAlmostEqual(float(k @ k), float(exact), places=9)

    def test_periodicity(self):
        for sig in GROUPS:
            self.assertLess(check_periodicity(lattice_model(sig), samples=500, seed=3), 1e-9)


class TestMultiplicities(unittest.TestCase):
    def test_torus_examples(self):
        hexagonal = lattice_model(HEXAGONAL)
        square = lattice_model(SQUARE)
        self.assertEqual(torus_multiplicity(hexagonal, 0), 1)
        self.assertEqual(torus_multiplicity(hexagonal, 7), 12)
        self.assertEqual(torus_multiplicity(hexagonal, 2), 0)
        self.assertEqual(torus_multiplicity(square, 25), 12)
        self.assertEqual(torus_multiplicity(square, 2.5), 0)

    def test_orbifold_examples(self):
        self.assertEqual(orbifold_multiplicity(SQUARE, 0), 1)
        self.assertEqual(orbifold_multiplicity(SQUARE, 5), 2)
        self.assertEqual(orbifold_multiplicity(SQUARE, 10), 2)
        self.assertEqual(orbifold_multiplicity(SQUARE, 3), 0)
        self.assertEqual(orbifold_multiplicity(HEXAGONAL, 7), 2)
        self.assertEqual(orbifold_multiplicity(HEXAGONAL, 1), 1)
        self.assertEqual(orbifold_multiplicity(TRIANGULAR, 3), 2)
        self.assertEqual(orbifold_multiplicity(TRIANGULAR, 7.0), 4)
        self.assertEqual(orbifold_multiplicity(TRIANGULAR, 0.5), 0)
        with self.assertRaises(DomainError):
            orbifold_multiplicity(SQUARE, -1)

    def test_batch_matches_brute_force(self):
        Lambda = 100000 if FULL else 5000
        for sig in GROUPS:
            model = lattice_model(sig)
            torus = torus_multiplicities(model, Lambda)
            np.testing.assert_array_equal(torus, representation_counts(model.dual_form, Lambda))
            orbifold = orbifold_multiplicities(sig, Lambda)
            self.assertEqual(orbifold[0], 1)
            np.testing.assert_array_equal(orbifold[1:] * model.quotient_order, torus[1:])
            for lam in (1, 3, 7, 13, 49, 91, 97):
                self.assertEqual(orbifold[lam], orbifold_multiplicity(sig, lam))

    def test_triangular_is_twice_hexagonal(self):
        Lambda = 100000 if FULL else 10000
        hexagonal = orbifold_multiplicities(HEXAGONAL, Lambda)
        triangular = orbifold_multiplicities(TRIANGULAR, Lambda)
        np.testing.assert_array_equal(triangular[1:], 2 * hexagonal[1:])


class TestDualRotation(unittest.TestCase):
    def test_matrices(self):
        np.testing.assert_array_equal(dual_rotation_map(HEXAGONAL).matrix, [[1, 1], [-1, 0]])
        np.testing.assert_array_equal(dual_rotation_map(SQUARE).matrix, [[0, 1], [-1, 0]])
        hexagonal = dual_rotation_map(HEXAGONAL).matrix
        np.testing.assert_array_equal(dual_rotation_map(TRIANGULAR).matrix, hexagonal @ hexagonal)

    def test_apply_preserves_form(self):
        for sig in GROUPS:
            dual = dual_rotation_map(sig)
            form = lattice_model(sig).dual_form
            self.assertEqual(dual.apply(2, -5, times=dual.order), (2, -5))
            for m, n in ((1, 0), (3, -1), (-4, 7)):
                self.assertEqual(form(*dual.apply(m, n)), form(m, n))

    def test_fixed_point_free(self):
        expected = {HEXAGONAL: {1: 1, 2: 3, 3: 4, 4: 3, 5: 1},
                    SQUARE: {1: 2, 2: 4, 3: 2},
                    TRIANGULAR: {1: 3, 2: 3}}
        for sig, dets in expected.items():
            report = verify_fixed_point_free(sig)
            self.assertTrue(report.passed)
            self.assertEqual(report.determinants, dets)


class TestAffine(unittest.TestCase):
    def test_composition(self):
        rot = AffineIsometry.rotation_about(math.pi / 2, (1.0, 0.0))
        np.testing.assert_allclose(rot((1.0, 0.0)), [1.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(rot((2.0, 0.0)), [1.0, 1.0], atol=1e-12)
        shift = AffineIsometry.translation_by((0.0, 3.0))
        np.testing.assert_allclose((shift @ rot)((2.0, 0.0)), [1.0, 4.0], atol=1e-12)
        self.assertTrue((rot @ rot.inverse()).is_close(AffineIsometry.identity()))
        self.assertAlmostEqual(rot.angle, math.pi / 2)
        np.testing.assert_allclose(rot.as_matrix() @ [2.0, 0.0, 1.0], [1.0, 1.0, 1.0],
                                   atol=1e-12)

    def test_words(self):
        self.assertEqual(invert_word('atA'), 'aTA')
        self.assertEqual(invert_word('Ts'), 'St')
        self.assertEqual(render_word('aB'), 'α β⁻¹')
        self.assertEqual(render_word(''), 'e')
        letters = {'a': AffineIsometry.rotation_about(math.pi / 3),
                   'b': AffineIsometry.translation_by((1.0, 0.0))}
        word = evaluate_word('abA', letters)
        np.testing.assert_allclose(word.translation, [0.5, math.sqrt(3) / 2], atol=1e-12)

    def test_relations_hold(self):
        for sig in GROUPS:
            realization = realize_generators_affine(sig)
            self.assertTrue(realization.passed)
            # 3 presentation relations, 2 translation words, 4 conjugations and their inverses
            self.assertEqual(len(realization.checks), 13)
            for check in realization.checks:
                self.assertLess(check.error, 1e-9, check.name)

    def test_alpha_centers(self):
        centers = {HEXAGONAL: (-2 * math.pi / math.sqrt(3), 0.0),
                   SQUARE: (0.0, -math.pi),
                   TRIANGULAR: (-2 * math.pi / math.sqrt(3), -2 * math.pi / 3)}
        for sig, center in centers.items():
            realization = realize_generators_affine(sig)
            np.testing.assert_allclose(realization.alpha_center, center, atol=1e-9)
            gamma = realization.alpha @ realization.beta
            self.assertTrue(gamma.is_close(
                AffineIsometry.rotation_about(-2 * math.pi / lattice_model(sig).quotient_order)))


def test_leading_coefficients():
    assert leading_weyl_coefficient(SQUARE) == pytest.approx(math.pi / 4)
    assert leading_weyl_coefficient(HEXAGONAL) == pytest.approx(math.pi / (3 * math.sqrt(3)))
    assert leading_weyl_coefficient(TRIANGULAR) == pytest.approx(2 * math.pi / (3 * math.sqrt(3)))


@pytest.mark.parametrize('sig', GROUPS)
def test_counting_leading_term(sig):
    result = counting_euclidean(sig, 100000)
    assert result.count == int(orbifold_multiplicities(sig, 100000).sum())
    assert abs(result.ratio - result.coefficient) / result.coefficient < 0.01


def test_counting_small():
    result = counting_euclidean(SQUARE, 10)
    assert result.count == 1 + 1 + 1 + 1 + 2 + 1 + 1 + 2
    assert result.remainder == pytest.approx(10 - 10 * math.pi / 4)
    assert counting_euclidean(SQUARE, 0).ratio is None
    with pytest.raises(DomainError):
        counting_euclidean(SQUARE, -1)


def test_inexact_quotient_is_rejected(monkeypatch):
    import trispec.euclidean as euclidean

    model = lattice_model(SQUARE)
    broken = euclidean.LatticeModel(model.signature, model.kind, model.tau, model.sigma,
                                    model.dual_form, 3, model.divisor_formula, model.wave_rows)
    monkeypatch.setattr(euclidean, 'lattice_model', lambda sig: broken)
    with pytest.raises(VerificationError):
        euclidean.orbifold_multiplicities(SQUARE, 10)
