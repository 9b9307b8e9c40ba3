import math
import unittest

import numpy as np

from coevo.exceptions import DomainError, PreconditionError, SteadyStateError
from coevo.meanfield import rhs_2
from coevo.model import EUT, PT, make_params
from coevo.steady import (
    CASE1,
    CASE2,
    CASE3,
    NO_STEADY_STATE,
    SWEEP_COLUMNS,
    bisect,
    check_comparison,
    check_pair,
    check_sweep,
    classify,
    classify_eut,
    classify_pt,
    compare_rationality,
    discriminant_eut,
    discriminant_pt,
    jacobian,
    max_spread,
    numeric_steady_state,
    radical_regime_test,
    stability_certificate,
    sweep,
    sweep_frame,
)

from .utils import base_params, mild_params


class BisectTestCase(unittest.TestCase):
    
    def test_root(self):
        
        self.assertAlmostEqual(bisect(lambda x: x * x - 2, 0, 2), math.sqrt(2), places=12)
        self.assertAlmostEqual(bisect(lambda x: 1 - x, 0, 3), 1, places=12)
    
    def test_root_at_endpoint(self):
        
        self.assertEqual(bisect(lambda x: x, 0, 1), 0)
    
    def test_no_sign_change(self):
        
        with self.assertRaises(PreconditionError):
            bisect(lambda x: x * x + 1, -1, 1)


class ClassifyEutTestCase(unittest.TestCase):
    
    def test_interior(self):
        
        state = classify_eut(base_params())
        
        self.assertEqual(state.case_label, CASE3)
        self.assertEqual(state.mode, EUT)
        self.assertAlmostEqual(state.i_star, 0.33293, places=4)
        self.assertAlmostEqual(state.x1_star, 0.22487, places=4)
        self.assertGreater(state.discriminant, 0)
        self.assertTrue(state.stability.stable)
        self.assertTrue(state.exists)
    
    def test_interior_is_fixed_point(self):
        
        state = classify_eut(base_params())
        di, dx1 = rhs_2(state.i_star, state.x1_star, base_params(), EUT)
        
        self.assertLess(abs(di), 1e-10)
        self.assertLess(abs(dx1), 1e-10)
    
    def test_closed_form(self):
        
        params = base_params()
        k0 = params.k0
        u_n = -(20 ** 0.65)
        expected = k0 / ((1 - k0 * u_n) * 0.2)
        
        self.assertAlmostEqual(classify_eut(params).i_star, expected, places=12)
        self.assertAlmostEqual(discriminant_eut(params), -k0 + (0.03 - 0.2) * (k0 * u_n - 1), places=12)
    
    def test_maximum_spread(self):
        
        state = classify_eut(base_params(beta=[0.005, 0.0]))
        
        self.assertEqual(state.case_label, CASE2)
        self.assertAlmostEqual(state.i_star, 0.4)
        self.assertEqual(state.x1_star, 1)
        self.assertLess(state.discriminant, 0)
        self.assertTrue(state.stability.stable)
    
    def test_extinction(self):
        
        state = classify_eut(base_params(beta=[0.002, 0.0]))
        
        self.assertEqual(state.case_label, CASE1)
        self.assertEqual(state.i_star, 0)
        self.assertEqual(state.x1_star, 1)
        self.assertTrue(state.stability.stable)
    
    def test_boundary(self):
        
        state = classify_eut(base_params(beta=[0.003, 0.0]))
        
        self.assertEqual(state.case_label, NO_STEADY_STATE)
        self.assertFalse(state.exists)
        self.assertTrue(math.isnan(state.i_star))
        self.assertIsNone(state.stability)
    
    def test_preconditions(self):
        
        with self.assertRaises(PreconditionError):
            classify_eut(base_params(c=[-1.0, 0.0]))
        
        with self.assertRaises(PreconditionError):
            classify_eut(base_params(c=[-1.0, -1.0]))
        
        with self.assertRaises(PreconditionError):
            classify_eut(base_params(beta=[0.02, 0.01]))
        
        with self.assertRaises(PreconditionError):
            classify_eut(make_params(beta=[0.02, 0.01, 0.0], c=[0.0, -0.5, -1.0], c_n=-20, gamma=0.03, k_bar=10))


class ClassifyPtTestCase(unittest.TestCase):
    
    def test_interior(self):
        
        params = base_params(alpha=0.6)
        state = classify_pt(params)
        
        self.assertEqual(state.case_label, CASE3)
        self.assertEqual(state.mode, PT)
        self.assertAlmostEqual(state.discriminant, 0.259, places=3)
        self.assertAlmostEqual(state.discriminant, discriminant_pt(params))
        self.assertTrue(state.stability.stable)
        
        di, dx1 = rhs_2(state.i_star, state.x1_star, params, PT)
        self.assertLess(abs(di), 1e-10)
        self.assertLess(abs(dx1), 1e-10)
        
        # On the steady curve
        self.assertAlmostEqual(state.x1_star, 0.03 / ((1 - state.i_star) * 0.2), places=12)
    
    def test_fully_rational_matches_eut(self):
        
        params = base_params()
        pt = classify_pt(params)
        eut = classify_eut(params)
        
        self.assertEqual(pt.case_label, eut.case_label)
        self.assertEqual(pt.i_star, eut.i_star)
        self.assertEqual(pt.x1_star, eut.x1_star)
        self.assertEqual(pt.mode, PT)
    
    def test_maximum_spread(self):
        
        state = classify_pt(base_params(beta=[0.005, 0.0], alpha=0.6))
        
        self.assertEqual(state.case_label, CASE2)
        self.assertAlmostEqual(state.i_star, 0.4)
    
    def test_extinction(self):
        
        state = classify_pt(base_params(beta=[0.002, 0.0], alpha=0.6))
        
        self.assertEqual(state.case_label, CASE1)
        self.assertTrue(math.isnan(state.discriminant))
    
    def test_boundary(self):
        
        self.assertEqual(classify_pt(base_params(beta=[0.003, 0.0], alpha=0.6)).case_label, NO_STEADY_STATE)
    
    def test_dispatch(self):
        
        params = base_params(alpha=0.6)
        
        self.assertEqual(classify(params, EUT).i_star, classify_eut(params).i_star)
        self.assertEqual(classify(params, PT).i_star, classify_pt(params).i_star)
        
        with self.assertRaises(PreconditionError):
            classify(params, 'PT2')
    
    def test_as_dict(self):
        
        data = classify_pt(base_params(alpha=0.6)).as_dict()
        
        self.assertEqual(data['case'], CASE3)
        self.assertEqual(data['mode'], PT)
        self.assertTrue(data['stability']['stable'])


class StabilityTestCase(unittest.TestCase):
    
    def test_jacobian_matches_finite_differences(self):
        
        h = 1e-6
        for mode, alpha in ((EUT, 1.0), (PT, 0.6)):
            params = base_params(alpha=alpha)
            jac = jacobian(0.3, 0.4, params, mode)
            
            d_i = (np.array(rhs_2(0.3 + h, 0.4, params, mode)) - np.array(rhs_2(0.3 - h, 0.4, params, mode))) / (2 * h)
            d_x = (np.array(rhs_2(0.3, 0.4 + h, params, mode)) - np.array(rhs_2(0.3, 0.4 - h, params, mode))) / (2 * h)
            
            np.testing.assert_allclose(jac[:, 0], d_i, atol=1e-7)
            np.testing.assert_allclose(jac[:, 1], d_x, atol=1e-7)
    
    def test_certificate(self):
        
        params = base_params()
        state = classify_eut(params)
        certificate = stability_certificate(state.i_star, state.x1_star, params, EUT)
        
        self.assertLess(certificate.trace, 0)
        self.assertGreater(certificate.determinant, 0)
        self.assertTrue(np.all(np.real(certificate.eigenvalues) < 0))
        self.assertAlmostEqual(certificate.trace, sum(certificate.eigenvalues).real)
    
    def test_not_a_fixed_point(self):
        
        with self.assertRaises(PreconditionError):
            stability_certificate(0.3, 0.4, base_params(), EUT)
    
    def test_disease_free_state_unstable_when_spreading(self):
        
        certificate = stability_certificate(0.0, 1.0, base_params(), EUT)
        
        self.assertFalse(certificate.stable)


class MaxSpreadTestCase(unittest.TestCase):
    
    def test_value(self):
        
        self.assertAlmostEqual(max_spread(base_params()), 0.85)
    
    def test_no_endemic_maximum(self):
        
        with self.assertRaises(DomainError):
            max_spread(base_params(beta=[0.002, 0.0]))
        
        with self.assertRaises(DomainError):
            max_spread(base_params(beta=[0.003, 0.0]))


class RationalityTestCase(unittest.TestCase):
    
    def test_overweighting(self):
        
        comparison = compare_rationality(base_params(), 0.6, 1.0)
        
        self.assertEqual(comparison.regime, 'overweighting')
        self.assertTrue(comparison.consistent)
        self.assertLess(comparison.low.i_star, comparison.high.i_star)
        self.assertLess(comparison.low.x1_star, comparison.high.x1_star)
        self.assertAlmostEqual(comparison.threshold, 1 / (0.2 * math.e))
    
    def test_underweighting(self):
        
        comparison = compare_rationality(mild_params(), 0.8, 1.0)
        
        self.assertEqual(comparison.regime, 'underweighting')
        self.assertTrue(comparison.consistent)
        self.assertAlmostEqual(comparison.high.i_star, 1 / (1 + 1.1 ** 0.65), places=10)
        self.assertAlmostEqual(comparison.low.i_star, 0.497, places=2)
        self.assertGreater(comparison.low.i_star, comparison.high.i_star)
        self.assertGreater(comparison.low.x1_star, comparison.high.x1_star)
    
    def test_equal_rationality(self):
        
        comparison = compare_rationality(base_params(), 0.7, 0.7)
        
        self.assertEqual(comparison.low.i_star, comparison.high.i_star)
        self.assertTrue(comparison.consistent)
    
    def test_different_cases(self):
        
        comparison = compare_rationality(base_params(beta=[0.002, 0.0]), 0.5, 1.0)
        
        self.assertIsNone(comparison.regime)
        self.assertIn('extinct', comparison.subcase)
    
    def test_invalid(self):
        
        with self.assertRaises(PreconditionError):
            compare_rationality(base_params(), 0.9, 0.5)
        
        with self.assertRaises(PreconditionError):
            compare_rationality(base_params(), 0.0, 0.5)
        
        with self.assertRaises(SteadyStateError):
            compare_rationality(base_params(beta=[0.003, 0.0]), 0.5, 1.0)
    
    def test_check_comparison(self):
        
        check_comparison(base_params(), 0.6, 1.0)
        
        for params, low, high in (
            (base_params(c=[-1.0, 0.0]), 0.6, 1.0),
            (base_params(c=[-1.0, -1.0]), 0.6, 1.0),
            (base_params(beta=[0.02, 0.01, 0.0], c=[0.0, -0.5, -1.0]), 0.6, 1.0),
            (base_params(), 1.0, 0.6),
            (base_params(), 0.6, 1.5),
        ):
            with self.subTest(low=low, high=high):
                with self.assertRaises(PreconditionError):
                    check_comparison(params, low, high)
    
    def test_check_pair(self):
        
        self.assertIsNone(check_pair(base_params()))
        
        with self.assertRaises(PreconditionError):
            check_pair(base_params(c=[-1.0, -1.0]))
        
        with self.assertRaises(PreconditionError):
            check_pair(base_params(beta=[0.02, 0.01]))
    
    def test_radical_regime_possible(self):
        
        report = radical_regime_test(mild_params())
        
        self.assertTrue(report.spread_condition)
        self.assertTrue(report.loss_condition)
        self.assertTrue(report.possible)
        self.assertAlmostEqual(report.loss_ratio, 1.1 ** 0.65)
        self.assertAlmostEqual(report.loss_threshold, math.e - 1)
        self.assertAlmostEqual(report.spread_margin, 0.88)
    
    def test_radical_regime_impossible(self):
        
        report = radical_regime_test(base_params())
        
        self.assertFalse(report.spread_condition)
        self.assertFalse(report.possible)
        self.assertIn('possible', report.as_dict())


class NumericSteadyStateTestCase(unittest.TestCase):
    
    def test_matches_closed_form(self):
        
        params = base_params()
        expected = classify_eut(params)
        search = numeric_steady_state(params, EUT, starts=2)
        
        self.assertGreaterEqual(len(search), 1)
        
        matches = [
            c for c in search
            if abs(c.state.infected - expected.i_star) < 1e-4 and abs(c.state.shares[0] - expected.x1_star) < 1e-4
        ]
        self.assertEqual(len(matches), 1)
        self.assertLess(matches[0].residual, 1e-8)
        self.assertTrue(matches[0].stability.stable)
    
    def test_identical_behaviors(self):
        
        params = make_params(beta=[0.02, 0.02, 0.02], c=[0.0, 0.0, 0.0], c_n=-20, gamma=0.03, k_bar=10)
        search = numeric_steady_state(params, PT, starts=3)
        
        self.assertEqual(len(search), 1)
        self.assertEqual(search.unconverged, [])
        
        candidate = search.candidates[0]
        self.assertAlmostEqual(candidate.state.infected, 0.85, places=6)
        self.assertEqual(candidate.members, 3)
        self.assertIsNone(candidate.stability)
        self.assertAlmostEqual(candidate.state.shares.sum(), 1)
    
    def test_deterministic(self):
        
        params = base_params()
        first = numeric_steady_state(params, EUT, starts=1).as_dict()
        second = numeric_steady_state(params, EUT, starts=1).as_dict()
        
        self.assertEqual(first, second)
    
    def test_invalid(self):
        
        with self.assertRaises(PreconditionError):
            numeric_steady_state(base_params(), starts=0)
    
    def test_three_behaviours(self):
        
        for beta, c in (
            ([0.005, 0.015, 0.025], [-4.5, -2.0, -1.0]),
            ([0.004, 0.015, 0.031], [-3.0, -2.0, -1.0]),
        ):
            with self.subTest(beta=beta, c=c):
                params = make_params(beta=beta, c=c, c_n=-20, gamma=0.03, k_bar=10)
                search = numeric_steady_state(params, PT, starts=4)
                
                self.assertGreaterEqual(len(search), 1)
                for candidate in search:
                    self.assertLess(candidate.residual, 1e-8)
                    self.assertAlmostEqual(candidate.state.shares.sum(), 1)
                    self.assertTrue(0 <= candidate.state.infected < 1)


class SweepTestCase(unittest.TestCase):
    
    def test_beta_sweep(self):
        
        rows = sweep(base_params(), 'beta', [0.002, 0.005, 0.02], EUT)
        
        self.assertEqual([r.state.case_label for r in rows], [CASE1, CASE2, CASE3])
        self.assertEqual([r.param_value for r in rows], [0.002, 0.005, 0.02])
    
    def test_full_beta_sweep_is_ordered(self):
        
        grid = np.linspace(0.001, 0.02, 40)
        rows = sweep(base_params(), 'beta', grid, EUT)
        labels = [r.state.case_label for r in rows]
        
        # Collapse runs of the same label
        segments = [label for k, label in enumerate(labels) if k == 0 or labels[k - 1] != label]
        self.assertEqual([s for s in segments if s != NO_STEADY_STATE], [CASE1, CASE2, CASE3])
        
        for row in rows:
            if row.state.case_label == CASE1:
                self.assertLess(row.param_value, 0.003)
            elif row.state.case_label == CASE2:
                self.assertGreater(row.param_value, 0.003)
    
    def test_alpha_sweep(self):
        
        rows = sweep(base_params(), 'alpha', [0.5, 0.8, 1.0], PT)
        
        self.assertTrue(all(r.state.case_label == CASE3 for r in rows))
        self.assertLess(rows[0].state.i_star, rows[2].state.i_star)
    
    def test_frame(self):
        
        frame = sweep_frame(sweep(base_params(), 'beta', [0.002, 0.003, 0.02], EUT))
        
        self.assertEqual(list(frame.columns), SWEEP_COLUMNS)
        self.assertEqual(list(frame['case']), [CASE1, NO_STEADY_STATE, CASE3])
        self.assertTrue(math.isnan(frame['P'][1]))
        self.assertFalse(math.isnan(frame['P'][2]))
    
    def test_invalid(self):
        
        with self.assertRaises(PreconditionError):
            sweep(base_params(), 'gamma', [0.1, 0.2])
        
        with self.assertRaises(PreconditionError):
            sweep(base_params(), 'beta', [0.02, 0.01])
        
        with self.assertRaises(PreconditionError):
            sweep(base_params(), 'beta', [0.01, 0.01])
    
    def test_check_sweep(self):
        
        self.assertEqual(check_sweep(base_params(), 'beta', np.array([0.005, 0.02])), [0.005, 0.02])
        
        with self.assertRaises(PreconditionError):
            check_sweep(base_params(), 'beta', [0.02, 0.005])
        
        with self.assertRaises(PreconditionError):
            check_sweep(base_params(c=[-1.0, 0.0]), 'alpha', [0.5, 1.0])
