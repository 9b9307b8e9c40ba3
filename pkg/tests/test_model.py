import math
import unittest

import numpy as np

from coevo.exceptions import DomainError, OutOfScaleError, PreconditionError
from coevo.model import (
    EUT,
    PT,
    PowerValue,
    SystemState,
    check_mode,
    default_payoff_scale,
    imitation_prob,
    make_params,
    infection_probability,
    payoffs,
    utility,
    value,
    value_derivative,
    weight,
    weight_dalpha,
    weight_dp,
)

from .utils import base_params


class ValueTestCase(unittest.TestCase):
    
    def test_gain(self):
        
        self.assertEqual(value(4, sigma=0.5), 2)
    
    def test_loss(self):
        
        self.assertEqual(value(-4, sigma=0.5, lam=2), -4)
        self.assertAlmostEqual(value(-20), -(20 ** 0.65))
        self.assertAlmostEqual(value(-20), -7.0092, places=3)
    
    def test_zero(self):
        
        self.assertEqual(value(0), 0)
    
    def test_array(self):
        
        xs = np.array([-20.0, -1.0, 0.0, 3.0])
        expected = [value(x) for x in xs]
        
        np.testing.assert_allclose(value(xs), expected)
    
    def test_same_under_both_modes(self):
        
        self.assertEqual(value(-3, mode=EUT), value(-3, mode=PT))
    
    def test_invalid(self):
        
        with self.assertRaises(DomainError):
            value(math.nan)
        
        with self.assertRaises(DomainError):
            value(np.array([1.0, math.inf]))
        
        with self.assertRaises(PreconditionError):
            value(1, sigma=0)
        
        with self.assertRaises(PreconditionError):
            value(1, lam=-1)
        
        with self.assertRaises(PreconditionError):
            value(1, mode='MEU')
    
    def test_derivative(self):
        
        self.assertEqual(value_derivative(4, sigma=0.5), 0.25)
        self.assertEqual(value_derivative(0), math.inf)
        self.assertEqual(value_derivative(0, sigma=1), 1)
        
        h = 1e-6
        for x in (-7.0, -0.5, 0.3, 2.0):
            numeric = (value(x + h) - value(x - h)) / (2 * h)
            self.assertAlmostEqual(value_derivative(x), numeric, places=6)
    
    def test_power_value(self):
        
        u = PowerValue(sigma=0.5, lam=2)
        
        self.assertEqual(u(-4), -4)
        self.assertEqual(u.derivative(4), 0.25)
        
        with self.assertRaises(PreconditionError):
            PowerValue(sigma=1.5)


class WeightTestCase(unittest.TestCase):
    
    def test_value(self):
        
        self.assertAlmostEqual(weight(0.1, 0.5), math.exp(-math.sqrt(math.log(10))))
        self.assertAlmostEqual(weight(0.1, 0.5), 0.21928, places=4)
    
    def test_fully_rational(self):
        
        for p in (0.0, 0.013, 0.5, 0.99, 1.0):
            self.assertEqual(weight(p, 1), p)
    
    def test_endpoints(self):
        
        self.assertEqual(weight(0, 0.3), 0)
        self.assertEqual(weight(1, 0.3), 1)
    
    def test_fixed_point(self):
        
        for alpha in (0.2, 0.5, 0.9):
            self.assertAlmostEqual(weight(1 / math.e, alpha), 1 / math.e)
    
    def test_over_and_underweighting(self):
        
        self.assertGreater(weight(0.1, 0.5), 0.1)
        self.assertLess(weight(0.8, 0.5), 0.8)
    
    def test_array(self):
        
        ps = np.array([0.0, 0.05, 0.3, 1.0])
        expected = [weight(p, 0.6) for p in ps]
        
        np.testing.assert_allclose(weight(ps, 0.6), expected)
    
    def test_invalid(self):
        
        with self.assertRaises(DomainError):
            weight(1.2, 0.5)
        
        with self.assertRaises(DomainError):
            weight(-0.1, 0.5)
        
        with self.assertRaises(DomainError):
            weight(0.5, 0)
        
        with self.assertRaises(DomainError):
            weight(0.5, 1.1)
        
        with self.assertRaises(DomainError):
            weight(np.array([0.5, 2.0]), 0.5)
    
    def test_derivative_p(self):
        
        h = 1e-7
        for p, alpha in ((0.05, 0.4), (0.3, 0.6), (0.8, 0.9)):
            numeric = (weight(p + h, alpha) - weight(p - h, alpha)) / (2 * h)
            self.assertAlmostEqual(weight_dp(p, alpha), numeric, places=5)
        
        self.assertEqual(weight_dp(0.3, 1), 1)
        self.assertEqual(weight_dp(0, 0.5), math.inf)
    
    def test_derivative_alpha(self):
        
        h = 1e-7
        for p, alpha in ((0.05, 0.4), (0.3, 0.6), (0.8, 0.9)):
            numeric = (weight(p, alpha + h) - weight(p, alpha - h)) / (2 * h)
            self.assertAlmostEqual(weight_dalpha(p, alpha), numeric, places=5)
        
        self.assertLess(weight_dalpha(0.1, 0.5), 0)
        self.assertGreater(weight_dalpha(0.6, 0.5), 0)
        self.assertEqual(weight_dalpha(0, 0.5), 0)


class ParamsTestCase(unittest.TestCase):
    
    def test_default_payoff_scale(self):
        
        params = base_params()
        
        self.assertAlmostEqual(params.u_max, 1 + 20 ** 0.65)
        self.assertAlmostEqual(params.k0, 1 / (1 + 20 ** 0.65))
        self.assertAlmostEqual(params.k0, 0.12486, places=4)
        self.assertEqual(params.u_max, default_payoff_scale(params.epidemic.behaviors, params.decision))
    
    def test_mixed_sign_payoff_scale(self):
        
        params = make_params(beta=[0.02, 0.0], c=[1.0, -1.0], c_n=-0.5, gamma=0.1, k_bar=6)
        loss = 0.5 ** 0.65
        
        self.assertAlmostEqual(params.u_max, 2 + loss)
        
        # Widest gap: a payoff of 1 without infection against -1 with certain infection
        self.assertLessEqual(imitation_prob(-1 - loss, 1.0, 1.0, params.u_max), 1)
        self.assertGreaterEqual(imitation_prob(1.0, -1 - loss, 1.0, params.u_max), 0)
    
    def test_explicit_payoff_scale(self):
        
        params = base_params(u_max=2.0, m=0.5, omega=0.8)
        
        self.assertEqual(params.k0, 0.2)
    
    def test_derived(self):
        
        params = base_params(d_bar=6)
        
        self.assertEqual(params.behavior_count, 2)
        self.assertEqual(params.gamma, 0.03)
        self.assertEqual(params.k_bar, 10)
        self.assertEqual(params.epidemic.info_degree, 6)
        np.testing.assert_array_equal(params.betas, [0.02, 0.0])
        np.testing.assert_array_equal(params.payoffs, [0.0, -1.0])
        np.testing.assert_allclose(params.intrinsic_values, [0.0, -1.0])
        self.assertAlmostEqual(params.loss_value, -(20 ** 0.65))
    
    def test_info_degree_defaults_to_contact_degree(self):
        
        self.assertEqual(base_params().epidemic.info_degree, 10)
    
    def test_copies_keep_payoff_scale(self):
        
        params = base_params()
        
        self.assertEqual(params.with_decision(rationality=0.5).u_max, params.u_max)
        self.assertEqual(params.with_infection_rate(0, 0.005).u_max, params.u_max)
        self.assertEqual(params.with_payoffs([2.0, -3.0]).u_max, params.u_max)
        self.assertEqual(params.with_decision(rationality=0.5).alpha, 0.5)
        self.assertEqual(params.with_infection_rate(0, 0.005).betas[0], 0.005)
    
    def test_invalid(self):
        
        with self.assertRaises(PreconditionError):
            base_params(beta=[0.2, 0.0])  # k_bar * beta > 1
        
        with self.assertRaises(PreconditionError):
            base_params(c_n=0.0)
        
        with self.assertRaises(PreconditionError):
            base_params(gamma=0.0)
        
        with self.assertRaises(PreconditionError):
            base_params(alpha=0.0)
        
        with self.assertRaises(PreconditionError):
            base_params(m=1.5)
        
        with self.assertRaises(PreconditionError):
            base_params(beta=[0.02], c=[0.0])
        
        with self.assertRaises(PreconditionError):
            base_params(beta=[0.02, 0.0, 0.0])
        
        with self.assertRaises(PreconditionError):
            base_params(value_function=abs)
    
    def test_custom_value_function(self):
        
        params = base_params(value_function=PowerValue(sigma=1.0))
        
        self.assertEqual(params.loss_value, -20)
        self.assertEqual(params.u_max, 21)


class SystemStateTestCase(unittest.TestCase):
    
    def test_round_trip(self):
        
        state = SystemState(0.2, [0.25, 0.75])
        
        np.testing.assert_array_equal(state.as_array(), [0.2, 0.25, 0.75])
        self.assertEqual(SystemState.from_array([0.2, 0.25, 0.75]).shares[1], 0.75)
    
    def test_invalid(self):
        
        with self.assertRaises(DomainError):
            SystemState(1.5, [0.5, 0.5])
        
        with self.assertRaises(DomainError):
            SystemState(0.5, [0.5, 0.6])
        
        with self.assertRaises(DomainError):
            SystemState(0.5, [1.5, -0.5])
        
        with self.assertRaises(DomainError):
            SystemState(0.5, [1.0])


class PayoffTestCase(unittest.TestCase):
    
    def test_infection_probability(self):
        
        self.assertAlmostEqual(infection_probability(0.02, 0.1, 10), 0.02)
        
        with self.assertRaises(DomainError):
            infection_probability(0.2, 1.0, 10)
    
    def test_eut_utility(self):
        
        params = base_params()
        
        self.assertAlmostEqual(utility(0, 0.1, params, EUT), -(20 ** 0.65) * 0.02)
        self.assertAlmostEqual(utility(0, 0.1, params, EUT), -0.14018, places=4)
        self.assertAlmostEqual(utility(1, 0.1, params, EUT), -1)
    
    def test_pt_utility(self):
        
        params = base_params(alpha=0.5)
        
        self.assertAlmostEqual(utility(0, 0.1, params, PT), -(20 ** 0.65) * weight(0.02, 0.5))
    
    def test_fully_rational_pt_matches_eut(self):
        
        params = base_params()
        
        for i in (0.0, 0.1, 0.37, 0.9):
            self.assertEqual(utility(0, i, params, PT), utility(0, i, params, EUT))
    
    def test_payoffs_match_utility(self):
        
        params = base_params(alpha=0.7)
        u = payoffs(0.25, params, PT)
        
        for j in range(2):
            self.assertAlmostEqual(u[j], utility(j, 0.25, params, PT))
    
    def test_invalid_infected(self):
        
        with self.assertRaises(DomainError):
            utility(0, 1.2, base_params())
    
    def test_check_mode(self):
        
        self.assertEqual(check_mode(PT), PT)
        
        with self.assertRaises(PreconditionError):
            check_mode('pt')


class ImitationTestCase(unittest.TestCase):
    
    def test_probability(self):
        
        self.assertEqual(imitation_prob(0, 1, 1, 2), 0.75)
        self.assertEqual(imitation_prob(1, 0, 1, 2), 0.25)
        self.assertEqual(imitation_prob(1, 1, 1, 2), 0.5)
        self.assertEqual(imitation_prob(0, 2, 0.5, 2), 0.75)
    
    def test_complementary(self):
        
        for a, b in ((0.1, 0.7), (-3.2, 1.9), (0.3, 0.3)):
            self.assertEqual(imitation_prob(a, b, 0.9, 8.0) + imitation_prob(b, a, 0.9, 8.0), 1)
    
    def test_array(self):
        
        result = imitation_prob(np.array([0.0, 1.0]), np.array([1.0, 0.0]), 1, 2)
        
        np.testing.assert_array_equal(result, [0.75, 0.25])
    
    def test_out_of_scale(self):
        
        with self.assertRaises(OutOfScaleError):
            imitation_prob(0, 3, 1, 2)
        
        with self.assertRaises(DomainError):
            imitation_prob(0, 3, 1, 2)
    
    def test_invalid_scale(self):
        
        with self.assertRaises(PreconditionError):
            imitation_prob(0, 1, 1, 0)
