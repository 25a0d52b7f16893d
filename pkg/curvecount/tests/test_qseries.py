import random
from fractions import Fraction

from django.test import SimpleTestCase

from curvecount.errors import DomainError, WindowUnderflow
from curvecount.qseries import (
    LaurentPoly,
    RationalFunctionQ,
    SymmetricLaurentPoly,
    WindowedLaurent,
    exp_series,
    expand_ratfun,
    f_g,
    fg_decompose,
    fg_in_h_basis,
    h_decompose,
    h_m,
    inverse_series,
    log_series,
    mul_windowed,
    split_symmetric,
    substitute_signed_power,
)


def conifold_layer():
    return RationalFunctionQ(LaurentPoly({1: 1}), LaurentPoly({0: 1, 1: 2, 2: 1}))


class LaurentPolyTests(SimpleTestCase):
    def test_arithmetic_drops_zeros(self):
        a = LaurentPoly({-1: 1, 0: 2})
        b = LaurentPoly({-1: -1, 3: 1})
        self.assertEqual((a + b).coeffs, {0: 2, 3: 1})
        self.assertEqual((a * b).coeffs, {-2: -1, -1: -2, 2: 1, 3: 2})
        self.assertEqual(a.valuation(), -1)
        self.assertEqual(b.degree(), 3)

    def test_symmetric_constructor_checks_invariance(self):
        SymmetricLaurentPoly({-2: 1, 0: 3, 2: 1})
        with self.assertRaises(DomainError):
            SymmetricLaurentPoly({-1: 1, 1: 2})

    def test_str(self):
        self.assertEqual(str(LaurentPoly({1: 1, 2: -2, 3: 3})), "q - 2q^2 + 3q^3")
        self.assertEqual(str(LaurentPoly()), "0")


class WindowedLaurentTests(SimpleTestCase):
    def test_coefficients_outside_window(self):
        series = WindowedLaurent({1: 1, 2: 5}, 1, 3)
        self.assertEqual(series.coefficient(0), 0)
        self.assertEqual(series.coefficient(3), 0)
        with self.assertRaises(WindowUnderflow):
            series.coefficient(4)

    def test_unknown_lower_support_raises(self):
        series = WindowedLaurent({2: 1}, 1, 3, exact_below=False)
        with self.assertRaises(WindowUnderflow):
            series.coefficient(0)

    def test_construction_truncates_above_window(self):
        series = WindowedLaurent({0: 1, 5: 2}, 0, 3)
        self.assertEqual(series.coeffs, {0: 1})

    def test_terms_below_window_are_refused(self):
        with self.assertRaises(DomainError):
            WindowedLaurent({-1: 1}, 0, 3)

    def test_sum_takes_smaller_top(self):
        total = WindowedLaurent({0: 1}, 0, 5) + WindowedLaurent({1: 1}, 1, 3)
        self.assertEqual(total.window, (0, 3))
        self.assertEqual(total.coeffs, {0: 1, 1: 1})


class MulWindowedTests(SimpleTestCase):
    def test_monomial_times_binomial(self):
        product = mul_windowed(WindowedLaurent({1: 1}, 1, 1), WindowedLaurent({0: 1, 1: 1}, 0, 1))
        self.assertEqual(product.window, (1, 2))
        self.assertEqual(product.coeffs, {1: 1, 2: 1})

    def test_unit_keeps_the_narrower_window(self):
        product = mul_windowed(WindowedLaurent({0: 1, 1: 1, 2: 1}, 0, 2), WindowedLaurent({0: 1}, 0, 5))
        self.assertEqual(product.window, (0, 2))
        self.assertEqual(product.coeffs, {0: 1, 1: 1, 2: 1})

    def test_square_of_conifold_layer(self):
        layer = expand_ratfun(conifold_layer(), 1, 3)
        self.assertEqual(layer.coeffs, {1: 1, 2: -2, 3: 3})
        square = mul_windowed(layer, layer)
        self.assertEqual(square.window, (2, 4))
        self.assertEqual(square.coeffs, {2: 1, 3: -4, 4: 10})

    def test_window_is_never_empty(self):
        rng = random.Random(11)
        for _ in range(50):
            lo_a, lo_b = rng.randint(-4, 4), rng.randint(-4, 4)
            a = WindowedLaurent({lo_a: 1}, lo_a, lo_a + rng.randint(0, 5))
            b = WindowedLaurent({lo_b: 2}, lo_b, lo_b + rng.randint(0, 5))
            product = mul_windowed(a, b)
            self.assertLessEqual(product.window_lo, product.window_hi)
            self.assertEqual(product.coefficient(lo_a + lo_b), 2)


class SeriesOperationTests(SimpleTestCase):
    def test_inverse_of_geometric_series(self):
        inverse = inverse_series(WindowedLaurent({0: 1, 1: -1}, 0, 6))
        self.assertEqual(inverse.window, (0, 6))
        self.assertEqual(inverse.coeffs, {n: 1 for n in range(7)})

    def test_inverse_with_leading_power(self):
        inverse = inverse_series(WindowedLaurent({2: 1, 3: 1}, 2, 8))
        self.assertEqual(inverse.window, (-2, 4))
        self.assertEqual(inverse.coefficient(-2), 1)
        self.assertEqual(inverse.coefficient(-1), -1)

    def test_exp_of_q(self):
        e = exp_series(WindowedLaurent({1: 1}, 1, 4))
        self.assertEqual(
            [e.coefficient(n) for n in range(5)],
            [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)],
        )

    def test_log_undoes_exp(self):
        a = WindowedLaurent({1: 3, 2: Fraction(-1, 2), 5: 7}, 1, 8)
        self.assertTrue(log_series(exp_series(a)).agrees_with(a))

    def test_rational_expansion_round_trip(self):
        f = RationalFunctionQ(LaurentPoly({0: 1, 1: 2}), LaurentPoly({0: 1, 1: -1, 2: 1}))
        product = mul_windowed(expand_ratfun(f, 0, 6), expand_ratfun(1 / f, 0, 6))
        self.assertEqual(product.window, (0, 6))
        self.assertEqual(product.coeffs, {0: 1})

    def test_expansion_of_geometric_series(self):
        f = RationalFunctionQ(LaurentPoly({0: 1}), LaurentPoly({0: 1, 1: -1}))
        self.assertEqual(expand_ratfun(f, 0, 4).coeffs, {n: 1 for n in range(5)})
        with self.assertRaises(DomainError):
            expand_ratfun(f, 3, 2)


class SignedPowerTests(SimpleTestCase):
    def test_examples(self):
        q = LaurentPoly({1: 1})
        self.assertEqual(substitute_signed_power(q, 1), q)
        self.assertEqual(substitute_signed_power(q, 2), LaurentPoly({2: -1}))
        self.assertEqual(
            substitute_signed_power(LaurentPoly({1: 1, -1: 1}), 3), LaurentPoly({3: 1, -3: 1})
        )

    def test_power_one_is_identity(self):
        rng = random.Random(3)
        for _ in range(30):
            poly = LaurentPoly({rng.randint(-5, 5): rng.randint(-9, 9) for _ in range(4)})
            self.assertEqual(substitute_signed_power(poly, 1), poly)

    def test_keeps_symmetry(self):
        image = substitute_signed_power(f_g(3), 2)
        self.assertIsInstance(image, SymmetricLaurentPoly)


class SplitSymmetricTests(SimpleTestCase):
    def test_mixed_support(self):
        series = WindowedLaurent({-1: 1, 0: 3, 1: 1, 2: 5}, -1, 2)
        positive, symmetric = split_symmetric(series)
        self.assertEqual(positive.coeffs, {2: 5})
        self.assertEqual(symmetric, LaurentPoly({-1: 1, 0: 3, 1: 1}))

    def test_positive_only(self):
        positive, symmetric = split_symmetric(WindowedLaurent({1: 1}, 1, 1))
        self.assertEqual(positive.coeffs, {1: 1})
        self.assertTrue(symmetric.is_zero())

    def test_symmetric_only(self):
        positive, symmetric = split_symmetric(WindowedLaurent({-1: 1, 1: 1}, -1, 1))
        self.assertEqual(positive.coeffs, {})
        self.assertEqual(symmetric, h_m(1))

    def test_needs_room_to_mirror(self):
        with self.assertRaisesMessage(WindowUnderflow, "cannot mirror negative support"):
            split_symmetric(WindowedLaurent({-2: 1}, -2, 1))

    def test_parts_recombine(self):
        rng = random.Random(5)
        for _ in range(1000):
            depth = rng.randint(0, 3)
            hi = depth + rng.randint(0, 4)
            coeffs = {e: rng.randint(-4, 4) for e in range(-depth, hi + 1)}
            series = WindowedLaurent(coeffs, -depth, hi)
            positive, symmetric = split_symmetric(series)
            self.assertTrue(all(e >= 1 for e in positive.coeffs))
            recombined = positive + WindowedLaurent.from_poly(symmetric, hi, -depth)
            self.assertTrue(recombined.agrees_with(series))


class BasisTests(SimpleTestCase):
    def test_f_g(self):
        self.assertEqual(f_g(1), LaurentPoly({0: 1}))
        self.assertEqual(f_g(2), LaurentPoly({-1: 1, 0: 2, 1: 1}))
        with self.assertRaises(DomainError):
            f_g(0)

    def test_f_g_is_symmetric(self):
        for g in range(1, 9):
            poly = f_g(g)
            self.assertEqual(poly, poly.invert_variable())

    def test_h_m(self):
        self.assertEqual(h_m(0), LaurentPoly({0: 1}))
        self.assertEqual(h_m(2), LaurentPoly({-2: 1, 2: 1}))

    def test_h_decompose(self):
        self.assertEqual(h_decompose(LaurentPoly({1: 1, -1: 1})), {1: 1})
        self.assertEqual(h_decompose(LaurentPoly({0: 3})), {0: 3})
        self.assertEqual(h_decompose(f_g(2)), {0: 2, 1: 1})

    def test_f_g_in_h_basis_matches_decomposition(self):
        for g in range(1, 7):
            expected = {m: c for m, c in fg_in_h_basis(g).items() if c}
            self.assertEqual(h_decompose(f_g(g)), expected, g)

    def test_fg_decompose(self):
        self.assertEqual(fg_decompose(f_g(3)), {3: 1})
        self.assertEqual(fg_decompose(h_m(1)), {1: -2, 2: 1})
        self.assertEqual(fg_decompose(LaurentPoly()), {})

    def test_fg_decompose_recovers_random_combinations(self):
        rng = random.Random(17)
        for _ in range(100):
            table = {g: rng.randint(-5, 5) for g in range(1, rng.randint(1, 6) + 1)}
            s = LaurentPoly()
            for g, n in table.items():
                s = s + f_g(g).scale(n)
            self.assertEqual(fg_decompose(s), {g: n for g, n in table.items() if n})


class RationalFunctionTests(SimpleTestCase):
    def test_normalization(self):
        f = RationalFunctionQ(LaurentPoly({1: 1, 2: 1}), LaurentPoly({0: 2, 1: 2}))
        self.assertEqual(f.num, LaurentPoly({1: Fraction(1, 2)}))
        self.assertEqual(f.den, LaurentPoly({0: 1}))

    def test_same_function_built_two_ways(self):
        q = RationalFunctionQ(LaurentPoly({1: 1}))
        one_plus_q = RationalFunctionQ(LaurentPoly({0: 1, 1: 1}))
        self.assertEqual(q / one_plus_q ** 2, conifold_layer())

    def test_denominator_power_of_q_moves_to_numerator(self):
        f = RationalFunctionQ(LaurentPoly({0: 1}), LaurentPoly({2: 1, 3: 1}))
        self.assertEqual(f.valuation(), -2)
        self.assertEqual(f.den[0], 1)

    def test_evaluate_and_pole(self):
        f = conifold_layer()
        self.assertEqual(f.evaluate(1), Fraction(1, 4))
        with self.assertRaises(DomainError):
            f.evaluate(-1)

    def test_zero_denominator(self):
        with self.assertRaises(DomainError):
            RationalFunctionQ(LaurentPoly({0: 1}), LaurentPoly())
