import random
from fractions import Fraction

from django.test import SimpleTestCase

from curvecount.errors import DomainError
from curvecount.gseries import (
    ClassGrid,
    GradedSeries,
    ProductFactor,
    SignMode,
    class_divisors,
    graded_exp,
    graded_log,
    graded_mul,
    product_family,
)
from curvecount.qseries import WindowedLaurent


def random_layers(rng, grid, lo_choices=(-1, 0, 1), width=4):
    """Random positive layers with at least two nonzero terms, so none is the unit."""
    terms = {}
    for beta in grid.positive_classes:
        if rng.random() < 0.25:
            continue
        lo = rng.choice(lo_choices)
        coeffs = {lo: rng.choice([-3, -2, -1, 1, 2, 3]), lo + 1: rng.choice([-2, -1, 1, 2])}
        for e in range(lo + 2, lo + width + 1):
            coeffs[e] = rng.randint(-3, 3)
        terms[beta] = WindowedLaurent(coeffs, lo, lo + width)
    return terms


class ClassGridTests(SimpleTestCase):
    def test_classes_are_ordered_by_degree(self):
        grid = ClassGrid(2, (1, 1), 2)
        self.assertEqual(
            grid.classes,
            ((0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)),
        )
        self.assertEqual(grid.positive_classes[0], (0, 1))

    def test_weights_bound_the_grid(self):
        grid = ClassGrid(2, (1, 2), 3)
        self.assertTrue(grid.contains((1, 1)))
        self.assertFalse(grid.contains((0, 2)))
        self.assertEqual(grid.degree((3, 0)), 3)

    def test_invalid_grids(self):
        with self.assertRaises(DomainError):
            ClassGrid(0, None, 2)
        with self.assertRaises(DomainError):
            ClassGrid(2, (1,), 2)
        with self.assertRaises(DomainError):
            ClassGrid(1, (0,), 2)
        with self.assertRaises(DomainError):
            ClassGrid(1, None, 0)

    def test_splittings_are_ordered_pairs(self):
        grid = ClassGrid(1, None, 3)
        self.assertEqual(grid.splittings((3,)), [((1,), (2,)), ((2,), (1,))])


class ClassDivisorTests(SimpleTestCase):
    def test_gcd_convention(self):
        self.assertEqual(class_divisors((4,)), [1, 2, 4])
        self.assertEqual(class_divisors((2, 3)), [1])
        self.assertEqual(class_divisors((6, 4)), [1, 2])
        self.assertEqual(class_divisors((0, 3)), [1, 3])

    def test_zero_class(self):
        with self.assertRaises(DomainError):
            class_divisors((0, 0))


class GradedMulTests(SimpleTestCase):
    def test_one_is_neutral(self):
        grid = ClassGrid(1, None, 2)
        a = GradedSeries(grid, {(0,): WindowedLaurent.unit(3), (1,): WindowedLaurent({1: 1}, 1, 3)})
        self.assertTrue(graded_mul(a, GradedSeries.one(grid, 3)).agrees_with(a))

    def test_difference_of_squares(self):
        grid = ClassGrid(1, None, 2)
        a = GradedSeries(grid, {(0,): WindowedLaurent.unit(0), (1,): WindowedLaurent({0: 1}, 0, 0)})
        b = GradedSeries(grid, {(0,): WindowedLaurent.unit(0), (1,): WindowedLaurent({0: -1}, 0, 0)})
        product = graded_mul(a, b)
        self.assertEqual(product.coefficient((0,), 0), 1)
        self.assertEqual(product.coefficient((1,), 0), 0)
        self.assertEqual(product.coefficient((2,), 0), -1)

    def test_square_of_one_plus_qt(self):
        grid = ClassGrid(1, None, 2)
        a = GradedSeries(grid, {(0,): WindowedLaurent.unit(5), (1,): WindowedLaurent({1: 1}, 1, 5)})
        square = graded_mul(a, a)
        self.assertEqual(square.layer((1,)).coeffs, {1: 2})
        self.assertEqual(square.layer((2,)).coeffs, {2: 1})
        self.assertEqual(square.layer((2,)).window, (2, 6))

    def test_grids_must_match(self):
        with self.assertRaises(DomainError):
            graded_mul(GradedSeries.one(ClassGrid(1, None, 2)), GradedSeries.one(ClassGrid(1, None, 3)))

    def test_commutative_and_associative(self):
        rng = random.Random(23)
        grid = ClassGrid(2, (1, 1), 3)
        for _ in range(15):
            a, b, c = (
                GradedSeries(grid, random_layers(rng, grid, lo_choices=(0, 1))) for _ in range(3)
            )
            self.assertTrue(graded_mul(a, b).agrees_with(graded_mul(b, a)))
            self.assertTrue(
                graded_mul(graded_mul(a, b), c).agrees_with(graded_mul(a, graded_mul(b, c)))
            )


class GradedExpLogTests(SimpleTestCase):
    def test_exp_of_qt(self):
        grid = ClassGrid(1, None, 2)
        e = graded_exp(GradedSeries(grid, {(1,): WindowedLaurent({1: 1}, 1, 4)}))
        self.assertEqual(e.coefficient((0,), 0), 1)
        self.assertEqual(e.layer((1,)).coeffs, {1: 1})
        self.assertEqual(e.layer((2,)).coeffs, {2: Fraction(1, 2)})
        self.assertEqual(e.layer((2,)).window, (2, 5))

    def test_exp_refuses_constant_layer(self):
        grid = ClassGrid(1, None, 2)
        with self.assertRaises(DomainError):
            graded_exp(GradedSeries.one(grid))

    def test_log_of_one_plus_t(self):
        grid = ClassGrid(1, None, 2)
        series = GradedSeries(grid, {(0,): WindowedLaurent.unit(0), (1,): WindowedLaurent({0: 1}, 0, 0)})
        log = graded_log(series)
        self.assertEqual(log.coefficient((1,), 0), 1)
        self.assertEqual(log.coefficient((2,), 0), Fraction(-1, 2))

    def test_log_needs_unit_constant_layer(self):
        grid = ClassGrid(1, None, 2)
        series = GradedSeries(grid, {(0,): WindowedLaurent({0: 2}, 0, 3)})
        with self.assertRaises(DomainError):
            graded_log(series)
        with self.assertRaises(DomainError):
            graded_log(GradedSeries(grid, {}))

    def test_log_undoes_exp(self):
        rng = random.Random(29)
        for rank, cutoff in ((1, 4), (2, 3), (2, 2)):
            grid = ClassGrid(rank, None, cutoff)
            for _ in range(10):
                a = GradedSeries(grid, random_layers(rng, grid))
                self.assertTrue(graded_log(graded_exp(a)).agrees_with(a))


class ProductFamilyTests(SimpleTestCase):
    def test_single_factor(self):
        grid = ClassGrid(1, None, 2)
        series = product_family([ProductFactor((1,), 1, 1)], grid, (0, 3))
        self.assertEqual(series.layer((1,)).coeffs, {1: 1})
        self.assertEqual(series.layer((2,)).coeffs, {})
        self.assertEqual(series.layer((2,)).window, (0, 3))

    def test_conifold_linear_layer(self):
        grid = ClassGrid(1, None, 1)
        factors = [ProductFactor((1,), j, j) for j in range(1, 4)]
        series = product_family(factors, grid, (1, 3))
        self.assertEqual(series.layer((1,)).coeffs, {1: 1, 2: -2, 3: 3})

    def test_plain_geometric_factor(self):
        grid = ClassGrid(1, None, 3)
        series = product_family([ProductFactor((1,), 0, -1, SignMode.PLAIN)], grid, (0, 0))
        self.assertEqual([series.coefficient((d,), 0) for d in range(4)], [1, 1, 1, 1])

    def test_family_of_union_is_product(self):
        grid = ClassGrid(2, (1, 1), 3)
        first = [ProductFactor((1, 0), 1, 2), ProductFactor((0, 1), 2, -1)]
        second = [ProductFactor((1, 1), 1, 1), ProductFactor((1, 0), 3, Fraction(1, 2), SignMode.PLAIN)]
        window = (0, 6)
        union = product_family(first + second, grid, window)
        product = graded_mul(product_family(first, grid, window), product_family(second, grid, window))
        self.assertTrue(union.agrees_with(product))

    def test_factor_needs_positive_class(self):
        with self.assertRaises(DomainError):
            product_family([ProductFactor((0,), 1, 1)], ClassGrid(1, None, 2))
