from fractions import Fraction
from math import comb

from django.test import SimpleTestCase
from sympy import divisors

from curvecount.errors import DomainError
from curvecount.exactnum import (
    GaussianRational,
    bernoulli,
    binomial,
    c_coefficient,
    format_rational,
    mobius,
    parse_rational,
)
from curvecount.qseries import LaurentPoly, f_g, h_m


class MobiusTests(SimpleTestCase):
    def test_small_values(self):
        self.assertEqual([mobius(n) for n in (1, 2, 3, 4, 5, 6, 30)], [1, -1, -1, 0, -1, 1, -1])

    def test_divisor_sum_vanishes_above_one(self):
        for n in range(1, 2001):
            total = sum(mobius(d) for d in divisors(n))
            self.assertEqual(total, 1 if n == 1 else 0, n)

    def test_rejects_zero(self):
        with self.assertRaises(DomainError):
            mobius(0)


class BernoulliTests(SimpleTestCase):
    def test_known_values(self):
        self.assertEqual(bernoulli(0), 1)
        self.assertEqual(bernoulli(1), Fraction(-1, 2))
        self.assertEqual(bernoulli(2), Fraction(1, 6))
        self.assertEqual(bernoulli(4), Fraction(-1, 30))
        self.assertEqual(bernoulli(6), Fraction(1, 42))

    def test_defining_recurrence(self):
        def b(j):
            return bernoulli(j) if j < 2 or j % 2 == 0 else 0

        for m in range(2, 31, 2):
            self.assertEqual(sum(comb(m + 1, j) * b(j) for j in range(m + 1)), 0, m)

    def test_odd_index_is_refused(self):
        with self.assertRaises(DomainError):
            bernoulli(3)


class BinomialTests(SimpleTestCase):
    def test_out_of_range_is_zero(self):
        self.assertEqual(binomial(4, 2), 6)
        self.assertEqual(binomial(1, 3), 0)
        self.assertEqual(binomial(-1, 0), 0)
        self.assertEqual(binomial(3, -1), 0)


class CCoefficientTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(c_coefficient(1, 0), 1)
        self.assertEqual(c_coefficient(1, 1), -2)
        self.assertEqual(c_coefficient(2, 1), 1)
        self.assertEqual(c_coefficient(3, 1), 0)

    def test_h_m_is_recovered_from_f_g(self):
        for m in range(0, 13):
            total = LaurentPoly()
            for g in range(1, m + 2):
                total = total + f_g(g).scale(c_coefficient(g, m))
            self.assertEqual(total, h_m(m), m)


class ParseRationalTests(SimpleTestCase):
    def test_accepts_exact_forms(self):
        self.assertEqual(parse_rational("3/6"), Fraction(1, 2))
        self.assertEqual(parse_rational("-7"), -7)
        self.assertEqual(parse_rational(4), 4)

    def test_refuses_inexact_or_broken_input(self):
        for raw in ("1/0", 0.5, "1.5", "1e3", "abc", True):
            with self.assertRaises(DomainError, msg=repr(raw)):
                parse_rational(raw)

    def test_format_is_lowest_terms(self):
        self.assertEqual(format_rational(Fraction(6, -4)), "-3/2")
        self.assertEqual(format_rational(5), "5")


class GaussianRationalTests(SimpleTestCase):
    def test_field_operations(self):
        a = GaussianRational(1, 2)
        b = GaussianRational(3, -1)
        self.assertEqual(a * b, GaussianRational(5, 5))
        self.assertEqual((a * b) / b, a)
        self.assertEqual(1 / GaussianRational(0, 1), GaussianRational(0, -1))
        self.assertEqual(a + 1, GaussianRational(2, 2))
        self.assertFalse(GaussianRational())
