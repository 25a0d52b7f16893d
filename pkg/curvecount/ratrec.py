"""Recognizing truncated Laurent series as rational functions of q."""
import logging
from fractions import Fraction

from sympy import Matrix, Rational as SympyRational

from .errors import DomainError, NotRecognized, WindowUnderflow
from .qseries import LaurentPoly, RationalFunctionQ, WindowedLaurent, expand_ratfun

logger = logging.getLogger(__name__)


def _sympy(value: Fraction):
    return SympyRational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _solve_denominator(s, num_terms, den_deg, last):
    """d_1..d_M with Σ_{j=0}^{M} d_j s_{i-j} = 0 for every i in (num_terms, last], d_0 = 1."""
    rows, rhs = [], []
    for i in range(num_terms + 1, last + 1):
        rows.append([_sympy(s[i - j]) if i - j >= 0 else 0 for j in range(1, den_deg + 1)])
        rhs.append(_sympy(-s[i]))
    if den_deg == 0:
        if any(rhs):
            raise NotRecognized("series is not a polynomial of that degree")
        return [Fraction(1)]
    logger.debug("pade system: %s equations, %s unknowns", len(rows), den_deg)
    try:
        solution, params = Matrix(rows).gauss_jordan_solve(Matrix(rhs))
    except ValueError:
        raise NotRecognized()
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    return [Fraction(1)] + [_fraction(x) for x in solution]


def pade(series: WindowedLaurent, num_deg: int, den_deg: int) -> RationalFunctionQ:
    """
    p/q with deg p <= num_deg (absolute, i.e. counted from q^0) and
    deg q <= den_deg reproducing every coefficient the series carries.
    One equation beyond the unknowns is required as a consistency check.
    """
    if not series.exact_below:
        raise DomainError("rational recognition needs the exact lower support")
    if num_deg < 0 or den_deg < 0:
        raise DomainError("degrees must be >= 0")
    lo = series.valuation()
    if lo is None:
        return RationalFunctionQ(LaurentPoly())
    num_terms = num_deg - lo
    if num_terms < 0:
        raise NotRecognized(f"series starts at q^{lo}, above numerator degree {num_deg}")
    last = series.window_hi - lo
    if last + 1 < num_terms + den_deg + 2:
        raise WindowUnderflow(
            (lo, lo + num_terms + den_deg + 1), series.window, "not enough coefficients to certify"
        )
    s = [series.coefficient(lo + i) for i in range(last + 1)]
    d = _solve_denominator(s, num_terms, den_deg, last)
    p = {}
    for i in range(num_terms + 1):
        p[lo + i] = sum((d[j] * s[i - j] for j in range(min(i, den_deg) + 1)), Fraction(0))
    result = RationalFunctionQ(LaurentPoly(p), LaurentPoly(dict(enumerate(d))))
    check = expand_ratfun(result, lo, series.window_hi)
    if any(check.coefficient(n) != series.coefficient(n) for n in range(lo, series.window_hi + 1)):
        raise NotRecognized("re-expansion disagrees")
    return result


def check_q_symmetry(f: RationalFunctionQ) -> bool:
    """f(1/q) == f(q), compared after clearing denominators."""
    return f.num.invert_variable() * f.den == f.num * f.den.invert_variable()
