from fractions import Fraction
from functools import lru_cache
from math import comb

from sympy import factorint

from .errors import DomainError

# All coefficients in the package are Fractions; nothing is ever rounded.
Rational = Fraction


def parse_rational(raw) -> Fraction:
    """
    Parse "p/q", "n" or an int into a Fraction. Floats are refused so that a
    value can never silently lose precision on the way in.
    """
    if isinstance(raw, bool) or isinstance(raw, float):
        raise DomainError(f"not an exact rational: {raw!r}")
    if isinstance(raw, (int, Fraction)):
        return Fraction(raw)
    text = str(raw).strip()
    if "." in text or "e" in text.lower():
        raise DomainError(f"not an exact rational: {raw!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise DomainError(f"zero denominator in {raw!r}")
    except ValueError:
        raise DomainError(f"not an exact rational: {raw!r}")


def format_rational(value) -> str:
    return str(Fraction(value))


class GaussianRational:
    """re + i·im with Fraction parts; only used for the q = −e^{iλ} substitution."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


# Powers of i, indexed by exponent mod 4.
I_POWERS = (
    GaussianRational(1, 0),
    GaussianRational(0, 1),
    GaussianRational(-1, 0),
    GaussianRational(0, -1),
)


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError(f"mobius is defined for n >= 1, got {n}")
    factors = factorint(n)
    if any(exponent > 1 for exponent in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def binomial(n: int, k: int) -> int:
    # Out-of-range binomials vanish so that C(m+g-2, 2g-1) drops out for small m.
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple:
    values = [Fraction(1)]
    for n in range(1, m + 1):
        total = sum(comb(n + 1, j) * values[j] for j in range(n))
        values.append(-total / (n + 1))
    return tuple(values)


def bernoulli(m: int) -> Fraction:
    """B_m from Σ_{j=0}^{m} C(m+1, j) B_j = 0, B_0 = 1; so B_2 = 1/6, B_4 = −1/30."""
    if m < 0:
        raise DomainError(f"bernoulli index must be >= 0, got {m}")
    if m % 2 and m > 1:
        raise DomainError(f"odd bernoulli index {m} is not supported")
    return _bernoulli_table(m)[m]


def c_coefficient(g: int, m: int) -> int:
    """Coefficient of f_g in h_m = Σ_{g=1}^{m+1} c_g^(m) f_g."""
    if m < 0 or g < 1 or g > m + 1:
        return 0
    sign = -1 if (m + g - 1) % 2 else 1
    return sign * (binomial(m + g, 2 * g - 1) - binomial(m + g - 2, 2 * g - 1))
