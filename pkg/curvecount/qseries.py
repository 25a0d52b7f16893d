"""
Univariate exact Laurent arithmetic.

Three value types live here, all immutable by convention:

* ``LaurentPoly``: finite sparse Laurent polynomial, exponent -> coefficient.
* ``WindowedLaurent``: a Laurent series known exactly on ``[window_lo, window_hi]``.
  Above ``window_hi`` nothing is known; below ``window_lo`` everything is zero
  when ``exact_below`` is set and unknown otherwise. Every operation computes the
  window it can guarantee and refuses to report coefficients outside it.
* ``RationalFunctionQ``: reduced quotient of Laurent polynomials, den's lowest
  coefficient is 1 and den has no power of the variable factored in.

The variable name is cosmetic; the same classes serve q, t and λ. Coefficients
are Fractions, except for the λ-expansions in ``invariants.check_gw_dt`` which
run the same code with ``GaussianRational`` coefficients.
"""
import logging
from fractions import Fraction

from sympy import QQ, Poly, Rational as SympyRational, Symbol

from .errors import DomainError, WindowUnderflow
from .exactnum import binomial, c_coefficient, format_rational

logger = logging.getLogger(__name__)


def _exact(value):
    if isinstance(value, bool):
        raise DomainError("booleans are not coefficients")
    if isinstance(value, int):
        return Fraction(value)
    return value


def _clean(coeffs) -> dict:
    return {int(e): _exact(c) for e, c in coeffs.items() if c}


def format_terms(items, var="q") -> str:
    """Human-readable Laurent expression, lowest exponent first: "q - 2q^2 + 3q^3"."""
    parts = []
    for exponent, coeff in items:
        if not coeff:
            continue
        sign = "-" if coeff < 0 else "+"
        magnitude = -coeff if coeff < 0 else coeff
        if exponent == 0:
            body = format_rational(magnitude)
        else:
            power = var if exponent == 1 else f"{var}^{exponent}"
            if magnitude == 1:
                body = power
            elif Fraction(magnitude).denominator == 1:
                body = f"{format_rational(magnitude)}{power}"
            else:
                body = f"({format_rational(magnitude)}){power}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first_body = parts[0]
    text = f"-{first_body}" if first_sign == "-" else first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


class LaurentPoly:
    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=None, var="q"):
        self.coeffs = _clean(coeffs or {})
        self.var = var

    @classmethod
    def monomial(cls, exponent, coeff=1, var="q"):
        return cls({exponent: coeff}, var)

    @classmethod
    def one(cls, var="q"):
        return cls({0: 1}, var)

    def __getitem__(self, exponent):
        return self.coeffs.get(exponent, Fraction(0))

    def items(self):
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def degree(self):
        return max(self.coeffs) if self.coeffs else None

    def __add__(self, other):
        if isinstance(other, RationalFunctionQ):
            return NotImplemented
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other}, self.var)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()}, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        return LaurentPoly({e: c * factor for e, c in self.coeffs.items()}, self.var)

    def __mul__(self, other):
        if isinstance(other, RationalFunctionQ):
            return NotImplemented
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out, self.var)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers of a Laurent polynomial are rational functions")
        result = LaurentPoly.one(self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int):
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()}, self.var)

    def invert_variable(self):
        """q -> 1/q."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()}, self.var)

    def substitute_signed_power(self, a: int):
        return substitute_signed_power(self, a)

    def evaluate(self, x):
        return sum((c * Fraction(x) ** e for e, c in self.coeffs.items()), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _clean({0: other})
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        return f"{type(self).__name__}({format_terms(self.items(), self.var)})"

    def __str__(self):
        return format_terms(self.items(), self.var)


class SymmetricLaurentPoly(LaurentPoly):
    """A Laurent polynomial with coeffs[-m] == coeffs[m]; the constructor checks it."""

    __slots__ = ()

    def __init__(self, coeffs=None, var="q"):
        super().__init__(coeffs, var)
        for e, c in self.coeffs.items():
            if self.coeffs.get(-e) != c:
                raise DomainError(f"not invariant under {var} <-> 1/{var} at exponent {e}")

    @classmethod
    def from_poly(cls, poly: LaurentPoly):
        return cls(poly.coeffs, poly.var)


class WindowedLaurent:
    """
    Coefficients known on [window_lo, window_hi]. Terms above the window are
    truncated on construction; terms below it are refused.
    """

    __slots__ = ("coeffs", "window_lo", "window_hi", "exact_below")

    def __init__(self, coeffs, window_lo: int, window_hi: int, exact_below: bool = True):
        if window_lo > window_hi:
            raise DomainError(f"empty window [{window_lo},{window_hi}]")
        kept = {}
        for e, c in _clean(coeffs).items():
            if e > window_hi:
                continue
            if e < window_lo:
                raise DomainError(f"coefficient at {e} lies below window [{window_lo},{window_hi}]")
            kept[e] = c
        self.coeffs = kept
        self.window_lo = int(window_lo)
        self.window_hi = int(window_hi)
        self.exact_below = bool(exact_below)

    @classmethod
    def unit(cls, window_hi: int = 0):
        return cls({0: 1}, 0, max(window_hi, 0))

    @classmethod
    def from_poly(cls, poly: LaurentPoly, window_hi: int, window_lo=None):
        """An exact polynomial viewed on [lo, window_hi]; lo defaults to its valuation."""
        lo = poly.valuation() if window_lo is None else window_lo
        if lo is None or lo > window_hi:
            lo = window_hi
        return cls({e: c for e, c in poly.coeffs.items() if e <= window_hi}, lo, window_hi)

    @property
    def window(self):
        return (self.window_lo, self.window_hi)

    def coefficient(self, n: int):
        if n > self.window_hi or (n < self.window_lo and not self.exact_below):
            raise WindowUnderflow((n, n), self.window)
        return self.coeffs.get(n, Fraction(0))

    __getitem__ = coefficient

    def items(self):
        return sorted(self.coeffs.items())

    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def is_unit(self) -> bool:
        return self.exact_below and self.window_lo <= 0 and self.coeffs == {0: Fraction(1)}

    def to_poly(self, var="q") -> LaurentPoly:
        return LaurentPoly(self.coeffs, var)

    def __add__(self, other):
        if not isinstance(other, WindowedLaurent):
            return NotImplemented
        exact = self.exact_below and other.exact_below
        lo = min(self.window_lo, other.window_lo) if exact else max(self.window_lo, other.window_lo)
        hi = min(self.window_hi, other.window_hi)
        if hi < lo:
            raise WindowUnderflow((lo, max(self.window_hi, other.window_hi)), (lo, hi), "disjoint windows")
        out = {}
        for source in (self.coeffs, other.coeffs):
            for e, c in source.items():
                if lo <= e <= hi:
                    out[e] = out.get(e, 0) + c
        return WindowedLaurent(out, lo, hi, exact)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, WindowedLaurent):
            return NotImplemented
        return self + (-other)

    def scale(self, factor):
        return WindowedLaurent(
            {e: c * factor for e, c in self.coeffs.items()},
            self.window_lo,
            self.window_hi,
            self.exact_below,
        )

    def __mul__(self, other):
        if isinstance(other, WindowedLaurent):
            return mul_windowed(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def shift(self, k: int):
        return WindowedLaurent(
            {e + k: c for e, c in self.coeffs.items()},
            self.window_lo + k,
            self.window_hi + k,
            self.exact_below,
        )

    def truncate(self, hi: int):
        hi = min(hi, self.window_hi)
        lo = min(self.window_lo, hi)
        return WindowedLaurent(
            {e: c for e, c in self.coeffs.items() if e <= hi}, lo, hi, self.exact_below
        )

    def tightened(self):
        """Same series with the window starting at its valuation; an exact zero collapses to [hi, hi]."""
        if not self.exact_below:
            return self
        v = self.valuation()
        lo = self.window_hi if v is None else v
        if lo == self.window_lo:
            return self
        return WindowedLaurent(self.coeffs, lo, self.window_hi, True)

    def widen_below(self, lo: int):
        """Report a lower window start; only meaningful (and only done) when exact_below holds."""
        if not self.exact_below or lo >= self.window_lo:
            return self
        return WindowedLaurent(self.coeffs, lo, self.window_hi, True)

    def agrees_with(self, other) -> bool:
        """
        Coefficientwise equality wherever both sides are known. ``None`` stands
        for the exact zero series.
        """
        if other is None:
            return not any(e <= self.window_hi for e in self.coeffs)
        exact = self.exact_below and other.exact_below
        lo = min(self.window_lo, other.window_lo) if exact else max(self.window_lo, other.window_lo)
        hi = min(self.window_hi, other.window_hi)
        for n in range(lo, hi + 1):
            if self.coefficient(n) != other.coefficient(n):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, WindowedLaurent):
            return NotImplemented
        return (
            self.coeffs == other.coeffs
            and self.window == other.window
            and self.exact_below == other.exact_below
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"WindowedLaurent({format_terms(self.items())}, "
            f"window=[{self.window_lo},{self.window_hi}], exact_below={self.exact_below})"
        )


def mul_windowed(a: WindowedLaurent, b: WindowedLaurent) -> WindowedLaurent:
    """
    Exact product on the window it is guaranteed on:
    lo = a.lo + b.lo, hi = min(a.hi + b.lo, b.hi + a.lo).
    """
    lo = a.window_lo + b.window_lo
    hi = min(a.window_hi + b.window_lo, b.window_hi + a.window_lo)
    if hi < lo:
        raise WindowUnderflow((lo, a.window_hi + b.window_hi), (lo, hi), "empty product window")
    out = {}
    right = sorted(b.coeffs.items())
    for i, x in a.coeffs.items():
        for j, y in right:
            e = i + j
            if e > hi:
                break
            out[e] = out.get(e, 0) + x * y
    return WindowedLaurent(out, lo, hi, a.exact_below and b.exact_below)


def inverse_series(a: WindowedLaurent) -> WindowedLaurent:
    """1/a for a series with a known nonzero leading term; window [-v, hi - 2v]."""
    if not a.exact_below:
        raise DomainError("inverting a series needs its exact lower support")
    v = a.valuation()
    if v is None:
        raise DomainError(f"series vanishes on [{a.window_lo},{a.window_hi}] and cannot be inverted")
    lead = a.coeffs[v]
    inv_lead = 1 / lead
    length = a.window_hi - v
    b = [inv_lead]
    for n in range(1, length + 1):
        acc = 0
        for i in range(1, n + 1):
            c = a.coeffs.get(v + i)
            if c:
                acc = acc + c * b[n - i]
        b.append(-(acc * inv_lead))
    coeffs = {n - v: c for n, c in enumerate(b) if c}
    return WindowedLaurent(coeffs, -v, a.window_hi - 2 * v)


def power_series(a: WindowedLaurent, n: int) -> WindowedLaurent:
    if n < 0:
        return power_series(inverse_series(a), -n)
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else mul_windowed(result, base)
        n >>= 1
        if n:
            base = mul_windowed(base, base)
    if result is None:
        return WindowedLaurent.unit(a.window_hi)
    return result


def exp_series(a: WindowedLaurent) -> WindowedLaurent:
    """exp of a series without terms at exponents <= 0, via n·e_n = Σ k·a_k·e_{n-k}."""
    if not a.exact_below or any(e <= 0 for e in a.coeffs):
        raise DomainError("exp needs an argument supported on exponents >= 1")
    hi = a.window_hi
    if hi < 0:
        raise WindowUnderflow((0, 0), a.window)
    e = [Fraction(1)]
    for n in range(1, hi + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            c = a.coeffs.get(k)
            if c:
                acc = acc + c * k * e[n - k]
        e.append(acc / n)
    return WindowedLaurent({n: c for n, c in enumerate(e)}, 0, hi)


def log_series(a: WindowedLaurent) -> WindowedLaurent:
    if not a.exact_below or any(e < 0 for e in a.coeffs) or a.coefficient(0) != 1:
        raise DomainError("log needs a power series with constant term exactly 1")
    hi = a.window_hi
    out = [Fraction(0)]
    for n in range(1, hi + 1):
        acc = Fraction(0)
        for k in range(1, n):
            c = a.coeffs.get(n - k)
            if c and out[k]:
                acc = acc + out[k] * k * c
        out.append(a.coeffs.get(n, 0) - acc / n)
    return WindowedLaurent({n: c for n, c in enumerate(out)}, 0, hi)


def substitute_signed_power(f: LaurentPoly, a: int) -> LaurentPoly:
    """q -> −(−q)^a, i.e. c·q^m -> c·(−1)^{m(a+1)}·q^{am}."""
    if a < 1:
        raise DomainError(f"substitution power must be positive, got {a}")
    out = {}
    for m, c in f.coeffs.items():
        out[a * m] = -c if (m * (a + 1)) % 2 else c
    return type(f)(out, f.var) if isinstance(f, SymmetricLaurentPoly) else LaurentPoly(out, f.var)


def split_symmetric(l: WindowedLaurent):
    """
    Split l = F1 + F2 with F1 supported on exponents >= 1 and F2 a
    q <-> 1/q symmetric Laurent polynomial read off from the negative support
    and the constant term.
    """
    if not l.exact_below:
        raise DomainError("split needs the exact negative support of the series")
    negative = {e: c for e, c in l.coeffs.items() if e < 0}
    depth = -min(negative) if negative else 0
    if l.window_hi < depth:
        raise WindowUnderflow((-depth, depth), l.window, "cannot mirror negative support")
    symmetric = {}
    for e, c in negative.items():
        symmetric[e] = c
        symmetric[-e] = c
    constant = l.coefficient(0)
    if constant:
        symmetric[0] = constant
    positive = {}
    for e in set(symmetric) | set(l.coeffs):
        if e < 1:
            continue
        value = l.coeffs.get(e, 0) - symmetric.get(e, 0)
        if value:
            positive[e] = value
    hi = l.window_hi
    return (
        WindowedLaurent(positive, min(1, hi), hi),
        SymmetricLaurentPoly(symmetric),
    )


def f_g(g: int) -> SymmetricLaurentPoly:
    """q^{1-g}(1+q)^{2g-2}."""
    if g < 1:
        raise DomainError(f"f_g is a Laurent polynomial only for g >= 1, got {g}")
    return SymmetricLaurentPoly({k + 1 - g: binomial(2 * g - 2, k) for k in range(2 * g - 1)})


def h_m(m: int) -> SymmetricLaurentPoly:
    if m < 0:
        raise DomainError(f"h_m needs m >= 0, got {m}")
    if m == 0:
        return SymmetricLaurentPoly({0: 1})
    return SymmetricLaurentPoly({m: 1, -m: 1})


def fg_in_h_basis(g: int) -> dict:
    """f_g = Σ_{m=0}^{g-1} C(2g-2, g-1+m) h_m."""
    if g < 1:
        raise DomainError(f"f_g needs g >= 1, got {g}")
    return {m: binomial(2 * g - 2, g - 1 + m) for m in range(g)}


def _as_symmetric(s) -> SymmetricLaurentPoly:
    if isinstance(s, SymmetricLaurentPoly):
        return s
    return SymmetricLaurentPoly(s.coeffs, s.var)


def h_decompose(s) -> dict:
    s = _as_symmetric(s)
    return {m: c for m, c in s.coeffs.items() if m >= 0}


def fg_decompose(s) -> dict:
    """Coefficients n_g with Σ n_g f_g = s, through the h basis and c_g^(m)."""
    b = h_decompose(s)
    if not b:
        return {}
    top = max(b) + 1
    out = {}
    for g in range(1, top + 1):
        value = sum((c * c_coefficient(g, m) for m, c in b.items()), Fraction(0))
        if value:
            out[g] = value
    return out


_SYMBOLS = {}


def _symbol(var):
    if var not in _SYMBOLS:
        _SYMBOLS[var] = Symbol(var)
    return _SYMBOLS[var]


def _to_sympy(poly: LaurentPoly) -> Poly:
    terms = {(e,): SympyRational(c.numerator, c.denominator) for e, c in poly.coeffs.items()}
    return Poly.from_dict(terms, _symbol(poly.var), domain=QQ)


def _from_sympy(poly: Poly, var) -> LaurentPoly:
    out = {}
    for (e,), c in poly.terms():
        out[e] = Fraction(int(c.p), int(c.q))
    return LaurentPoly(out, var)


class RationalFunctionQ:
    """num/den with den's lowest coefficient 1, den(0) != 0 and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, normalize=True):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly({0: num})
        var = num.var
        if den is None:
            den = LaurentPoly.one(var)
        elif not isinstance(den, LaurentPoly):
            den = LaurentPoly({0: den}, var)
        if den.is_zero():
            raise DomainError("rational function with zero denominator")
        if normalize:
            num, den = self._normalize(LaurentPoly(num.coeffs, var), LaurentPoly(den.coeffs, var))
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(num, den):
        var = num.var
        if num.is_zero():
            return LaurentPoly({}, var), LaurentPoly.one(var)
        shift = den.valuation()
        den = den.shift(-shift)
        num = num.shift(-shift)
        v = num.valuation()
        num_poly = num.shift(-v)
        if den.degree() > 0 and num_poly.degree() > 0:
            common = _to_sympy(num_poly).gcd(_to_sympy(den))
            if common.degree() > 0:
                num_poly = _from_sympy(_to_sympy(num_poly).exquo(common), var)
                den = _from_sympy(_to_sympy(den).exquo(common), var)
        lead = den[0]
        return num_poly.shift(v).scale(1 / lead), den.scale(1 / lead)

    @property
    def var(self):
        return self.num.var

    @classmethod
    def coerce(cls, value, var="q"):
        if isinstance(value, RationalFunctionQ):
            return value
        if isinstance(value, LaurentPoly):
            return cls(value)
        return cls(LaurentPoly({0: value}, var))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def valuation(self):
        if self.num.is_zero():
            return None
        return self.num.valuation() - self.den.valuation()

    def __add__(self, other):
        other = self.coerce(other, self.var)
        return RationalFunctionQ(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionQ(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-self.coerce(other, self.var))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        if not factor:
            return RationalFunctionQ(LaurentPoly({}, self.var))
        return RationalFunctionQ(self.num.scale(factor), self.den, normalize=False)

    def __mul__(self, other):
        if not isinstance(other, (RationalFunctionQ, LaurentPoly)):
            return self.scale(other)
        other = self.coerce(other, self.var)
        return RationalFunctionQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.coerce(other, self.var)
        if other.is_zero():
            raise DomainError("division by the zero rational function")
        return RationalFunctionQ(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self.coerce(other, self.var) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunctionQ(self.den, self.num) ** (-n)
        return RationalFunctionQ(self.num ** n, self.den ** n)

    def invert_variable(self):
        return RationalFunctionQ(self.num.invert_variable(), self.den.invert_variable())

    def evaluate(self, x):
        value = self.den.evaluate(x)
        if value == 0:
            raise DomainError(f"pole at {x}")
        return self.num.evaluate(x) / value

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            other = self.coerce(other, self.var)
        if not isinstance(other, RationalFunctionQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    __hash__ = None

    def __repr__(self):
        return f"RationalFunctionQ(({self.num}) / ({self.den}))"

    def __str__(self):
        if self.den == LaurentPoly.one(self.var):
            return str(self.num)
        return f"({self.num}) / ({self.den})"


# Poincaré evaluations land in the same field, in the variable t.
RationalFunctionT = RationalFunctionQ


def expand_ratfun(f: RationalFunctionQ, lo: int, hi: int) -> WindowedLaurent:
    """Laurent expansion around 0, valid up to hi, starting no later than the true lower support."""
    if hi < lo:
        raise DomainError(f"expansion window [{lo},{hi}] is empty")
    if f.is_zero():
        return WindowedLaurent({}, lo, hi)
    v = f.valuation()
    start = min(lo, v)
    num = f.num.shift(-f.num.valuation())
    den = f.den.shift(-f.den.valuation())
    d0 = den[0]
    den_items = [(i, c) for i, c in den.coeffs.items() if i > 0]
    series = []
    for n in range(hi - v + 1):
        acc = num[n]
        for i, c in den_items:
            if i <= n:
                acc = acc - c * series[n - i]
        series.append(acc / d0)
    return WindowedLaurent({v + n: c for n, c in enumerate(series)}, start, hi)
