"""
Curve-class graded series: maps from effective classes β to q-series,
truncated by weighted t-degree.
"""
import enum
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, gcd

from sympy import divisors

from .errors import DomainError, WindowUnderflow
from .qseries import (
    LaurentPoly,
    RationalFunctionQ,
    WindowedLaurent,
    expand_ratfun,
    mul_windowed,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassGrid:
    rank: int
    weights: tuple = None
    cutoff: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise DomainError(f"class lattice rank must be positive, got {self.rank}")
        weights = self.weights
        if weights is None:
            weights = (1,) * self.rank
        weights = tuple(int(w) for w in weights)
        if len(weights) != self.rank:
            raise DomainError(f"{len(weights)} weights given for rank {self.rank}")
        if any(w < 1 for w in weights):
            raise DomainError("class weights must be positive")
        if self.cutoff < 1:
            raise DomainError(f"cutoff must be positive, got {self.cutoff}")
        object.__setattr__(self, "weights", weights)

    @property
    def zero(self):
        return (0,) * self.rank

    def degree(self, beta) -> int:
        return sum(w * d for w, d in zip(self.weights, beta))

    def contains(self, beta) -> bool:
        beta = tuple(beta)
        return (
            len(beta) == self.rank
            and all(isinstance(d, int) and d >= 0 for d in beta)
            and self.degree(beta) <= self.cutoff
        )

    @cached_property
    def classes(self) -> tuple:
        """Every in-range class, zero first, ordered by (degree, components)."""
        ranges = [range(self.cutoff // w + 1) for w in self.weights]
        found = [beta for beta in itertools.product(*ranges) if self.degree(beta) <= self.cutoff]
        return tuple(sorted(found, key=lambda beta: (self.degree(beta), beta)))

    @property
    def positive_classes(self) -> tuple:
        return self.classes[1:]

    def subclasses(self, beta):
        """β1 with 0 <= β1 <= β componentwise, including 0 and β itself."""
        return itertools.product(*(range(d + 1) for d in beta))

    def splittings(self, beta):
        """Ordered pairs (β1, β2) of positive classes with β1 + β2 = β."""
        pairs = []
        for first in self.subclasses(beta):
            second = tuple(b - a for a, b in zip(first, beta))
            if any(first) and any(second):
                pairs.append((first, second))
        return pairs

    def check(self, beta):
        beta = tuple(beta)
        if not self.contains(beta):
            raise DomainError(f"class {list(beta)} is outside the grid (rank {self.rank}, cutoff {self.cutoff})")
        return beta


def class_divisors(beta) -> list[int]:
    """a >= 1 dividing every component of β."""
    beta = tuple(beta)
    if not any(beta):
        raise DomainError("the zero class has no divisor list")
    common = 0
    for d in beta:
        common = gcd(common, d)
    return divisors(common)


def divide_class(beta, a: int) -> tuple:
    return tuple(d // a for d in beta)


def scale_class(beta, a: int) -> tuple:
    return tuple(d * a for d in beta)


def _subtract(beta, part) -> tuple:
    return tuple(b - p for b, p in zip(beta, part))


@dataclass
class GradedSeries:
    """
    β -> WindowedLaurent. A class without a layer is exactly zero; the zero
    class carries the constant layer.
    """

    grid: ClassGrid
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        for beta in self.terms:
            self.grid.check(beta)

    @classmethod
    def one(cls, grid: ClassGrid, window_hi: int = 0):
        return cls(grid, {grid.zero: WindowedLaurent.unit(window_hi)})

    def layer(self, beta):
        return self.terms.get(tuple(beta))

    def coefficient(self, beta, n: int):
        layer = self.layer(beta)
        if layer is None:
            return Fraction(0)
        return layer.coefficient(n)

    def items(self):
        return [(beta, self.terms[beta]) for beta in self.grid.classes if beta in self.terms]

    def positive_items(self):
        return [(beta, layer) for beta, layer in self.items() if any(beta)]

    def restricted(self, keep):
        return GradedSeries(self.grid, {beta: layer for beta, layer in self.terms.items() if beta in keep})

    def agrees_with(self, other: "GradedSeries", classes=None) -> bool:
        """Layerwise agreement on the windows both sides know."""
        if other.grid != self.grid:
            return False
        for beta in classes if classes is not None else self.grid.classes:
            mine, theirs = self.layer(beta), other.layer(beta)
            if mine is None and theirs is None:
                continue
            if mine is None:
                if not theirs.agrees_with(None):
                    return False
            elif not mine.agrees_with(theirs):
                return False
        return True


def _accumulate(acc, term):
    return term if acc is None else acc + term


def _times(x, y):
    if isinstance(x, WindowedLaurent) and isinstance(y, WindowedLaurent):
        if x.is_unit():
            return y
        if y.is_unit():
            return x
        return mul_windowed(x, y)
    return x * y


def graded_mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    if a.grid != b.grid:
        raise DomainError("graded product of series on different grids")
    grid = a.grid
    out = {}
    for beta in grid.classes:
        acc = None
        for first in grid.subclasses(beta):
            x = a.layer(first)
            if x is None:
                continue
            y = b.layer(_subtract(beta, first))
            if y is None:
                continue
            acc = _accumulate(acc, _times(x, y))
        if acc is not None:
            out[beta] = acc
    return GradedSeries(grid, out)


def exp_layers(layers: dict, grid: ClassGrid) -> dict:
    """
    Positive layers of exp(Σ A_β t^β) from the degree recurrence
    d(β)·E_β = Σ_{β1 > 0} d(β1)·A_{β1}·E_{β - β1}, E_0 = 1.
    Works over any ring whose elements support +, * and scale.
    """
    out = {}
    for beta in grid.positive_classes:
        acc = None
        for first in grid.subclasses(beta):
            if not any(first):
                continue
            a = layers.get(first)
            if a is None:
                continue
            rest = _subtract(beta, first)
            if any(rest):
                e = out.get(rest)
                if e is None:
                    continue
                term = _times(a, e)
            else:
                term = a
            acc = _accumulate(acc, term.scale(grid.degree(first)))
        if acc is not None:
            out[beta] = acc.scale(Fraction(1, grid.degree(beta)))
    return out


def log_layers(layers: dict, grid: ClassGrid) -> dict:
    """
    Positive layers of log(1 + Σ P_β t^β) from
    L_β = P_β - (1/d(β))·Σ_{β1, β2 > 0} d(β1)·L_{β1}·P_{β2}.
    """
    out = {}
    for beta in grid.positive_classes:
        acc = None
        for first, second in grid.splittings(beta):
            l, p = out.get(first), layers.get(second)
            if l is None or p is None:
                continue
            acc = _accumulate(acc, _times(l, p).scale(grid.degree(first)))
        value = layers.get(beta)
        if acc is not None:
            correction = acc.scale(Fraction(-1, grid.degree(beta)))
            value = correction if value is None else value + correction
        if value is not None:
            out[beta] = value
    return out


def graded_exp(a: GradedSeries) -> GradedSeries:
    if a.layer(a.grid.zero) is not None:
        raise DomainError("exp needs a series without a constant (β = 0) layer")
    hi = max((layer.window_hi for _, layer in a.items()), default=0)
    out = exp_layers(dict(a.terms), a.grid)
    out[a.grid.zero] = WindowedLaurent.unit(hi)
    return GradedSeries(a.grid, out)


def require_unit_layer(series: GradedSeries):
    zero = series.layer(series.grid.zero)
    if zero is None or not zero.exact_below or zero.coeffs != {0: Fraction(1)}:
        raise DomainError("log needs the β = 0 layer to be exactly 1")


def graded_log(a: GradedSeries) -> GradedSeries:
    require_unit_layer(a)
    positive = {beta: layer for beta, layer in a.positive_items()}
    return GradedSeries(a.grid, log_layers(positive, a.grid))


def _expand_layer(value, hi):
    if isinstance(value, RationalFunctionQ):
        v = value.valuation()
        if v > hi:
            return WindowedLaurent({}, hi, hi)
        return expand_ratfun(value, v, hi)
    if isinstance(value, LaurentPoly):
        return WindowedLaurent.from_poly(value, hi)
    return value.truncate(hi)


def exponentiate(layers: dict, grid: ClassGrid, window) -> GradedSeries:
    """
    exp(Σ A_β t^β) for exact log layers (LaurentPoly or RationalFunctionQ),
    valid on the q-window ``window`` in every positive class.

    Layers with negative valuation shrink product windows, so each log layer
    is expanded with enough headroom above ``window[1]`` for the shrinkage
    across the whole grid to be absorbed.
    """
    lo, hi = window
    if lo > hi:
        raise DomainError(f"empty q-window [{lo},{hi}]")
    ratios = []
    present = {}
    for beta, value in layers.items():
        beta = grid.check(beta)
        if not any(beta):
            raise DomainError("exponentiated layers must sit on positive classes")
        v = value.valuation()
        if v is None:
            continue
        present[beta] = value
        ratios.append(Fraction(v, grid.degree(beta)))
    slope = min([Fraction(0)] + ratios)
    pad = ceil(-slope * grid.cutoff)
    top = hi + pad
    logger.debug("exponentiate: cutoff %s window [%s,%s] headroom %s", grid.cutoff, lo, hi, pad)
    expanded = {beta: _expand_layer(value, top) for beta, value in present.items()}
    raw = exp_layers(expanded, grid)
    out = {grid.zero: WindowedLaurent.unit(max(hi, 0))}
    for beta in grid.positive_classes:
        value = raw.get(beta)
        if value is None:
            out[beta] = WindowedLaurent({}, lo, hi)
            continue
        if value.window_hi < hi:
            raise WindowUnderflow((lo, hi), value.window, f"class {list(beta)}")
        value = value.truncate(hi)
        v = value.valuation()
        start = lo if v is None else min(lo, v)
        out[beta] = WindowedLaurent(value.coeffs, start, hi)
    return GradedSeries(grid, out)


class SignMode(enum.Enum):
    SIGNED = "signed"  # 1 - (-q)^j t^β
    PLAIN = "plain"  # 1 - q^j t^β


@dataclass(frozen=True)
class ProductFactor:
    beta: tuple
    j: int
    exponent: Fraction
    sign_mode: SignMode = SignMode.SIGNED

    def log_terms(self, grid: ClassGrid):
        """(m·β, -e·x^m/m) for every multiple m·β in range, x = (-q)^j or q^j."""
        if not any(self.beta):
            raise DomainError("product factors need a positive class")
        terms = []
        m = 1
        while grid.contains(scale_class(self.beta, m)):
            coeff = -Fraction(self.exponent) / m
            if self.sign_mode is SignMode.SIGNED and (self.j * m) % 2:
                coeff = -coeff
            terms.append((scale_class(self.beta, m), LaurentPoly({self.j * m: coeff})))
            m += 1
        return terms


def product_family(factors, grid: ClassGrid, window=(0, 0)) -> GradedSeries:
    """∏ (1 - (±q)^j t^β)^e through exp(Σ e·log(1 - (±q)^j t^β))."""
    layers = {}
    for factor in factors:
        for beta, term in factor.log_terms(grid):
            layers[beta] = layers[beta] + term if beta in layers else term
    return exponentiate(layers, grid, window)
