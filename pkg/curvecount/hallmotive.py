"""
Stack symbols [pt/(A^u ⋊ ∏ GL_{k_i})] on a single ray of a super-rigid
curve, their Poincaré rational functions in t, and the ε-logarithm whose
t -> 1 limit gives N_{0,k[C]}.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import DomainError
from .exactnum import parse_rational
from .qseries import LaurentPoly, RationalFunctionT

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class StackSymbol:
    unipotent_dim: int = 0
    gl_ranks: tuple = ()

    def __post_init__(self):
        if self.unipotent_dim < 0:
            raise DomainError("unipotent dimension must be >= 0")
        if any(k < 1 for k in self.gl_ranks):
            raise DomainError("GL ranks must be positive")
        object.__setattr__(self, "gl_ranks", tuple(sorted(self.gl_ranks)))

    @property
    def total_rank(self) -> int:
        return sum(self.gl_ranks)

    @property
    def group_dimension(self) -> int:
        return self.unipotent_dim + sum(k * k for k in self.gl_ranks)

    def __str__(self):
        ranks = ",".join(str(k) for k in self.gl_ranks)
        return f"[pt/(A^{self.unipotent_dim} x GL{{{ranks}}})]"


@dataclass
class MotiveClass:
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {s: Fraction(c) for s, c in self.terms.items() if c}

    @classmethod
    def of(cls, symbol: StackSymbol, coeff=1):
        return cls({symbol: coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + c
        return MotiveClass(out)

    def scale(self, factor):
        return MotiveClass({s: c * factor for s, c in self.terms.items()})

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, MotiveClass):
            return NotImplemented
        return self.terms == other.terms


def poincare_gl(k: int) -> LaurentPoly:
    """P_t(GL_k) = t^{k(k-1)} ∏_{i=1}^{k} (t^{2i} - 1)."""
    if k < 0:
        raise DomainError(f"GL rank must be >= 0, got {k}")
    result = LaurentPoly.monomial(k * (k - 1), 1, "t")
    for i in range(1, k + 1):
        result = result * LaurentPoly({2 * i: 1, 0: -1}, "t")
    return result


def poincare_symbol(s: StackSymbol) -> RationalFunctionT:
    den = LaurentPoly.monomial(2 * s.unipotent_dim, 1, "t")
    for k in s.gl_ranks:
        den = den * poincare_gl(k)
    return RationalFunctionT(LaurentPoly.one("t"), den)


def poincare_motive(m: MotiveClass) -> RationalFunctionT:
    total = RationalFunctionT(LaurentPoly({}, "t"))
    for s, c in m.items():
        total = total + poincare_symbol(s).scale(c)
    return total


def _star_symbols(a: StackSymbol, b: StackSymbol) -> StackSymbol:
    # Ext^1 vanishes between copies of the rigid object; Hom contributes K_a·K_b.
    return StackSymbol(
        a.unipotent_dim + b.unipotent_dim + a.total_rank * b.total_rank,
        a.gl_ranks + b.gl_ranks,
    )


def star(a: MotiveClass, b: MotiveClass) -> MotiveClass:
    out = {}
    for s, c in a.terms.items():
        for r, d in b.terms.items():
            key = _star_symbols(s, r)
            out[key] = out.get(key, 0) + c * d
    return MotiveClass(out)


def star_rigid(composition) -> StackSymbol:
    """δ_{k1} ∗ ... ∗ δ_{kl} for split configurations of a super-rigid curve."""
    composition = list(composition)
    if not composition:
        raise DomainError("composition must be nonempty")
    result = StackSymbol(0, (composition[0],))
    for k in composition[1:]:
        result = _star_symbols(result, StackSymbol(0, (k,)))
    return result


def compositions(k: int):
    """Ordered compositions of k, in lexicographic order."""
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in compositions(k - first):
            yield (first,) + rest


def epsilon_rigid(k: int) -> MotiveClass:
    """Σ_{compositions of k} ((-1)^{l-1}/l)·δ ∗ ... ∗ δ."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    total = MotiveClass()
    for parts in compositions(k):
        l = len(parts)
        total = total + MotiveClass.of(star_rigid(parts), Fraction(1 if l % 2 else -1, l))
    return total


def exp_epsilon(k: int) -> MotiveClass:
    """Σ_{compositions of k} (1/l!)·ε_{k1} ∗ ... ∗ ε_{kl}; recovers δ_k."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    total = MotiveClass()
    for parts in compositions(k):
        product = epsilon_rigid(parts[0])
        for part in parts[1:]:
            product = star(product, epsilon_rigid(part))
        total = total + product.scale(Fraction(1, factorial(len(parts))))
    return total


def superrigid_t_function(k: int) -> RationalFunctionT:
    """(t^2 - 1)·P_t(-ν·ε_k) with ν = (-1)^{k^2} on every stratum."""
    sign = -1 if (k * k + 1) % 2 else 1
    factor = RationalFunctionT(LaurentPoly({2: sign, 0: -sign}, "t"))
    return factor * poincare_motive(epsilon_rigid(k))


def n_superrigid(k: int) -> Fraction:
    f = superrigid_t_function(k)
    logger.debug("k=%s: (t^2-1)P_t = %s", k, f)
    if f.den.evaluate(1) == 0:
        raise DomainError("expected cancellation failed")
    return f.evaluate(1)


def a2_counting(phi1, phi2) -> int:
    """χ of the moduli of (1,1)-representations of the A2 quiver at phases φ1, φ2."""
    phi1, phi2 = parse_rational(phi1), parse_rational(phi2)
    for phi in (phi1, phi2):
        if not 0 < phi <= 1:
            raise DomainError(f"phase {phi} is outside (0, 1]")
    if phi2 < phi1:
        return 1
    if phi2 == phi1:
        return 2
    return 0
