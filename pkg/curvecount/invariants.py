"""
Transforms between the DT, PT, GW and Gopakumar–Vafa descriptions of a
Calabi–Yau 3-fold's curve counts, plus the closed-form series they are
checked against (MacMahon, conifold, Weierstrass/Göttsche).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from sympy import divisors

from .errors import (
    DomainError,
    IntegralityViolation,
    SymmetryViolation,
    WindowUnderflow,
)
from .exactnum import I_POWERS, GaussianRational, bernoulli, c_coefficient, mobius
from .gseries import (
    ClassGrid,
    GradedSeries,
    ProductFactor,
    SignMode,
    class_divisors,
    divide_class,
    exp_layers,
    exponentiate,
    graded_exp,
    graded_mul,
    log_layers,
    product_family,
    require_unit_layer,
    scale_class,
)
from .qseries import (
    LaurentPoly,
    RationalFunctionQ,
    SymmetricLaurentPoly,
    WindowedLaurent,
    exp_series,
    f_g,
    fg_decompose,
    inverse_series,
    mul_windowed,
    power_series,
    split_symmetric,
    substitute_signed_power,
)
from .ratrec import check_q_symmetry

logger = logging.getLogger(__name__)

# GW layers are WindowedLaurent series in λ; the name only marks intent.
LambdaSeries = WindowedLaurent


def _as_integer(value, what):
    value = Fraction(value)
    if value.denominator != 1:
        raise DomainError(f"{what} must be an integer, got {value}")
    return int(value)


@dataclass
class GVTable:
    """(g, β) -> n_g^β, integers only, zeros dropped."""

    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for (g, beta), value in self.entries.items():
            if g < 0:
                raise DomainError(f"negative genus {g}")
            beta = tuple(beta)
            if not any(beta):
                raise DomainError("GV invariants live on positive classes")
            n = _as_integer(value, f"GV entry at g={g}, beta={list(beta)}")
            if n:
                cleaned[(int(g), beta)] = n
        self.entries = cleaned

    def get(self, g, beta) -> int:
        return self.entries.get((g, tuple(beta)), 0)

    def items(self):
        return sorted(self.entries.items())

    @property
    def max_genus(self) -> int:
        return max((g for g, _ in self.entries), default=0)

    def __eq__(self, other):
        if not isinstance(other, GVTable):
            return NotImplemented
        return self.entries == other.entries


@dataclass
class NTable:
    """(n, β) -> N_{n,β}; ``windows[β]`` is the largest n known for β."""

    entries: dict = field(default_factory=dict)
    windows: dict = field(default_factory=dict)

    def get(self, n, beta) -> Fraction:
        beta = tuple(beta)
        hi = self.windows.get(beta)
        if hi is None or n < 1 or n > hi:
            raise WindowUnderflow((n, n), (1, hi if hi is not None else 0), f"N at class {list(beta)}")
        return self.entries.get((n, beta), Fraction(0))

    def items(self):
        return sorted(self.entries.items())

    def first_order(self) -> dict:
        """β -> N_{1,β}."""
        return {beta: self.entries.get((1, beta), Fraction(0)) for beta in self.windows}


@dataclass
class LTable:
    """β -> L_β(q), plus the raw L_{n,β} read off exp(Σ L_β t^β)."""

    grid: ClassGrid
    layers: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def layer(self, beta) -> SymmetricLaurentPoly:
        return self.layers.get(tuple(beta), SymmetricLaurentPoly())

    def items(self):
        return [(beta, self.layers[beta]) for beta in self.grid.positive_classes if beta in self.layers]


# --- Degree-zero and conifold series -------------------------------------


def macmahon(order: int) -> WindowedLaurent:
    """∏_{k≥1} (1 - q^k)^{-k} on [0, order]."""
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order}")
    a = [1] + [0] * order
    for k in range(1, order + 1):
        for _ in range(k):
            for n in range(k, order + 1):
                a[n] += a[n - k]
    return WindowedLaurent(dict(enumerate(a)), 0, order)


def _signed(series: WindowedLaurent) -> WindowedLaurent:
    """q -> -q."""
    return WindowedLaurent(
        {n: -c if n % 2 else c for n, c in series.coeffs.items()},
        series.window_lo,
        series.window_hi,
        series.exact_below,
    )


def dt_zero(chi: int, order: int) -> WindowedLaurent:
    """M(-q)^χ on [0, order]."""
    return power_series(_signed(macmahon(order)), chi)


def reduce_dt(dt: GradedSeries) -> GradedSeries:
    """DT' = DT / DT_0."""
    grid = dt.grid
    zero = dt.layer(grid.zero)
    if zero is None:
        raise DomainError("DT series has no degree-zero layer to divide by")
    if zero.valuation() != 0:
        raise DomainError("degree-zero DT layer is not a unit power series")
    inverse = inverse_series(zero)
    out = {grid.zero: WindowedLaurent.unit(zero.window_hi)}
    for beta, layer in dt.positive_items():
        out[beta] = mul_windowed(layer.tightened(), inverse)
    return GradedSeries(grid, out)


def _require_rank_one(grid: ClassGrid, what: str):
    if grid.rank != 1:
        raise DomainError(f"{what} needs a rank-1 class grid, got rank {grid.rank}")


def conifold_dt(chi: int, grid: ClassGrid, window) -> GradedSeries:
    """M(-q)^χ ∏_{k≥1} (1 - (-q)^k t)^k."""
    _require_rank_one(grid, "conifold DT")
    lo, hi = window
    if hi < 0:
        raise DomainError(f"conifold q-window must reach q^0, got [{lo},{hi}]")
    pt = gv_expand(GVTable({(0, (1,)): 1}), grid, window)
    pt = GradedSeries(grid, {beta: layer.tightened() for beta, layer in pt.items()})
    degree_zero = GradedSeries(grid, {grid.zero: dt_zero(chi, hi)})
    return graded_mul(degree_zero, pt)


def pt_coefficient_conifold(n: int) -> int:
    return (-1) ** (n - 1) * n if n >= 1 else 0


# --- GV product expansion ------------------------------------------------


def _genus_zero_layer(n: int, k: int) -> RationalFunctionQ:
    """-(n/k)·x/(1 - x)^2 with x = (-q)^k."""
    sign = -1 if k % 2 else 1
    num = LaurentPoly({k: Fraction(-n * sign, k)})
    den = LaurentPoly({0: 1, k: -sign}) ** 2
    return RationalFunctionQ(num, den)


def gv_log_layers(table: GVTable, grid: ClassGrid) -> dict:
    """
    Exact layers of log ∏(GV factors): the j-product of a genus-0 entry
    sums to a rational function, a genus g >= 1 entry to (n/a)·f_g(-(-q)^a)
    on class a·β.
    """
    layers = {}
    for (g, beta), n in table.items():
        grid.check(beta)
        a = 1
        while grid.contains(scale_class(beta, a)):
            if g == 0:
                term = _genus_zero_layer(n, a)
            else:
                term = substitute_signed_power(f_g(g), a).scale(Fraction(n, a))
            target = scale_class(beta, a)
            layers[target] = term if target not in layers else layers[target] + term
            a += 1
    return layers


def gv_expand(table: GVTable, grid: ClassGrid, window) -> GradedSeries:
    return exponentiate(gv_log_layers(table, grid), grid, window)


def gv_rational_layers(table: GVTable, grid: ClassGrid) -> dict:
    """β -> PT_β as an exact rational function of q."""
    layers = {
        beta: RationalFunctionQ.coerce(value) for beta, value in gv_log_layers(table, grid).items()
    }
    return exp_layers(layers, grid)


# --- GV extraction -------------------------------------------------------


def _integral(value, g, beta) -> int:
    if Fraction(value).denominator != 1:
        raise IntegralityViolation(f"n_{g} at class {list(beta)} is {value}")
    return int(value)


def raw_l_coefficients(layers: dict, grid: ClassGrid) -> dict:
    """β -> Σ_n L_{n,β} q^n with 1 + Σ L_{n,β} q^n t^β = exp(Σ L_β t^β)."""
    polys = {beta: LaurentPoly(layer.coeffs) for beta, layer in layers.items() if not layer.is_zero()}
    raw = exp_layers(polys, grid)
    return {beta: raw.get(beta, LaurentPoly()) for beta in grid.positive_classes}


def gv_extract(pt: GradedSeries, g_max: int):
    """(GVTable, NTable, LTable) from a PT series with pt_0 = 1."""
    if g_max < 0:
        raise DomainError(f"g_max must be >= 0, got {g_max}")
    grid = pt.grid
    positive = {}
    for beta, layer in pt.positive_items():
        if not layer.exact_below:
            raise DomainError(f"PT layer at class {list(beta)} lacks its exact lower support")
        positive[beta] = layer.tightened()
    require_unit_layer(pt)
    logged = log_layers(positive, grid)

    n_entries, n_windows = {}, {}
    l_layers = {}
    for beta in grid.positive_classes:
        ell = logged.get(beta)
        if ell is None:
            continue
        negative = [e for e in ell.coeffs if e < 0]
        depth = -min(negative) if negative else 0
        need = max(depth, 1, g_max - 1)
        if ell.window_hi < need:
            raise WindowUnderflow((-depth, need), ell.window, f"log PT at class {list(beta)}")
        first, symmetric = split_symmetric(ell)
        logger.debug("class %s: log window %s, depth %s", list(beta), ell.window, depth)
        n_windows[beta] = ell.window_hi
        for n, c in first.coeffs.items():
            value = c / n if n % 2 else -c / n
            n_entries[(n, beta)] = value
        if not symmetric.is_zero():
            l_layers[beta] = symmetric

    gv = {}
    for beta in grid.positive_classes:
        if beta in n_windows:
            n0 = n_entries.get((1, beta), Fraction(0))
            gv[(0, beta)] = _integral(n0, 0, beta)
        rhs = LaurentPoly()
        for a in class_divisors(beta):
            lower = l_layers.get(divide_class(beta, a))
            if lower is not None:
                rhs = rhs + substitute_signed_power(lower, a).scale(Fraction(mobius(a), a))
        for g, value in fg_decompose(SymmetricLaurentPoly.from_poly(rhs)).items():
            n = _integral(value, g, beta)
            if n and g > g_max:
                raise DomainError(f"nonzero n_{g} at class {list(beta)} exceeds g_max={g_max}")
            gv[(g, beta)] = n

    ntable = NTable(n_entries, n_windows)
    ltable = LTable(grid, l_layers, raw_l_coefficients(l_layers, grid))
    return GVTable(gv), ntable, ltable


# --- Product formulas ----------------------------------------------------


def pt_from_tables(ntable: NTable, ltable: LTable) -> GradedSeries:
    """
    PT(X) = ∏_{n,β} exp((-1)^{n-1}·n·N_{n,β}·q^n t^β) · (1 + Σ L_{n,β} q^n t^β).

    Each class is known as far as its N window reaches; classes outside the
    N table carry neither N nor L and contribute exactly zero.
    """
    grid = ltable.grid
    phases = {}
    for beta, hi in ntable.windows.items():
        coeffs = {}
        for n in range(1, hi + 1):
            value = ntable.entries.get((n, beta))
            if value:
                coeffs[n] = value * n if n % 2 else -value * n
        phases[grid.check(beta)] = WindowedLaurent(coeffs, 1, max(hi, 1))
    exponential = graded_exp(GradedSeries(grid, phases))
    top = max((layer.window_hi for _, layer in exponential.items()), default=0)
    correction = {grid.zero: WindowedLaurent.unit(top)}
    for beta in grid.positive_classes:
        poly = ltable.raw.get(beta)
        if poly is not None and not poly.is_zero():
            correction[beta] = WindowedLaurent.from_poly(poly, top)
    logger.debug("product formula: %s N classes, top %s", len(phases), top)
    return graded_mul(exponential, GradedSeries(grid, correction))


def dt_from_tables(chi: int, ntable: NTable, ltable: LTable) -> GradedSeries:
    """DT(X) = M(-q)^χ · PT(X), with PT rebuilt from its N and L tables."""
    pt = pt_from_tables(ntable, ltable)
    span = max((layer.window_hi - min(layer.window_lo, 0) for _, layer in pt.items()), default=0)
    degree_zero = GradedSeries(pt.grid, {pt.grid.zero: dt_zero(chi, max(span, 0))})
    return graded_mul(degree_zero, pt)


def _compositions(raw: dict, grid: ClassGrid):
    """(γ, l) -> Σ over ordered compositions γ = γ1 + ... + γl of ∏ raw[γi]."""

    @lru_cache(maxsize=None)
    def total(gamma, parts):
        if parts == 1:
            return raw[gamma]
        acc = LaurentPoly()
        for first in grid.subclasses(gamma):
            rest = tuple(b - a for a, b in zip(first, gamma))
            if any(first) and any(rest):
                acc = acc + raw[first] * total(rest, parts - 1)
        return acc

    return total


def n_g_closed_form(ltable: LTable, g: int, beta) -> Fraction:
    """n_g^β straight from raw L_{n,β} values, without the basis decomposition."""
    if g < 1:
        raise DomainError(f"closed form covers g >= 1, got {g}")
    grid = ltable.grid
    beta = grid.check(beta)
    for gamma in grid.subclasses(beta):
        if any(gamma) and gamma not in ltable.raw:
            raise DomainError(f"L table is missing class {list(gamma)}")
    total = _compositions(ltable.raw, grid)
    result = Fraction(0)
    for a in class_divisors(beta):
        mu = mobius(a)
        if not mu:
            continue
        gamma = divide_class(beta, a)
        reexpanded = LaurentPoly()
        for parts in range(1, grid.degree(gamma) + 1):
            weight = Fraction(1 if parts % 2 else -1, parts)
            reexpanded = reexpanded + total(gamma, parts).scale(weight)
        for n, value in reexpanded.coeffs.items():
            if n < 0:
                continue
            big = n * a
            sign = -1 if (big + n) % 2 else 1
            result += Fraction(mu, a) * sign * value * c_coefficient(g, big)
    return result


def multicover_N(n1: dict, n: int, beta) -> Fraction:
    """Σ_{k | (n, β)} N_{1, β/k} / k^2."""
    beta = tuple(beta)
    if not any(beta):
        raise DomainError("multi-cover sum needs a positive class")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    total = Fraction(0)
    for k in class_divisors(beta):
        if n % k == 0:
            total += Fraction(n1.get(divide_class(beta, k), 0)) / (k * k)
    return total


def n_degree_zero(chi: int, n: int) -> Fraction:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return -chi * sum((Fraction(1, k * k) for k in divisors(n)), Fraction(0))


def check_dt0_identity(chi: int, order: int) -> bool:
    """∏_{n>0} exp((-1)^{n-1} n N_{n,0} q^n) against M(-q)^χ through q^order."""
    exponent = {}
    for n in range(1, order + 1):
        sign = 1 if n % 2 else -1
        exponent[n] = sign * n * n_degree_zero(chi, n)
    lhs = exp_series(WindowedLaurent(exponent, 0, order))
    rhs = dt_zero(chi, order)
    return all(lhs.coefficient(n) == rhs.coefficient(n) for n in range(order + 1))


# --- Gromov–Witten side --------------------------------------------------


def _sine_ratio(k: int, order: int) -> WindowedLaurent:
    """2 sin(kλ/2) / (kλ) through λ^order."""
    coeffs = {}
    for i in range(order // 2 + 1):
        value = Fraction(k ** (2 * i), 4 ** i * factorial(2 * i + 1))
        coeffs[2 * i] = -value if i % 2 else value
    return WindowedLaurent(coeffs, 0, order)


def gv_to_gw(table: GVTable, lambda_order: int, grid: ClassGrid) -> dict:
    """β -> Σ_g N^GW_{g,β} λ^{2g-2} on [-2, lambda_order]."""
    if lambda_order < -2:
        raise DomainError(f"λ-order {lambda_order} cannot hold the genus-0 λ^-2 pole")
    out = {beta: WindowedLaurent({}, -2, lambda_order) for beta in grid.positive_classes}
    for (g, beta), n in table.items():
        grid.check(beta)
        shift = 2 * g - 2
        room = lambda_order - shift
        if room < 0:
            continue
        k = 1
        while grid.contains(scale_class(beta, k)):
            series = power_series(_sine_ratio(k, room), shift)
            factor = Fraction(n, k) * Fraction(k) ** shift
            target = scale_class(beta, k)
            out[target] = out[target] + series.shift(shift).scale(factor)
            k += 1
    return out


def gw_local_curve(g: int, d: int) -> Fraction:
    if d < 1:
        raise DomainError(f"degree must be >= 1, got {d}")
    if g < 0:
        raise DomainError(f"genus must be >= 0, got {g}")
    if g == 0:
        return Fraction(1, d ** 3)
    if g == 1:
        return Fraction(1, 12 * d)
    return abs(bernoulli(2 * g)) * Fraction(d) ** (2 * g - 3) / (2 * g * factorial(2 * g - 2))


def _exp_i_lambda(poly: LaurentPoly, order: int) -> WindowedLaurent:
    """poly(q) at q = -e^{iλ} through λ^order, Gaussian coefficients."""
    coeffs = {}
    for j in range(order + 1):
        acc = GaussianRational()
        for m, c in poly.coeffs.items():
            sign = -1 if m % 2 else 1
            acc = acc + I_POWERS[j % 4] * (sign * c * Fraction(m ** j, factorial(j)))
        if acc:
            coeffs[j] = acc
    return WindowedLaurent(coeffs, 0, order)


def lambda_expansion(f: RationalFunctionQ, order: int) -> WindowedLaurent:
    span = f.den.degree() - f.den.valuation()
    depth = order + 2 * span + 2
    num = _exp_i_lambda(f.num, depth)
    den = _exp_i_lambda(f.den, depth)
    return mul_windowed(num.tightened(), inverse_series(den)).truncate(order)


def check_gw_dt(dt_prime_ratfuns: dict, gw: dict, lambda_order: int, grid: ClassGrid) -> bool:
    """exp GW = DT' after q = -e^{iλ}, compared coefficientwise in λ."""
    for beta, f in dt_prime_ratfuns.items():
        if not check_q_symmetry(f):
            logger.warning(
                "GW/DT check failed (symmetry): DT' at class %s is not invariant under q <-> 1/q", list(beta)
            )
            return False
    layers = {beta: layer.tightened() for beta, layer in gw.items() if layer.coeffs}
    exp_gw = exp_layers(layers, grid)
    for beta in grid.positive_classes:
        f = dt_prime_ratfuns.get(beta)
        expected = exp_gw.get(beta)
        hi = lambda_order if expected is None else min(lambda_order, expected.window_hi)
        if f is None or f.is_zero():
            if expected is not None and any(e <= hi for e in expected.coeffs):
                logger.warning(
                    "GW/DT check failed (mismatch): class %s has GW terms but no DT' layer", list(beta)
                )
                return False
            continue
        actual = lambda_expansion(f, hi)
        lo = min(actual.window_lo, expected.window_lo) if expected is not None else actual.window_lo
        for n in range(lo, hi + 1):
            value = GaussianRational(0) + actual.coefficient(n)
            if value.im:
                raise SymmetryViolation(f"imaginary λ^{n} coefficient at class {list(beta)}")
            real = value.re
            theirs = expected.coefficient(n) if expected is not None else 0
            if real != theirs:
                logger.warning(
                    "GW/DT check failed (mismatch): class %s differs at λ^%s: %s vs %s",
                    list(beta),
                    n,
                    real,
                    theirs,
                )
                return False
    return True


# --- Weierstrass model ---------------------------------------------------


def weierstrass_table(chi_x: int, chi_s: int, grid: ClassGrid) -> GVTable:
    _require_rank_one(grid, "the Weierstrass model")
    entries = {}
    for m in range(1, grid.cutoff + 1):
        entries[(0, (m,))] = -chi_x
        entries[(1, (m,))] = chi_s
    return GVTable(entries)


def weierstrass_pt(chi_x: int, chi_s: int, grid: ClassGrid, window) -> GradedSeries:
    """∏_{m,j} (1 - (-q)^j t^m)^{-jχ(X)} ∏_m (1 - t^m)^{-χ(S)}."""
    return gv_expand(weierstrass_table(chi_x, chi_s, grid), grid, window)


def goettsche(chi_s: int, cutoff: int) -> GradedSeries:
    """Σ χ(Hilb_m S) t^m = ∏ (1 - t^m)^{-χ(S)}."""
    grid = ClassGrid(1, (1,), cutoff)
    factors = [ProductFactor((m,), 0, -chi_s, SignMode.PLAIN) for m in range(1, cutoff + 1)]
    return product_family(factors, grid, (0, 0))


def check_dtpt(dt: GradedSeries, pt: GradedSeries) -> bool:
    if dt.grid != pt.grid:
        raise DomainError("DT and PT series live on different grids")
    reduced = reduce_dt(dt)
    return reduced.agrees_with(pt, classes=dt.grid.positive_classes)
