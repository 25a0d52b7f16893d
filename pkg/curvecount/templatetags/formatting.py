from fractions import Fraction

from django import template

from curvecount.exactnum import format_rational
from curvecount.qseries import format_terms

register = template.Library()


@register.filter
def exact(value):
    """Render an exact rational as "p/q"; anything else passes through."""
    if value in (None, ""):
        return ""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return format_rational(value)
    return value


@register.filter
def laurent(series, var="q"):
    """Render a Laurent polynomial or windowed series, lowest exponent first."""
    if series is None:
        return "0"
    return format_terms(sorted(series.coeffs.items()), var)


@register.filter
def beta(value):
    value = tuple(value)
    if len(value) == 1:
        return str(value[0])
    return "(" + ",".join(str(d) for d in value) + ")"


@register.filter
def window(series):
    return f"[{series.window_lo},{series.window_hi}]"
