"""
JSON and CSV encodings of series and tables. Rationals always travel as
strings ("p/q" or "n"), never as floats.
"""
import csv
import io
import json
import logging
from pathlib import Path

from django.conf import settings
from django.template.loader import render_to_string

from .errors import CurveCountError, DomainError, SchemaError
from .exactnum import format_rational, parse_rational
from .gseries import ClassGrid, GradedSeries
from .invariants import GVTable, LTable, NTable
from .qseries import LaurentPoly, RationalFunctionQ, WindowedLaurent

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "text")


def _beta_text(beta) -> str:
    return ",".join(str(d) for d in beta)


def encode_coeffs(coeffs) -> dict:
    return {str(e): format_rational(c) for e, c in sorted(coeffs.items())}


def encode_laurent(series: WindowedLaurent) -> dict:
    return {
        "q": encode_coeffs(series.coeffs),
        "window": [series.window_lo, series.window_hi],
        "exact_below": series.exact_below,
    }


def encode_series(series: GradedSeries) -> dict:
    grid = series.grid
    terms = []
    for beta, layer in series.items():
        term = {"beta": list(beta)}
        term.update(encode_laurent(layer))
        terms.append(term)
    return {"rank": grid.rank, "weights": list(grid.weights), "cutoff": grid.cutoff, "terms": terms}


def encode_ratfun(f: RationalFunctionQ) -> dict:
    return {"num": encode_coeffs(f.num.coeffs), "den": encode_coeffs(f.den.coeffs)}


def encode_gv(table: GVTable) -> dict:
    return {
        "entries": [{"g": g, "beta": list(beta), "n": str(n)} for (g, beta), n in table.items()]
    }


def encode_ntable(table: NTable) -> dict:
    return {
        "entries": [
            {"n": n, "beta": list(beta), "N": format_rational(value)} for (n, beta), value in table.items()
        ],
        "windows": [{"beta": list(beta), "hi": hi} for beta, hi in sorted(table.windows.items())],
    }


def encode_ltable(table: LTable) -> dict:
    entries, raw = [], []
    for beta, layer in table.items():
        for n, c in layer.items():
            entries.append({"n": n, "beta": list(beta), "L": format_rational(c)})
    for beta in table.grid.positive_classes:
        poly = table.raw.get(beta)
        if poly is None:
            continue
        for n, c in poly.items():
            raw.append({"n": n, "beta": list(beta), "L": format_rational(c)})
    return {"entries": entries, "raw": raw}


def encode_gw(gw: dict, lambda_order: int) -> dict:
    terms = []
    for beta in sorted(gw):
        layer = gw[beta]
        terms.append(
            {
                "beta": list(beta),
                "lambda": encode_coeffs(layer.coeffs),
                "window": [layer.window_lo, layer.window_hi],
            }
        )
    return {"lambda_order": lambda_order, "terms": terms}


def dumps(document: dict) -> str:
    payload = dict(document)
    payload["schema"] = settings.CURVECOUNT_SCHEMA_VERSION
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# --- Decoding --------------------------------------------------------------


class _Reader:
    """Walks a decoded JSON document and reports failures as SchemaError(path, key, reason)."""

    def __init__(self, path):
        self.path = path

    def fail(self, key, reason):
        raise SchemaError(self.path, key, reason)

    def field(self, obj, name, where, kind, default=None, required=True):
        key = f"{where}.{name}" if where else name
        if not isinstance(obj, dict):
            self.fail(where or "$", "expected an object")
        if name not in obj:
            if required:
                self.fail(key, "missing")
            return default
        value = obj[name]
        if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
            self.fail(key, "expected an integer")
        if kind is not int and not isinstance(value, kind):
            self.fail(key, f"expected {getattr(kind, '__name__', 'a scalar')}")
        return value

    def rational(self, raw, key):
        if isinstance(raw, bool) or not isinstance(raw, (str, int)):
            self.fail(key, "expected a rational string")
        try:
            return parse_rational(raw)
        except DomainError as exc:
            self.fail(key, str(exc))

    def coeffs(self, obj, key, window=None):
        if not isinstance(obj, dict):
            self.fail(key, "expected an object")
        out = {}
        for exponent, raw in obj.items():
            try:
                e = int(exponent)
            except ValueError:
                self.fail(f"{key}.{exponent}", "exponent is not an integer")
            if window is not None and not window[0] <= e <= window[1]:
                self.fail(f"{key}.{exponent}", f"exponent outside window [{window[0]},{window[1]}]")
            out[e] = self.rational(raw, f"{key}.{exponent}")
        return out

    def beta(self, obj, where):
        beta = self.field(obj, "beta", where, list)
        if not beta or any(isinstance(d, bool) or not isinstance(d, int) or d < 0 for d in beta):
            self.fail(f"{where}.beta", "expected non-negative integers")
        return tuple(beta)

    def laurent(self, obj, where):
        window = self.field(obj, "window", where, list)
        if len(window) != 2 or any(isinstance(x, bool) or not isinstance(x, int) for x in window):
            self.fail(f"{where}.window" if where else "window", "expected [lo, hi]")
        if window[0] > window[1]:
            self.fail(f"{where}.window" if where else "window", f"empty window [{window[0]},{window[1]}]")
        # Every listed coefficient must be covered by the window; nothing is dropped.
        coeffs = self.coeffs(self.field(obj, "q", where, dict), f"{where}.q" if where else "q", window)
        exact = self.field(obj, "exact_below", where, bool, default=True, required=False)
        try:
            return WindowedLaurent(coeffs, window[0], window[1], exact)
        except CurveCountError as exc:
            self.fail(f"{where}.window" if where else "window", str(exc))


def load_document(path) -> dict:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(path, "$", f"cannot read: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise SchemaError(path, "$", f"invalid JSON at line {exc.lineno}")
    if not isinstance(document, dict):
        raise SchemaError(path, "$", "expected an object")
    schema = document.get("schema", settings.CURVECOUNT_SCHEMA_VERSION)
    if schema != settings.CURVECOUNT_SCHEMA_VERSION:
        raise SchemaError(path, "schema", f"unsupported schema {schema!r}")
    return document


def decode_series(document: dict, path="<memory>") -> GradedSeries:
    reader = _Reader(path)
    rank = reader.field(document, "rank", "", int)
    cutoff = reader.field(document, "cutoff", "", int)
    weights = reader.field(document, "weights", "", list, default=None, required=False)
    try:
        grid = ClassGrid(rank, tuple(weights) if weights is not None else None, cutoff)
    except (DomainError, TypeError, ValueError) as exc:
        reader.fail("weights" if weights is not None else "rank", str(exc))
    terms = {}
    for i, term in enumerate(reader.field(document, "terms", "", list)):
        where = f"terms[{i}]"
        beta = reader.beta(term, where)
        if not grid.contains(beta):
            reader.fail(f"{where}.beta", "class outside the grid")
        if beta in terms:
            reader.fail(f"{where}.beta", "duplicate class")
        terms[beta] = reader.laurent(term, where)
    return GradedSeries(grid, terms)


def parse_series(path) -> GradedSeries:
    return decode_series(load_document(path), path)


def parse_laurent(path, beta=None) -> WindowedLaurent:
    """A single q-series: a bare WindowedLaurent document or one layer of a graded one."""
    document = load_document(path)
    if "terms" not in document:
        return _Reader(path).laurent(document, "")
    series = decode_series(document, path)
    if beta is None:
        beta = (1,) + (0,) * (series.grid.rank - 1)
    layer = series.layer(beta)
    if layer is None:
        raise SchemaError(path, "terms", f"no layer for class {list(beta)}")
    return layer


def decode_gv(document: dict, path="<memory>") -> GVTable:
    reader = _Reader(path)
    entries = {}
    for i, entry in enumerate(reader.field(document, "entries", "", list)):
        where = f"entries[{i}]"
        g = reader.field(entry, "g", where, int)
        beta = reader.beta(entry, where)
        n = reader.rational(reader.field(entry, "n", where, (str, int)), f"{where}.n")
        if n.denominator != 1:
            reader.fail(f"{where}.n", "GV invariants are integers")
        if g < 0 or not any(beta):
            reader.fail(where, "needs g >= 0 and a positive class")
        entries[(g, beta)] = entries.get((g, beta), 0) + int(n)
    return GVTable(entries)


def parse_gv_table(path) -> GVTable:
    return decode_gv(load_document(path), path)


def decode_ratfun(document: dict, path="<memory>") -> RationalFunctionQ:
    reader = _Reader(path)
    num = reader.coeffs(reader.field(document, "num", "", dict), "num")
    den = reader.coeffs(reader.field(document, "den", "", dict), "den")
    try:
        return RationalFunctionQ(LaurentPoly(num), LaurentPoly(den))
    except DomainError as exc:
        reader.fail("den", str(exc))


# --- Emission --------------------------------------------------------------


def table_rows(kind: str, table):
    """(header, rows) for the CSV and text renderings."""
    if kind == "gv":
        return ["g", "beta", "n"], [[g, _beta_text(beta), n] for (g, beta), n in table.items()]
    if kind == "N":
        return ["n", "beta", "N"], [
            [n, _beta_text(beta), format_rational(v)] for (n, beta), v in table.items()
        ]
    if kind == "L":
        rows = []
        for beta, layer in table.items():
            rows.extend([n, _beta_text(beta), format_rational(c)] for n, c in layer.items())
        return ["n", "beta", "L"], rows
    if kind == "gw":
        rows = []
        for beta in sorted(table):
            for e, c in table[beta].items():
                if e % 2 == 0:
                    rows.append([(e + 2) // 2, _beta_text(beta), format_rational(c)])
        return ["g", "beta", "n"], rows
    raise DomainError(f"unknown table kind {kind!r}")


def _encode(kind: str, table, **extra) -> dict:
    if kind == "gv":
        return encode_gv(table)
    if kind == "N":
        return encode_ntable(table)
    if kind == "L":
        return encode_ltable(table)
    if kind == "gw":
        return encode_gw(table, extra.get("lambda_order", 0))
    raise DomainError(f"unknown table kind {kind!r}")


def render_csv(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def render_table(table, fmt: str, kind: str = "gv", **extra) -> str:
    if fmt == "json":
        return dumps(_encode(kind, table, **extra))
    header, rows = table_rows(kind, table)
    if fmt == "csv":
        return render_csv(header, rows)
    if fmt == "text":
        # join needs strings once autoescaping is off.
        rows = [[str(cell) for cell in row] for row in rows]
        return render_to_string("curvecount/table.txt", {"header": header, "rows": rows})
    raise DomainError(f"unknown format {fmt!r}")


def write_output(text: str, path=None) -> str:
    if path:
        Path(path).write_text(text, encoding="utf-8")
        logger.debug("wrote %s bytes to %s", len(text), path)
    return text


def emit_table(table, fmt: str, path=None, kind: str = "gv", **extra) -> str:
    return write_output(render_table(table, fmt, kind, **extra), path)


def emit_series(series: GradedSeries, fmt: str, path=None) -> str:
    if fmt == "json":
        text = dumps(encode_series(series))
    elif fmt == "csv":
        rows = []
        for beta, layer in series.items():
            rows.extend([_beta_text(beta), n, format_rational(c)] for n, c in layer.items())
        text = render_csv(["beta", "q", "coefficient"], rows)
    else:
        text = render_to_string("curvecount/series.txt", {"layers": series.items()})
    return write_output(text, path)
