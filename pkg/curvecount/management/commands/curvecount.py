import argparse
import logging
from fractions import Fraction

from django.core.management.base import BaseCommand, CommandError
from django.template.loader import render_to_string

from curvecount import codec
from curvecount.errors import CurveCountError, DomainError
from curvecount.exactnum import format_rational, parse_rational
from curvecount.forms import RunConfigForm
from curvecount.gseries import ClassGrid
from curvecount.hallmotive import a2_counting, n_superrigid, superrigid_t_function
from curvecount.invariants import (
    GVTable,
    check_dt0_identity,
    check_dtpt,
    check_gw_dt,
    conifold_dt,
    dt_zero,
    goettsche,
    gv_expand,
    gv_extract,
    gv_rational_layers,
    gv_to_gw,
    gw_local_curve,
    macmahon,
    n_g_closed_form,
    reduce_dt,
    weierstrass_pt,
    weierstrass_table,
)
from curvecount.ratrec import check_q_symmetry, pade

logger = logging.getLogger("curvecount")

CHECK_CASES = (
    "dt0-identity",
    "dtpt-conifold",
    "gw-dt-conifold",
    "gw-local-curve",
    "weierstrass",
    "superrigid",
)
# Subcommands whose natural output is a short line rather than a document.
TEXT_DEFAULT = {"macmahon", "dt0", "check"}


def _class(text: str) -> tuple:
    try:
        beta = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid class {text!r}: expected comma-separated integers")
    if any(d < 0 for d in beta):
        raise argparse.ArgumentTypeError(f"invalid class {text!r}: components must be >= 0")
    return beta


def _add_common(parser):
    parser.add_argument("--format", choices=codec.FORMATS, default=None)
    parser.add_argument("--output", default="")


class Command(BaseCommand):
    help = "Compute and cross-check DT, PT, GW and Gopakumar–Vafa series exactly."
    requires_system_checks = []

    def add_arguments(self, parser):
        sub = parser.add_subparsers(dest="subcommand", required=True, metavar="subcommand")

        p = sub.add_parser("macmahon", help="MacMahon function coefficients")
        p.add_argument("--order", type=int, required=True)
        _add_common(p)

        p = sub.add_parser("dt0", help="degree-zero DT series M(-q)^chi")
        p.add_argument("--chi", type=int, required=True)
        p.add_argument("--order", type=int, required=True)
        _add_common(p)

        p = sub.add_parser("conifold", help="conifold DT series")
        p.add_argument("--chi", type=int, required=True)
        p.add_argument("--cutoff", type=int, required=True)
        p.add_argument("--q-window", type=int, nargs=2, required=True, metavar=("LO", "HI"))
        p.add_argument("--reduced", action="store_true")
        _add_common(p)

        p = sub.add_parser("gv-expand", help="PT series from a GV table")
        p.add_argument("--input", required=True)
        p.add_argument("--cutoff", type=int, required=True)
        p.add_argument("--q-window", type=int, nargs=2, required=True, metavar=("LO", "HI"))
        p.add_argument("--weights", type=int, nargs="+", default=None)
        _add_common(p)

        p = sub.add_parser("gv-extract", help="GV, N and L tables from a PT series")
        p.add_argument("--input", required=True)
        p.add_argument("--g-max", type=int, required=True)
        p.add_argument("--table", choices=("gv", "N", "L"), default="gv")
        _add_common(p)

        p = sub.add_parser("gw", help="GW series from a GV table")
        p.add_argument("--input", required=True)
        p.add_argument("--cutoff", type=int, required=True)
        p.add_argument("--lambda-order", type=int, required=True)
        p.add_argument("--weights", type=int, nargs="+", default=None)
        _add_common(p)

        p = sub.add_parser("check", help="run a built-in consistency check")
        p.add_argument("--case", choices=CHECK_CASES, required=True)
        p.add_argument("--chi", type=int, default=None)
        p.add_argument("--chi-s", type=int, default=None)
        p.add_argument("--order", type=int, default=None)
        p.add_argument("--cutoff", type=int, default=None)
        p.add_argument("--lambda-order", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        _add_common(p)

        p = sub.add_parser("pade", help="recognize a q-series as a rational function")
        p.add_argument("--input", required=True)
        p.add_argument("--beta", type=_class, default=None)
        p.add_argument("--num-deg", type=int, required=True)
        p.add_argument("--den-deg", type=int, required=True)
        _add_common(p)

        hall = sub.add_parser("hall", help="Hall-algebra computations")
        hall_sub = hall.add_subparsers(dest="hall_command", required=True, metavar="hall_command")
        p = hall_sub.add_parser("superrigid", help="N_{0,k[C]} from the epsilon-logarithm")
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--show-t-function", action="store_true")
        _add_common(p)
        p = hall_sub.add_parser("a2", help="A2-quiver count at two phases")
        p.add_argument("--phi1", required=True)
        p.add_argument("--phi2", required=True)
        _add_common(p)

        p = sub.add_parser("a2", help="A2-quiver count at two phases")
        p.add_argument("--phi1", required=True)
        p.add_argument("--phi2", required=True)
        _add_common(p)

    def handle(self, *args, **options):
        if options.get("verbosity", 1) >= 2:
            logger.setLevel(logging.DEBUG)
        command = options["subcommand"]
        fmt = options.get("format") or ("text" if command in TEXT_DEFAULT else "json")
        window = options.get("q_window")
        form = RunConfigForm(
            data={
                "command": command,
                "format": fmt,
                "cutoff": options.get("cutoff"),
                "q_lo": window[0] if window else None,
                "q_hi": window[1] if window else None,
                "lambda_order": options.get("lambda_order"),
                "g_max": options.get("g_max"),
                "order": options.get("order"),
                "k": options.get("k"),
                "input": options.get("input") or "",
                "output": options.get("output") or "",
            }
        )
        if not form.is_valid():
            raise CommandError(form.error_line(), returncode=1)
        config = form.to_config()
        handler = getattr(self, "handle_" + command.replace("-", "_"))
        try:
            text = handler(config, options)
        except CurveCountError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code)
        if config.output:
            codec.write_output(text, config.output)
        else:
            self.stdout.write(text, ending="" if text.endswith("\n") else "\n")

    # --- subcommands ----------------------------------------------------------

    def _coefficients(self, series, config, label):
        values = [series.coefficient(n) for n in range(series.window_lo, series.window_hi + 1)]
        if config.format == "json":
            return codec.dumps({label: codec.encode_laurent(series)})
        if config.format == "csv":
            rows = [[n, format_rational(c)] for n, c in zip(range(series.window_lo, series.window_hi + 1), values)]
            return codec.render_csv(["n", "coefficient"], rows)
        return render_to_string(
            "curvecount/coefficients.txt", {"coefficients": [format_rational(c) for c in values]}
        )

    def handle_macmahon(self, config, options):
        return self._coefficients(macmahon(config.order), config, "macmahon")

    def handle_dt0(self, config, options):
        return self._coefficients(dt_zero(options["chi"], config.order), config, "dt0")

    def handle_conifold(self, config, options):
        grid = ClassGrid(1, (1,), config.t_cutoff)
        series = conifold_dt(options["chi"], grid, config.q_window)
        if options.get("reduced"):
            series = reduce_dt(series)
        return codec.emit_series(series, config.format)

    def _grid_for(self, table: GVTable, cutoff, weights):
        if weights:
            rank = len(weights)
        else:
            ranks = {len(beta) for _, beta in table.entries}
            if len(ranks) > 1:
                raise CommandError("GV table mixes classes of different ranks", returncode=2)
            rank = ranks.pop() if ranks else 1
        return ClassGrid(rank, tuple(weights) if weights else None, cutoff)

    def handle_gv_expand(self, config, options):
        table = codec.parse_gv_table(config.input)
        grid = self._grid_for(table, config.t_cutoff, options.get("weights"))
        return codec.emit_series(gv_expand(table, grid, config.q_window), config.format)

    def handle_gv_extract(self, config, options):
        pt = codec.parse_series(config.input)
        gv, ntable, ltable = gv_extract(pt, config.g_max)
        for (g, beta), n in gv.items():
            if g >= 1:
                closed = n_g_closed_form(ltable, g, beta)
                if closed != n:
                    raise DomainError(
                        f"closed form gives n_{g} = {closed} at class {list(beta)}, decomposition gives {n}"
                    )
        kind = options.get("table") or "gv"
        table = {"gv": gv, "N": ntable, "L": ltable}[kind]
        return codec.render_table(table, config.format, kind)

    def handle_gw(self, config, options):
        table = codec.parse_gv_table(config.input)
        grid = self._grid_for(table, config.t_cutoff, options.get("weights"))
        gw = gv_to_gw(table, config.lambda_order, grid)
        return codec.render_table(gw, config.format, "gw", lambda_order=config.lambda_order)

    def handle_pade(self, config, options):
        series = codec.parse_laurent(config.input, options.get("beta"))
        f = pade(series, options["num_deg"], options["den_deg"])
        symmetric = check_q_symmetry(f)
        if config.format == "text":
            return render_to_string(
                "curvecount/ratfun.txt", {"num": f.num, "den": f.den, "symmetric": symmetric}
            )
        if config.format == "csv":
            rows = [["num", e, format_rational(c)] for e, c in f.num.items()]
            rows += [["den", e, format_rational(c)] for e, c in f.den.items()]
            return codec.render_csv(["part", "q", "coefficient"], rows)
        document = codec.encode_ratfun(f)
        document["symmetric"] = symmetric
        return codec.dumps(document)

    def handle_hall(self, config, options):
        if options["hall_command"] == "a2":
            return self.handle_a2(config, options)
        k = config.k
        n = n_superrigid(k)
        t_function = superrigid_t_function(k) if options.get("show_t_function") else None
        if config.format == "text":
            return render_to_string(
                "curvecount/superrigid.txt", {"k": k, "n": n, "t_function": t_function}
            )
        if config.format == "csv":
            return codec.render_csv(["k", "N"], [[k, format_rational(n)]])
        document = {"k": k, "N": format_rational(n)}
        if t_function is not None:
            document["t_function"] = str(t_function)
        return codec.dumps(document)

    def handle_a2(self, config, options):
        try:
            phi1, phi2 = parse_rational(options["phi1"]), parse_rational(options["phi2"])
        except CurveCountError as exc:
            raise CommandError(str(exc), returncode=2)
        count = a2_counting(phi1, phi2)
        if config.format == "text":
            return render_to_string("curvecount/a2.txt", {"phi1": phi1, "phi2": phi2, "count": count})
        if config.format == "csv":
            return codec.render_csv(
                ["phi1", "phi2", "count"], [[format_rational(phi1), format_rational(phi2), count]]
            )
        return codec.dumps({"phi1": format_rational(phi1), "phi2": format_rational(phi2), "count": count})

    def handle_check(self, config, options):
        case = options["case"]
        passed = getattr(self, "check_" + case.replace("-", "_"))(config, options)
        if not passed:
            raise CommandError(f"check failed: {case}", returncode=1)
        if config.format == "json":
            return codec.dumps({"case": case, "result": "OK"})
        return "OK\n"

    # --- checks ---------------------------------------------------------------

    def check_dt0_identity(self, config, options):
        chi = options["chi"] if options.get("chi") is not None else 1
        order = config.order if config.order is not None else 6
        return check_dt0_identity(chi, order)

    def check_dtpt_conifold(self, config, options):
        chi = options["chi"] if options.get("chi") is not None else 1
        order = config.order if config.order is not None else 6
        grid = ClassGrid(1, (1,), config.t_cutoff or 1)
        dt = conifold_dt(chi, grid, (1, order))
        pt = gv_expand(GVTable({(0, (1,)): 1}), grid, (1, order))
        return check_dtpt(dt, pt)

    def check_gw_dt_conifold(self, config, options):
        grid = ClassGrid(1, (1,), config.t_cutoff or 3)
        lambda_order = config.lambda_order if config.lambda_order is not None else 10
        table = GVTable({(0, (1,)): 1})
        return check_gw_dt(
            gv_rational_layers(table, grid), gv_to_gw(table, lambda_order, grid), lambda_order, grid
        )

    def check_gw_local_curve(self, config, options):
        grid = ClassGrid(1, (1,), config.t_cutoff or 4)
        lambda_order = config.lambda_order if config.lambda_order is not None else 6
        gw = gv_to_gw(GVTable({(0, (1,)): 1}), lambda_order, grid)
        for (d,) in grid.positive_classes:
            for g in range(0, (lambda_order + 2) // 2 + 1):
                if gw[(d,)].coefficient(2 * g - 2) != gw_local_curve(g, d):
                    logger.debug("GW mismatch at g=%s d=%s", g, d)
                    return False
        return True

    def check_weierstrass(self, config, options):
        chi_x = options["chi"] if options.get("chi") is not None else -540
        chi_s = options["chi_s"] if options.get("chi_s") is not None else 3
        grid = ClassGrid(1, (1,), config.t_cutoff or 3)
        pt = weierstrass_pt(chi_x, chi_s, grid, (-1, config.order if config.order is not None else 6))
        hilbert = goettsche(chi_s, grid.cutoff)
        for beta in grid.positive_classes:
            if pt.coefficient(beta, 0) != hilbert.coefficient(beta, 0):
                return False
        gv, ntable, _ = gv_extract(pt, 1)
        if gv != weierstrass_table(chi_x, chi_s, grid):
            return False
        return all(ntable.get(1, beta) == -chi_x for beta in grid.positive_classes)

    def check_superrigid(self, config, options):
        top = config.k or 6
        return all(n_superrigid(k) == Fraction(1, k * k) for k in range(1, top + 1))
