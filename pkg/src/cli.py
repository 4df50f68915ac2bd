"""
Command-line surface. One subcommand per invocation, one JSON document
(or CSV for spectra) on stdout, diagnostics on stderr.
"""

import argparse
import csv
import json
import logging
import sys

from src.config import Config
from src.cross_check import cross_check_graph, cross_check_voltage
from src.errors import DomainError, GraphError, QWZetaError, ValidationError
from src.generators import GRAPH_GENERATORS, VOLTAGE_GENERATORS
from src.graph import Graph, reduced_cycle_counts
from src.numerics import complex_pair, parse_complex
from src.operators import CoinParams
from src.voltage import VoltageGraph, finite_quotient, l2_euler_characteristic
from src.zeta_finite import (METHODS, SPECTRUM_METHODS, ihara_log_series, ihara_zeta_bass,
                             konno_sato_charpoly, qw_charpoly, qw_log_series, qw_spectrum,
                             qw_zeta)
from src.zeta_periodic import det_gamma, periodic_ihara_zeta, periodic_qw_zeta

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_DOMAIN = 2
EXIT_CHECK_FAILED = 3

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

# commands whose result is a flat list of [re, im] rows
CSV_COMMANDS = ("spectrum",)


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; report them as validation errors instead"""

    def error(self, message):
        raise ValidationError(message, reason="usage")


_handler = None


def configure_logging(level):
    """Route all package logging to stderr through one handler"""
    global _handler
    root = logging.getLogger()
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(_handler)
    root.setLevel(level)


def parse_cover_sizes(text):
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"--L expects comma-separated integers, got {text!r}",
                              reason="cover-size")
    if not sizes or any(L < 1 for L in sizes):
        raise ValidationError(f"--L values must be positive, got {text!r}", reason="cover-size")
    return sizes


def _read_input(path):
    if path:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return f.read()
        except OSError as e:
            raise ValidationError(f"Cannot read {path}: {e}", reason="io", details={"path": path})
    return sys.stdin.read()


def _load_graph(args):
    return Graph.from_json(_read_input(args.graph))


def _load_voltage(args):
    return VoltageGraph.from_json(_read_input(args.voltage))


def _coin(args):
    return CoinParams(args.a, args.b)


def _require(value, flag):
    if value is None:
        raise ValidationError(f"{flag} is required for this command", reason="parameter",
                              details={"flag": flag})
    return value


def _grid(args):
    grid = args.grid if args.grid is not None else Config().GRID
    if grid < 1:
        raise ValidationError(f"--grid must be >= 1, got {grid}", reason="grid")
    return grid


def cmd_ihara(args):
    g = _load_graph(args)
    if args.series:
        return {
            "series": [complex_pair(z) for z in ihara_log_series(g, args.series)],
            "cycle_counts": reduced_cycle_counts(g, args.series).to_list(),
        }
    t = _require(args.t, "--t")
    return {"value": complex_pair(ihara_zeta_bass(g, t))}


def cmd_qw_zeta(args):
    g = _load_graph(args)
    p = _coin(args)
    if args.series:
        return {"series": [complex_pair(z) for z in qw_log_series(g, p, args.series)],
                "coin": p.to_dict()}
    u = _require(args.u, "--u")
    method = args.method or "direct"
    return {"value": complex_pair(qw_zeta(g, p, u, method)), "method": method,
            "coin": p.to_dict()}


def cmd_charpoly(args):
    g = _load_graph(args)
    method = args.method or "direct"
    if method == "konno-sato":
        poly = konno_sato_charpoly(g)
    elif method in METHODS:
        poly = qw_charpoly(g, _coin(args), method)
    else:
        raise ValidationError(f"Unknown charpoly method {method!r}", reason="method",
                              details={"method": method})
    return {"coefficients": poly.to_pairs(), "degree": poly.degree, "method": method}


def cmd_spectrum(args):
    g = _load_graph(args)
    method = args.method or "direct"
    if method not in SPECTRUM_METHODS:
        raise ValidationError(f"Unknown spectrum method {method!r}", reason="method",
                              details={"method": method})
    result = qw_spectrum(g, _coin(args), method)
    if args.format == "csv":
        return [complex_pair(z) for z in result.eigenvalues]
    return result.to_dict()


def cmd_periodic_ihara(args):
    vg = _load_voltage(args)
    t = _require(args.t, "--t")
    N = _grid(args)
    det = det_gamma(vg, "ihara", N=N, t=t, threads=args.threads)
    return {
        "value": complex_pair(periodic_ihara_zeta(vg, t, N=N, threads=args.threads)),
        "det_gamma": det.to_dict(),
        "euler_characteristic": l2_euler_characteristic(vg),
    }


def cmd_periodic_qw(args):
    vg = _load_voltage(args)
    u = _require(args.u, "--u")
    method = args.method or "reduced"
    N = _grid(args)
    value = periodic_qw_zeta(vg, _coin(args), u, N=N, method=method, threads=args.threads)
    return {"value": complex_pair(value), "method": method, "grid_size": N,
            "euler_characteristic": l2_euler_characteristic(vg)}


def cmd_quotient(args):
    vg = _load_voltage(args)
    sizes = parse_cover_sizes(args.L or "")
    if len(sizes) != 1:
        raise ValidationError("quotient takes a single --L value", reason="cover-size")
    return finite_quotient(vg, sizes[0]).to_dict()


def cmd_gen(args):
    kind = args.kind
    if kind in VOLTAGE_GENERATORS:
        return VOLTAGE_GENERATORS[kind]().to_dict()
    if kind not in GRAPH_GENERATORS:
        known = sorted(GRAPH_GENERATORS) + sorted(VOLTAGE_GENERATORS)
        raise GraphError(f"Unknown generator {kind!r}; expected one of {', '.join(known)}",
                         reason="generator", details={"kind": kind})
    if kind == "petersen":
        return GRAPH_GENERATORS[kind]().to_dict()
    n = _require(args.n, "n")
    if kind == "random":
        seed = args.seed if args.seed is not None else Config().SEED
        return GRAPH_GENERATORS[kind](n, p=args.p, seed=seed).to_dict()
    return GRAPH_GENERATORS[kind](n).to_dict()


def cmd_cross_check(args):
    config = Config()
    seed = args.seed if args.seed is not None else config.SEED
    if args.voltage:
        vg = _load_voltage(args)
    elif args.graph:
        vg = None
        g = _load_graph(args)
    else:
        # stdin: a voltage document carries "dim"
        text = _read_input(None)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"Invalid JSON on stdin: {e}", reason="parse")
        if isinstance(data, dict) and "dim" in data:
            vg = VoltageGraph.from_dict(data)
        else:
            vg = None
            g = Graph.from_dict(data)

    if vg is not None:
        covers = parse_cover_sizes(args.L) if args.L else [3, 4, 5]
        report = cross_check_voltage(vg, subject=args.voltage or "stdin", seed=seed,
                                     covers=covers, grid=_grid(args))
    else:
        report = cross_check_graph(g, subject=args.graph or "stdin", seed=seed,
                                   corrupt_prefactor=args.corrupt_prefactor)
    return report


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('--graph', type=str, help='Graph JSON file (default: stdin)')
    common.add_argument('--voltage', type=str, help='Voltage graph JSON file (default: stdin)')
    common.add_argument('--t', type=parse_complex, help='Ihara parameter as re,im')
    common.add_argument('--u', type=parse_complex, help='Walk parameter as re,im')
    common.add_argument('--a', type=parse_complex, default=complex(1.0),
                        help='Coin eigenvalue on the range of d* (default 1,0)')
    common.add_argument('--b', type=parse_complex, default=complex(-1.0),
                        help='Coin eigenvalue on the complement (default -1,0)')
    common.add_argument('--grid', type=int, help='Torus grid size per dimension')
    common.add_argument('--L', type=str, help='Cover size(s), comma-separated')
    common.add_argument('--method', type=str, help='Evaluation method')
    common.add_argument('--series', type=int, help='Return the log-series up to this degree')
    common.add_argument('--format', choices=['json', 'csv'], default='json',
                        help='Output format (csv only for spectrum)')
    common.add_argument('--threads', type=int, help='Worker cap (overrides QWZETA_THREADS)')

    parser = ArgumentParser(prog='qwzeta',
                            description='Zeta functions of graphs from coined quantum walks')
    sub = parser.add_subparsers(dest='command', parser_class=ArgumentParser)
    sub.required = True

    handlers = {
        'ihara': (cmd_ihara, 'Ihara zeta via the Bass determinant'),
        'qw-zeta': (cmd_qw_zeta, 'Quantum walk zeta det(I - uU)^-1'),
        'charpoly': (cmd_charpoly, 'Characteristic polynomial of U'),
        'spectrum': (cmd_spectrum, 'Spectrum of U'),
        'periodic-ihara': (cmd_periodic_ihara, 'Ihara zeta of a periodic graph'),
        'periodic-qw': (cmd_periodic_qw, 'Quantum walk zeta of a periodic graph'),
        'quotient': (cmd_quotient, 'Finite cover of a voltage graph'),
    }
    for name, (handler, help_text) in handlers.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)

    gen = sub.add_parser('gen', help='Emit a built-in graph or voltage graph')
    gen.add_argument('kind', type=str)
    gen.add_argument('n', type=int, nargs='?')
    gen.add_argument('--seed', type=int)
    gen.add_argument('--p', type=float, default=0.4, help='Edge probability for random graphs')
    gen.set_defaults(handler=cmd_gen)

    check = sub.add_parser('cross-check', parents=[common], help='Run the identity ladder')
    check.add_argument('--seed', type=int)
    check.add_argument('--corrupt-prefactor', action='store_true', help=argparse.SUPPRESS)
    check.set_defaults(handler=cmd_cross_check)
    return parser


def _emit(document, fmt, out):
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["re", "im"])
        writer.writerows(document)
    else:
        out.write(json.dumps(document, sort_keys=True))
        out.write("\n")


def main(argv=None):
    out = sys.stdout
    try:
        config = Config()
        configure_logging(config.LOG_LEVEL)
        args = build_parser().parse_args(argv)
        if getattr(args, 'threads', None) is not None and args.threads < 1:
            raise ValidationError(f"--threads must be >= 1, got {args.threads}", reason="threads")
        if getattr(args, 'format', 'json') == 'csv' and args.command not in CSV_COMMANDS:
            raise ValidationError(f"--format csv is only available for {', '.join(CSV_COMMANDS)}",
                                  reason="format", details={"command": args.command})

        result = args.handler(args)

        if args.command == 'cross-check':
            _emit(result.to_dict(), "json", out)
            if not result.passed:
                for check in result.failures:
                    logger.error("✗ %s failed: residual %.3e > %.0e at %s", check.name,
                                 check.max_residual, check.tolerance, check.worst)
                return EXIT_CHECK_FAILED
            return EXIT_OK

        _emit(result, getattr(args, 'format', 'json'), out)
        return EXIT_OK

    except DomainError as e:
        logger.error("%s", e)
        _emit({"error": e.to_dict()}, "json", out)
        return EXIT_DOMAIN
    except QWZetaError as e:
        logger.error("%s", e)
        _emit({"error": e.to_dict()}, "json", out)
        return EXIT_INVALID
