"""Command-line front end: ``cotree-spectra <subcommand> ...``.

Exit status is 0 on success, 1 on domain errors (not a cograph, failed
preconditions, verification mismatches) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import bench as bench_mod
from .cotree import BalancedSpec, Cotree, CotreeError, build_balanced, build_family_kab, build_family_pk2
from .diagonalize import as_rational, count_in_interval, eigen_counts, format_rational, multiplicity
from .graph import GraphError, NotACograph, format_graph, from_graph, read_graph, to_graph
from .parsing import ParseError, parse_expression
from .spectra import DEFAULT_EPSILON, IndeterminateEnergy, energy, full_spectrum, is_borderenergetic
from .verification import verify_corpus

__all__ = ["main", "run", "build_parser"]


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"not a rational 'p/q' or integer: {text!r}") from None


def _positive_rational(text: str) -> Fraction:
    q = _rational(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return q


def _size_list(text: str) -> list[int]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a non-empty comma-separated list of sizes")
    try:
        sizes = [int(float(p)) if "e" in p.lower() else int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed size list {text!r}") from None
    if any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError(f"sizes must be positive, got {text!r}")
    return sizes


_FAMILY_RE = re.compile(r"^\s*(kab)\s*:\s*(\d+)\s*,\s*(\d+)\s*$|^\s*(pk2)\s*:\s*(\d+)\s*$")


def _family(text: str):
    m = _FAMILY_RE.match(text)
    if not m:
        raise UsageError(f"--family: expected 'kab:a,b' or 'pk2:p', got {text!r}")
    if m.group(1):
        return build_family_kab(int(m.group(2)), int(m.group(3)))
    return build_family_pk2(int(m.group(5)))


def _add_input(p: argparse.ArgumentParser, graph_file: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--expr", help="cograph expression, e.g. '(1+1)*(1+1)'")
    g.add_argument("--balanced", help="balanced spec, e.g. 'T(3,2,0|0,0,2)@J'")
    g.add_argument("--family", help="'kab:a,b' or 'pk2:p'")
    if graph_file:
        g.add_argument("--graph-file", help="edge list: 'n m' then m lines 'u v'")


def _load_tree(args) -> Cotree:
    if args.expr is not None:
        try:
            return parse_expression(args.expr)
        except ParseError as e:
            raise UsageError(f"--expr: {e}") from None
    if args.balanced is not None:
        try:
            spec = BalancedSpec.parse(args.balanced)
        except CotreeError as e:
            raise UsageError(f"--balanced: {e}") from None
        return build_balanced(spec)
    if args.family is not None:
        try:
            return _family(args.family)
        except CotreeError as e:
            raise DomainError(f"--family {args.family}: {e}") from None
    path = args.graph_file
    try:
        g = read_graph(path)
    except OSError as e:
        raise UsageError(f"--graph-file {path}: {e.strerror or e}") from None
    except GraphError as e:
        raise UsageError(f"--graph-file {path}: {e}") from None
    result = from_graph(g)
    if isinstance(result, NotACograph):
        raise DomainError(
            f"--graph-file {path}: not a cograph (induced P4 on {list(result.witness)})",
            {"cograph": False, "witness": list(result.witness)},
        )
    return result


# -- pretty printers --------------------------------------------------------


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines.extend(fmt.format(*map(str, r)) for r in rows)
    return "\n".join(lines)


def _pretty_spectrum(data: dict) -> str:
    rows = []
    for e in data["entries"]:
        where = e["value"] if "value" in e else f"({e['lo']}, {e['hi']})"
        rows.append([where, e["mult"], "yes" if e["certified"] else "no"])
    return f"n = {data['n']}, residual width {data['residual_width']}\n" + _table(
        rows, ["eigenvalue", "mult", "certified"]
    )


def _pretty_flat(data: dict) -> str:
    flat = {}
    for k, v in data.items():
        if isinstance(v, dict):
            for k2, v2 in v.items():
                flat[f"{k}.{k2}"] = v2
        else:
            flat[k] = v
    w = max(len(k) for k in flat)
    return "\n".join(f"{k:<{w}}  {'null' if v is None else v}" for k, v in flat.items())


# -- subcommands --------------------------------------------------------------


def _cmd_spectrum(args):
    data = full_spectrum(_load_tree(args), args.epsilon).to_json()
    return data, _pretty_spectrum


def _cmd_mult(args):
    tree = _load_tree(args)
    return {"lambda": format_rational(args.lam), "multiplicity": multiplicity(tree, args.lam)}, _pretty_flat


def _cmd_counts(args):
    return eigen_counts(_load_tree(args), args.at).to_json(), _pretty_flat


def _cmd_interval(args):
    if args.lo > args.hi:
        raise UsageError(f"--lo {format_rational(args.lo)} exceeds --hi {format_rational(args.hi)}")
    tree = _load_tree(args)
    count = count_in_interval(tree, args.lo, args.hi, include_lo=not args.open_lo, include_hi=not args.open_hi)
    data = {
        "lo": format_rational(args.lo),
        "hi": format_rational(args.hi),
        "open_lo": args.open_lo,
        "open_hi": args.open_hi,
        "count": count,
    }
    return data, _pretty_flat


def _cmd_energy(args):
    return energy(_load_tree(args), args.epsilon).to_json(), _pretty_flat


def _cmd_borderenergetic(args):
    tree = _load_tree(args)
    try:
        result = is_borderenergetic(tree, args.epsilon)
    except IndeterminateEnergy as e:
        raise DomainError(f"--epsilon {format_rational(args.epsilon)}: {e}") from None
    return result.to_json(), _pretty_flat


def _cmd_gen(args):
    tree = _load_tree(args)
    if args.emit == "expr":
        return tree.to_expression() + "\n", None
    if args.emit == "edges":
        return format_graph(to_graph(tree)), None
    return tree.to_dot(), None


def _cmd_recognize(args):
    tree = _load_tree(args)
    data = {"cograph": True, "n": tree.n_leaves, "expression": tree.to_expression()}
    return data, _pretty_flat


def _cmd_verify(args):
    if args.cases < 1 or args.max_n < 1:
        raise UsageError("--cases and --max-n must be positive")
    report = verify_corpus(args.seed, args.cases, args.max_n)
    data = report.to_json()
    if not report.ok:
        raise DomainError(f"{len(report.mismatches)} mismatches against the oracle", data)
    return data, _pretty_flat


def _cmd_bench(args):
    try:
        rows = bench_mod.bench(args.sizes, args.backend, args.shape, repeat=args.repeat, exact_ceiling=args.ceiling)
    except ValueError as e:
        flag = "--sizes" if "sizes" in str(e) or "ceiling" in str(e) else "--backend"
        raise UsageError(f"{flag}: {e}") from None
    return bench_mod.to_csv(rows), None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cotree-spectra",
        description="Eigenvalue counts, multiplicities, spectra and energy of cographs via their cotrees.",
    )
    parser.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name, func, help_text, graph_file=True, inputs=True):
        p = sub.add_parser(name, help=help_text)
        if inputs:
            _add_input(p, graph_file)
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    p = command("spectrum", _cmd_spectrum, "all eigenvalues, exact or bracketed")
    p.add_argument("--epsilon", type=_positive_rational, default=DEFAULT_EPSILON)

    p = command("mult", _cmd_mult, "multiplicity of one eigenvalue")
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)

    p = command("counts", _cmd_counts, "eigenvalues greater than, equal to and less than a value")
    p.add_argument("--at", type=_rational, required=True)

    p = command("interval", _cmd_interval, "number of eigenvalues in an interval")
    p.add_argument("--lo", type=_rational, required=True)
    p.add_argument("--hi", type=_rational, required=True)
    p.add_argument("--open-lo", action="store_true")
    p.add_argument("--open-hi", action="store_true")

    p = command("energy", _cmd_energy, "graph energy, exact or as an interval")
    p.add_argument("--epsilon", type=_positive_rational, default=DEFAULT_EPSILON)

    p = command("borderenergetic", _cmd_borderenergetic, "compare the energy with that of K_n")
    p.add_argument("--epsilon", type=_positive_rational, default=DEFAULT_EPSILON)

    p = command("gen", _cmd_gen, "emit a cotree as expression, edge list or DOT", graph_file=False)
    p.add_argument("--emit", choices=("expr", "edges", "dot"), default="expr")

    p = command("recognize", _cmd_recognize, "cotree of a graph file, or an induced P4", inputs=False)
    p.add_argument("--graph-file", required=True)
    p.set_defaults(expr=None, balanced=None, family=None)

    p = command("verify", _cmd_verify, "cross-check a random corpus against the dense oracle", inputs=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--max-n", type=int, default=64)

    p = command("bench", _cmd_bench, "CSV timing of eigenvalue counting", inputs=False)
    p.add_argument("--sizes", type=_size_list, required=True, help="ascending, e.g. 1e4,1e5,1e6")
    p.add_argument("--backend", choices=("exact", "float"), default="float")
    p.add_argument("--shape", choices=bench_mod.SHAPES, default="pk2")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--ceiling", type=int, default=bench_mod.EXACT_CEILING, help="largest size allowed for --backend exact")
    return parser


def _emit(out, data, pretty, printer) -> None:
    if isinstance(data, str):
        out.write(data)
    elif pretty and printer is not None:
        out.write(printer(data) + "\n")
    else:
        out.write(json.dumps(data) + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        data, printer = args.func(args)
    except UsageError as e:
        err.write(f"cotree-spectra {args.command}: error: {e}\n")
        return 2
    except DomainError as e:
        if e.payload is not None:
            _emit(out, e.payload, args.pretty, _pretty_flat)
        err.write(f"cotree-spectra {args.command}: {e}\n")
        return 1
    except (CotreeError, GraphError) as e:
        err.write(f"cotree-spectra {args.command}: {e}\n")
        return 1
    _emit(out, data, args.pretty, printer)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
