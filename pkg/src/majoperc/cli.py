"""Command-line interface.

Subcommands::

    simulate         one percolation-probability estimate
    scan             estimates over a grid of m, m_fraction, q, lambda or theta
    closed           closedness test or closed-set enumeration on an edge-list file
    bounds           binomial bound audit sweeps as CSV
    reproduce-phase  canned n=50000, p=0.01 scan across the transition

Exit status: 0 on success, 1 on usage or configuration errors, 2 on runtime
failures.
"""

from __future__ import annotations

import argparse
import io
import sys

from .binbounds import BoundKind, run_sweep, write_reports_csv
from .closedset import enumerate_closed_sets, is_closed
from .config import INIT_KEYS, ConfigError, parse_config
from .graph import VertexSet, load_edge_list
from .harness import THREADS_ENV, curve_csv, resolve_threads, run_experiment, write_text
from .thresholds import locate_transition

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

PHASE_CONFIG = """\
n = 50000
p = 0.01
m_fraction = 0.40:0.48:12
shared_graph = true
"""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset by the subparser
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help=f"worker threads (default: ${THREADS_ENV} or 1)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (default: stdout)")
    return common


def _experiment_args(sp: argparse.ArgumentParser):
    sp.add_argument("--config", help="key = value config file; flags below override it")
    sp.add_argument("--n", dest="n")
    sp.add_argument("--p", dest="p")
    init = sp.add_mutually_exclusive_group()
    init.add_argument("--m", dest="m")
    init.add_argument("--m-fraction", dest="m_fraction")
    init.add_argument("--q", dest="q")
    init.add_argument("--lambda", dest="lambda_")
    init.add_argument("--theta", dest="theta")
    sp.add_argument("--trials")
    sp.add_argument("--confidence-level", dest="confidence_level")
    sp.add_argument("--shared-graph", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="majoperc", parents=[common],
                     description="Majority bootstrap percolation on G(n, p).")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sp = sub.add_parser("simulate", parents=[common], help="one estimate")
    _experiment_args(sp)
    sp = sub.add_parser("scan", parents=[common], help="estimates over a grid")
    _experiment_args(sp)

    sp = sub.add_parser("closed", parents=[common], help="closed-set queries on an edge list")
    sp.add_argument("edges", help="edge-list file ('n m' header, then 'u v' lines)")
    what = sp.add_mutually_exclusive_group(required=True)
    what.add_argument("--set", dest="vertex_set", help="comma-separated vertices (empty string for the empty set)")
    what.add_argument("--enumerate", action="store_true", help="list every closed set (n <= 22)")

    sp = sub.add_parser("bounds", parents=[common], help="binomial bound audit sweep")
    sp.add_argument("--id", dest="ids", action="append", choices=[k.value for k in BoundKind],
                    help="bound to sweep; repeatable (default: all)")

    sp = sub.add_parser("reproduce-phase", parents=[common],
                        help="scan n=50000, p=0.01 over m in [0.40n, 0.48n]")
    sp.add_argument("--trials", type=int, default=200)
    return parser


def _config_text(args) -> str:
    lines = []
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                base = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror or exc}") from None
        lines.append(base)
    overrides = {
        "n": args.n, "p": args.p, "m": args.m, "m_fraction": args.m_fraction, "q": args.q,
        "lambda": args.lambda_, "theta": args.theta, "trials": args.trials,
        "confidence_level": args.confidence_level,
        "shared_graph": "true" if args.shared_graph else None,
        "master_seed": getattr(args, "seed", None),
    }
    given = {k: v for k, v in overrides.items() if v is not None}
    if given and lines:
        # drop keys from the file that a flag overrides; an init flag replaces any init key
        drop = set(given)
        if drop & set(INIT_KEYS):
            drop |= set(INIT_KEYS) | {"mode"}
        kept = []
        for raw in lines[0].splitlines():
            key = raw.split("#", 1)[0].split("=", 1)[0].strip()
            kept.append("" if key in drop else raw)     # blank keeps line numbers stable
        lines = ["\n".join(kept)]
    lines += [f"{k} = {v}" for k, v in given.items()]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _cmd_experiment(args) -> int:
    config = parse_config(_config_text(args))
    if args.command == "simulate" and len(config.points()) != 1:
        raise _UsageError("simulate takes a single grid point; use scan for grids")
    out = getattr(args, "out", None)
    curve = run_experiment(config, threads=resolve_threads(getattr(args, "threads", None)))
    _emit(curve_csv(curve, config), out)
    return EXIT_OK


def _cmd_phase(args) -> int:
    text = PHASE_CONFIG + f"trials = {args.trials}\nmaster_seed = {getattr(args, 'seed', 1)}\n"
    config = parse_config(text)
    curve = run_experiment(config, threads=resolve_threads(getattr(args, "threads", None)))
    _emit(curve_csv(curve, config), getattr(args, "out", None))
    try:
        at = locate_transition(curve)
        print(f"transition m ~ {at:.1f} ({at / config.n:.4f} n)", file=sys.stderr)
    except ValueError as exc:
        print(f"transition not located: {exc}", file=sys.stderr)
    return EXIT_OK


def _parse_vertex_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise _UsageError(f"--set must be comma-separated integers, got {text!r}") from None


def _cmd_closed(args) -> int:
    g = load_edge_list(args.edges)
    if args.enumerate:
        lines = [",".join(str(v) for v in s) for s in enumerate_closed_sets(g)]
        _emit("".join(f"{{{line}}}\n" for line in lines), getattr(args, "out", None))
        return EXIT_OK
    s = VertexSet(g.n, _parse_vertex_list(args.vertex_set))
    _emit(("true" if is_closed(g, s) else "false") + "\n", getattr(args, "out", None))
    return EXIT_OK


def _cmd_bounds(args) -> int:
    reports = run_sweep(args.ids)
    buf = io.StringIO()
    write_reports_csv(reports, buf)
    _emit(buf.getvalue(), getattr(args, "out", None))
    finite = [r for r in reports if not r.asymptotic]
    bad = sum(r.violated for r in finite)
    print(f"{len(reports)} rows; {bad} directional violations among {len(finite)} finite-n rows",
          file=sys.stderr)
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_experiment,
    "scan": _cmd_experiment,
    "closed": _cmd_closed,
    "bounds": _cmd_bounds,
    "reproduce-phase": _cmd_phase,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:          # --help
        return int(exc.code or 0)
    except (_UsageError, ConfigError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, MemoryError) as exc:
        print(f"majoperc: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
