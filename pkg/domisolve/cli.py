"""
Command line front end.

Commands: ``solve``, ``outcome``, ``landscape``, ``selftest`` and ``bench``;
``python -m domisolve <command> --help`` lists the flags of each.

Exit status: 0 solved or passed, 1 property failure, 2 usage or input error,
3 node budget exhausted.
"""

from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
import argparse
import json
import logging
import os
import random
import sys

from domisolve.board import (BoardDims, Player, Symmetry, format_diagram,
                             new_position, parse_diagram,
                             random_playout, transform, transpose)
from domisolve.knowledge import Safety, StaticVerdict, bounds, verdict
from domisolve.outcome import generate_landscape, ingest_known_results
from domisolve.outcome import outcome_class
from domisolve.search import (REFERENCE_RESULTS, NodeLimitExceeded, Ordering,
                              SolveConfig, brute_force_oracle,
                              exhaustive_values, solve)
from domisolve.tt import DEFAULT_SEED, Scheme, TTConfig

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

CACHE_ENV = 'DOMISOLVE_CACHE'
DEFAULT_CACHE = '~/.cache/domisolve/results.jsonl'


class UsageError(Exception):
    pass


@dataclass
class ResultRecord:
    dims: tuple
    to_move: str
    winner: str
    nodes: int
    elapsed_ms: float
    config: dict
    timestamp: str

    @classmethod
    def from_report(cls, dims, to_move, report, config):
        return cls(
            dims=(dims.rows, dims.cols),
            to_move=to_move.value,
            winner=report.winner.value,
            nodes=report.nodes,
            elapsed_ms=round(report.elapsed * 1000, 3),
            config=config.fingerprint(),
            timestamp=datetime.now(timezone.utc).isoformat(),
        )

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line):
        data = json.loads(line)
        data['dims'] = tuple(data['dims'])
        return cls(**data)


class ResultCache(object):
    """Append-only JSONL file of :class:`ResultRecord`."""

    def __init__(self, path):
        self.path = Path(path).expanduser()

    @classmethod
    def locate(cls, override=None):
        return cls(override or os.environ.get(CACHE_ENV) or DEFAULT_CACHE)

    def append(self, record):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open('a') as stream:
            stream.write(record.to_json() + '\n')

    def read(self):
        if not self.path.exists():
            return []
        with self.path.open() as stream:
            return [ResultRecord.from_json(line)
                    for line in stream if line.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _seed(text):
    return int(text, 0)


def _engine_flags():
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group('engine')
    group.add_argument('--tt-bits', type=int, default=TTConfig.index_bits,
                       help="log2 of the number of table buckets")
    group.add_argument('--tt-scheme', choices=[s.value for s in Scheme],
                       default=Scheme.DEEP.value)
    group.add_argument('--no-knowledge', action='store_true',
                       help="disable static win/loss detection")
    group.add_argument('--no-tt', action='store_true',
                       help="disable the transposition table")
    group.add_argument('--order', choices=[o.value for o in Ordering],
                       default=Ordering.HEURISTIC.value)
    group.add_argument('--safety', choices=[s.value for s in Safety],
                       default=Safety.CELLS.value,
                       help="pack safe moves into protected runs or into "
                            "immune cells")
    group.add_argument('--seed', type=_seed, default=DEFAULT_SEED,
                       help="Zobrist seed (decimal or 0x...)")
    group.add_argument('--node-limit', type=int, default=None)
    return parser


def _board_flags(require_to_move=True):
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group('board')
    group.add_argument('--rows', type=int)
    group.add_argument('--cols', type=int)
    if require_to_move:
        group.add_argument('--to-move', type=Player.parse,
                           default=Player.VERTICAL,
                           help="V (default) or H")
    group.add_argument('--json', action='store_true',
                       help="print one JSON record per solve")
    group.add_argument('--cache', default=None,
                       help="results file, defaults to ${} or {}"
                       .format(CACHE_ENV, DEFAULT_CACHE))
    group.add_argument('--no-cache', action='store_true')
    return parser


def build_parser():
    parser = _Parser(prog='domisolve',
                     description="Solve Domineering boards.")
    parser.add_argument('-v', '--verbose', action='count', default=0)
    commands = parser.add_subparsers(dest='command', metavar='command',
                                     parser_class=_Parser)
    commands.required = True
    engine = _engine_flags()

    solve_parser = commands.add_parser(
        'solve', parents=[engine, _board_flags()],
        help="winner of one board or position")
    solve_parser.add_argument('--diagram', default=None,
                              help="file holding a position diagram")
    solve_parser.add_argument('--show-bounds', action='store_true',
                              help="print the static bounds of the root")

    commands.add_parser('outcome', parents=[engine, _board_flags(False)],
                        help="outcome class of one board")

    landscape = commands.add_parser('landscape', parents=[engine],
                                    help="table of outcome classes")
    landscape.add_argument('--max-m', type=int, default=6)
    landscape.add_argument('--max-n', type=int, default=6)
    landscape.add_argument('--base', default=None,
                           help="CSV of known results (m,n,label)")
    landscape.add_argument('--budget-nodes', type=int, default=0,
                           help="node limit per direct solve, 0 to skip")
    landscape.add_argument('--jobs', type=int, default=1)
    landscape.add_argument('--csv', default=None,
                           help="write m,n,label,provenance rows here")

    selftest = commands.add_parser('selftest',
                                   help="check the engine against the oracle")
    selftest.add_argument('--area-limit', type=int, default=16)
    selftest.add_argument('--samples', type=int, default=200,
                          help="random positions for the symmetry suite")
    selftest.add_argument('--seed', type=_seed, default=DEFAULT_SEED)
    selftest.add_argument('--tt-bits', type=int, default=12)

    bench = commands.add_parser('bench', parents=[engine],
                                help="square boards against known results")
    bench.add_argument('--min-size', type=int, default=2)
    bench.add_argument('--max-size', type=int, default=7)
    bench.add_argument('--ablate', action='store_true',
                       help="also solve with knowledge and TT toggled")
    return parser


def config_from_args(args):
    return SolveConfig(
        use_knowledge=not args.no_knowledge,
        use_tt=not args.no_tt,
        tt=TTConfig(index_bits=args.tt_bits, scheme=Scheme(args.tt_scheme),
                    seed=args.seed),
        node_limit=args.node_limit,
        order=Ordering(args.order),
        safety=Safety(args.safety),
    )


def _dims_from_args(args):
    if args.rows is None or args.cols is None:
        raise UsageError("--rows and --cols are required")
    return BoardDims(args.rows, args.cols)


def _cache(args):
    if args.no_cache:
        return None
    return ResultCache.locate(args.cache)


def cmd_solve(args):
    config = config_from_args(args)
    if args.diagram:
        pos = parse_diagram(Path(args.diagram).read_text())
    else:
        pos = new_position(_dims_from_args(args))
    if args.show_bounds:
        print(format_diagram(pos))
        print(bounds(pos, config.safety))
    try:
        report = solve(pos, args.to_move, config)
    except NodeLimitExceeded as e:
        print("undecided ({} nodes)".format(e.nodes))
        return EXIT_BUDGET
    record = ResultRecord.from_report(pos.dims, args.to_move, report, config)
    if args.json:
        print(record.to_json())
    else:
        print("{} ({})".format(report.result(args.to_move),
                               report.winner.title))
        print("nodes: {}".format(report.nodes))
        print("elapsed: {:.1f} ms".format(record.elapsed_ms))
    cache = _cache(args)
    # only empty boards are identified by their dimensions
    if cache is not None and not args.diagram:
        cache.append(record)
    return EXIT_OK


def cmd_outcome(args):
    config = config_from_args(args)
    dims = _dims_from_args(args)
    reports = {}
    knowledge = outcome_class(dims, config, reports=reports)
    records = [ResultRecord.from_report(dims, starter, report, config)
               for starter, report in reports.items()]
    if args.json:
        for record in records:
            print(record.to_json())
    else:
        print(knowledge.label or "undecided")
        for starter in Player:
            winner = knowledge.winner(starter)
            print("{} starts: {}".format(
                starter.title,
                "{} wins".format(winner.title) if winner else "undecided"))
    cache = _cache(args)
    if cache is not None:
        for record in records:
            cache.append(record)
    return EXIT_OK if knowledge.complete else EXIT_BUDGET


def cmd_landscape(args):
    base = ingest_known_results(args.base) if args.base else None
    config = config_from_args(args)
    landscape = generate_landscape(args.max_m, args.max_n, base,
                                   budget=args.budget_nodes, config=config,
                                   jobs=args.jobs)
    print(landscape.render())
    if args.csv:
        Path(args.csv).write_text(landscape.to_csv())
    else:
        print()
        print(landscape.to_csv(), end='')
    return EXIT_OK


class PropertyFailure(Exception):
    def __init__(self, msg, pos):
        super().__init__(msg)
        self.pos = pos


def _selftest_configs(tt_bits):
    knowledge = [(True, safety) for safety in Safety]
    knowledge.append((False, Safety.CELLS))
    for use_knowledge, safety in knowledge:
        for scheme in (None, Scheme.DEEP, Scheme.TWOBIG):
            for order in Ordering:
                yield SolveConfig(
                    use_knowledge=use_knowledge,
                    use_tt=scheme is not None,
                    tt=TTConfig(index_bits=tt_bits,
                                scheme=scheme or Scheme.DEEP),
                    order=order,
                    safety=safety)


def _boards(area_limit):
    for rows in range(1, area_limit + 1):
        for cols in range(1, area_limit // rows + 1):
            yield BoardDims(rows, cols)


def check_knowledge(area_limit):
    """Every static verdict on every reachable position agrees with play."""
    for dims in _boards(area_limit):
        pos = new_position(dims)
        geom = pos.geometry
        for starter in Player:
            values = exhaustive_values(pos, starter)
            for (occupied, mover), mover_wins in values.items():
                for safety in Safety:
                    static = verdict(geom, occupied, mover, safety)
                    if static is StaticVerdict.UNKNOWN:
                        continue
                    if (static is StaticVerdict.MOVER_WINS) != mover_wins:
                        raise PropertyFailure(
                            "static verdict {} for {} to move is wrong ({})"
                            .format(static.value, mover.title, safety.value),
                            replace(pos, occupied=occupied))


def check_oracle(area_limit, tt_bits):
    """Every engine configuration finds the oracle's winner."""
    configs = list(_selftest_configs(tt_bits))
    for dims in _boards(area_limit):
        pos = new_position(dims)
        for starter in Player:
            expected = brute_force_oracle(pos, starter)
            for config in configs:
                winner = solve(pos, starter, config).winner
                if winner is not expected:
                    raise PropertyFailure(
                        "{} to move: {} found, oracle says {} ({})".format(
                            starter.title, winner.title, expected.title,
                            config.fingerprint()),
                        pos)


def check_symmetries(samples, seed, tt_bits):
    """Winners are invariant under the board symmetries and transposition."""
    rng = random.Random(seed)
    config = SolveConfig(tt=TTConfig(index_bits=tt_bits))
    for _ in range(samples):
        dims = BoardDims(rng.randint(1, 6), rng.randint(1, 8))
        pos, mover = random_playout(dims, rng, max_empty=20)
        winner = solve(pos, mover, config).winner
        for sym in Symmetry:
            image = solve(transform(pos, sym), mover, config).winner
            if image is not winner:
                raise PropertyFailure(
                    "{} changes the winner, {} to move".format(
                        sym.name, mover.title), pos)
        dual = solve(transpose(pos), mover.opponent, config).winner
        if dual is not winner.opponent:
            raise PropertyFailure(
                "transposed board disagrees, {} to move".format(mover.title),
                pos)


def cmd_selftest(args):
    suites = [
        ("knowledge soundness", lambda: check_knowledge(args.area_limit)),
        ("oracle equivalence",
         lambda: check_oracle(args.area_limit, args.tt_bits)),
        ("symmetry and duality",
         lambda: check_symmetries(args.samples, args.seed, args.tt_bits)),
    ]
    for name, suite in suites:
        logger.debug("running %s", name)
        try:
            suite()
        except PropertyFailure as e:
            print("FAIL {}: {}".format(name, e))
            print(format_diagram(e.pos))
            return EXIT_FAILURE
        print("ok   {}".format(name))
    return EXIT_OK


def cmd_bench(args):
    config = config_from_args(args)
    variants = [('', config)]
    if args.ablate:
        variants = [
            ('{}{}'.format('K' if knowledge else '-', 'T' if tt else '-'),
             replace(config, use_knowledge=knowledge, use_tt=tt))
            for knowledge in (True, False) for tt in (True, False)]
        if config.safety is Safety.CELLS:
            variants.append(('RT', replace(config, use_knowledge=True,
                                           use_tt=True, safety=Safety.RUNS)))
    status = EXIT_OK
    headers = ("nodes " + tag if tag else "nodes" for tag, _ in variants)
    print("board   result  {}  reference nodes (domi / obsequi / mudos)"
          .format("  ".join("{:>12}".format(h) for h in headers)))
    for size in range(args.min_size, args.max_size + 1):
        dims = BoardDims(size, size)
        pos = new_position(dims)
        counts = []
        result = None
        for _, variant in variants:
            try:
                report = solve(pos, Player.VERTICAL, variant)
            except NodeLimitExceeded:
                counts.append('>{}'.format(variant.node_limit))
                continue
            result = report.result(Player.VERTICAL)
            counts.append(str(report.nodes))
        reference = REFERENCE_RESULTS.get(dims)
        if reference and result is not None and result != reference.result:
            status = EXIT_FAILURE
        print("{:<7} {:>6}  {}  {}".format(
            str(dims), result or '?',
            "  ".join("{:>12}".format(count) for count in counts),
            " / ".join('-' if n is None else str(n)
                       for n in reference[1:]) if reference else '-'))
    return status


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_USAGE
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose,
                                                               2)]
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = globals()["cmd_{}".format(args.command)]
    try:
        return handler(args)
    except UsageError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_USAGE
