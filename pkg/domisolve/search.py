"""
Boolean alpha-beta solver for Domineering.

The value of a node is a plain win or loss for the player to move, so
alpha-beta reduces to negamax where the first winning child closes the node.
Static knowledge, the transposition table, move ordering and the pruning of
symmetric children can be toggled through :class:`SolveConfig`; none of them
changes the winner, only the number of nodes investigated.

>>> from domisolve.board import BoardDims, new_position, Player
>>> report = solve(new_position(BoardDims(5, 5)), Player.VERTICAL)
>>> report.winner
<Player.HORIZONTAL: 'H'>
>>> brute_force_oracle(new_position(BoardDims(3, 3)), Player.VERTICAL)
<Player.VERTICAL: 'V'>
"""

from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional
import enum
import logging
import time

from domisolve.board import (BoardDims, Move, Player, Symmetry, apply_move,
                             canonical, geometry, iter_bits)
from domisolve.knowledge import (Safety, StaticVerdict, decide, evaluate,
                                 real_count, safe_count)
from domisolve.tt import TranspositionTable, TTConfig, zobrist_init

logger = logging.getLogger(__name__)

#: Empty cells above which the brute-force oracle refuses to run.
ORACLE_EMPTY_LIMIT = 20

#: Occupancies whose knowledge counts a solver keeps before starting over.
COUNTS_CACHE_SIZE = 1 << 18


class NodeLimitExceeded(RuntimeError):
    def __init__(self, nodes):
        super().__init__("node limit exceeded after {} nodes".format(nodes))
        self.nodes = nodes


class OracleRefused(ValueError):
    pass


class Ordering(enum.Enum):
    ROW_MAJOR = 'rowmajor'
    HEURISTIC = 'heuristic'


@dataclass(frozen=True)
class SolveConfig:
    use_knowledge: bool = True
    use_tt: bool = True
    tt: TTConfig = field(default_factory=TTConfig)
    node_limit: Optional[int] = None
    order: Ordering = Ordering.HEURISTIC
    safety: Safety = Safety.CELLS

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be positive, got {}"
                             .format(self.node_limit))

    def fingerprint(self):
        """Engine settings that determine the node count of a solve."""
        return {
            'knowledge': self.use_knowledge,
            'tt': self.use_tt,
            'tt_bits': self.tt.index_bits,
            'scheme': self.tt.scheme.value,
            'ordering': self.order.value,
            'safety': self.safety.value,
            'seed': self.tt.seed,
        }


@dataclass
class SolveReport:
    winner: Player
    nodes: int
    elapsed: float
    tt_hits: int = 0
    static_cutoffs: int = 0
    static_root: bool = False

    def result(self, to_move):
        """1 when the player to move wins, 2 otherwise."""
        return 1 if self.winner is to_move else 2

    def as_dict(self):
        data = asdict(self)
        data['winner'] = self.winner.value
        return data


class ReferenceResult(NamedTuple):
    result: int
    domi: Optional[int]
    obsequi: Optional[int]
    mudos: Optional[int]


#: Published results with Vertical starting (1: Vertical wins, 2: Horizontal
#: wins) and the nodes investigated by earlier solvers; None where no count
#: was published.
REFERENCE_RESULTS = {
    BoardDims(2, 2): ReferenceResult(1, 1, 1, 1),
    BoardDims(3, 3): ReferenceResult(1, 1, 1, 1),
    BoardDims(4, 4): ReferenceResult(1, 40, 23, 1),
    BoardDims(5, 5): ReferenceResult(2, 604, 259, 17),
    BoardDims(6, 6): ReferenceResult(1, 17232, 908, 1),
    BoardDims(7, 7): ReferenceResult(1, 408260, 31440, 1),
    BoardDims(8, 8): ReferenceResult(1, 441990070, 2023301, 24147),
    BoardDims(9, 9): ReferenceResult(1, None, 1657032906, 4917736),
    BoardDims(10, 10): ReferenceResult(1, None, 3541685253370, 13506805),
    BoardDims(11, 11): ReferenceResult(1, None, None, 259689994008),
    BoardDims(9, 11): ReferenceResult(2, None, None, 84145153),
    BoardDims(11, 9): ReferenceResult(1, None, None, 23183077),
    BoardDims(11, 10): ReferenceResult(2, None, None, 1),
    BoardDims(6, 17): ReferenceResult(2, None, None, 25670138842),
    BoardDims(17, 6): ReferenceResult(1, None, None, 810774495),
    BoardDims(8, 12): ReferenceResult(2, None, None, 273559795),
    BoardDims(12, 8): ReferenceResult(1, None, None, 11960354),
    BoardDims(14, 8): ReferenceResult(1, None, None, 490146677),
    BoardDims(8, 15): ReferenceResult(1, None, None, 1),
    BoardDims(12, 15): ReferenceResult(1, None, None, 1),
}


_move_tables_cache = {}


def _move_tables(geom, basis):
    """
    For every player and anchor: the placement mask in each of the four
    symmetry images, followed by the Zobrist delta of each image.
    """
    key = (geom.dims, basis.seed)
    tables = _move_tables_cache.get(key)
    if tables is None:
        tables = {}
        for player in Player:
            per_anchor = [None] * geom.area
            for anchor in iter_bits(geom.anchors(0, player)):
                mask = geom.move_mask(anchor, player)
                images = tuple(geom.permute(mask, sym) for sym in Symmetry)
                deltas = tuple(basis.occupancy_hash(image) for image in images)
                per_anchor[anchor] = images + deltas
            tables[player] = per_anchor
        _move_tables_cache[key] = tables
    return tables


def _score(geom, occupied, mover, safety=Safety.RUNS):
    # parent terms of both deltas are the same for every sibling
    return (safe_count(geom, occupied, mover, safety)
            - real_count(geom, occupied, mover.opponent))


class Solver(object):
    """
    One solve of one position; not reusable across positions of different
    sizes, and not thread safe.

    Every child is looked at once before any is searched: a child the static
    rules or the table already lose for its mover closes the node at once,
    and children already known to be lost for us are only counted after the
    others failed.
    """

    def __init__(self, dims, config=None):
        self.config = config = config or SolveConfig()
        self.geometry = geometry(dims)
        self.basis = zobrist_init(config.tt.seed)
        self.table = TranspositionTable(config.tt) if config.use_tt else None
        self.use_knowledge = config.use_knowledge
        self.heuristic = config.order is Ordering.HEURISTIC
        self.safety = config.safety
        self.node_limit = config.node_limit
        self._tables = _move_tables(self.geometry, self.basis)
        self._salt = self.basis.geometry_salt(dims)
        self._side = self.basis.side
        self._counts = {}
        self.nodes = self.tt_hits = self.static_cutoffs = 0
        if self.table is not None:
            logger.debug("%s: %s table with 2**%d slots, seed %d", dims,
                         config.tt.scheme.value, config.tt.index_bits,
                         config.tt.seed)

    def _images(self, pos):
        geom = self.geometry
        if pos.dims != geom.dims:
            raise ValueError("solver built for {} cannot solve a {} board"
                             .format(geom.dims, pos.dims))
        images = tuple(geom.permute(pos.occupied, sym) for sym in Symmetry)
        hashes = tuple(self.basis.occupancy_hash(image) for image in images)
        return images, hashes

    def solve(self, pos, to_move):
        images, hashes = self._images(pos)
        started = time.perf_counter()
        won = self._search(images, hashes, to_move)
        report = SolveReport(
            winner=to_move if won else to_move.opponent,
            nodes=self.nodes,
            elapsed=time.perf_counter() - started,
            tt_hits=self.tt_hits,
            static_cutoffs=self.static_cutoffs,
            static_root=self.nodes == 1 and self.static_cutoffs == 1,
        )
        logger.info("%s, %s to move: %s wins, %d nodes in %.3fs",
                    self.geometry.dims, to_move.title, report.winner.title,
                    report.nodes, report.elapsed)
        return report

    def children(self, pos, to_move):
        """The moves the search tries at ``pos``, in the order tried."""
        images, hashes = self._images(pos)
        cols = self.geometry.cols
        return [Move.from_anchor(to_move, anchor, cols)
                for anchor, _, _, _ in self._children(images, hashes, to_move)]

    def _evaluate(self, occupied):
        found = self._counts.get(occupied)
        if found is None:
            if len(self._counts) >= COUNTS_CACHE_SIZE:
                self._counts.clear()
            found = evaluate(self.geometry, occupied, self.safety)
            self._counts[occupied] = found
        return found

    def _visit(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise NodeLimitExceeded(self.nodes)

    def _key(self, hashes, best, mover):
        key = hashes[best] ^ self._salt
        if mover is Player.HORIZONTAL:
            key ^= self._side
        return key

    def _children(self, images, hashes, mover):
        """
        ``(anchor, images, hashes, canonical image index)`` of every child
        that is not symmetric to an earlier one, best first.
        """
        moves = self._tables[mover]
        i0, i1, i2, i3 = images
        h0, h1, h2, h3 = hashes
        seen = set()
        children = []
        for anchor in iter_bits(self.geometry.anchors(i0, mover)):
            m0, m1, m2, m3, d0, d1, d2, d3 = moves[anchor]
            child = (i0 | m0, i1 | m1, i2 | m2, i3 | m3)
            best = 0
            for sym in (1, 2, 3):
                if child[sym] < child[best]:
                    best = sym
            if child[best] in seen:
                continue
            seen.add(child[best])
            children.append((anchor, child,
                             (h0 ^ d0, h1 ^ d1, h2 ^ d2, h3 ^ d3), best))
        if self.heuristic and len(children) > 1:
            # symmetric children score alike, so ranking after the pruning
            # keeps the same survivors in the same order
            mine = 0 if mover is Player.VERTICAL else 1
            theirs = 1 - mine

            def rank(child):
                found = self._evaluate(child[1][child[3]])
                return found[theirs] - found[2 + mine]

            children.sort(key=rank)
        return children

    def _search(self, images, hashes, mover):
        self._visit()
        best = 0
        for sym in (1, 2, 3):
            if images[sym] < images[best]:
                best = sym

        if self.use_knowledge:
            mine = 0 if mover is Player.VERTICAL else 1
            found = self._evaluate(images[best])
            static = decide(found[mine], found[1 - mine],
                            found[2 + mine], found[3 - mine])
            if static is not StaticVerdict.UNKNOWN:
                self.static_cutoffs += 1
                return static is StaticVerdict.MOVER_WINS

        table = self.table
        if table is not None:
            key = self._key(hashes, best, mover)
            entry = table.probe(key)
            if entry is not None:
                self.tt_hits += 1
                return entry.result is mover
            first_node = self.nodes

        won = self._expand(images, hashes, mover)

        if table is not None:
            table.store(key, mover if won else mover.opponent,
                        self.nodes - first_node + 1)
        return won

    def _expand(self, images, hashes, mover):
        opponent = mover.opponent
        table = self.table
        theirs = 0 if opponent is Player.VERTICAL else 1
        mine = 1 - theirs
        pending = []
        # per child known lost for us: True when the table said so
        lost = []
        for _, child, child_hashes, best in self._children(images, hashes,
                                                            mover):
            if self.use_knowledge:
                found = self._evaluate(child[best])
                static = decide(found[theirs], found[mine],
                                found[2 + theirs], found[2 + mine])
                if static is StaticVerdict.MOVER_LOSES:
                    self._visit()
                    self.static_cutoffs += 1
                    return True
                if static is StaticVerdict.MOVER_WINS:
                    lost.append(False)
                    continue
            if table is not None:
                entry = table.probe(self._key(child_hashes, best, opponent))
                if entry is not None:
                    if entry.result is mover:
                        self._visit()
                        self.tt_hits += 1
                        return True
                    lost.append(True)
                    continue
            pending.append((child, child_hashes))

        for child, child_hashes in pending:
            if not self._search(child, child_hashes, opponent):
                return True
        for from_table in lost:
            self._visit()
            if from_table:
                self.tt_hits += 1
            else:
                self.static_cutoffs += 1
        return False


def solve(pos, to_move, config=None):
    return Solver(pos.dims, config).solve(pos, to_move)


def order_moves(pos, player, moves, order=Ordering.HEURISTIC,
                safety=Safety.RUNS):
    """
    Reorder ``moves`` best first: a move scores the gain in the mover's safe
    moves minus the gain in the opponent's real moves it causes. Ties keep
    row-major order.
    """
    moves = list(moves)
    if order is Ordering.ROW_MAJOR:
        return moves
    geom = pos.geometry
    cols = geom.cols
    scores = [_score(geom,
                     pos.occupied | geom.move_mask(move.anchor(cols), player),
                     player, safety)
              for move in moves]
    ranked = sorted(range(len(moves)), key=lambda index: -scores[index])
    return [moves[index] for index in ranked]


def dedupe_symmetric(pos, moves):
    """Keep the first of every group of moves with symmetric children."""
    seen = set()
    kept = []
    for move in moves:
        canon, _ = canonical(apply_move(pos, move))
        if canon.occupied not in seen:
            seen.add(canon.occupied)
            kept.append(move)
    return kept


def brute_force_oracle(pos, to_move):
    """
    Winner by exhaustive negamax without transposition table, knowledge or
    pruning of symmetric moves.
    """
    geom = pos.geometry
    empty = pos.empty.bit_count()
    if empty > ORACLE_EMPTY_LIMIT:
        raise OracleRefused("{} empty cells exceed the oracle limit of {}"
                            .format(empty, ORACLE_EMPTY_LIMIT))

    def wins(occupied, mover):
        for anchor in iter_bits(geom.anchors(occupied, mover)):
            if not wins(occupied | geom.move_mask(anchor, mover),
                        mover.opponent):
                return True
        return False

    return to_move if wins(pos.occupied, to_move) else to_move.opponent


def exhaustive_values(pos, to_move):
    """
    Exact value of every position reachable from ``(pos, to_move)``, as a
    mapping ``(occupied, mover) -> mover wins``.
    """
    geom = pos.geometry
    values = {}

    def value(occupied, mover):
        known = values.get((occupied, mover))
        if known is not None:
            return known
        won = False
        for anchor in iter_bits(geom.anchors(occupied, mover)):
            if not value(occupied | geom.move_mask(anchor, mover),
                         mover.opponent):
                won = True
        values[(occupied, mover)] = won
        return won

    value(pos.occupied, to_move)
    return values
