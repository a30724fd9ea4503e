"""
Outcome classes of Domineering boards and the landscape of known results.

Knowledge about a board is kept per starting player: who wins when Vertical
starts, and who wins when Horizontal starts. Complete knowledge names one of
the four outcome classes:

- ``N``: the starting player wins,
- ``P``: the second player wins,
- ``V``: Vertical wins whoever starts,
- ``H``: Horizontal wins whoever starts.

Partial knowledge is written with the composite labels of the published
tables, e.g. ``NH`` (N or H) when only "Horizontal wins when Horizontal
starts" is known.

>>> knowledge = OutcomeKnowledge.from_label('NH')
>>> knowledge.when_h_starts, knowledge.when_v_starts
(<Player.HORIZONTAL: 'H'>, None)
>>> transpose_dual(knowledge).label
'NV'
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional
import csv
import dataclasses
import enum
import io
import logging

from domisolve.board import CAPACITY, BoardDims, Player, new_position
from domisolve.search import NodeLimitExceeded, SolveConfig, solve

logger = logging.getLogger(__name__)

V, H = Player.VERTICAL, Player.HORIZONTAL

#: Largest landscape rendered, as in the published table.
MAX_LANDSCAPE = 32


class DimensionError(ValueError):
    pass


class ConflictError(ValueError):
    pass


class ResultsParseError(ValueError):
    def __init__(self, row, msg):
        super().__init__("row {}: {}".format(row, msg))
        self.row = row


class OutcomeClass(enum.Enum):
    N = 'N'
    P = 'P'
    V = 'V'
    H = 'H'

    @property
    def fields(self):
        """Winner when Vertical starts, winner when Horizontal starts."""
        return _CLASS_FIELDS[self]

    def transposed(self):
        return _TRANSPOSED_CLASS[self]


_CLASS_FIELDS = {
    OutcomeClass.N: (V, H),
    OutcomeClass.P: (H, V),
    OutcomeClass.V: (V, V),
    OutcomeClass.H: (H, H),
}

_TRANSPOSED_CLASS = {
    OutcomeClass.N: OutcomeClass.N,
    OutcomeClass.P: OutcomeClass.P,
    OutcomeClass.V: OutcomeClass.H,
    OutcomeClass.H: OutcomeClass.V,
}


class Provenance(enum.Enum):
    INGESTED = 'Ingested'
    SOLVED = 'Solved'
    RULE = 'Rule'
    UNKNOWN = 'Unknown'


_PRIORITY = list(Provenance)


@dataclass(frozen=True)
class OutcomeKnowledge:
    when_v_starts: Optional[Player] = None
    when_h_starts: Optional[Player] = None
    v_provenance: Provenance = Provenance.UNKNOWN
    h_provenance: Provenance = Provenance.UNKNOWN
    # classes ruled out without knowing either field, as in "-V" or "NP"
    excludes: frozenset = frozenset()
    x_provenance: Provenance = Provenance.UNKNOWN
    anomaly: bool = False

    @classmethod
    def of_class(cls, outcome, provenance=Provenance.SOLVED):
        when_v, when_h = outcome.fields
        return cls(when_v, when_h, provenance, provenance)

    @classmethod
    def from_candidates(cls, candidates, provenance=Provenance.INGESTED):
        """
        Strongest knowledge allowing exactly the ``candidates`` classes.

        >>> OutcomeKnowledge.from_candidates({OutcomeClass.N, OutcomeClass.P}).label
        'NP'
        """
        candidates = frozenset(candidates)
        if not candidates:
            raise ConflictError("no outcome class left")
        fields = []
        for index in (0, 1):
            winners = {outcome.fields[index] for outcome in candidates}
            fields.append(winners.pop() if len(winners) == 1 else None)
        knowledge = cls(
            fields[0], fields[1],
            provenance if fields[0] else Provenance.UNKNOWN,
            provenance if fields[1] else Provenance.UNKNOWN)
        excludes = frozenset(knowledge.candidates()) - candidates
        if excludes:
            knowledge = replace(knowledge, excludes=excludes,
                                x_provenance=provenance)
        return knowledge

    @classmethod
    def from_label(cls, label, provenance=Provenance.INGESTED):
        """
        Parse a table label: a class, a pair like ``NH`` (one of the two),
        or ``-V`` / ``-H`` (anything but V / H). The anomalous label ``1``
        found in the published table reads as N and is flagged.
        """
        text = label.strip().upper().replace('--', '-')
        if text == '1':
            return replace(cls.of_class(OutcomeClass.N, provenance),
                           anomaly=True)
        try:
            if text.startswith('-') and len(text) == 2:
                excluded = OutcomeClass(text[1])
                return cls.from_candidates(
                    [c for c in OutcomeClass if c is not excluded], provenance)
            if 1 <= len(text) <= 3:
                classes = [OutcomeClass(char) for char in text]
                if len(set(classes)) == len(classes):
                    return cls.from_candidates(classes, provenance)
        except ValueError:
            pass
        raise ValueError("unknown outcome label '{}'".format(label))

    def candidates(self):
        return [outcome for outcome in OutcomeClass
                if outcome not in self.excludes
                and self.when_v_starts in (None, outcome.fields[0])
                and self.when_h_starts in (None, outcome.fields[1])]

    @property
    def complete(self):
        return self.when_v_starts is not None and self.when_h_starts is not None

    @property
    def outcome_class(self):
        candidates = self.candidates()
        if len(candidates) == 1:
            return candidates[0]
        return None

    @property
    def label(self):
        candidates = self.candidates()
        if len(candidates) == len(OutcomeClass):
            return ''
        if len(candidates) == len(OutcomeClass) - 1:
            missing, = set(OutcomeClass) - set(candidates)
            return '-' + missing.value
        return ''.join(outcome.value for outcome in candidates)

    @property
    def provenance(self):
        sources = set()
        if self.when_v_starts is not None:
            sources.add(self.v_provenance)
        if self.when_h_starts is not None:
            sources.add(self.h_provenance)
        if self.excludes and not self.complete:
            sources.add(self.x_provenance)
        if not sources:
            return Provenance.UNKNOWN.value
        return '+'.join(p.value for p in _PRIORITY if p in sources)

    def winner(self, starter):
        if starter is V:
            return self.when_v_starts
        return self.when_h_starts

    def with_provenance(self, provenance):
        return replace(
            self,
            v_provenance=(provenance if self.when_v_starts
                          else Provenance.UNKNOWN),
            h_provenance=(provenance if self.when_h_starts
                          else Provenance.UNKNOWN),
            x_provenance=(provenance if self.excludes
                          else Provenance.UNKNOWN),
            anomaly=False)

    def merge(self, other):
        """
        Fill the unknown parts of ``self`` from ``other``; known fields are
        never overwritten.
        """
        when_v, v_prov = self.when_v_starts, self.v_provenance
        if other.when_v_starts is not None:
            if when_v is None:
                when_v, v_prov = other.when_v_starts, other.v_provenance
            elif when_v is not other.when_v_starts:
                raise ConflictError(
                    "{} wins when Vertical starts, not {}".format(
                        when_v.title, other.when_v_starts.title))
        when_h, h_prov = self.when_h_starts, self.h_provenance
        if other.when_h_starts is not None:
            if when_h is None:
                when_h, h_prov = other.when_h_starts, other.h_provenance
            elif when_h is not other.when_h_starts:
                raise ConflictError(
                    "{} wins when Horizontal starts, not {}".format(
                        when_h.title, other.when_h_starts.title))
        excludes, x_prov = self.excludes, self.x_provenance
        if not other.excludes <= excludes:
            if not excludes:
                x_prov = other.x_provenance
            excludes = excludes | other.excludes
        merged = OutcomeKnowledge(when_v, when_h, v_prov, h_prov,
                                  excludes, x_prov,
                                  self.anomaly or other.anomaly)
        if not merged.candidates():
            raise ConflictError("'{}' contradicts '{}'"
                                .format(self.label, other.label))
        return merged


UNKNOWN = OutcomeKnowledge()


@dataclass(frozen=True)
class LandscapeCell:
    dims: BoardDims
    knowledge: OutcomeKnowledge = field(default=UNKNOWN)

    @property
    def label(self):
        return self.knowledge.label


def transpose_dual(knowledge):
    """
    Knowledge about the transposed board: rows and columns swap, so every
    vertical placement becomes horizontal and the players trade places.
    """
    def swap(player):
        return None if player is None else player.opponent

    return OutcomeKnowledge(
        when_v_starts=swap(knowledge.when_h_starts),
        when_h_starts=swap(knowledge.when_v_starts),
        v_provenance=knowledge.h_provenance,
        h_provenance=knowledge.v_provenance,
        excludes=frozenset(c.transposed() for c in knowledge.excludes),
        x_provenance=knowledge.x_provenance,
        anomaly=knowledge.anomaly)


def _join_horizontal(a, b):
    # Horizontal wins the joined board whenever it wins the sum of both
    # halves: the seam only adds horizontal placements.
    second = a.when_v_starts is H and b.when_v_starts is H
    first = ((a.when_v_starts is H and b.when_h_starts is H)
             or (a.when_h_starts is H and b.when_v_starts is H))
    return OutcomeKnowledge(
        when_v_starts=H if second else None,
        when_h_starts=H if first else None,
        v_provenance=Provenance.RULE if second else Provenance.UNKNOWN,
        h_provenance=Provenance.RULE if first else Provenance.UNKNOWN)


def combine_horizontal(a, b):
    """
    Knowledge about the board made of ``a`` (m x p) to the left of ``b``
    (m x q), from the translational rules: Horizontal wins m x (p + q) as
    second player if she does so on both parts, and as first player if she
    wins one part as first player and the other as second player.
    """
    if a.dims.rows != b.dims.rows:
        raise DimensionError("cannot join {} and {} side by side"
                             .format(a.dims, b.dims))
    return LandscapeCell(BoardDims(a.dims.rows, a.dims.cols + b.dims.cols),
                         _join_horizontal(a.knowledge, b.knowledge))


def combine_vertical(a, b):
    """Dual of :func:`combine_horizontal` for ``a`` stacked on ``b``."""
    if a.dims.cols != b.dims.cols:
        raise DimensionError("cannot stack {} on {}".format(a.dims, b.dims))
    joined = _join_horizontal(transpose_dual(a.knowledge),
                              transpose_dual(b.knowledge))
    return LandscapeCell(BoardDims(a.dims.rows + b.dims.rows, a.dims.cols),
                         transpose_dual(joined))


def outcome_class(dims, config=None, reports=None):
    """
    Solve ``dims`` once per starting player. A solve that runs out of nodes
    leaves its field unknown. When ``reports`` is a dict it receives the
    :class:`SolveReport` of every finished solve, keyed by starter.
    """
    config = config or SolveConfig()
    pos = new_position(dims)
    winners = {}
    for starter in Player:
        try:
            report = solve(pos, starter, config)
            winners[starter] = report.winner
            if reports is not None:
                reports[starter] = report
        except NodeLimitExceeded as e:
            logger.info("%s, %s starts: undecided after %d nodes",
                        dims, starter.title, e.nodes)
            winners[starter] = None
    return OutcomeKnowledge(
        when_v_starts=winners[V],
        when_h_starts=winners[H],
        v_provenance=(Provenance.SOLVED if winners[V]
                      else Provenance.UNKNOWN),
        h_provenance=(Provenance.SOLVED if winners[H]
                      else Provenance.UNKNOWN))


def ingest_known_results(source):
    """
    Read ``m,n,label`` rows from a path or an open text file. Blank lines,
    ``#`` comments and an ``m,n,label`` header are skipped.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, '__fspath__'):
        with open(source, newline='') as stream:
            return _ingest_rows(stream)
    return _ingest_rows(source)


def _ingest_rows(stream):
    results = {}
    header = True
    for number, row in enumerate(csv.reader(stream), start=1):
        row = [item.strip() for item in row]
        if not row or not any(row) or row[0].startswith('#'):
            continue
        if header and row[0].lower() == 'm':
            header = False
            continue
        header = False
        if len(row) != 3:
            raise ResultsParseError(number, "expected 'm,n,label', got {}"
                                    .format(','.join(row)))
        try:
            dims = BoardDims(int(row[0]), int(row[1]))
        except ValueError:
            raise ResultsParseError(number, "bad board size '{},{}'"
                                    .format(row[0], row[1]))
        try:
            knowledge = OutcomeKnowledge.from_label(row[2])
        except ValueError as e:
            raise ResultsParseError(number, str(e))
        if dims in results:
            raise ResultsParseError(number, "duplicate entry for {}"
                                    .format(dims))
        if knowledge.anomaly:
            logger.warning("W: anomalous label '%s' read as N at [%s]",
                           row[2], dims)
        results[dims] = knowledge
    return results


def _solve_field(task):
    rows, cols, starter, config = task
    try:
        report = solve(new_position(BoardDims(rows, cols)), starter, config)
    except NodeLimitExceeded:
        return rows, cols, starter, None
    return rows, cols, starter, report.winner


class Landscape(object):
    """Grid of outcome knowledge for all boards up to ``max_m x max_n``."""

    def __init__(self, max_m, max_n, knowledge):
        self.max_m = max_m
        self.max_n = max_n
        self.knowledge = knowledge

    def cell(self, rows, cols):
        return LandscapeCell(BoardDims(rows, cols),
                             self.knowledge.get((rows, cols), UNKNOWN))

    def __iter__(self):
        for rows in range(1, self.max_m + 1):
            for cols in range(1, self.max_n + 1):
                yield self.cell(rows, cols)

    def to_csv(self):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(('m', 'n', 'label', 'provenance'))
        for cell in self:
            knowledge = cell.knowledge
            provenance = knowledge.provenance
            if knowledge.anomaly:
                provenance += ' (anomaly)'
            writer.writerow((cell.dims.rows, cell.dims.cols,
                             knowledge.label or '?', provenance))
        return out.getvalue()

    def render(self):
        """Aligned text grid in the layout of the published table."""
        labels = [[self.cell(m, n).label or '.'
                   for n in range(1, self.max_n + 1)]
                  for m in range(1, self.max_m + 1)]
        width = max([len(str(self.max_n))]
                    + [len(label) for row in labels for label in row])
        head = len(str(self.max_m))
        lines = [' ' * head + ' |' + ''.join(
            ' ' + str(n).rjust(width) for n in range(1, self.max_n + 1))]
        lines.append('-' * len(lines[0]))
        for m, row in enumerate(labels, start=1):
            lines.append(str(m).rjust(head) + ' |' + ''.join(
                ' ' + label.rjust(width) for label in row))
        notes = self.footnotes()
        if notes:
            lines.append('')
            lines.extend(notes)
        return '\n'.join(lines)

    def _is(self, rows, cols, label):
        known = self.knowledge.get((rows, cols))
        return known is not None and known.label == label

    def footnotes(self):
        notes = []
        wide = self.max_n >= MAX_LANDSCAPE - 1
        tall = self.max_m >= MAX_LANDSCAPE - 1
        if wide and self.max_m >= 6 and self._is(6, 17, 'H'):
            notes.append("1) [6 x n], n > 31: H, except n = 35: N or H")
        if (wide and self.max_m >= 8 and self._is(8, 10, 'H')
                and self._is(8, 12, 'H')):
            notes.append("2) [8 x n], even n >= 20: H")
        if (wide and self.max_m >= 13 and self._is(13, 2, 'P')
                and self._is(13, 6, 'H')):
            notes.append("3) [13 x n], n > 31: H for even n, "
                         "N or H for odd n")
        if tall and self.max_n >= 6 and self._is(17, 6, 'V'):
            notes.append("4) [m x 6], m > 31: V, except m = 35: N or V")
        if (tall and self.max_n >= 8 and self._is(10, 8, 'V')
                and self._is(12, 8, 'V')):
            notes.append("5) [m x 8], even m >= 20: V")
        if (tall and self.max_n >= 13 and self._is(2, 13, 'P')
                and self._is(6, 13, 'V')):
            notes.append("6) [m x 13], m > 31: V for even m, "
                         "N or V for odd m")
        return notes


class LandscapeBuilder(object):
    """
    Fill a landscape from, in order of priority, ingested results, direct
    solves within a per-solve node budget, and the closure of everything
    known under transposition and the translational rules.

    Contradictions are reported through :meth:`warn` and the incoming fact
    is dropped.
    """

    def __init__(self, max_m, max_n, base=None, budget=0, config=None,
                 jobs=1):
        if not (1 <= max_m <= MAX_LANDSCAPE and 1 <= max_n <= MAX_LANDSCAPE):
            raise DimensionError("landscape is limited to {0}x{0}"
                                 .format(MAX_LANDSCAPE))
        self.max_m = max_m
        self.max_n = max_n
        self.base = dict(base or {})
        self.budget = budget
        self.config = config or SolveConfig()
        self.jobs = jobs
        self.knowledge = {}

        domain = {(m, n) for m in range(1, max_m + 1)
                  for n in range(1, max_n + 1)}
        domain.update((dims.rows, dims.cols) for dims in self.base)
        domain.update([(n, m) for m, n in domain])
        self.domain = sorted(domain)

    def warn(self, msg, dims):
        logger.warning("W: %s at [%s x %s]", msg, *dims)

    def learn(self, dims, incoming):
        """Merge ``incoming`` into the knowledge of ``dims``; True on change."""
        current = self.knowledge.get(dims, UNKNOWN)
        try:
            merged = current.merge(incoming)
        except ConflictError as e:
            self.warn(str(e), dims)
            return False
        if merged == current:
            return False
        self.knowledge[dims] = merged
        return True

    def build(self):
        for dims, knowledge in sorted(self.base.items(),
                                      key=lambda item: (item[0].rows,
                                                        item[0].cols)):
            self.learn((dims.rows, dims.cols), knowledge)
        if self.budget > 0:
            self.solve_cells()
        self.seed_generic_facts()
        self.close()
        return Landscape(self.max_m, self.max_n, self.knowledge)

    def solve_cells(self):
        config = dataclasses.replace(self.config, node_limit=self.budget)
        tasks = []
        for m in range(1, self.max_m + 1):
            for n in range(1, self.max_n + 1):
                if m * n > CAPACITY:
                    continue
                known = self.knowledge.get((m, n), UNKNOWN)
                for starter in Player:
                    if known.winner(starter) is None:
                        tasks.append((m, n, starter, config))
        if self.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(_solve_field, tasks))
        else:
            results = [_solve_field(task) for task in tasks]
        for m, n, starter, winner in results:
            if winner is None:
                continue
            if starter is V:
                solved = OutcomeKnowledge(when_v_starts=winner,
                                          v_provenance=Provenance.SOLVED)
            else:
                solved = OutcomeKnowledge(when_h_starts=winner,
                                          h_provenance=Provenance.SOLVED)
            self.learn((m, n), solved)

    def seed_generic_facts(self):
        """
        Square boards are never V or H. An m x 2m board is two squares side
        by side, and a square is the negative of itself, so Horizontal wins
        it as second player; dually for 2m x m.
        """
        domain = set(self.domain)
        square = OutcomeKnowledge(
            excludes=frozenset((OutcomeClass.V, OutcomeClass.H)),
            x_provenance=Provenance.RULE)
        wide = OutcomeKnowledge(when_v_starts=H,
                                v_provenance=Provenance.RULE)
        for m in range(1, MAX_LANDSCAPE + 1):
            if (m, m) in domain:
                self.learn((m, m), square)
            if (m, 2 * m) in domain:
                self.learn((m, 2 * m), wide)
            if (2 * m, m) in domain:
                self.learn((2 * m, m), transpose_dual(wide))

    def close(self):
        """Apply the rules until nothing new follows."""
        knowledge = self.knowledge
        passes = 0
        changed = True
        while changed:
            changed = False
            passes += 1
            for dims in self.domain:
                m, n = dims
                for p in range(1, n // 2 + 1):
                    a, b = knowledge.get((m, p)), knowledge.get((m, n - p))
                    if a is not None and b is not None:
                        joined = _join_horizontal(a, b)
                        if joined != UNKNOWN:
                            changed |= self.learn(dims, joined)
                for p in range(1, m // 2 + 1):
                    a, b = knowledge.get((p, n)), knowledge.get((m - p, n))
                    if a is not None and b is not None:
                        joined = transpose_dual(_join_horizontal(
                            transpose_dual(a), transpose_dual(b)))
                        if joined != UNKNOWN:
                            changed |= self.learn(dims, joined)
                mirror = knowledge.get((n, m))
                if mirror is not None:
                    changed |= self.learn(dims, transpose_dual(mirror)
                                          .with_provenance(Provenance.RULE))
                current = knowledge.get(dims)
                if current is not None and not current.complete:
                    outcome = current.outcome_class
                    if outcome is not None:
                        changed |= self.learn(dims, OutcomeKnowledge.of_class(
                            outcome, Provenance.RULE))
        logger.debug("landscape closure reached its fixpoint after %d passes",
                     passes)


def generate_landscape(max_m, max_n, base=None, budget=0, config=None,
                       jobs=1):
    return LandscapeBuilder(max_m, max_n, base, budget, config, jobs).build()
